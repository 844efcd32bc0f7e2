"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 input error.
The ``VALKIT_SEED`` environment variable overrides ``--seed``.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import io as vio
from .checks import SUITES, run_suites
from .errors import SchemaError, ValkitError
from .okounkov import body_svg, okounkov_sample, variation_csv, variation_experiment
from .series import RationalFunctionRep
from .toric import choose_parameters
from .valuation import qm_eval_rational, qm_eval_series, retract_toric, tropicalize

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_SEED = 0


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    outputs: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)


def resolve_seed(cli_seed: Optional[int]) -> int:
    env = os.environ.get("VALKIT_SEED")
    if env is not None and env.strip():
        try:
            return int(env) & (2**64 - 1)
        except ValueError:
            raise SchemaError(f"VALKIT_SEED must be an integer, got {env!r}", "VALKIT_SEED") from None
    return DEFAULT_SEED if cli_seed is None else cli_seed & (2**64 - 1)


def _emit(text: str, out: Optional[str]):
    if out:
        vio.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _load(path, parser):
    return parser(vio.load_json(path), "")


def _cmd_eval(cfg: RunConfig) -> int:
    cx = _load(cfg.inputs["fan"], vio.complex_from_json)
    w = _load(cfg.inputs["weights"], vio.weights_from_json)
    f = _load(cfg.inputs["poly"], vio.poly_from_json)
    if w.face not in cx.face_ids():
        raise SchemaError(f"face {w.face!r} is not a face of the complex", "weights.face")
    if tuple(cx.face(w.face).rays) != w.index_set:
        raise SchemaError(f"index set must be the face rays {list(cx.face(w.face).rays)}", "weights.index_set")
    if f.vars != w.index_set:
        raise SchemaError(f"polynomial variables must be {list(w.index_set)}", "poly.vars")
    if isinstance(f, RationalFunctionRep):
        value = qm_eval_rational(w, f)
    else:
        value = qm_eval_series(w, f)
    _emit(vio.dumps(vio.lex_to_json(value)), cfg.outputs.get("out"))
    return EXIT_OK


def _cmd_trop(cfg: RunConfig) -> int:
    cx = _load(cfg.inputs["complex"], vio.complex_from_json)
    f = _load(cfg.inputs["poly"], vio.poly_from_json)
    if isinstance(f, RationalFunctionRep):
        F = tropicalize(f, cx)
        body = {"numerator": vio.family_to_json(F.family), "denominator": vio.family_to_json(F.negative)}
        doc = {"schema": vio.SCHEMA_VERSION, "kind": "tropical_difference", **body}
    else:
        doc = vio.family_to_json(tropicalize(f, cx).family)
    _emit(vio.dumps(doc), cfg.outputs.get("out"))
    return EXIT_OK


def _cmd_approx(cfg: RunConfig) -> int:
    fan = _load(cfg.inputs["fan"], vio.fan_from_json)
    fam = _load(cfg.inputs["family"], vio.family_from_json)
    missing = [fid for fid in fan.face_ids() if fid not in fam]
    if missing:
        raise SchemaError(f"family has no entry for faces {missing}", "family.faces")
    ell = cfg.options.get("ell")
    rounds = 1 if ell is not None else cfg.options.get("max_rounds", 4)
    res = choose_parameters(fan, fam, seed=cfg.seed, ell=ell, max_rounds=rounds,
                            samples=cfg.options.get("samples", 32))
    if res.report is None:
        doc = {"schema": vio.SCHEMA_VERSION, "kind": "verification_report", "passed": False,
               "status": res.status, "seed": cfg.seed,
               "attempts": [{"ell": a["ell"], "status": a["status"]} for a in res.attempts]}
    else:
        doc = vio.report_to_json(res.report, seed=cfg.seed, status=res.status, attempts=res.attempts)
    _emit(vio.dumps(doc), cfg.outputs.get("out"))
    if cfg.outputs.get("out"):
        verdict = "PASS" if res.passed else res.status.upper()
        print(f"approx: {verdict} ell={res.ell} faces={len(fan.face_ids())} seed={cfg.seed}", file=sys.stderr)
    return EXIT_OK if res.passed else EXIT_FAIL


def _cmd_retract(cfg: RunConfig) -> int:
    w = _load(cfg.inputs["fine_weights"], vio.weights_from_json)
    coarse = _load(cfg.inputs["coarse"], vio.fan_from_json)
    try:
        for r in w.index_set:
            tuple(int(c) for c in r.split(","))
    except ValueError:
        raise SchemaError("fine weights must be indexed by ray vectors such as '1,0'", "fine_weights.index_set") from None
    out = retract_toric(w, coarse)
    _emit(vio.dumps(vio.weights_to_json(out)), cfg.outputs.get("out"))
    return EXIT_OK


def _cmd_okounkov(cfg: RunConfig) -> int:
    sec = _load(cfg.inputs["sections"], vio.sections_from_json)
    point = _load(cfg.inputs["point"], vio.point_from_json)
    body = okounkov_sample(point, sec, cfg.options["nmax"])
    doc = vio.body_to_json(body, nmax=cfg.options["nmax"], seed=cfg.seed)
    _emit(vio.dumps(doc), cfg.outputs.get("out"))
    if cfg.outputs.get("svg"):
        vio.write_atomic(cfg.outputs["svg"], body_svg(body))
    return EXIT_OK


def _cmd_okounkov_path(cfg: RunConfig) -> int:
    obj = vio.load_json(cfg.inputs["path"])
    vio.check_version(obj)
    sec = vio.sections_from_json(vio._get(obj, "sections"), "sections")
    points = [vio.point_from_json(p, f"points[{i}]") for i, p in enumerate(vio._list(vio._get(obj, "points"), "points"))]
    if not points:
        raise SchemaError("a path needs at least one point", "points")
    nmax = vio._int(vio._get(obj, "nmax"), "nmax")
    limit = obj.get("limit")
    limit = vio.point_from_json(limit, "limit") if limit is not None else None
    rows = variation_experiment(points, sec, nmax, limit)
    _emit(variation_csv(rows), cfg.outputs.get("out"))
    return EXIT_OK


def _cmd_check(cfg: RunConfig) -> int:
    suite = cfg.options.get("suite", "all")
    names = list(SUITES) if suite == "all" else [suite]
    results = run_suites(names, cfg.seed)
    width = max(len(f"{r.suite}/{r.name}") for r in results)
    print(f"seed {cfg.seed}")
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"  {mark}  {f'{r.suite}/{r.name}':<{width}}  {r.detail}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_FAIL


COMMANDS = {
    "eval": _cmd_eval,
    "trop": _cmd_trop,
    "approx": _cmd_approx,
    "retract": _cmd_retract,
    "okounkov": _cmd_okounkov,
    "okounkov-path": _cmd_okounkov_path,
    "check": _cmd_check,
}


def run(cfg: RunConfig) -> int:
    """Dispatch one command; input problems become exit code 2."""
    try:
        return COMMANDS[cfg.command](cfg)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValkitError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="valkit", description="Higher-rank quasi-monomial valuations on cone complexes.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="evaluate a quasi-monomial valuation on a polynomial or rational function")
    s.add_argument("--fan", required=True, help="fan or dual complex JSON")
    s.add_argument("--weights", required=True)
    s.add_argument("--poly", required=True)
    s.add_argument("--out")

    s = sub.add_parser("trop", help="tropicalize onto a complex (antichain family)")
    s.add_argument("--poly", required=True)
    s.add_argument("--complex", required=True, help="dual complex or fan JSON")
    s.add_argument("--out")

    s = sub.add_parser("approx", help="realize an antichain family on a toric fan and verify it")
    s.add_argument("--fan", required=True)
    s.add_argument("--family", required=True)
    s.add_argument("--ell", type=int, help="fix ell (single attempt, no escalation)")
    s.add_argument("--seed", type=int)
    s.add_argument("--samples", type=int, default=32, help="random weight matrices per facet")
    s.add_argument("--out")

    s = sub.add_parser("retract", help="retract fine toric weights onto a coarse fan")
    s.add_argument("--fine-weights", required=True)
    s.add_argument("--coarse", required=True)
    s.add_argument("--out")

    s = sub.add_parser("okounkov", help="sample a Newton-Okounkov body")
    s.add_argument("--sections", required=True)
    s.add_argument("--point", required=True, help="tangent point or weight matrix JSON")
    s.add_argument("--nmax", type=int, required=True)
    s.add_argument("--out")
    s.add_argument("--svg")
    s.add_argument("--seed", type=int)

    s = sub.add_parser("okounkov-path", help="Hausdorff distances along a path of tangent points")
    s.add_argument("--path", required=True)
    s.add_argument("--out")

    s = sub.add_parser("check", help="run the invariant suites")
    s.add_argument("--suite", default="all", choices=["all", *SUITES])
    s.add_argument("--seed", type=int)
    return p


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(args.command, seed=resolve_seed(getattr(args, "seed", None)))
    for key in ("fan", "weights", "poly", "complex", "family", "fine_weights", "coarse", "sections", "point", "path"):
        v = getattr(args, key, None)
        if v is not None:
            cfg.inputs[key] = v
    for key in ("out", "svg"):
        v = getattr(args, key, None)
        if v is not None:
            cfg.outputs[key] = v
    for key in ("ell", "samples", "nmax", "suite"):
        v = getattr(args, key, None)
        if v is not None:
            cfg.options[key] = v
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

"""Versioned JSON schemas (``"schema": "v1"``) for every public type.

Rationals are always written as ``"p/q"`` strings and read back exactly.
Output is canonical: keys sorted, antichains and faces in sorted order, so
serializing the same object twice gives identical bytes.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from typing import Any

from .complex import ConeComplex, Fan, TangentPoint, WeightMatrix, build_dual_complex
from .errors import SchemaError, ValkitError
from .okounkov import ConvexBody, GradedSections
from .order import Antichain, AntichainFamily
from .series import MonomialSeries, RationalFunctionRep

SCHEMA_VERSION = "v1"


# ---------------------------------------------------------------------------
# primitives


def rat_to_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(v, path="") -> Fraction:
    if isinstance(v, bool):
        raise SchemaError("expected a rational, got a boolean", path)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"malformed rational {v!r}", path) from None
    raise SchemaError(f"expected a 'p/q' string, got {type(v).__name__}", path)


def _int(v, path) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"expected an integer, got {v!r}", path)
    return v


def _list(v, path) -> list:
    if not isinstance(v, list):
        raise SchemaError(f"expected a list, got {type(v).__name__}", path)
    return v


def _get(obj, key, path="", default=...):
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    if key not in obj:
        if default is not ...:
            return default
        raise SchemaError("missing field", f"{path}.{key}" if path else key)
    return obj[key]


def _sub(path, key):
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _int_vector(v, path):
    return tuple(_int(c, _sub(path, i)) for i, c in enumerate(_list(v, path)))


def _rat_vector(v, path):
    return tuple(parse_rat(c, _sub(path, i)) for i, c in enumerate(_list(v, path)))


def check_version(obj, path=""):
    ver = _get(obj, "schema", path)
    if ver != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {ver!r} (expected {SCHEMA_VERSION!r})", _sub(path, "schema"))


def _envelope(kind, body):
    return {"schema": SCHEMA_VERSION, "kind": kind, **body}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the same directory and rename into place."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", os.fspath(path)) from None
    except OSError as exc:
        raise SchemaError(f"cannot read file: {exc.strerror}", os.fspath(path)) from None


# ---------------------------------------------------------------------------
# order


def antichain_to_json(a: Antichain):
    return {"index_set": list(a.index_set), "elements": [list(e) for e in a.elements]}


def antichain_from_json(obj, path=""):
    index_set = [str(s) for s in _list(_get(obj, "index_set", path), _sub(path, "index_set"))]
    els = _list(_get(obj, "elements", path), _sub(path, "elements"))
    elements = [_int_vector(e, _sub(_sub(path, "elements"), i)) for i, e in enumerate(els)]
    try:
        return Antichain(tuple(index_set), tuple(elements))
    except (ValkitError, AssertionError) as exc:
        raise SchemaError(str(exc), path) from None


def family_to_json(fam):
    return _envelope("family", {"faces": {fid: antichain_to_json(a) for fid, a in sorted(fam.items())}})


def family_from_json(obj, path=""):
    check_version(obj, path)
    faces = _get(obj, "faces", path)
    if not isinstance(faces, dict):
        raise SchemaError("expected an object keyed by face id", _sub(path, "faces"))
    return AntichainFamily({fid: antichain_from_json(a, _sub(_sub(path, "faces"), fid)) for fid, a in faces.items()})


def lex_to_json(value):
    from .valuation import INFINITY

    if value is INFINITY:
        return _envelope("value", {"value": "infinity"})
    return _envelope("value", {"value": [rat_to_str(v) for v in value]})


def lex_from_json(obj, path=""):
    from .valuation import INFINITY

    check_version(obj, path)
    v = _get(obj, "value", path)
    if v == "infinity":
        return INFINITY
    return _rat_vector(v, _sub(path, "value"))


# ---------------------------------------------------------------------------
# complexes


def fan_to_json(fan: Fan):
    return _envelope("fan", {
        "dim": fan.dim,
        "rays": [list(r) for r in fan.rays],
        "facets": [list(f) for f in fan.facets],
        "unimodular": fan.is_unimodular,
    })


def fan_from_json(obj, path=""):
    check_version(obj, path)
    dim = _int(_get(obj, "dim", path), _sub(path, "dim"))
    rays_raw = _list(_get(obj, "rays", path), _sub(path, "rays"))
    rays = []
    for i, r in enumerate(rays_raw):
        v = _int_vector(r, _sub(_sub(path, "rays"), i))
        if len(v) != dim:
            raise SchemaError(f"ray has {len(v)} coordinates, expected {dim}", _sub(_sub(path, "rays"), i))
        rays.append(v)
    facets_raw = _list(_get(obj, "facets", path), _sub(path, "facets"))
    facets = []
    for i, f in enumerate(facets_raw):
        fp = _sub(_sub(path, "facets"), i)
        idx = _int_vector(f, fp)
        for j, k in enumerate(idx):
            if not 0 <= k < len(rays):
                raise SchemaError(f"ray index {k} out of range", _sub(fp, j))
        facets.append(idx)
    try:
        fan = Fan(dim, tuple(rays), tuple(facets))
    except ValkitError as exc:
        raise SchemaError(str(exc), path) from None
    claimed = _get(obj, "unimodular", path, None)
    if claimed is not None and bool(claimed) != fan.is_unimodular:
        raise SchemaError(f"declared unimodular={claimed} but the fan is {'not ' * (not fan.is_unimodular)}unimodular",
                          _sub(path, "unimodular"))
    return fan


def dual_complex_to_json(components, strata):
    return _envelope("dual_complex", {"components": list(components), "strata": list(strata)})


def complex_to_json(cx: ConeComplex):
    """Dual-complex JSON for a complex built by ``build_dual_complex``.

    A ``"faces"`` hint is written only where a boundary ray set is shared by
    parallel faces, so plain inputs round-trip unchanged.
    """
    strata = []
    for fid in sorted(cx.face_ids(), key=lambda f: (len(cx.face(f).rays), f)):
        face = cx.face(fid)
        if len(face.rays) < 2:
            continue
        entry = {"rays": list(face.rays), "label": face.label}
        subs = [cx.face(b) for b in face.boundary if len(cx.face(b).rays) >= 2]
        if any(len(cx.faces_with_rays(b.rays)) > 1 for b in subs):
            entry["faces"] = sorted(b.label for b in subs)
        strata.append(entry)
    return dual_complex_to_json(cx.components, strata)


def dual_complex_from_json(obj, path="") -> ConeComplex:
    check_version(obj, path)
    comps = [str(c) for c in _list(_get(obj, "components", path), _sub(path, "components"))]
    strata = _list(_get(obj, "strata", path, []), _sub(path, "strata"))
    for i, s in enumerate(strata):
        sp = _sub(_sub(path, "strata"), i)
        _list(_get(s, "rays", sp), _sub(sp, "rays"))
    try:
        return build_dual_complex(comps, strata)
    except ValkitError as exc:
        raise SchemaError(str(exc), path) from None


def complex_from_json(obj, path=""):
    """Either an embedded fan or a dual complex."""
    if isinstance(obj, dict) and "rays" in obj and "facets" in obj:
        return fan_from_json(obj, path)
    return dual_complex_from_json(obj, path)


# ---------------------------------------------------------------------------
# series


def poly_to_json(f: MonomialSeries, envelope=True):
    body = {
        "vars": list(f.vars),
        "laurent": f.laurent,
        "terms": [{"c": rat_to_str(c), "e": list(e)} for e, c in f.items()],
    }
    return _envelope("polynomial", body) if envelope else body


def _poly_body(obj, path):
    vars_ = [str(v) for v in _list(_get(obj, "vars", path), _sub(path, "vars"))]
    laurent = _get(obj, "laurent", path, False)
    if not isinstance(laurent, bool):
        raise SchemaError("expected a boolean", _sub(path, "laurent"))
    terms = []
    for i, t in enumerate(_list(_get(obj, "terms", path), _sub(path, "terms"))):
        tp = _sub(_sub(path, "terms"), i)
        e = _int_vector(_get(t, "e", tp), _sub(tp, "e"))
        if len(e) != len(vars_):
            raise SchemaError(f"exponent has {len(e)} entries for {len(vars_)} variables", _sub(tp, "e"))
        if not laurent and min(e, default=0) < 0:
            raise SchemaError("negative exponent in a non-Laurent polynomial", _sub(tp, "e"))
        terms.append((e, parse_rat(_get(t, "c", tp), _sub(tp, "c"))))
    try:
        return MonomialSeries(vars_, terms, laurent)
    except ValkitError as exc:
        raise SchemaError(str(exc), path) from None


def poly_from_json(obj, path=""):
    """A polynomial, or a rational function ``{"num": ..., "den": ...}``."""
    check_version(obj, path)
    if "num" in obj:
        num = _poly_body(_get(obj, "num", path), _sub(path, "num"))
        den = _poly_body(_get(obj, "den", path), _sub(path, "den"))
        try:
            return RationalFunctionRep(num, den)
        except (ValkitError, ZeroDivisionError) as exc:
            raise SchemaError(str(exc), path) from None
    return _poly_body(obj, path)


def rational_to_json(r: RationalFunctionRep):
    return _envelope("rational_function", {"num": poly_to_json(r.num, False), "den": poly_to_json(r.den, False)})


# ---------------------------------------------------------------------------
# weights and tangent points


def weights_to_json(w: WeightMatrix):
    return _envelope("weights", {
        "face": w.face,
        "index_set": list(w.index_set),
        "columns": [[rat_to_str(v) for v in col] for col in w.columns],
    })


def weights_from_json(obj, path=""):
    check_version(obj, path)
    face = str(_get(obj, "face", path))
    index_set = [str(s) for s in _list(_get(obj, "index_set", path), _sub(path, "index_set"))]
    cols = _list(_get(obj, "columns", path), _sub(path, "columns"))
    columns = [_rat_vector(c, _sub(_sub(path, "columns"), i)) for i, c in enumerate(cols)]
    try:
        return WeightMatrix(face, tuple(index_set), tuple(columns))
    except ValkitError as exc:
        raise SchemaError(str(exc), path) from None


def tangent_to_json(p: TangentPoint):
    return _envelope("tangent_point", {
        "face": p.face,
        "index_set": list(p.index_set),
        "x": [rat_to_str(v) for v in p.x],
        "ws": [[rat_to_str(v) for v in w] for w in p.ws],
    })


def tangent_from_json(obj, path=""):
    check_version(obj, path)
    face = str(_get(obj, "face", path))
    index_set = [str(s) for s in _list(_get(obj, "index_set", path), _sub(path, "index_set"))]
    x = _rat_vector(_get(obj, "x", path), _sub(path, "x"))
    ws = [_rat_vector(w, _sub(_sub(path, "ws"), i)) for i, w in enumerate(_list(_get(obj, "ws", path, []), _sub(path, "ws")))]
    try:
        return TangentPoint(face, tuple(index_set), x, tuple(ws))
    except ValkitError as exc:
        raise SchemaError(str(exc), path) from None


def point_from_json(obj, path=""):
    """Tangent point or weight matrix, told apart by their fields."""
    if isinstance(obj, dict) and "columns" in obj:
        return weights_from_json(obj, path)
    return tangent_from_json(obj, path)


# ---------------------------------------------------------------------------
# okounkov


def sections_to_json(s: GradedSections):
    if s.polytope is not None:
        return _envelope("sections", {"dim": s.dim, "polytope": [list(v) for v in s.polytope]})
    return _envelope("sections", {"dim": s.dim, "explicit": {str(n): [list(e) for e in es] for n, es in s.explicit.items()}})


def sections_from_json(obj, path=""):
    check_version(obj, path)
    dim = _int(_get(obj, "dim", path), _sub(path, "dim"))
    try:
        if "polytope" in obj:
            verts = [_int_vector(v, _sub(_sub(path, "polytope"), i))
                     for i, v in enumerate(_list(obj["polytope"], _sub(path, "polytope")))]
            return GradedSections(dim, polytope=tuple(verts))
        ex = _get(obj, "explicit", path)
        if not isinstance(ex, dict):
            raise SchemaError("expected an object keyed by degree", _sub(path, "explicit"))
        explicit = {}
        for n, es in ex.items():
            ep = _sub(_sub(path, "explicit"), n)
            try:
                deg = int(n)
            except ValueError:
                raise SchemaError("degree keys must be integers", ep) from None
            explicit[deg] = tuple(_int_vector(e, _sub(ep, i)) for i, e in enumerate(_list(es, ep)))
        return GradedSections(dim, explicit=explicit)
    except (ValkitError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc), path) from None


def body_to_json(b: ConvexBody, **extra):
    return _envelope("convex_body", {
        "dim": b.dim,
        "points": [[rat_to_str(c) for c in p] for p in b.points],
        "vertices": [[rat_to_str(c) for c in v] for v in b.vertices],
        "full_dimensional": b.full_dimensional,
        **extra,
    })


def body_from_json(obj, path=""):
    check_version(obj, path)
    dim = _int(_get(obj, "dim", path), _sub(path, "dim"))
    pts = [_rat_vector(p, _sub(_sub(path, "points"), i)) for i, p in enumerate(_list(_get(obj, "points", path), _sub(path, "points")))]
    try:
        return ConvexBody(dim, tuple(pts))
    except (ValkitError, ValueError) as exc:
        raise SchemaError(str(exc), path) from None


# ---------------------------------------------------------------------------
# reports


def report_to_json(report, seed=None, status=None, attempts=None) -> dict:
    faces = {}
    for fid, fr in sorted(report.faces.items()):
        entry = {
            "target": antichain_to_json(fr.target),
            "computed": antichain_to_json(fr.computed) if fr.computed is not None else None,
            "equal": fr.equal,
            "passed": fr.passed,
        }
        if fr.box is not None:
            entry["box"] = list(fr.box)
            entry["numerator_route"] = antichain_to_json(fr.numerator_route) if fr.numerator_route is not None else None
            entry["crosscheck"] = {"agree": fr.crosscheck_agree, "total": fr.crosscheck_total}
        else:
            entry["projected_from"] = list(fr.from_facets)
        faces[fid] = entry
    body: dict[str, Any] = {
        "passed": report.passed,
        "ell": report.ell,
        "lambda": {k: rat_to_str(v) for k, v in sorted(report.lam.items())},
        "denominator": report.denominator,
        "output_coherent": report.output_coherent,
        "crosscheck_seed": report.seed,
        "faces": faces,
    }
    if seed is not None:
        body["seed"] = seed
    if status is not None:
        body["status"] = status
    if attempts is not None:
        body["attempts"] = [
            {"ell": a["ell"], "lambda": {k: rat_to_str(v) for k, v in sorted(a["lam"].items())}, "status": a["status"]}
            for a in attempts
        ]
    return _envelope("verification_report", body)

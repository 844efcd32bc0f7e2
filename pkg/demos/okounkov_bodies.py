"""Newton-Okounkov bodies of the unit square, and how they move.

Prints the sampled body at a few levels, then distances along a path of
weight vectors that crosses a wall.  Pass ``--svg out.svg`` to draw the
final body.
"""

import argparse
from fractions import Fraction

from valkit import ConvexBody, GradedSections, TangentPoint, hausdorff_distance, okounkov_sample
from valkit.okounkov import body_svg, variation_csv, variation_experiment

parser = argparse.ArgumentParser()
parser.add_argument("--svg")
args = parser.parse_args()

square = ((0, 0), (1, 0), (0, 1), (1, 1))
sec = GradedSections(2, polytope=square)
flag = TangentPoint("s", ("z1", "z2"), (1, 0), ((0, 1),))
limit = ConvexBody(2, square)

for n in (1, 2, 4, 8):
    body = okounkov_sample(flag, sec, n, n)
    d = hausdorff_distance(body, limit)
    print(f"n={n}: {len(body.vertices)} vertices, d_H to the square in [{float(d.lower):.3g}, {float(d.upper):.3g}]")

path = [TangentPoint("s", ("z1", "z2"), (1, Fraction(t, 4)), ((0, 1),)) for t in range(4, -1, -1)]
print(variation_csv(variation_experiment(path, sec, 4)), end="")

if args.svg:
    with open(args.svg, "w") as fh:
        fh.write(body_svg(okounkov_sample(path[-1], sec, 4)))
    print("wrote", args.svg)

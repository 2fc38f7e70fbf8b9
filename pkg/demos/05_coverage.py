"""How much of a cone the polarity cones cover: the degree-2 cone B(2)."""
from fractions import Fraction

from dpflex import cones, new_surface
from dpflex.cylinders import make_tangent
from dpflex.flex import ample_part, collection, cone_representative, coverage_fraction

S = new_surface(2)
target = ample_part(S, cone_representative(S, "B(2)"))

# three conic-tangent collections; p1 and p2 play the tangent point and group roles
cols = [
    collection([make_tangent(S, None, range(3, 8), [1], [[2]])]),
    collection([make_tangent(S, None, range(3, 8), [2], [[1]])]),
    collection([make_tangent(S, None, range(3, 8), [], [[1, 2]])]),
]

# H = -K + a1 E1 + a2 E2 has L-coefficient 3, so this functional is 1 on that chart
chart = (Fraction(1, 3),) + (0,) * 7
share = coverage_fraction(S, target, cols, chart)
print("covered share of the (a1, a2) square:", share)

# the default slice (-K).H = 1 weighs the same region differently
print("on the anticanonical slice:", coverage_fraction(S, target, cols))

for c in cols:
    piece = cones.intersect(target, c.pol)
    print(c[0].params, "piece volume", cones.section_volume(piece, chart))

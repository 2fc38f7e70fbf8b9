"""Verdicts: polarity, completeness, transversality, generic flexibility."""
from dpflex import DivisorClass, new_surface
from dpflex.cylinders import make_cuspcubic, make_generic, make_lines
from dpflex.flex import (ample_cone, collection, compatible_representatives, cone_representative,
                         verdicts)

# cuspidal cubics on the cubic surface: B(3) fails, B(2) and C(2) work
S = new_surface(3)
col = collection([make_cuspcubic(S, None, [3, 4, 5, 6])])
print("cubic, B(3):", verdicts(col, cone_representative(S, "B(3)")))
print("compatible:", [str(x) for x in compatible_representatives(col)])

# the quartic on B(1)
S4 = new_surface(4)
col4 = collection([make_cuspcubic(S4, None, [2, 3, 4, 5])])
print("quartic, B(1):", verdicts(col4, cone_representative(S4, "B(1)")))

# degree 1: lines through p7 and through p8 together are transversal
S1 = new_surface(1)
pair = collection([make_lines(S1, None, 7), make_lines(S1, None, 8)])
print("degree 1 lines pair: Forb =", [str(DivisorClass(r)) for r in pair.forb.rays])
print("  on its Pol:", verdicts(pair, pair.pol))

# weak sextic with p1, p2, p3 collinear; the cylinder moves with a free point p
W = new_surface(6, collinear_triples=[[1, 2, 3]])
U = make_generic(W, None, W.E, list(W.E) + [W.L - e for e in W.E], W.L, True)
A = ample_cone(W)
print("collinear sextic: Ample =", [str(DivisorClass(r)) for r in A.rays])
print("  on Ample:", verdicts(collection([U]), A))

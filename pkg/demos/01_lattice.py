"""Picard lattice of a blown-up plane: classes, negative curves, contractions."""
from dpflex import (BubbleClass, DivisorClass, enumerate_contractions, new_surface, pairing,
                    relabel, resolve_bubble_class)

# a cubic surface: six general points
S = new_surface(3)
print(S, "m =", S.m, " -K =", S.anticanonical, " K.K =", pairing(S.K, S.K))
print(len(S.minus_one), "(-1)-curves, for example", [str(D) for D in S.minus_one[:4]])

L, E = S.L, S.E
line12 = L - E[0] - E[1]
print(line12, "squares to", pairing(line12, line12))

# degenerations add (-2)-curves and remove the (-1)-curves that would cross them badly
T = new_surface(6, collinear_triples=[[1, 2, 3]])
print("collinear sextic:", [str(D) for D in T.minus_two], [str(D) for D in T.minus_one])
U = new_surface(6, infinitely_near=[(2, 1)])
print("p2 near p1:", [str(D) for D in U.minus_two], [str(D) for D in U.minus_one])

# eight points give the 240 (-1)-curves of degree 1
print("degree 1:", len(new_surface(1).minus_one))

# contractions to the plane, and coordinates of a class in another contraction
S6 = new_surface(6)
cs = enumerate_contractions(S6, ordered=False)
print(len(cs), "unordered contractions in degree 6")
for c in cs:
    print("  exceptional", [str(e) for e in c.exceptional_classes], "line", c.line_class,
          " L in these coordinates:", DivisorClass(relabel(S6.L, c)))

# bubble classes: a conic through five of the points
B = BubbleClass(2 * S.L, {i: -1 for i in range(1, 6)})
print("conic through p1..p5:", resolve_bubble_class(S, B))

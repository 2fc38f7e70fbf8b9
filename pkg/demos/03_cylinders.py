"""The three cylinder constructions and their polarity cones."""
from dpflex import DivisorClass, new_surface
from dpflex.cylinders import make_cuspcubic, make_lines, make_tangent, pol_cone
from dpflex.flex import collection


def show(U):
    print(f"{U.construction}: transversal={U.transversal} fiber={U.fiber}")
    print("  complement", [str(D) for D in U.complement])
    print("  Pol rays  ", [str(DivisorClass(r)) for r in pol_cone(U).rays])
    print("  Forb rays ", [str(DivisorClass(r)) for r in collection([U]).forb.rays])


S = new_surface(3)
# lines through p1 and the other points
show(make_lines(S, None, 1))
# conics through p1..p5 tangent to the line through p6
show(make_tangent(S, None, range(1, 6), [6]))
# cuspidal cubics through p3..p6; -K, the conic and the lines move with the pair
show(make_cuspcubic(S, None, [3, 4, 5, 6]))

# a degree-1 tangent cylinder with point groups
S1 = new_surface(1)
show(make_tangent(S1, None, range(4, 9), [3], [[1], [2]]))

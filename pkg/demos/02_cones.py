"""Exact rational cones: both representations, duality, faces, subdivisions, volumes."""
from fractions import Fraction

from dpflex import cones
from dpflex.flex import ample_cone, mori_cone
from dpflex.lattice import new_surface

C = cones.from_rays(3, [(1, 0, 0), (0, 1, 0), (1, 1, 1), (1, 0, 1)])
print("rays", C.rays)
print("facets", C.inequalities)
print("dual rays", cones.dual(C).rays)
print("dual of dual is C:", cones.dual(cones.dual(C)) == C)

# a cone with a lineality space
H = cones.from_rays(3, [(1, 0, 0), (-1, 0, 0), (0, 1, 0)])
print("half-plane: rays", H.rays, "lineality", H.lineality, "dim", H.dim)

# faces and the relative interior
print(len(cones.proper_faces(C)), "proper faces;", "interior point", C.rel_interior_point())

# Mori and ample cones of the quintic del Pezzo surface
S = new_surface(5)
NE, A = mori_cone(S), ample_cone(S)
print("NE has", len(NE.rays), "rays,", len(NE.inequalities), "facets; Ample has", len(A.rays), "rays")

# the open subdivision of NE from -K: one member per proper face
subd = cones.open_subdivision(NE, S.anticanonical)
print(len(subd), "members; dimensions", sorted({M.dim for M in subd}))

# section volumes are exact; a unimodular triangle has volume 1/2
T = cones.from_rays(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
print("triangle", cones.section_volume(T, (1, 1, 1)))
halves = [cones.from_rays(2, [(1, 0), (1, 1)]), cones.from_rays(2, [(1, 1), (0, 1)])]
print("union of halves", cones.union_section_volume(halves, (Fraction(1), Fraction(1))))

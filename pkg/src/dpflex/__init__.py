"""Exact certificates of generic flexibility for affine cones over (weak) del Pezzo surfaces.

The modules build on each other:

* :mod:`dpflex.lattice`: Picard lattice, negative curves, contractions;
* :mod:`dpflex.cones`: exact polyhedral cones;
* :mod:`dpflex.cylinders`: cylinder constructions;
* :mod:`dpflex.flex`: collections, verdicts, subdivision cone types;
* :mod:`dpflex.reporting` and :mod:`dpflex.cli`: the command line front end.
"""

__version__ = "0.1.0"

from .errors import DelPezzoError  # noqa: E402
from .lattice import (  # noqa: E402
    BubbleClass, Contraction, DegenerationData, DivisorClass, SurfaceType, canonical_class,
    enumerate_contractions, from_contraction_basis, make_contraction, minus_one_curves,
    minus_two_curves, new_surface, pairing, relabel, resolve_bubble_class, standard_contraction,
)
from .cones import (  # noqa: E402
    Cone, dual, dual_wrt_pairing, from_inequalities, from_rays, in_rel_interior, intersect,
    open_subdivision, proper_faces, rel_interior_point, relint_disjoint, relint_subset,
    section_volume, union_section_volume,
)
from .cylinders import (  # noqa: E402
    Cylinder, make_cuspcubic, make_generic, make_lines, make_tangent, pol_cone,
)
from .flex import (  # noqa: E402
    ConeLabel, CylinderCollection, all_cylinders, ample_cone, collection,
    compatible_representatives, cone_representative, cone_types, coverage_fraction,
    is_complete_on, is_generically_flexible_on, is_polar_on, is_transversal, make_polar_on,
    mori_cone, reduce,
)

"""Exact rational polyhedral cones.

A :class:`Cone` lives in ``Q^n`` and carries both a generator description
(primitive extreme rays plus a lineality basis) and a halfspace description
(primitive facet normals plus equations cutting out the linear span).  One
description is supplied at construction; the other is derived lazily with
the double description method.  All arithmetic is on Python integers and
:class:`fractions.Fraction`, so every answer is exact.

Functionals act on vectors by the standard dot product.  Duality with
respect to another bilinear form (the intersection form of a surface) is
handled by :func:`dual_wrt_pairing`, which transports the generators
through the Gram matrix first.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ._exact import (
    det,
    dot,
    independent_subset,
    integer_kernel,
    inverse_columns,
    nullspace,
    primitive,
    primitive_int,
    rank,
    solve,
)
from .errors import (
    CapExceeded,
    DimensionMismatch,
    NotPointed,
    RayNotInCone,
    UnboundedSection,
)

IntVector = tuple[int, ...]

DEFAULT_CAP = 2 ** 12


# ---------------------------------------------------------------------------
# double description core


def _double_description(n: int, ineqs: Sequence[IntVector], eqs: Sequence[IntVector]):
    """Generators of ``{x : a.x >= 0 (a in ineqs), e.x = 0 (e in eqs)}``.

    Returns ``(lineality, rays)``: a canonical lineality basis and the
    primitive extreme rays of the pointed part, taken orthogonal to the
    lineality space.
    """
    lineality = nullspace(list(ineqs) + list(eqs), n)
    if len(lineality) == n:
        return lineality, []
    # Restricting to the orthogonal complement of the lineality space makes
    # the cone pointed and the constraint system of full rank n.
    eq_rows = [tuple(e) for e in eqs] + list(lineality)
    rows = eq_rows + [tuple(a) for a in ineqs]
    n_eq = len(eq_rows)
    basis = independent_subset(rows)[:n]
    assert len(basis) == n
    cols = inverse_columns([rows[i] for i in basis])
    rays = [primitive(c) for c in cols]
    zero = []
    full_basis_mask = 0
    for i in basis:
        full_basis_mask |= 1 << i
    for i in basis:
        zero.append(full_basis_mask & ~(1 << i))

    in_basis = set(basis)
    order = [i for i in range(n_eq)] + [i for i in range(n_eq, len(rows)) if i not in in_basis]
    for k in order:
        a = rows[k]
        is_eq = k < n_eq
        values = [dot(a, r) for r in rays]
        pos = [i for i, s in enumerate(values) if s > 0]
        neg = [i for i, s in enumerate(values) if s < 0]
        if not neg and not (is_eq and pos):
            bit = 1 << k
            zero = [z | bit if values[i] == 0 else z for i, z in enumerate(zero)]
            continue
        new_rays: list[IntVector] = []
        new_zero: list[int] = []
        bit = 1 << k
        for i, s in enumerate(values):
            if s == 0:
                new_rays.append(rays[i])
                new_zero.append(zero[i] | bit)
            elif s > 0 and not is_eq:
                new_rays.append(rays[i])
                new_zero.append(zero[i])
        need = n - 2
        for p in pos:
            zp = zero[p]
            for q in neg:
                common = zp & zero[q]
                if common.bit_count() < need:
                    continue
                adjacent = True
                for t, zt in enumerate(zero):
                    if t != p and t != q and common & zt == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                sp, sq = values[p], values[q]
                r = tuple(sp * x - sq * y for x, y in zip(rays[q], rays[p]))
                new_rays.append(primitive_int(r))
                new_zero.append(common | bit)
        rays, zero = new_rays, new_zero
        if not rays:
            break
    return lineality, sorted(set(rays))


def _check_dim(n: int, vectors: Iterable[Sequence]) -> list[tuple]:
    out = []
    for v in vectors:
        v = tuple(v)
        if len(v) != n:
            raise DimensionMismatch(f"expected vectors of length {n}, got {len(v)}")
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# the Cone type


class Cone:
    """An exact rational polyhedral cone in ``Q^ambient_dim``.

    Use :func:`from_rays` or :func:`from_inequalities` to build one.  Cones
    are immutable; equality compares the canonical generator description.
    """

    __slots__ = ("ambient_dim", "_rays", "_lineality", "_ineqs", "_eqs", "__dict__")

    def __init__(self, ambient_dim: int, *, rays=None, lineality=None, inequalities=None,
                 equations=None):
        self.ambient_dim = ambient_dim
        self._rays = rays
        self._lineality = lineality
        self._ineqs = inequalities
        self._eqs = equations

    # -- representations --------------------------------------------------

    def _ensure_h(self):
        if self._ineqs is None:
            gens = list(self._rays) + list(self._lineality) + [tuple(-x for x in l) for l in self._lineality]
            eqs, ineqs = _double_description(self.ambient_dim, gens, [])
            self._eqs = tuple(sorted(eqs))
            self._ineqs = tuple(ineqs)

    def _ensure_v(self):
        if self._rays is None:
            lin, rays = _double_description(self.ambient_dim, self._ineqs, self._eqs)
            self._lineality = tuple(sorted(lin))
            self._rays = tuple(rays)

    @property
    def rays(self) -> tuple[IntVector, ...]:
        """Primitive extreme rays of the pointed part, sorted."""
        self._ensure_v()
        return self._rays

    @property
    def lineality(self) -> tuple[IntVector, ...]:
        self._ensure_v()
        return self._lineality

    @property
    def inequalities(self) -> tuple[IntVector, ...]:
        """Primitive facet normals ``a`` with ``a.x >= 0`` on the cone, sorted."""
        self._ensure_h()
        return self._ineqs

    @property
    def equations(self) -> tuple[IntVector, ...]:
        self._ensure_h()
        return self._eqs

    @property
    def generators(self) -> list[IntVector]:
        """Rays together with both signs of every lineality vector."""
        return list(self.rays) + [v for l in self.lineality for v in (l, tuple(-x for x in l))]

    @cached_property
    def dim(self) -> int:
        return rank(self.generators)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_zero(self) -> bool:
        return not self.rays and not self.lineality

    # -- predicates -----------------------------------------------------------

    def contains(self, v: Sequence) -> bool:
        """Exact membership test."""
        (v,) = _check_dim(self.ambient_dim, [v])
        return (all(dot(e, v) == 0 for e in self.equations)
                and all(dot(a, v) >= 0 for a in self.inequalities))

    def in_rel_interior(self, v: Sequence) -> bool:
        (v,) = _check_dim(self.ambient_dim, [v])
        return (all(dot(e, v) == 0 for e in self.equations)
                and all(dot(a, v) > 0 for a in self.inequalities))

    def rel_interior_point(self) -> IntVector:
        """Sum of the primitive extreme rays; the origin for a linear subspace."""
        pt = [0] * self.ambient_dim
        for r in self.rays:
            pt = [a + b for a, b in zip(pt, r)]
        return tuple(pt)

    def is_subset_of(self, other: "Cone") -> bool:
        _same_dim(self, other)
        return all(other.contains(g) for g in self.generators)

    # -- dunder ----------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.rays == other.rays
                and self.lineality == other.lineality)

    def __hash__(self):
        return hash((self.ambient_dim, self.rays, self.lineality))

    def __repr__(self):
        extra = f", lineality={list(self.lineality)}" if self.lineality else ""
        return f"Cone(dim={self.dim}, ambient_dim={self.ambient_dim}, rays={list(self.rays)}{extra})"

    # -- face lattice ---------------------------------------------------------

    @cached_property
    def _facet_masks(self) -> list[int]:
        masks = []
        for a in self.inequalities:
            m = 0
            for i, r in enumerate(self.rays):
                if dot(a, r) == 0:
                    m |= 1 << i
            masks.append(m)
        return masks

    def _faces_below(self, mask: int) -> list[int]:
        """Ray masks of the facets of the face with ray mask ``mask``."""
        cands = {mask & f for f in self._facet_masks if mask & f != mask}
        return [c for c in cands if not any(c != d and c & d == c for d in cands)]

    def _face_masks(self) -> set[int]:
        full = (1 << len(self.rays)) - 1
        seen: set[int] = set()
        stack = [full]
        while stack:
            m = stack.pop()
            for f in self._faces_below(m):
                if f not in seen:
                    seen.add(f)
                    stack.append(f)
        return seen

    def _subcone(self, mask: int) -> "Cone":
        rays = tuple(r for i, r in enumerate(self.rays) if mask >> i & 1)
        return Cone(self.ambient_dim, rays=rays, lineality=())


def _same_dim(*cones: Cone):
    n = cones[0].ambient_dim
    if any(c.ambient_dim != n for c in cones):
        raise DimensionMismatch("cones live in different ambient spaces")


# ---------------------------------------------------------------------------
# constructors


def from_rays(ambient_dim: int, rays: Iterable[Sequence]) -> Cone:
    """The cone generated by ``rays`` (an empty list gives the zero cone)."""
    gens = [primitive(v) for v in _check_dim(ambient_dim, rays)]
    gens = sorted({g for g in gens if any(g)})
    eqs, ineqs = _double_description(ambient_dim, gens, [])
    eqs = tuple(sorted(eqs))
    ineqs = tuple(ineqs)
    lineality = nullspace(list(eqs) + list(ineqs), ambient_dim)
    if lineality:
        lin, ext = _double_description(ambient_dim, ineqs, eqs)
        return Cone(ambient_dim, rays=tuple(ext), lineality=tuple(sorted(lin)),
                    inequalities=ineqs, equations=eqs)
    active_rows = list(eqs)
    extreme = [g for g in gens
               if rank(active_rows + [a for a in ineqs if dot(a, g) == 0]) == ambient_dim - 1]
    return Cone(ambient_dim, rays=tuple(extreme), lineality=(), inequalities=ineqs, equations=eqs)


def from_inequalities(ambient_dim: int, functionals: Iterable[Sequence],
                      equations: Iterable[Sequence] = ()) -> Cone:
    """The cone ``{x : a.x >= 0 for a in functionals, e.x = 0 for e in equations}``."""
    ineqs = [primitive(a) for a in _check_dim(ambient_dim, functionals)]
    ineqs = list(dict.fromkeys(a for a in ineqs if any(a)))
    eqs = [primitive(e) for e in _check_dim(ambient_dim, equations)]
    eqs = [e for e in eqs if any(e)]
    lin, rays = _double_description(ambient_dim, ineqs, eqs)
    return Cone(ambient_dim, rays=tuple(rays), lineality=tuple(sorted(lin)))


def zero_cone(ambient_dim: int) -> Cone:
    return from_rays(ambient_dim, [])


def full_space(ambient_dim: int) -> Cone:
    return from_inequalities(ambient_dim, [])


def _trusted(ambient_dim: int, rays: Iterable[Sequence]) -> Cone:
    """A pointed cone whose given rays are known to be extreme and primitive."""
    return Cone(ambient_dim, rays=tuple(sorted(set(tuple(r) for r in rays))), lineality=())


# ---------------------------------------------------------------------------
# operations


def contains(C: Cone, v: Sequence) -> bool:
    return C.contains(v)


def in_rel_interior(C: Cone, v: Sequence) -> bool:
    return C.in_rel_interior(v)


def rel_interior_point(C: Cone) -> IntVector:
    return C.rel_interior_point()


def intersect(C1: Cone, C2: Cone) -> Cone:
    _same_dim(C1, C2)
    return from_inequalities(C1.ambient_dim, list(C1.inequalities) + list(C2.inequalities),
                             list(C1.equations) + list(C2.equations))


def intersect_with_halfspaces(C: Cone, functionals: Iterable[Sequence]) -> Cone:
    """``C`` cut by ``a.x >= 0`` for every functional, without building a cone for them."""
    return from_inequalities(C.ambient_dim, list(C.inequalities) + list(functionals),
                             C.equations)


def dual(C: Cone) -> Cone:
    """Dual cone with respect to the standard dot product."""
    return from_inequalities(C.ambient_dim, C.generators)


def dual_wrt_pairing(C: Cone, form) -> Cone:
    """``{x : <x, g> >= 0 for every generator g of C}`` for a symmetric form.

    ``form`` is a square integer matrix or any object with a ``gram``
    attribute (such as a surface type).
    """
    gram = getattr(form, "gram", form)
    if len(gram) != C.ambient_dim:
        raise DimensionMismatch("form size differs from the cone's ambient dimension")
    funcs = [tuple(sum(gram[i][j] * g[j] for j in range(len(g))) for i in range(len(g)))
             for g in C.generators]
    return from_inequalities(C.ambient_dim, funcs)


def proper_faces(C: Cone) -> list[Cone]:
    """All faces of a pointed cone other than the cone itself, including ``{0}``."""
    if not C.is_pointed:
        raise NotPointed("face enumeration needs a strictly convex cone")
    if C.is_zero:
        return []
    faces = [C._subcone(m) for m in C._face_masks()]
    return sorted(faces, key=lambda F: (len(F.rays), F.rays))


def relint_subset(C1: Cone, C2: Cone) -> bool:
    """Whether ``rel.int(C1)`` lies inside ``rel.int(C2)``."""
    _same_dim(C1, C2)
    return C1.is_subset_of(C2) and C2.in_rel_interior(C1.rel_interior_point())


def relint_disjoint(C: Cone, F: Cone) -> bool:
    """Whether ``rel.int(C)`` misses ``F``.

    ``I = C & F`` is a subcone of ``C``; it meets ``rel.int(C)`` exactly when
    its own relative interior point does.
    """
    _same_dim(C, F)
    inter = intersect(C, F)
    return not C.in_rel_interior(inter.rel_interior_point())


def open_subdivision(C: Cone, r: Sequence) -> list[Cone]:
    """Cones ``Cone(F, r)`` over proper faces ``F`` that leave every proper face of ``C``."""
    (r,) = _check_dim(C.ambient_dim, [r])
    if not C.is_pointed:
        raise NotPointed("open subdivision needs a strictly convex cone")
    if not C.contains(r):
        raise RayNotInCone(f"{r} is not in the cone")
    r = primitive(r)
    members: dict[tuple, Cone] = {}
    for F in proper_faces(C):
        pt = tuple(a + b for a, b in zip(F.rel_interior_point(), r))
        if C.in_rel_interior(pt):
            # r lies off the span of F, so the rays of F together with r stay extreme
            cone = _trusted(C.ambient_dim, list(F.rays) + [r])
            members.setdefault(cone.rays, cone)
    return sorted(members.values(), key=lambda K: (K.dim, K.rays))


# ---------------------------------------------------------------------------
# volumes


def _lattice_coordinates(n: int, span_rows: Sequence[IntVector]):
    """A lattice basis of ``span & Z^n`` and a function giving coordinates in it."""
    eqs = nullspace(span_rows, n)
    basis = integer_kernel(eqs, n) if eqs else [tuple(int(i == j) for j in range(n)) for i in range(n)]
    d = len(basis)
    # pick d coordinates on which the basis is independent, then solve there
    cols = independent_subset([[b[j] for b in basis] for j in range(n)])[:d]
    sub = [[basis[k][j] for k in range(d)] for j in cols]

    def coords(v):
        return solve(sub, [v[j] for j in cols])

    return basis, coords


def _pulling_triangulation(C: Cone) -> list[tuple[int, ...]]:
    """Simplicial cones (as tuples of ray indices) triangulating a pointed cone."""
    rays = C.rays
    dims: dict[int, int] = {}

    def face_dim(mask):
        if mask not in dims:
            dims[mask] = rank([r for i, r in enumerate(rays) if mask >> i & 1])
        return dims[mask]

    def tri(mask):
        idx = [i for i in range(len(rays)) if mask >> i & 1]
        if len(idx) == face_dim(mask):
            return [tuple(idx)]
        apex = idx[0]
        out = []
        for G in C._faces_below(mask):
            if not G >> apex & 1 and face_dim(G) == face_dim(mask) - 1:
                out.extend((apex,) + s for s in tri(G))
        return out

    return tri((1 << len(rays)) - 1)


def _cone_section_volume(C: Cone, level, coords, d: int) -> Fraction:
    if C.dim < d:
        return Fraction(0)
    if not C.is_pointed:
        raise UnboundedSection("cone contains a line")
    scaled = []
    for r in C.rays:
        h = dot(level, r)
        if h <= 0:
            raise UnboundedSection(f"level functional is not positive on ray {r}")
        scaled.append([Fraction(x) / h for x in coords(r)])
    total = Fraction(0)
    for simplex in _pulling_triangulation(C):
        total += abs(det([scaled[i] for i in simplex]))
    return total / math.factorial(d - 1)


def section_volume(C: Cone, level_functional: Sequence) -> Fraction:
    """Lattice-normalized volume of ``C & {level = 1}`` inside the span of ``C``.

    The slice of a unimodular simplicial cone whose rays all sit at level 1
    has volume ``1/(dim-1)!``; the quadrant cut by ``x + y = 1`` has volume 1.
    """
    (level_functional,) = _check_dim(C.ambient_dim, [level_functional])
    if C.is_zero:
        return Fraction(0)
    _, coords = _lattice_coordinates(C.ambient_dim, C.generators)
    return _cone_section_volume(C, level_functional, coords, C.dim)


def union_section_volume(cones: Sequence[Cone], level_functional: Sequence,
                         cap: int = DEFAULT_CAP) -> Fraction:
    """Exact section volume of a union of cones by inclusion-exclusion.

    Volumes are measured in the common linear span of the cones; cones of
    lower dimension contribute nothing.  Intersections that drop dimension
    prune their whole branch.  More than ``cap`` evaluated terms raises
    :class:`CapExceeded`.
    """
    cones = list(cones)
    if not cones:
        return Fraction(0)
    _same_dim(*cones)
    n = cones[0].ambient_dim
    (level_functional,) = _check_dim(n, [level_functional])
    gens = [g for C in cones for g in C.generators]
    d = rank(gens)
    if d == 0:
        return Fraction(0)
    _, coords = _lattice_coordinates(n, gens)
    full = [C for C in cones if C.dim == d]
    terms = 0
    total = Fraction(0)

    def visit(start: int, current: Cone | None, size: int):
        nonlocal terms, total
        for j in range(start, len(full)):
            inter = full[j] if current is None else intersect(current, full[j])
            if inter.dim < d:
                continue
            terms += 1
            if terms > cap:
                raise CapExceeded(f"inclusion-exclusion needs more than {cap} terms")
            vol = _cone_section_volume(inter, level_functional, coords, d)
            total += vol if size % 2 == 0 else -vol
            visit(j + 1, inter, size + 1)

    visit(0, None, 0)
    return total


# ---------------------------------------------------------------------------
# batch membership (used by sampling checks)


def relint_mask(C: Cone, points: np.ndarray) -> np.ndarray:
    """Vectorized exact ``in_rel_interior`` for an integer point matrix.

    Falls back to Python integers if the products could overflow int64.
    """
    pts = np.asarray(points)
    A = np.array(C.inequalities, dtype=np.int64).reshape(-1, C.ambient_dim)
    E = np.array(C.equations, dtype=np.int64).reshape(-1, C.ambient_dim)
    bound = int(np.abs(pts).max(initial=0)) * max(int(np.abs(A).max(initial=0)),
                                                   int(np.abs(E).max(initial=0)), 1)
    if bound * C.ambient_dim >= 2 ** 62 or pts.dtype == object:
        pts = pts.astype(object)
        A = A.astype(object)
        E = E.astype(object)
    ok = np.ones(len(pts), dtype=bool)
    if len(A):
        ok &= np.all(pts @ A.T > 0, axis=1)
    if len(E):
        ok &= np.all(pts @ E.T == 0, axis=1)
    return ok

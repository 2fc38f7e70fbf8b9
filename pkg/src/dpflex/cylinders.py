"""Cylinder constructions.

A cylinder is recorded by the classes of the curves it removes from the
surface (``complement``), the classes spanning its polarity cone
(``support``), and the class of its general fiber.  Transversality is
provenance: each factory records what the construction is known to give,
nothing is inferred geometrically.

Factories take a :class:`Contraction` and interpret point indices and the
classes ``L, E_i`` in that contraction's basis; everything stored on the
cylinder is in the standard basis of the surface.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import cones
from .errors import (BadSubset, IndexOutOfRange, LengthMismatch, OverlappingSets,
                     SupportMismatch, TooManyConditions, WrongDegree)
from .lattice import (BubbleClass, Contraction, DivisorClass, SurfaceType, canonical_sort,
                      from_contraction_basis, pairing, standard_contraction)

CONSTRUCTIONS = ("lines", "tangent", "cuspcubic", "generic")

# label of the moving point p of a pencil, never blown up
MOVING_POINT = -1


@dataclass(frozen=True, eq=False)
class Cylinder:
    surface: SurfaceType
    contraction: Contraction
    complement: tuple[DivisorClass, ...]
    support: tuple[DivisorClass, ...]
    fiber: DivisorClass
    fiber_bubble: BubbleClass | None
    construction: str
    transversal: bool | None = None
    # complement classes that vary inside the pair/family of cylinders the
    # construction produces; they do not obstruct completeness
    movable: frozenset[DivisorClass] = frozenset()
    params: tuple = ()

    def signature(self) -> tuple:
        return (self.complement, self.support, self.fiber)

    @property
    def fixed_complement(self) -> tuple[DivisorClass, ...]:
        return tuple(D for D in self.complement if D not in self.movable)

    def __eq__(self, other):
        if not isinstance(other, Cylinder):
            return NotImplemented
        return (self.surface == other.surface and self.signature() == other.signature()
                and self.movable == other.movable and self.transversal == other.transversal
                and self.construction == other.construction)

    def __hash__(self):
        return hash((self.signature(), self.construction))

    def __repr__(self):
        args = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"Cylinder({self.construction}{'; ' + args if args else ''})"


def _points(S: SurfaceType, points: Iterable[int], what: str) -> list[int]:
    pts = [int(p) for p in points]
    for p in pts:
        if not 1 <= p <= S.m:
            raise IndexOutOfRange(f"{what}: point {p} outside 1..{S.m}")
    if len(set(pts)) != len(pts):
        raise OverlappingSets(f"{what}: repeated point")
    return sorted(pts)


def _to_standard(c: Contraction, a: int, mults: dict[int, int]) -> DivisorClass:
    x = [0] * (c.m + 1)
    x[0] = a
    for p, k in mults.items():
        x[p] += k
    return from_contraction_basis(x, c)


def _build(S, c, construction, complement, support, fiber, bubble, transversal,
           movable=(), params=()) -> Cylinder:
    comp = tuple(canonical_sort(complement))
    supp = tuple(canonical_sort(support))
    return Cylinder(S, c, comp, supp, DivisorClass(fiber), bubble, construction, transversal,
                    frozenset(movable), tuple(params))


def make_lines(S: SurfaceType, c: Contraction | None, i: int) -> Cylinder:
    """Pencil of lines through the point ``p_i``."""
    c = c or standard_contraction(S)
    (i,) = _points(S, [i], "lines center")
    m = S.m
    comp = [_to_standard(c, 0, {j: 1}) for j in range(1, m + 1)]
    comp += [_to_standard(c, 1, {i: -1, j: -1}) for j in range(1, m + 1) if j != i]
    fiber = _to_standard(c, 1, {i: -1})
    return _build(S, c, "lines", comp, comp, fiber, BubbleClass(DivisorClass.line(m), {i: -1}),
                  False, params=(("center", i),))


def make_tangent(S: SurfaceType, c: Contraction | None, conic_points: Iterable[int],
                 tangent_points: Iterable[int], fiber_groups: Sequence[Iterable[int]] = ()
                 ) -> Cylinder:
    """Complement of a conic ``Q`` and its tangent line ``T``, pencil ``<Q, 2T>``.

    Points not listed anywhere become singleton fiber groups.
    """
    c = c or standard_contraction(S)
    conic = _points(S, conic_points, "conic points")
    tangent = _points(S, tangent_points, "tangent points")
    groups = [_points(S, g, "fiber group") for g in fiber_groups]
    groups = [g for g in groups if g]
    listed = conic + tangent + [p for g in groups for p in g]
    if len(set(listed)) != len(listed):
        raise OverlappingSets("conic, tangent and fiber-group points must be disjoint")
    conditions = max(len(conic) - 1, 0) + len(tangent) + sum(len(g) - 1 for g in groups)
    if conditions > 5:
        raise TooManyConditions(f"{conditions} conditions imposed, at most 5 are independent")
    implicit = [[p] for p in range(1, S.m + 1) if p not in listed]
    all_groups = sorted(groups + implicit)

    Q = _to_standard(c, 2, {p: -1 for p in conic})
    T = _to_standard(c, 1, {p: -1 for p in tangent})
    others = [_to_standard(c, 2, {p: -1 for p in g}) for g in all_groups]
    exc = [_to_standard(c, 0, {j: 1}) for j in range(1, S.m + 1)]
    comp = [Q, T] + others + exc
    params = (("conic", tuple(conic)), ("tangent", tuple(tangent)),
              ("groups", tuple(tuple(g) for g in groups)))
    return _build(S, c, "tangent", comp, comp, _to_standard(c, 2, {}),
                  BubbleClass(DivisorClass.line(S.m) * 2, {MOVING_POINT: -1}), True,
                  movable=[T] + others, params=params)


def make_cuspcubic(S: SurfaceType, c: Contraction | None, four: Iterable[int],
                   admits_cuspidal_anticanonical: bool = True) -> Cylinder:
    """Cuspidal anticanonical cubic ``C``, conic ``Q`` and four lines, pencil ``<2C, Q + L_1 + ... + L_4>``.

    Degree 2 needs an anticanonical cuspidal curve, which holds for generic
    surfaces; the caller vouches for it with ``admits_cuspidal_anticanonical``.
    """
    if not 2 <= S.degree <= 5:
        raise WrongDegree(f"cuspidal cubic cylinders need degree 2..5, got {S.degree}")
    if S.degree == 2 and not admits_cuspidal_anticanonical:
        raise WrongDegree("surface is flagged as having no anticanonical cuspidal curve")
    c = c or standard_contraction(S)
    four = list(four)
    if len(four) != 4 or len(set(four)) != 4:
        raise BadSubset(f"need four distinct points, got {four}")
    four = _points(S, four, "cuspidal cubic points")
    rest = [j for j in range(1, S.m + 1) if j not in four]

    antican = _to_standard(c, 3, {j: -1 for j in range(1, S.m + 1)})
    Q = _to_standard(c, 2, {p: -1 for p in four})
    lines = [_to_standard(c, 1, {p: -1}) for p in four]
    exc = [_to_standard(c, 0, {j: 1}) for j in rest]
    comp = [antican, Q] + lines + exc
    fiber = _to_standard(c, 6, {p: -2 for p in four})
    return _build(S, c, "cuspcubic", comp, comp, fiber,
                  BubbleClass(fiber, {MOVING_POINT: -2}), True,
                  movable=[antican, Q] + lines, params=(("four", tuple(four)),))


def make_generic(S: SurfaceType, c: Contraction | None, complement: Iterable[Sequence[int]],
                 support: Iterable[Sequence[int]], fiber: Sequence[int],
                 transversal: bool | None = None, movable: Iterable[Sequence[int]] = ()
                 ) -> Cylinder:
    """A cylinder given directly by its class data, in the standard basis."""
    c = c or standard_contraction(S)
    comp = [DivisorClass(D) for D in complement]
    supp = [DivisorClass(D) for D in support]
    for D in comp + supp + [DivisorClass(fiber)]:
        if len(D) != S.m + 1:
            raise LengthMismatch(f"class {tuple(D)} has length {len(D)}, expected {S.m + 1}")
    missing = set(comp) - set(supp)
    if missing:
        raise SupportMismatch(f"complement classes missing from support: "
                              f"{sorted(str(D) for D in missing)}")
    mov = [DivisorClass(D) for D in movable]
    if not set(mov) <= set(comp):
        raise SupportMismatch("movable classes must belong to the complement")
    return _build(S, c, "generic", comp, supp, fiber, None, transversal, movable=mov)


def pol_cone(U: Cylinder) -> cones.Cone:
    """Cone spanned by the support classes."""
    return cones.from_rays(U.surface.m + 1, U.support)


def relabeled(U: Cylinder, c: Contraction) -> Cylinder:
    """Move all class data of ``U`` through the base change ``x -> from_contraction_basis(x, c)``."""
    f = lambda D: from_contraction_basis(D, c)  # noqa: E731
    return Cylinder(U.surface, c, tuple(canonical_sort(map(f, U.complement))),
                    tuple(canonical_sort(map(f, U.support))), f(U.fiber), U.fiber_bubble,
                    U.construction, U.transversal, frozenset(map(f, U.movable)), U.params)


def fiber_is_consistent(U: Cylinder) -> bool:
    """The fiber moves (``F.F >= 0``, ``F.(-K) > 0``) and meets complement classes nonnegatively."""
    F = U.fiber
    return (pairing(F, F) >= 0 and pairing(F, U.surface.anticanonical) > 0
            and all(pairing(F, D) >= 0 for D in U.complement))

"""Cylinder collections and the flexibility verdicts.

A collection ``U_1, ..., U_n`` has the polarity cone ``Pol = Pol(U_1) & ... & Pol(U_n)``
and the forbidden cone spanned by the fixed curves missed by every member.
For a subdivision cone ``K`` the collection certifies generic flexibility of
the affine cones over ``(Y, H)`` for ``H`` ample in ``rel.int(K)`` when it is

* polar on ``K``: ``rel.int(K)`` lies in ``rel.int(Pol)``;
* complete on ``K``: no ample class of ``rel.int(K)`` lies in ``Forb``;
* transversal.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import cones
from .cones import Cone
from .cylinders import Cylinder, make_cuspcubic, make_lines, make_tangent, pol_cone
from .errors import DimensionMismatch, MixedSurfaces, UnboundedSection, UnknownLabel
from .lattice import DivisorClass, SurfaceType, enumerate_contractions, pairing


# ---------------------------------------------------------------------------
# Mori and ample cones


def _gram_functional(D: Sequence[int]) -> tuple[int, ...]:
    # x -> D.x as a plain dot product
    return (D[0],) + tuple(-c for c in D[1:])


def mori_cone(S: SurfaceType) -> Cone:
    """``NE(Y)``, spanned by the negative curves.

    Negative curves are exactly the extremal rays, so the ray list is taken
    as is; the facet description is only computed on demand.
    """
    cache = S.__dict__.setdefault("_dpflex_cones", {})
    if "NE" not in cache:
        cache["NE"] = cones._trusted(S.m + 1, S.negative_curves)
    return cache["NE"]


def _ample_functionals(S: SurfaceType) -> list[tuple[int, ...]]:
    return [_gram_functional(D) for D in S.negative_curves]


def ample_cone(S: SurfaceType) -> Cone:
    """The nef cone, dual to ``NE(Y)`` under the intersection form.

    Its interior is the set of ample classes.  In degree 1 the ray
    description is large; prefer :func:`contains_ample` where possible.
    """
    cache = S.__dict__.setdefault("_dpflex_cones", {})
    if "Ample" not in cache:
        cache["Ample"] = cones.from_inequalities(S.m + 1, _ample_functionals(S))
    return cache["Ample"]


def is_ample(S: SurfaceType, D: Sequence[int]) -> bool:
    return all(pairing(D, F) > 0 for F in S.negative_curves)


def ample_part(S: SurfaceType, K: Cone) -> Cone:
    """``K & Nef(Y)``, computed from the facet inequalities of the nef cone."""
    return cones.intersect_with_halfspaces(K, _ample_functionals(S))


def contains_ample(S: SurfaceType, K: Cone) -> bool:
    """Whether ``K`` contains an ample class."""
    return is_ample(S, ample_part(S, K).rel_interior_point())


# ---------------------------------------------------------------------------
# subdivision cone labels


@dataclass(frozen=True, order=True)
class ConeLabel:
    """``B(k)``, ``B(P)``, ``C``, ``C(k)`` or ``C(P)``.

    ``index`` is an integer, ``"P"``, or ``None`` for the bare ``C``.
    """

    kind: str
    index: int | str | None = None

    def __str__(self):
        if self.index is None:
            return self.kind
        return f"{self.kind}({self.index})"

    @classmethod
    def parse(cls, text: str) -> "ConeLabel":
        mt = re.fullmatch(r"\s*([BC])\s*(?:\(\s*(\d+|P)\s*\))?\s*", str(text))
        if not mt:
            raise UnknownLabel(f"cannot parse cone label {text!r}")
        kind, idx = mt.groups()
        if idx is None:
            if kind == "B":
                raise UnknownLabel("B needs an index")
            return cls("C")
        return cls(kind, idx if idx == "P" else int(idx))


def cone_types(S: SurfaceType) -> list[ConeLabel]:
    m = S.m
    return ([ConeLabel("B", k) for k in range(m + 1)] + [ConeLabel("B", "P"), ConeLabel("C")]
            + [ConeLabel("C", k) for k in range(m)] + [ConeLabel("C", "P")])


def _label(S: SurfaceType, label) -> ConeLabel:
    lab = label if isinstance(label, ConeLabel) else ConeLabel.parse(label)
    if lab not in cone_types(S):
        raise UnknownLabel(f"{lab} is not a cone type for degree {S.degree}")
    return lab


def representative_rays(S: SurfaceType, label) -> list[DivisorClass]:
    lab = _label(S, label)
    m, E, L, aK = S.m, S.E, S.L, S.anticanonical
    if lab.kind == "B":
        if lab.index == "P":
            return [aK, *E[:m - 2], L - E[m - 2] - E[m - 1]]
        return [aK, *E[:lab.index]]
    if lab.index is None:
        return [*E[:m - 1]] + [L - E[i] - E[m - 1] for i in range(m - 1)]
    if lab.index == "P":
        return [aK, *E[:m - 2], L - E[m - 2] - E[m - 1], L - E[m - 1]]
    return [aK, *E[:lab.index], L - E[m - 1]]


def cone_representative(S: SurfaceType, label) -> Cone:
    """Representative of a subdivision cone type, built from the standard contraction."""
    return cones.from_rays(S.m + 1, representative_rays(S, label))


# ---------------------------------------------------------------------------
# collections


class CylinderCollection:
    """An ordered, immutable list of cylinders on one surface."""

    def __init__(self, cylinders: Iterable[Cylinder] = (), surface: SurfaceType | None = None):
        self.cylinders = tuple(cylinders)
        surfaces = {U.surface for U in self.cylinders}
        if len(surfaces) > 1:
            raise MixedSurfaces("all cylinders must live on the same surface")
        if surface is None and not surfaces:
            raise ValueError("an empty collection needs its surface")
        if surface is not None and surfaces and surfaces != {surface}:
            raise MixedSurfaces("cylinders do not live on the given surface")
        self.surface = surface if surface is not None else next(iter(surfaces))

    @property
    def ambient_dim(self) -> int:
        return self.surface.m + 1

    def __len__(self):
        return len(self.cylinders)

    def __iter__(self):
        return iter(self.cylinders)

    def __getitem__(self, i):
        return self.cylinders[i]

    def __add__(self, other: "CylinderCollection") -> "CylinderCollection":
        return CylinderCollection(self.cylinders + tuple(other), self.surface)

    def __repr__(self):
        return f"CylinderCollection({len(self)} cylinders on {self.surface!r})"

    @cached_property
    def pol(self) -> Cone:
        n = self.ambient_dim
        if not self.cylinders:
            return cones.full_space(n)
        # intersect facet descriptions directly; one double description at the end
        funcs, eqs = [], []
        for U in self.cylinders:
            P = pol_cone(U)
            funcs.extend(P.inequalities)
            eqs.extend(P.equations)
        return cones.from_inequalities(n, funcs, eqs)

    @cached_property
    def forbidden_classes(self) -> tuple[DivisorClass, ...]:
        if not self.cylinders:
            return ()
        common = set(self.cylinders[0].fixed_complement)
        for U in self.cylinders[1:]:
            common &= set(U.fixed_complement)
        return tuple(sorted(common))

    @cached_property
    def forb(self) -> Cone:
        if not self.cylinders:
            return cones.full_space(self.ambient_dim)
        return cones.from_rays(self.ambient_dim, self.forbidden_classes)


def collection(cs: Iterable[Cylinder], surface: SurfaceType | None = None) -> CylinderCollection:
    return CylinderCollection(cs, surface)


def _check(col: CylinderCollection, K: Cone):
    if K.ambient_dim != col.ambient_dim:
        raise DimensionMismatch(f"cone lives in dimension {K.ambient_dim}, "
                                f"surface needs {col.ambient_dim}")


def is_polar_on(col: CylinderCollection, K: Cone) -> bool:
    _check(col, K)
    if K.is_zero:
        return True
    return cones.relint_subset(K, col.pol)


def is_complete_on(col: CylinderCollection, K: Cone) -> bool:
    """No ample class in ``rel.int(K)`` lies in the forbidden cone.

    Classes of ``rel.int(K)`` outside the ample cone never matter, so the
    forbidden part ``I = K & Forb`` is cut down to the nef cone before the
    relative interior test.
    """
    _check(col, K)
    if K.is_zero:
        return True
    inter = cones.intersect(K, col.forb)
    if not K.in_rel_interior(inter.rel_interior_point()):
        return True
    # I meets rel.int(K), hence rel.int(I) sits inside rel.int(K); the question
    # is whether I reaches the open ample cone
    return not is_ample(col.surface, ample_part(col.surface, inter).rel_interior_point())


def _lines_pair(U: Cylinder, V: Cylinder) -> bool:
    return (U.construction == V.construction == "lines"
            and U.contraction == V.contraction
            and dict(U.params)["center"] != dict(V.params)["center"])


def is_transversal(col: CylinderCollection) -> bool:
    if any(U.transversal is True for U in col):
        return True
    return any(_lines_pair(U, V) for U, V in itertools.combinations(col, 2))


def is_generically_flexible_on(col: CylinderCollection, K: Cone) -> bool:
    return is_polar_on(col, K) and is_complete_on(col, K) and is_transversal(col)


def verdicts(col: CylinderCollection, K: Cone) -> dict[str, bool]:
    polar = is_polar_on(col, K)
    complete = is_complete_on(col, K)
    transversal = is_transversal(col)
    return {"polar": polar, "complete": complete, "transversal": transversal,
            "generically_flexible": polar and complete and transversal}


# ---------------------------------------------------------------------------
# campaigns


def _tangent_parameters(m: int):
    # conic through as many points as the 5 conditions allow, one point on the tangent
    size = min(5, m - 1)
    for conic in itertools.combinations(range(1, m + 1), size):
        for t in range(1, m + 1):
            if t not in conic:
                yield conic, (t,)


def all_cylinders(S: SurfaceType, constructions: Iterable[str]) -> CylinderCollection:
    """Every cylinder of the given constructions over all contractions, deduplicated."""
    tags = set(constructions)
    unknown = tags - {"lines", "tangent", "cuspcubic"}
    if unknown:
        raise ValueError(f"unknown constructions {sorted(unknown)}")
    found: dict[tuple, Cylinder] = {}
    if not tags:
        return CylinderCollection((), S)
    m = S.m
    for c in enumerate_contractions(S, ordered=False):
        batch: list[Cylinder] = []
        if "lines" in tags:
            batch += [make_lines(S, c, i) for i in range(1, m + 1)]
        if "cuspcubic" in tags and 2 <= S.degree <= 5:
            batch += [make_cuspcubic(S, c, four) for four in itertools.combinations(range(1, m + 1), 4)]
        if "tangent" in tags and m >= 2:
            batch += [make_tangent(S, c, conic, t) for conic, t in _tangent_parameters(m)]
        for U in batch:
            found.setdefault((U.construction,) + U.signature(), U)
    return CylinderCollection(sorted(found.values(), key=lambda U: (U.construction, U.signature())), S)


def make_polar_on(col: CylinderCollection, K: Cone) -> CylinderCollection:
    """Members ``U`` with ``rel.int(K)`` inside ``rel.int(Pol(U))``."""
    _check(col, K)
    if K.is_zero:
        return col
    return CylinderCollection([U for U in col if cones.relint_subset(K, pol_cone(U))], col.surface)


def reduce(col: CylinderCollection) -> CylinderCollection:
    """Greedily drop members whose removal changes neither ``Pol`` nor ``Forb``."""
    keep = list(col)
    pol, forb = col.pol, col.forb
    i = 0
    while i < len(keep):
        trial = CylinderCollection(keep[:i] + keep[i + 1:], col.surface)
        if trial.cylinders and trial.forb == forb and trial.pol == pol:
            keep = list(trial)
        else:
            i += 1
    return CylinderCollection(keep, col.surface)


def compatible_representatives(col: CylinderCollection, require_complete: bool = False
                               ) -> list[ConeLabel]:
    """Labels whose standard representative passes the polarity (and completeness) test."""
    S = col.surface
    out = []
    for lab in cone_types(S):
        K = cone_representative(S, lab)
        if is_polar_on(col, K) and (not require_complete or is_complete_on(col, K)):
            out.append(lab)
    return out


def anticanonical_level(S: SurfaceType) -> tuple[int, ...]:
    """The functional ``x -> (-K).x``."""
    return _gram_functional(S.anticanonical)


def coverage_fraction(S: SurfaceType, target: Cone, cols: Sequence[CylinderCollection],
                      level: Sequence | None = None, cap: int = cones.DEFAULT_CAP) -> Fraction:
    """Share of the section of ``target`` covered by the polarity cones of ``cols``.

    Volumes are taken on the slice ``level = 1``, by default ``(-K, .) = 1``.
    Only the part of ``target`` where a collection is polar counts, so each
    collection contributes ``target & Pol``.
    """
    level = anticanonical_level(S) if level is None else tuple(level)
    whole = cones.section_volume(target, level)
    if whole == 0:
        raise UnboundedSection("target has an empty section")
    pieces = [cones.intersect(target, col.pol) for col in cols]
    pieces = [P for P in pieces if P.dim == target.dim]
    if not pieces:
        return Fraction(0)
    return cones.union_section_volume(pieces, level, cap) / whole

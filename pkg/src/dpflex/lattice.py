"""Picard lattices of blowups of the plane in at most eight points.

Divisor classes are integer vectors in the basis ``(L, E_1, ..., E_m)``:
the vector ``(a, c_1, ..., c_m)`` stands for ``a*L + c_1*E_1 + ... + c_m*E_m``,
so a line through the first two points is ``(1, -1, -1, 0, ...)``.  The
intersection form is ``diag(1, -1, ..., -1)``.

Point indices are 1-based.  Negative labels denote symbolic extra points
(a moving point of a pencil, say) that are never blown up.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import InvalidConfiguration, InvalidDegree, LengthMismatch, UnknownPoint


class DivisorClass(tuple):
    """An integer coordinate vector ``(a; c_1, ..., c_m)`` with lattice arithmetic."""

    def __new__(cls, coeffs: Iterable[int]):
        coeffs = tuple(coeffs)
        if any(int(c) != c for c in coeffs):
            raise ValueError(f"divisor class coefficients must be integers: {coeffs}")
        return super().__new__(cls, (int(c) for c in coeffs))

    @classmethod
    def line(cls, m: int) -> "DivisorClass":
        return cls((1,) + (0,) * m)

    @classmethod
    def exceptional(cls, m: int, i: int) -> "DivisorClass":
        if not 1 <= i <= m:
            raise UnknownPoint(f"point {i} is not among 1..{m}")
        return cls(int(j == i) for j in range(m + 1))

    @property
    def m(self) -> int:
        return len(self) - 1

    def __add__(self, other):
        _match(self, other)
        return DivisorClass(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        _match(self, other)
        return DivisorClass(a - b for a, b in zip(self, other))

    def __neg__(self):
        return DivisorClass(-a for a in self)

    def __mul__(self, k):
        if isinstance(k, int):
            return DivisorClass(k * a for a in self)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"DivisorClass({tuple(self)})"

    def __str__(self):
        parts = []
        a = self[0]
        if a:
            parts.append(f"{'' if a == 1 else '-' if a == -1 else a}L")
        for i, c in enumerate(self[1:], start=1):
            if c == 0:
                continue
            sign = "+" if c > 0 else "-"
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(f"{sign}{mag}E{i}")
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def _match(d1: Sequence, d2: Sequence):
    if len(d1) != len(d2):
        raise LengthMismatch(f"classes of lengths {len(d1)} and {len(d2)}")


def pairing(d1: Sequence[int], d2: Sequence[int]) -> int:
    """Intersection number: ``L.L = 1``, ``E_i.E_i = -1``, all mixed products 0."""
    _match(d1, d2)
    return d1[0] * d2[0] - sum(a * b for a, b in zip(d1[1:], d2[1:]))


def canonical_sort(classes: Iterable[Sequence[int]]) -> list[DivisorClass]:
    """Deduplicate and sort lexicographically on ``(a, c_1, ..., c_m)``."""
    return sorted({DivisorClass(c) for c in classes})


# ---------------------------------------------------------------------------
# degenerations


@dataclass(frozen=True)
class DegenerationData:
    """Dependencies among the blown-up points.

    ``infinitely_near`` holds ``(child, parent)`` pairs: the child lies on the
    exceptional curve over the parent.  ``cusp_cubics`` holds
    ``(node, seven_others)`` pairs and only makes sense for eight points.
    """

    collinear_triples: tuple[frozenset[int], ...] = ()
    infinitely_near: tuple[tuple[int, int], ...] = ()
    conic_sixes: tuple[frozenset[int], ...] = ()
    cusp_cubics: tuple[tuple[int, frozenset[int]], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "collinear_triples",
                           tuple(sorted((frozenset(t) for t in self.collinear_triples), key=sorted)))
        object.__setattr__(self, "infinitely_near",
                           tuple(sorted((int(c), int(p)) for c, p in self.infinitely_near)))
        object.__setattr__(self, "conic_sixes",
                           tuple(sorted((frozenset(s) for s in self.conic_sixes), key=sorted)))
        object.__setattr__(self, "cusp_cubics",
                           tuple(sorted(((int(n), frozenset(s)) for n, s in self.cusp_cubics),
                                        key=lambda x: (x[0], sorted(x[1])))))

    @property
    def is_trivial(self) -> bool:
        return not (self.collinear_triples or self.infinitely_near or self.conic_sixes
                    or self.cusp_cubics)

    def kinds(self) -> list[str]:
        names = ["collinear_triples", "infinitely_near", "conic_sixes", "cusp_cubics"]
        return [k for k in names if getattr(self, k)]

    def canonical(self) -> dict:
        """JSON-ready canonical form (sorted, 1-based)."""
        return {
            "collinear_triples": [sorted(t) for t in self.collinear_triples],
            "infinitely_near": [list(p) for p in self.infinitely_near],
            "conic_sixes": [sorted(s) for s in self.conic_sixes],
            "cusp_cubics": [[n, sorted(s)] for n, s in self.cusp_cubics],
        }


def _validate(m: int, deg: DegenerationData) -> None:
    def check_indices(points, what):
        for p in points:
            if not 1 <= p <= m:
                raise InvalidConfiguration(f"{what}: point index {p} outside 1..{m}")

    for t in deg.collinear_triples:
        if len(t) != 3:
            raise InvalidConfiguration(f"collinear triple {sorted(t)} does not have 3 distinct points")
        check_indices(t, "collinear triple")
    for s in deg.conic_sixes:
        if len(s) != 6:
            raise InvalidConfiguration(f"conic six {sorted(s)} does not have 6 distinct points")
        check_indices(s, "conic six")
    for node, others in deg.cusp_cubics:
        if m != 8:
            raise InvalidConfiguration("cusp cubics need exactly eight points (degree 1)")
        check_indices([node, *others], "cusp cubic")
        if len(others) != 7 or node in others:
            raise InvalidConfiguration("cusp cubic needs a node and the seven other points")

    children: dict[int, int] = {}
    for child, parent in deg.infinitely_near:
        check_indices((child, parent), "infinitely near pair")
        if child == parent:
            raise InvalidConfiguration(f"point {child} cannot be infinitely near itself")
        if child in children:
            raise InvalidConfiguration(f"point {child} is infinitely near two points")
        children[child] = parent
    successors: dict[int, int] = {}
    for child, parent in deg.infinitely_near:
        if parent in successors:
            raise InvalidConfiguration(
                f"point {parent} has two immediate infinitely near points "
                f"({successors[parent]} and {child})")
        successors[parent] = child
    for start in children:
        seen = {start}
        p = children.get(start)
        while p is not None:
            if p in seen:
                raise InvalidConfiguration("infinitely near pairs form a cycle")
            seen.add(p)
            p = children.get(p)

    for t1, t2 in itertools.combinations(deg.collinear_triples, 2):
        if len(t1 & t2) > 1:
            raise InvalidConfiguration(
                f"collinear triples {sorted(t1)} and {sorted(t2)} force four points on a line")
    for s1, s2 in itertools.combinations(deg.conic_sixes, 2):
        if len(s1 & s2) >= 5:
            raise InvalidConfiguration(
                f"conic sixes {sorted(s1)} and {sorted(s2)} force seven points on a conic")


def _declared_minus_two(m: int, deg: DegenerationData) -> list[tuple[DivisorClass, str]]:
    L = DivisorClass.line(m)
    E = [DivisorClass.exceptional(m, i) for i in range(1, m + 1)]
    out = []
    for t in deg.collinear_triples:
        out.append((L - sum((E[i - 1] for i in t), DivisorClass((0,) * (m + 1))),
                    f"collinear triple {sorted(t)}"))
    for child, parent in deg.infinitely_near:
        out.append((E[parent - 1] - E[child - 1], f"infinitely near pair ({child}, {parent})"))
    for s in deg.conic_sixes:
        out.append((2 * L - sum((E[i - 1] for i in s), DivisorClass((0,) * (m + 1))),
                    f"conic six {sorted(s)}"))
    for node, others in deg.cusp_cubics:
        out.append((3 * L - 2 * E[node - 1] - sum((E[i - 1] for i in others),
                                                    DivisorClass((0,) * (m + 1))),
                    f"cusp cubic with node {node}"))
    return out


# ---------------------------------------------------------------------------
# negative curve search


def _coefficient_vectors(m: int, total: int, squares: int, bound: int):
    """All integer vectors of length m, entries in [-bound, bound], with given sum and sum of squares."""
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def rec(k, s, q):
        # k entries left to choose, remaining sum s, remaining square sum q
        if k == 0:
            if s == 0 and q == 0:
                out.append(tuple(prefix))
            return
        if q < 0 or q > bound * bound * k or abs(s) > bound * k or s * s > k * q:
            return
        for c in range(-bound, bound + 1):
            prefix.append(c)
            rec(k - 1, s - c, q - c * c)
            prefix.pop()

    rec(m, total, squares)
    return out


def exceptional_classes(m: int) -> list[DivisorClass]:
    """Every class with ``D.D = -1`` and ``D.K = -1`` in the search window.

    The window ``|a| <= 6``, ``|c_i| <= 3`` holds all such classes for ``m <= 8``;
    these are the (-1)-curves of a del Pezzo surface of degree ``9 - m``.
    """
    found = []
    for a in range(-6, 7):
        # D.(-K) = 3a + sum(c) = 1 and D.D = a^2 - sum(c^2) = -1
        for c in _coefficient_vectors(m, 1 - 3 * a, a * a + 1, 3):
            found.append(DivisorClass((a,) + c))
    return canonical_sort(found)


# ---------------------------------------------------------------------------
# surfaces


class SurfaceType:
    """A (weak) del Pezzo surface given as the plane blown up in ``9 - degree`` points.

    Built by :func:`new_surface`, which validates the degeneration data.
    Instances are immutable in practice; derived data is cached.
    """

    def __init__(self, degree: int, degenerations: DegenerationData):
        self.degree = degree
        self.m = 9 - degree
        self.degenerations = degenerations
        self.L = DivisorClass.line(self.m)
        self.E = tuple(DivisorClass.exceptional(self.m, i) for i in range(1, self.m + 1))
        self.K = DivisorClass((-3,) + (1,) * self.m)
        self.gram = tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(self.m + 1))
                          for i in range(self.m + 1))

    @property
    def anticanonical(self) -> DivisorClass:
        return -self.K

    @property
    def is_weak(self) -> bool:
        return not self.degenerations.is_trivial

    @cached_property
    def minus_two(self) -> tuple[DivisorClass, ...]:
        return tuple(canonical_sort(F for F, _ in _declared_minus_two(self.m, self.degenerations)))

    @cached_property
    def minus_one(self) -> tuple[DivisorClass, ...]:
        # a class with D^2 = D.K = -1 is a (-1)-curve iff it meets every (-2)-curve nonnegatively
        return tuple(D for D in exceptional_classes(self.m)
                     if all(pairing(D, F) >= 0 for F in self.minus_two))

    @cached_property
    def negative_curves(self) -> tuple[DivisorClass, ...]:
        """Generators of the Mori cone: all (-1)- and (-2)-curves."""
        return tuple(canonical_sort(self.minus_one + self.minus_two))

    def key(self) -> tuple:
        return (self.degree, repr(self.degenerations.canonical()))

    def __eq__(self, other):
        return isinstance(other, SurfaceType) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        kinds = self.degenerations.kinds()
        weak = f", degenerations={self.degenerations.canonical()}" if kinds else ""
        return f"SurfaceType(degree={self.degree}{weak})"


def new_surface(degree: int, degenerations: DegenerationData | None = None, **kwargs) -> SurfaceType:
    """Validated surface type of the given degree.

    Degenerations can be passed as a :class:`DegenerationData` or as keyword
    arguments (``collinear_triples=[[1, 2, 3]]`` and so on).
    """
    if isinstance(degree, bool) or not isinstance(degree, int) or not 1 <= degree <= 7:
        raise InvalidDegree(f"degree must be an integer in 1..7, got {degree!r}")
    if degenerations is None:
        degenerations = DegenerationData(**kwargs)
    elif kwargs:
        raise TypeError("pass degenerations either as DegenerationData or as keywords")
    m = 9 - degree
    _validate(m, degenerations)
    declared = _declared_minus_two(m, degenerations)
    classes = [F for F, _ in declared]
    if len(set(classes)) != len(classes):
        raise InvalidConfiguration("the same (-2)-class is declared twice")
    for (F1, why1), (F2, why2) in itertools.combinations(declared, 2):
        if pairing(F1, F2) not in (0, 1):
            raise InvalidConfiguration(
                f"pairwise-product rule: {why1} and {why2} give (-2)-classes "
                f"{F1} and {F2} with product {pairing(F1, F2)}")
    S = SurfaceType(degree, degenerations)
    if not S.minus_one:
        raise InvalidConfiguration("configuration leaves no (-1)-curves")
    return S


def pairing_matrix(S: SurfaceType, classes: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[pairing(a, b) for b in classes] for a in classes]


def canonical_class(S: SurfaceType) -> DivisorClass:
    """The anticanonical class ``-K = 3L - E_1 - ... - E_m``.

    Everything downstream (cone representatives, polarity checks) works with
    ``-K``; the canonical class itself is ``S.K``.
    """
    return S.anticanonical


def minus_one_curves(S: SurfaceType) -> list[DivisorClass]:
    return list(S.minus_one)


def minus_two_curves(S: SurfaceType) -> list[DivisorClass]:
    return list(S.minus_two)


# ---------------------------------------------------------------------------
# bubble classes


@dataclass(frozen=True)
class BubbleClass:
    """A divisor class paired with a bubble cycle: base multiplicities at points.

    Labels ``1..m`` are the blown-up points; negative labels are symbolic
    points kept only as metadata.
    """

    base: DivisorClass
    multiplicities: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "base", DivisorClass(self.base))
        mult = {int(p): int(k) for p, k in dict(self.multiplicities).items() if k != 0}
        object.__setattr__(self, "multiplicities", dict(sorted(mult.items())))

    def __hash__(self):
        return hash((self.base, tuple(self.multiplicities.items())))

    @property
    def symbolic_points(self) -> list[int]:
        return [p for p in self.multiplicities if p < 0]

    def __str__(self):
        terms = "".join(f"{'+' if k > 0 else '-'}{'' if abs(k) == 1 else abs(k)}"
                        f"{'p' + str(p) if p > 0 else 'q' + str(-p)}"
                        for p, k in self.multiplicities.items())
        return f"({self.base}, {terms.lstrip('+') or '0'})"


def resolve_bubble_class(S: SurfaceType, B: BubbleClass) -> DivisorClass:
    """``base + sum(mult(p) * E_p)`` once every point of the cycle is blown up."""
    if len(B.base) != S.m + 1:
        raise LengthMismatch(f"base class has length {len(B.base)}, surface needs {S.m + 1}")
    D = B.base
    for p, k in B.multiplicities.items():
        if not 1 <= p <= S.m:
            raise UnknownPoint(f"point {p} is not a blown-up point of the surface")
        D = D + k * S.E[p - 1]
    return D


# ---------------------------------------------------------------------------
# contractions


@dataclass(frozen=True)
class Contraction:
    """A blowdown to the plane, described by its exceptional classes.

    ``line_class`` is the pullback of a line, ``(-K + sum(e_i)) / 3``.
    """

    exceptional_classes: tuple[DivisorClass, ...]
    line_class: DivisorClass

    @property
    def m(self) -> int:
        return len(self.exceptional_classes)


def make_contraction(S: SurfaceType, exceptional: Sequence[Sequence[int]]) -> Contraction:
    """Validate an ordered tuple of exceptional classes and build the contraction."""
    es = tuple(DivisorClass(e) for e in exceptional)
    if len(es) != S.m:
        raise InvalidConfiguration(f"a contraction needs {S.m} exceptional classes")
    for e in es:
        if len(e) != S.m + 1:
            raise LengthMismatch("exceptional class has the wrong length")
        if pairing(e, e) != -1 or pairing(e, S.K) != -1:
            raise InvalidConfiguration(f"{e} is not an exceptional class")
    for e1, e2 in itertools.combinations(es, 2):
        if pairing(e1, e2) != 0:
            raise InvalidConfiguration(f"{e1} and {e2} are not orthogonal")
    total = [-k for k in S.K]
    for e in es:
        total = [a + b for a, b in zip(total, e)]
    if any(x % 3 for x in total):
        raise InvalidConfiguration("(-K + sum e_i)/3 is not integral")
    ell = DivisorClass(x // 3 for x in total)
    if pairing(ell, ell) != 1 or any(pairing(ell, e) != 0 for e in es):
        raise InvalidConfiguration("induced line class is not a line")
    return Contraction(es, ell)


def standard_contraction(S: SurfaceType) -> Contraction:
    return Contraction(S.E, S.L)


def _orthogonal_sets(classes: Sequence[DivisorClass], size: int) -> list[tuple[int, ...]]:
    n = len(classes)
    # bit j of ortho[i] is set when classes i and j are orthogonal and j > i
    ortho = [sum(1 << j for j in range(i + 1, n) if pairing(classes[i], classes[j]) == 0)
             for i in range(n)]
    out = []

    def rec(chosen, candidates):
        if len(chosen) == size:
            out.append(tuple(chosen))
            return
        if candidates.bit_count() < size - len(chosen):
            return
        while candidates:
            j = (candidates & -candidates).bit_length() - 1
            candidates &= candidates - 1
            chosen.append(j)
            rec(chosen, candidates & ortho[j])
            chosen.pop()

    rec([], (1 << n) - 1)
    return out


def _unordered_contractions(S: SurfaceType) -> tuple[Contraction, ...]:
    if "_contractions" not in S.__dict__:
        curves = list(S.minus_one)
        found = []
        for idx in _orthogonal_sets(curves, S.m):
            try:
                found.append(make_contraction(S, [curves[i] for i in idx]))
            except InvalidConfiguration:
                continue
        S.__dict__["_contractions"] = tuple(sorted(found, key=lambda c: c.exceptional_classes))
    return S.__dict__["_contractions"]


def enumerate_contractions(S: SurfaceType, ordered: bool = True) -> list[Contraction]:
    """Contractions built from pairwise orthogonal (-1)-curves of ``S``.

    With ``ordered=False`` each unordered set appears once, its classes in
    canonical order; the ordered list has ``m!`` times as many entries and
    is impractical below degree 3.
    """
    base = _unordered_contractions(S)
    if not ordered:
        return list(base)
    result = [Contraction(p, c.line_class)
              for c in base for p in itertools.permutations(c.exceptional_classes)]
    return sorted(result, key=lambda c: c.exceptional_classes)


def relabel(D: Sequence[int], c: Contraction) -> DivisorClass:
    """Coordinates of ``D`` in the basis ``(line_class, e_1, ..., e_m)`` of ``c``."""
    return DivisorClass((pairing(D, c.line_class),) + tuple(-pairing(D, e) for e in c.exceptional_classes))


def from_contraction_basis(x: Sequence[int], c: Contraction) -> DivisorClass:
    """Inverse of :func:`relabel`: turn contraction coordinates into standard ones."""
    _match(x, c.line_class)
    D = x[0] * c.line_class
    for k, e in zip(x[1:], c.exceptional_classes):
        D = D + k * e
    return D

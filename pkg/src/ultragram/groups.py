"""Exact ordered abelian groups used as value groups.

Three kinds are supported: the integer line Z, the rational line Q, and
lexicographic products Z^n (most significant coordinate first).  Elements
carry exact rational coordinates; there is no floating point anywhere.
Finitely generated subgroups support exact membership, coset, index and
cofinality decisions via integer elimination after clearing denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence, Union


class MismatchedGroups(ValueError):
    """Raised when elements of different ordered groups are combined."""


class NotASubgroup(ValueError):
    """Raised when a claimed subgroup inclusion fails on a generator."""


class GroupKind(Enum):
    INTEGER_LINE = "Z"
    RATIONAL_LINE = "Q"
    LEX_PRODUCT = "Z^n_lex"


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


Coordinate = Union[int, Fraction, str]


@dataclass(frozen=True)
class OrderedGroup:
    kind: GroupKind
    rank: int = 1

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if self.kind is not GroupKind.LEX_PRODUCT and self.rank != 1:
            raise ValueError(f"{self.kind.value} has rank 1")

    @staticmethod
    def integers() -> "OrderedGroup":
        return OrderedGroup(GroupKind.INTEGER_LINE)

    @staticmethod
    def rationals() -> "OrderedGroup":
        return OrderedGroup(GroupKind.RATIONAL_LINE)

    @staticmethod
    def lex(rank: int) -> "OrderedGroup":
        return OrderedGroup(GroupKind.LEX_PRODUCT, rank)

    def element(self, *coords: Coordinate) -> "GroupElement":
        """Build an element from rank-many coordinates (ints, Fractions or 'p/q')."""
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(coords)}")
        exact = tuple(Fraction(c) for c in coords)
        if self.kind in (GroupKind.INTEGER_LINE, GroupKind.LEX_PRODUCT):
            for c in exact:
                if c.denominator != 1:
                    raise ValueError(f"{self.kind.value} requires integer coordinates, got {c}")
        return GroupElement(self, exact)

    def zero(self) -> "GroupElement":
        return GroupElement(self, (Fraction(0),) * self.rank)

    def unit(self, axis: int = -1) -> "GroupElement":
        """The standard generator along ``axis`` (least significant by default)."""
        coords = [Fraction(0)] * self.rank
        coords[axis] = Fraction(1)
        return GroupElement(self, tuple(coords))

    def describe(self) -> dict:
        if self.kind is GroupKind.LEX_PRODUCT:
            return {"group": "Z^n_lex", "n": self.rank}
        return {"group": self.kind.value}


@dataclass(frozen=True)
class GroupElement:
    group: OrderedGroup
    coords: tuple

    def _check(self, other: "GroupElement") -> None:
        if self.group != other.group:
            raise MismatchedGroups(f"{self.group.describe()} vs {other.group.describe()}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def scale(self, n: int) -> "GroupElement":
        return GroupElement(self.group, tuple(a * n for a in self.coords))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def __lt__(self, other: "GroupElement") -> bool:
        self._check(other)
        return self.coords < other.coords

    def __le__(self, other: "GroupElement") -> bool:
        self._check(other)
        return self.coords <= other.coords

    def __gt__(self, other: "GroupElement") -> bool:
        return other < self

    def __ge__(self, other: "GroupElement") -> bool:
        return other <= self

    def __repr__(self) -> str:
        if self.group.rank == 1:
            return f"g({self.coords[0]})"
        return "g(" + ", ".join(str(c) for c in self.coords) + ")"


def compare(g: GroupElement, h: GroupElement) -> Ordering:
    """Total-order comparison; lexicographic with the first coordinate dominant."""
    g._check(h)
    if g.coords < h.coords:
        return Ordering.LESS
    if g.coords == h.coords:
        return Ordering.EQUAL
    return Ordering.GREATER


def add(g: GroupElement, h: GroupElement) -> GroupElement:
    return g + h


def negate(g: GroupElement) -> GroupElement:
    return -g


def _clear_denominators(
    vectors: Sequence[Sequence[Fraction]],
) -> tuple[list[list[int]], int]:
    denoms = [c.denominator for vec in vectors for c in vec]
    scale = lcm(*denoms) if denoms else 1
    return [[int(c * scale) for c in vec] for vec in vectors], scale


def _solve_integer(columns: list[list[int]], target: list[int]) -> Optional[list[int]]:
    """Solve ``sum_i k_i * columns[i] = target`` for integers k_i.

    Column-style Hermite elimination: for each row pick a pivot column and
    gcd-reduce the other columns against it, tracking the unimodular column
    operations so a witness can be read back.
    """
    m = len(columns)
    rows = len(target)
    if m == 0:
        return [] if all(t == 0 for t in target) else None
    # work matrix: rows x m, transform: m x m identity
    a = [[columns[j][i] for j in range(m)] for i in range(rows)]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    pivots: list[tuple[int, int]] = []  # (row, col)
    col = 0
    for row in range(rows):
        if col >= m:
            break
        # gcd-sweep: make at most one nonzero entry in this row among cols >= col
        while True:
            nz = [j for j in range(col, m) if a[row][j] != 0]
            if len(nz) <= 1:
                break
            j0, j1 = nz[0], nz[1]
            if abs(a[row][j0]) > abs(a[row][j1]):
                j0, j1 = j1, j0
            q = a[row][j1] // a[row][j0]
            for i in range(rows):
                a[i][j1] -= q * a[i][j0]
            for i in range(m):
                u[i][j1] -= q * u[i][j0]
        nz = [j for j in range(col, m) if a[row][j] != 0]
        if not nz:
            continue
        j = nz[0]
        if j != col:
            for i in range(rows):
                a[i][col], a[i][j] = a[i][j], a[i][col]
            for i in range(m):
                u[i][col], u[i][j] = u[i][j], u[i][col]
        pivots.append((row, col))
        col += 1
    # forward solve: only pivot columns can carry nonzero solution entries
    y = [0] * m
    residual = list(target)
    for row, c in pivots:
        if residual[row] % a[row][c] != 0:
            return None
        q = residual[row] // a[row][c]
        y[c] = q
        for i in range(rows):
            residual[i] -= q * a[i][c]
    if any(r != 0 for r in residual):
        return None
    return [sum(u[i][j] * y[j] for j in range(m)) for i in range(m)]


@dataclass(frozen=True)
class Subgroup:
    """Finitely generated subgroup of an ordered group, e.g. vK inside Gamma."""

    ambient: OrderedGroup
    generators: tuple

    def __post_init__(self) -> None:
        seen = set()
        for g in self.generators:
            if g.group != self.ambient:
                raise MismatchedGroups("generator outside ambient group")
            if g.coords in seen:
                raise ValueError("duplicate generator")
            seen.add(g.coords)

    @staticmethod
    def spanned_by(ambient: OrderedGroup, gens: Iterable[GroupElement]) -> "Subgroup":
        unique = []
        seen = set()
        for g in gens:
            if g.coords not in seen:
                seen.add(g.coords)
                unique.append(g)
        return Subgroup(ambient, tuple(unique))

    @staticmethod
    def trivial(ambient: OrderedGroup) -> "Subgroup":
        return Subgroup(ambient, ())

    def is_trivial(self) -> bool:
        return all(g.is_zero() for g in self.generators)

    def solve(self, g: GroupElement) -> Optional[list[int]]:
        """Integer coefficients over the generators expressing ``g``, or None."""
        if g.group != self.ambient:
            raise MismatchedGroups("element outside ambient group")
        if g.is_zero():
            return [0] * len(self.generators)
        vectors = [list(gen.coords) for gen in self.generators] + [list(g.coords)]
        ints, _ = _clear_denominators(vectors)
        return _solve_integer(ints[:-1], ints[-1])

    def contains(self, g: GroupElement) -> bool:
        return self.solve(g) is not None

    def lattice_basis(self) -> list[GroupElement]:
        """A Z-basis of the subgroup (Hermite elimination over the generators)."""
        gens = [g for g in self.generators if not g.is_zero()]
        if not gens:
            return []
        vectors = [list(g.coords) for g in gens]
        ints, scale = _clear_denominators(vectors)
        # column-style HNF on the transpose: rows = generators
        mat = [row[:] for row in ints]
        rank = self.ambient.rank
        basis_rows: list[list[int]] = []
        col = 0
        rows_left = mat
        for col in range(rank):
            rows_left = [r for r in rows_left if any(c != 0 for c in r)]
            nz = [r for r in rows_left if r[col] != 0]
            rest = [r for r in rows_left if r[col] == 0]
            while len(nz) > 1:
                nz.sort(key=lambda r: abs(r[col]))
                r0 = nz[0]
                out = [r0]
                for r in nz[1:]:
                    q = r[col] // r0[col]
                    new = [a - q * b for a, b in zip(r, r0)]
                    if new[col] != 0:
                        out.append(new)
                    elif any(c != 0 for c in new):
                        rest.append(new)
                nz = out
            if nz:
                basis_rows.append(nz[0])
            rows_left = rest
        return [
            GroupElement(self.ambient, tuple(Fraction(c, scale) for c in row))
            for row in basis_rows
        ]


def coset_equal(g: GroupElement, h: GroupElement, subgroup: Subgroup) -> bool:
    """True iff g - h lies in the subgroup (exact integer solve)."""
    return subgroup.contains(g - h)


INFINITE = None


def subgroup_index(sub: Subgroup, group: Subgroup) -> Optional[int]:
    """Exact index (group : sub); None encodes an infinite index.

    Requires sub to be contained in group; the index is the lattice index of
    the two Z-spans, computed as |det| of the change-of-basis matrix.
    """
    for g in sub.generators:
        if not group.contains(g):
            raise NotASubgroup(f"generator {g} of the subgroup is not in the ambient span")
    basis_sub = sub.lattice_basis()
    basis_grp = group.lattice_basis()
    if len(basis_sub) < len(basis_grp):
        return INFINITE
    # coordinates of sub's basis in terms of group's basis
    grp_sub = Subgroup(group.ambient, tuple(basis_grp))
    coords = []
    for b in basis_sub:
        sol = grp_sub.solve(b)
        if sol is None:
            raise NotASubgroup("inconsistent lattice bases")
        coords.append(sol)
    n = len(basis_grp)
    if n == 0:
        return 1
    det = _integer_determinant([row[:n] for row in coords])
    if det == 0:
        return INFINITE
    return abs(det)


def _integer_determinant(mat: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(mat)
    if n == 0:
        return 1
    a = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _most_significant_axis(sub: Subgroup) -> Optional[int]:
    """Index of the most significant coordinate hit by any generator."""
    best: Optional[int] = None
    for g in sub.generators:
        for i, c in enumerate(g.coords):
            if c != 0:
                if best is None or i < best:
                    best = i
                break
    return best


def is_cofinal(sub: Subgroup, group: Subgroup) -> bool:
    """True iff the subgroup is cofinal in the group.

    For the supported kinds this reduces to agreement of the most significant
    support coordinate: some element of sub then exceeds any given element of
    the group.
    """
    for g in sub.generators:
        if not group.contains(g):
            raise NotASubgroup(f"generator {g} of the subgroup is not in the ambient span")
    ms_group = _most_significant_axis(group)
    if ms_group is None:
        return True
    ms_sub = _most_significant_axis(sub)
    return ms_sub == ms_group

"""Exact residue field arithmetic and small-scale linear algebra.

Covers the three coefficient/residue fields the toolkit needs: prime fields
F_p, the rationals, and rational function fields F_p(s).  Elements are kept
in canonical form (reduced, monic denominator) so equality is syntactic.
Row reduction and span solving are exact; a subfield layer decides
Kv-linear independence of scalars living in a larger residue field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence


class DivisionByZero(ZeroDivisionError):
    pass


class MismatchedFields(ValueError):
    pass


# polynomial helpers over F_p: coefficient tuples, low degree first, trimmed


def _poly_trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    last = -1
    for i, c in enumerate(coeffs):
        if c != 0:
            last = i
    return tuple(coeffs[: last + 1])


def _poly_add(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _poly_trim(out)


def _poly_neg(a, p):
    return tuple((-c) % p for c in a)

def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] = (out[i + j] + ca * cb) % p
    return _poly_trim(out)


def _poly_divmod(a, b, p):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv_lead = pow(b[-1], -1, p)
    for i in range(len(a) - len(b), -1, -1):
        c = (a[i + len(b) - 1] * inv_lead) % p
        if c == 0:
            continue
        q[i] = c
        for j, cb in enumerate(b):
            a[i + j] = (a[i + j] - c * cb) % p
    return _poly_trim(q), _poly_trim(a)


def _poly_gcd(a, b, p):
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = tuple((c * inv) % p for c in a)
    return a


@dataclass(frozen=True)
class ResidueField:
    """Field descriptor: 'Fp', 'Q' or 'Fp(s)'."""

    kind: str
    p: Optional[int] = None
    variable: str = "s"

    def __post_init__(self) -> None:
        if self.kind not in ("Fp", "Q", "Fp(s)"):
            raise ValueError(f"unsupported field kind {self.kind!r}")
        if self.kind in ("Fp", "Fp(s)"):
            if self.p is None or self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p ** 0.5) + 1)):
                raise ValueError(f"p must be prime, got {self.p}")

    @staticmethod
    def prime(p: int) -> "ResidueField":
        return ResidueField("Fp", p)

    @staticmethod
    def rationals() -> "ResidueField":
        return ResidueField("Q")

    @staticmethod
    def rational_functions(p: int, variable: str = "s") -> "ResidueField":
        return ResidueField("Fp(s)", p, variable)

    def describe(self) -> dict:
        if self.kind == "Fp":
            return {"field": "Fp", "p": self.p}
        if self.kind == "Q":
            return {"field": "Q"}
        return {"field": "Fp(s)", "p": self.p}

    # element constructors

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise MismatchedFields(f"{value.field.describe()} vs {self.describe()}")
            return value
        if self.kind == "Fp":
            if isinstance(value, Fraction):
                if value.denominator % self.p == 0:
                    raise DivisionByZero("denominator vanishes mod p")
                value = value.numerator * pow(value.denominator, -1, self.p)
            return FieldElement(self, int(value) % self.p)
        if self.kind == "Q":
            return FieldElement(self, Fraction(value))
        # Fp(s): ints embed as constants, tuples as (num, den) coefficient lists
        if isinstance(value, int):
            num = _poly_trim([value % self.p])
            return FieldElement(self, (num, (1,)))
        if isinstance(value, tuple) and len(value) == 2:
            return self.fraction(value[0], value[1])
        raise TypeError(f"cannot coerce {value!r} into {self.describe()}")

    def fraction(self, num: Sequence[int], den: Sequence[int]) -> "FieldElement":
        """Reduced rational function num/den with monic denominator."""
        if self.kind != "Fp(s)":
            raise MismatchedFields("fraction() is for Fp(s)")
        p = self.p
        n = _poly_trim([c % p for c in num])
        d = _poly_trim([c % p for c in den])
        if not d:
            raise DivisionByZero("zero denominator")
        if not n:
            return FieldElement(self, ((), (1,)))
        g = _poly_gcd(n, d, p)
        if g != (1,):
            n = _poly_divmod(n, g, p)[0]
            d = _poly_divmod(d, g, p)[0]
        inv_lead = pow(d[-1], -1, p)
        n = tuple((c * inv_lead) % p for c in n)
        d = tuple((c * inv_lead) % p for c in d)
        return FieldElement(self, (n, d))

    def generator(self) -> "FieldElement":
        """The transcendental s of Fp(s)."""
        if self.kind != "Fp(s)":
            raise MismatchedFields("generator() is for Fp(s)")
        return FieldElement(self, ((0, 1), (1,)))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)


@dataclass(frozen=True)
class FieldElement:
    field: ResidueField
    rep: object

    def _check(self, other: "FieldElement") -> None:
        if self.field != other.field:
            raise MismatchedFields(f"{self.field.describe()} vs {other.field.describe()}")

    def is_zero(self) -> bool:
        if self.field.kind == "Fp":
            return self.rep == 0
        if self.field.kind == "Q":
            return self.rep == 0
        return self.rep[0] == ()

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        k = self.field.kind
        if k == "Fp":
            return FieldElement(self.field, (self.rep + other.rep) % self.field.p)
        if k == "Q":
            return FieldElement(self.field, self.rep + other.rep)
        p = self.field.p
        (n1, d1), (n2, d2) = self.rep, other.rep
        num = _poly_add(_poly_mul(n1, d2, p), _poly_mul(n2, d1, p), p)
        return self.field.fraction(num, _poly_mul(d1, d2, p))

    def __neg__(self) -> "FieldElement":
        k = self.field.kind
        if k == "Fp":
            return FieldElement(self.field, (-self.rep) % self.field.p)
        if k == "Q":
            return FieldElement(self.field, -self.rep)
        n, d = self.rep
        return FieldElement(self.field, (_poly_neg(n, self.field.p), d))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self + (-other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        k = self.field.kind
        if k == "Fp":
            return FieldElement(self.field, (self.rep * other.rep) % self.field.p)
        if k == "Q":
            return FieldElement(self.field, self.rep * other.rep)
        p = self.field.p
        (n1, d1), (n2, d2) = self.rep, other.rep
        return self.field.fraction(_poly_mul(n1, n2, p), _poly_mul(d1, d2, p))

    def invert(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverting zero")
        k = self.field.kind
        if k == "Fp":
            return FieldElement(self.field, pow(self.rep, -1, self.field.p))
        if k == "Q":
            return FieldElement(self.field, 1 / self.rep)
        n, d = self.rep
        return self.field.fraction(d, n)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self * other.invert()

    def describe(self):
        k = self.field.kind
        if k == "Fp":
            return self.rep
        if k == "Q":
            r = self.rep
            return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"
        n, d = self.rep
        return {"num": list(n), "den": list(d)}

    def __repr__(self) -> str:
        k = self.field.kind
        if k in ("Fp", "Q"):
            return str(self.rep)
        n, d = self.rep
        s = self.field.variable

        def side(coeffs):
            if not coeffs:
                return "0"
            parts = []
            for i, c in enumerate(coeffs):
                if c == 0:
                    continue
                if i == 0:
                    parts.append(str(c))
                elif i == 1:
                    parts.append(f"{c}*{s}" if c != 1 else s)
                else:
                    parts.append(f"{c}*{s}^{i}" if c != 1 else f"{s}^{i}")
            return "+".join(parts)

        return side(n) if d == (1,) else f"({side(n)})/({side(d)})"


@dataclass(frozen=True)
class ResidueProfile:
    """Ordered multiset of residues res(a'/a), duplicates preserved."""

    entries: tuple

    def __len__(self) -> int:
        return len(self.entries)


def linear_rank(rows: Sequence[Sequence[FieldElement]], field: ResidueField):
    """Exact rank of the row system plus a kernel basis of row-combinations.

    Each kernel vector c satisfies sum_i c_i * rows[i] = 0; kernel basis is
    empty exactly when the rows are linearly independent.
    """
    m = len(rows)
    if m == 0:
        return 0, []
    width = len(rows[0])
    for r in rows:
        if len(r) != width:
            raise ValueError("ragged row system")
    # augment with identity to track row operations
    work = [list(r) + [field.one() if i == j else field.zero() for j in range(m)]
            for i, r in enumerate(rows)]
    rank = 0
    for col in range(width):
        pivot = next((i for i in range(rank, m) if not work[i][col].is_zero()), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = work[rank][col].invert()
        work[rank] = [x * inv for x in work[rank]]
        for i in range(m):
            if i != rank and not work[i][col].is_zero():
                factor = work[i][col]
                work[i] = [a - factor * b for a, b in zip(work[i], work[rank])]
        rank += 1
        if rank == m:
            break
    kernel = []
    for i in range(rank, m):
        if all(work[i][c].is_zero() for c in range(width)):
            kernel.append([work[i][width + j] for j in range(m)])
    return rank, kernel


def solve_in_span(
    target: Sequence[FieldElement],
    basis_rows: Sequence[Sequence[FieldElement]],
    field: ResidueField,
) -> Optional[list[FieldElement]]:
    """Coefficients expressing target in the row span, or None."""
    m = len(basis_rows)
    if m == 0:
        return [] if all(t.is_zero() for t in target) else None
    width = len(target)
    for r in basis_rows:
        if len(r) != width:
            raise ValueError("dimension mismatch")
    return _solve_linear_system(basis_rows, target, field)


def _solve_linear_system(basis_rows, target, field) -> Optional[list[FieldElement]]:
    """Solve sum_i c_i basis_rows[i] = target by elimination over the field."""
    m = len(basis_rows)
    width = len(target)
    # equations indexed by coordinate: sum_i c_i rows[i][j] = target[j]
    mat = [[basis_rows[i][j] for i in range(m)] + [target[j]] for j in range(width)]
    pivots: list[tuple[int, int]] = []
    rank = 0
    for var in range(m):
        pivot = next((r for r in range(rank, width) if not mat[r][var].is_zero()), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = mat[rank][var].invert()
        mat[rank] = [x * inv for x in mat[rank]]
        for r in range(width):
            if r != rank and not mat[r][var].is_zero():
                factor = mat[r][var]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[rank])]
        pivots.append((rank, var))
        rank += 1
    for r in range(rank, width):
        if not mat[r][m].is_zero():
            return None
    coeffs = [field.zero()] * m
    for row, var in pivots:
        coeffs[var] = mat[row][m]
    return coeffs


# Kv-linear algebra on scalars living inside a larger residue field


def subfield_vectorize(
    elements: Sequence[FieldElement],
    sub: ResidueField,
    ambient: ResidueField,
) -> list[list[FieldElement]]:
    """Coordinates of ambient scalars as vectors over the subfield.

    Same field: one coordinate.  Fp inside Fp(s): clear denominators and read
    off polynomial coefficients, so sub-linear combinations match exactly.
    """
    if sub == ambient:
        return [[e] for e in elements]
    if sub.kind == "Fp" and ambient.kind == "Fp(s)" and sub.p == ambient.p:
        p = sub.p
        den = (1,)
        for e in elements:
            den = _poly_mul(den, e.rep[1], p)
        cleared = []
        for e in elements:
            n, d = e.rep
            q, r = _poly_divmod(_poly_mul(n, den, p), d, p)
            if r:
                raise ArithmeticError("denominator clearing failed")
            cleared.append(q)
        width = max((len(c) for c in cleared), default=1)
        return [
            [sub.element(c[i] if i < len(c) else 0) for i in range(width)]
            for c in cleared
        ]
    raise MismatchedFields(
        f"unsupported subfield pair {sub.describe()} in {ambient.describe()}"
    )


def rank_over_subfield(elements, sub, ambient):
    """(rank, kernel) of ambient scalars viewed as vectors over the subfield."""
    rows = subfield_vectorize(elements, sub, ambient)
    return linear_rank(rows, sub)


def solve_over_subfield(target, basis_elements, sub, ambient):
    """Subfield coefficients with sum_i c_i basis[i] = target, or None."""
    rows = subfield_vectorize(list(basis_elements) + [target], sub, ambient)
    return _solve_linear_system(rows[:-1], rows[-1], sub)


def restrict_to_subfield(element, sub, ambient) -> Optional[FieldElement]:
    """The element as a subfield member, or None when it lies outside."""
    if sub == ambient:
        return element
    if sub.kind == "Fp" and ambient.kind == "Fp(s)" and sub.p == ambient.p:
        n, d = element.rep
        if d == (1,) and len(n) <= 1:
            return sub.element(n[0] if n else 0)
        return None
    raise MismatchedFields(
        f"unsupported subfield pair {sub.describe()} in {ambient.describe()}"
    )


def embed_from_subfield(element: FieldElement, ambient: ResidueField) -> FieldElement:
    """Canonical embedding of a subfield scalar into the ambient field."""
    if element.field == ambient:
        return element
    if element.field.kind == "Fp" and ambient.kind == "Fp(s)" and element.field.p == ambient.p:
        return ambient.element(element.rep)
    raise MismatchedFields(
        f"cannot embed {element.field.describe()} into {ambient.describe()}"
    )

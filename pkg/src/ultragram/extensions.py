"""Finite-extension diagnostics at a fixed embedding.

Dimension by power-product orthogonalization, ramification index and
residue degree read off a normalized basis, the defect index n/(e*f), and
the cofinal completion-approximation that replaces completion-side basis
coefficients by finite truncations without losing independence.

The verdict is embedding-relative: a failed equality n = e*f is reported
as obstructed or inconclusive with evidence, never classified as genuine
defect versus a split of the valuation, which would require henselization
machinery that is out of scope here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .groups import GroupElement, GroupKind, Subgroup, coset_equal, is_cofinal, subgroup_index
from .presentations import SubfieldPresentation
from .series import (
    Precision,
    PrecisionExhausted,
    Series,
    Valuation,
    leading_term,
    multiply,
    subtract,
    sum_series,
    truncate,
    valuation,
)
from .spaces import (
    NearestKind,
    NearestPointResult,
    NotIndependent,
    VectorFamily,
    VerdictKind,
    _strictly_above,
    is_valuation_independent,
    make_family,
    nearest_point,
    normalize,
    orthogonalize,
)


class NotFieldClosed(ValueError):
    pass


class NotCofinal(ValueError):
    pass


@dataclass
class ClosureResult:
    basis: Optional[VectorFamily] = None
    obstruction_index: Optional[int] = None
    obstruction: Optional[NearestPointResult] = None
    cap_reached: bool = False
    partial_dimension: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.basis is not None and not self.cap_reached


def span_closure_basis(
    generators: Sequence[Series],
    K: SubfieldPresentation,
    prec: Precision,
    degree_cap: Optional[int] = None,
) -> ClosureResult:
    """Orthogonalize power products of the generators until the span closes.

    Seeds with 1, then repeatedly reduces basis*generator products; the
    span is closed when a full pass adjoins nothing.  Exceeding the degree
    cap reports the partial dimension instead of a basis.
    """
    cap = degree_cap if degree_cap is not None else prec.degree_cap
    seed = [K.ambient.one()] + list(generators)
    result = orthogonalize(seed, K, prec)
    if not result.ok:
        return ClosureResult(
            obstruction_index=result.obstruction_index, obstruction=result.obstruction
        )
    basis = result.basis
    while True:
        if len(basis) > cap:
            return ClosureResult(cap_reached=True, partial_dimension=len(basis))
        grown = False
        for g in generators:
            for b in list(basis.elements):
                candidate = multiply(b, g)
                reduction = nearest_point(candidate, basis, prec)
                if reduction.kind is NearestKind.EXACT_MEMBER:
                    continue
                if reduction.kind is not NearestKind.VALUE:
                    return ClosureResult(
                        obstruction_index=len(basis) + 1, obstruction=reduction
                    )
                residual = subtract(candidate, reduction.best)
                extended = make_family(K, list(basis.elements) + [residual])
                verdict = is_valuation_independent(extended, prec)
                if verdict.kind is not VerdictKind.INDEPENDENT:
                    raise NotIndependent("closure residual failed independence")
                basis = normalize(extended, prec)
                grown = True
                if len(basis) > cap:
                    return ClosureResult(cap_reached=True, partial_dimension=len(basis))
        if not grown:
            return ClosureResult(basis=basis)


@dataclass
class RamificationData:
    e: int
    f: int
    x_part: list          # coset representatives, 1 first when present
    y_part: list          # residue-basis lifts of the value-zero class
    x_indices: list
    y_indices: list


def ramification_and_residue(
    basis: VectorFamily, K: SubfieldPresentation, prec: Precision
) -> RamificationData:
    """Read e and f off a normalized certified basis.

    X takes one element per value coset; Y takes the value-zero class,
    whose residues are a witnessed Kv-basis of the residue extension.  The
    coset count is cross-checked against the exact subgroup index of vK in
    the group generated by vK and the basis values.
    """
    from .spaces import _partition_by_coset, _witnessed_leads, check_normalized, NotNormalized

    check = check_normalized(basis, prec)
    if not check.ok:
        raise NotNormalized(f"ramification data needs a normalized basis ({check.condition})")
    leads = _witnessed_leads(basis.elements, prec)
    values = [t.exponent for t in leads]
    classes = _partition_by_coset(values, K.value_subgroup)
    zero = K.ambient.group.zero()
    one_kv = K.residue_field.one()

    def prefer_unit(indices: list[int]) -> list[int]:
        def is_unit(i: int) -> bool:
            if values[i] != zero:
                return False
            res = K.restrict_residue(leads[i].coefficient)
            return res is not None and res == one_kv
        units = [i for i in indices if is_unit(i)]
        rest = [i for i in indices if not is_unit(i)]
        return units + rest

    x_indices = []
    y_indices: list[int] = []
    for cls in classes:
        ordered = prefer_unit(cls)
        x_indices.append(ordered[0])
        if values[cls[0]] == zero:
            y_indices = ordered
    e = len(classes)
    # cross-check against the exact index of vK in the generated value group:
    # always an upper bound for the witnessed coset count, an equality when
    # the value cosets are closed under addition (field-closed spans)
    span_all = Subgroup.spanned_by(
        K.ambient.group,
        list(K.value_subgroup.generators) + [v for v in values if not v.is_zero()],
    )
    index = subgroup_index(K.value_subgroup, span_all)
    if index is not None and e > index:
        raise ArithmeticError(
            f"coset count {e} exceeds the exact subgroup index {index}"
        )
    reps = [values[cls[0]] for cls in classes]
    coset_closed = all(
        any(coset_equal(a + b, r, K.value_subgroup) for r in reps)
        for a in reps
        for b in reps
    )
    if coset_closed and index != e:
        raise ArithmeticError(
            f"coset count {e} disagrees with the exact subgroup index {index}"
        )
    f = len(y_indices)
    return RamificationData(
        e=e,
        f=f,
        x_part=[basis.elements[i] for i in x_indices],
        y_part=[basis.elements[i] for i in y_indices],
        x_indices=x_indices,
        y_indices=y_indices,
    )


@dataclass
class StandardBasis:
    x_part: list
    y_part: list
    products: list
    family: VectorFamily


def standard_basis(
    basis: VectorFamily, K: SubfieldPresentation, prec: Precision
) -> StandardBasis:
    """The product family {x*y} as a certified standard valuation basis.

    Requires the span to be field-closed for these products: every product
    must reduce back into the span and the product count must equal the
    basis size.
    """
    data = ramification_and_residue(basis, K, prec)
    if data.f == 0:
        raise NotFieldClosed("no value-zero class: the span does not contain units")
    products = []
    for x in data.x_part:
        for y in data.y_part:
            candidate = multiply(x, y)
            reduction = nearest_point(candidate, basis, prec)
            if reduction.kind is not NearestKind.EXACT_MEMBER:
                raise NotFieldClosed(
                    f"a coset-representative product escapes the span ({reduction.kind.value})"
                )
            products.append(candidate)
    if len(products) != len(basis):
        raise NotFieldClosed(
            f"product count {len(products)} differs from the dimension {len(basis)}"
        )
    family = make_family(K, products)
    verdict = is_valuation_independent(family, prec)
    if verdict.kind is not VerdictKind.INDEPENDENT:
        raise NotFieldClosed("products failed the independence certificate")
    return StandardBasis(data.x_part, data.y_part, products, family)


@dataclass
class ExtensionReport:
    n: Optional[int]
    e: Optional[int]
    f: Optional[int]
    defect_index: Optional[Fraction]
    verdict: str                      # vs_defectless | obstructed | inconclusive
    basis: Optional[VectorFamily] = None
    standard: Optional[StandardBasis] = None
    obstruction: Optional[NearestPointResult] = None
    obstruction_index: Optional[int] = None
    note: Optional[str] = None


def analyze_extension(
    generators: Sequence[Series],
    K: SubfieldPresentation,
    prec: Precision,
    degree_cap: Optional[int] = None,
    span_mode: str = "closure",
) -> ExtensionReport:
    """Dimension, ramification, residue degree and defect index of the span.

    ``closure`` mode grows the span to its multiplicative closure (the
    extension field K(generators) when it is finite); ``direct`` treats the
    generators as spanning a fixed vector space.
    """
    if span_mode == "closure":
        closure = span_closure_basis(generators, K, prec, degree_cap)
        if closure.cap_reached:
            return ExtensionReport(
                closure.partial_dimension, None, None, None, "inconclusive",
                note=f"degree cap reached at dimension {closure.partial_dimension}",
            )
        if closure.basis is None:
            return ExtensionReport(
                None, None, None, None, "obstructed",
                obstruction=closure.obstruction,
                obstruction_index=closure.obstruction_index,
                note="nearest-point reduction found no maximal value",
            )
        basis = closure.basis
    elif span_mode == "direct":
        result = orthogonalize(generators, K, prec)
        if not result.ok:
            return ExtensionReport(
                None, None, None, None, "obstructed",
                obstruction=result.obstruction,
                obstruction_index=result.obstruction_index,
                note="nearest-point reduction found no maximal value",
            )
        basis = result.basis
    else:
        raise ValueError(f"unknown span mode {span_mode!r}")
    data = ramification_and_residue(basis, K, prec)
    n = len(basis)
    ef = data.e * data.f
    defect = Fraction(n, ef) if ef else None
    if ef and n == ef:
        standard = standard_basis(basis, K, prec)
        return ExtensionReport(
            n, data.e, data.f, defect, "vs_defectless", basis=basis, standard=standard
        )
    return ExtensionReport(
        n, data.e, data.f, defect, "inconclusive", basis=basis,
        note=(
            "the span has a valuation basis but is not standard-decomposable; "
            "it is not multiplicatively closed"
        ),
    )


@dataclass
class ApproximationPair:
    row: int
    col: int
    cutoff: GroupElement
    difference_value: Valuation
    required_above: GroupElement
    exact: bool


@dataclass
class ApproximationResult:
    family: VectorFamily
    coefficients: list            # truncated K-coefficient matrix, as finite series
    pairs: list
    completion_values: list       # v(b_i') on the completion side
    output_values: list           # v(b_i*) of the output family


def _ambient_step(K: SubfieldPresentation) -> GroupElement:
    group = K.ambient.group
    if group.kind is GroupKind.LEX_PRODUCT:
        return group.unit(-1)
    return group.element(1)


def complete_and_approximate(
    u_family: VectorFamily,
    hat_coefficients: Sequence[Sequence[Series]],
    khat: SubfieldPresentation,
    prec: Precision,
) -> ApproximationResult:
    """Replace completion-side basis coefficients by finite K-truncations.

    For b_i' = sum_j c_ij u_j certified independent over the completion,
    each c_ij is truncated strictly above v(b_i') - v(u_j), so that
    min_j v((c_ij^trunc - c_ij) u_j) > v(b_i').  The truncated family is
    certified independent over K and keeps the value multiset.
    """
    K = u_family.over
    if K.ambient != khat.ambient:
        raise NotCofinal("presentations live in different ambient fields")
    u = list(u_family.elements)
    n = len(u)
    rows = [list(r) for r in hat_coefficients]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError("coefficient matrix must be square of the family size")

    u_leads = [leading_term(x, prec) for x in u]
    if any(t is None for t in u_leads):
        raise NotIndependent("family elements need witnessed valuations")

    hat_rows = [
        sum_series(K.ambient, [multiply(c, x) for c, x in zip(row, u)])
        for row in rows
    ]
    hat_family = make_family(khat, hat_rows)
    hat_verdict = is_valuation_independent(hat_family, prec)
    if hat_verdict.kind is not VerdictKind.INDEPENDENT:
        raise NotIndependent(
            f"completion-side family is {hat_verdict.kind.value}, not independent"
        )
    hat_vals = [leading_term(row, prec).exponent for row in hat_rows]

    witnessed = Subgroup.spanned_by(
        K.ambient.group,
        list(K.value_subgroup.generators)
        + [v for v in hat_vals if not v.is_zero()]
        + [t.exponent for t in u_leads if not t.exponent.is_zero()],
    )
    if not is_cofinal(K.value_subgroup, witnessed):
        raise NotCofinal("vK is not cofinal in the witnessed value span")

    step = _ambient_step(K)
    pairs = []
    truncated_rows: list[list[Series]] = []
    for i in range(n):
        out_row = []
        for j in range(n):
            c = rows[i][j]
            required = hat_vals[i] - u_leads[j].exponent
            cutoff = required + step
            cut = truncate(c, cutoff)
            fuel = prec.fuel()
            if not cut.ensure_below(cutoff, fuel):
                raise PrecisionExhausted(
                    f"could not enumerate coefficient ({i},{j}) below {cutoff}"
                )
            if c.exhausted:
                # already a finite K-element: keep it whole
                finite = K.ambient.from_terms(
                    [(t.exponent, t.coefficient) for t in c.witnessed_terms()]
                )
            else:
                finite = K.ambient.from_terms(
                    [(t.exponent, t.coefficient) for t in cut.terms_below(cutoff)]
                )
            diff_val = valuation(
                multiply(subtract(finite, c), u[j]), prec
            )
            if not _strictly_above(diff_val, hat_vals[i], prec):
                raise PrecisionExhausted(
                    f"truncation at ({i},{j}) misses the strict inequality"
                )
            pairs.append(
                ApproximationPair(
                    i, j, cutoff, diff_val, hat_vals[i],
                    exact=diff_val.is_value or diff_val.exhausted,
                )
            )
            out_row.append(finite)
        truncated_rows.append(out_row)

    out_elements = [
        sum_series(K.ambient, [multiply(c, x) for c, x in zip(row, u)])
        for row in truncated_rows
    ]
    out_family = make_family(K, out_elements)
    out_verdict = is_valuation_independent(out_family, prec)
    if out_verdict.kind is not VerdictKind.INDEPENDENT:
        raise NotIndependent("truncated family lost independence")
    out_vals = [leading_term(x, prec).exponent for x in out_elements]
    if sorted(v.coords for v in out_vals) != sorted(v.coords for v in hat_vals):
        raise ArithmeticError("value multiset changed under truncation")
    return ApproximationResult(out_family, truncated_rows, pairs, hat_vals, out_vals)

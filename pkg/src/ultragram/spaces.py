"""Valuation independence, normalization and ultrametric orthogonalization.

The decision core: families of series over a subfield presentation are
partitioned by the coset of their values modulo vK, scaled to a common
value per class, and tested for Kv-linear independence of the residue
profile.  The same class/residue machinery drives the greedy nearest-point
reduction, whose residuals feed the orthogonalization loop.

Verdicts are three-valued.  Statements quantified over an infinite
subspace can only be refuted or evidenced at finite precision, so
unbounded reductions return strictly increasing value chains as evidence,
never as proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from typing import Optional, Sequence

from .groups import GroupElement, Subgroup, coset_equal
from .presentations import SubfieldPresentation
from .residues import ResidueProfile, rank_over_subfield, solve_over_subfield
from .series import (
    Precision,
    Series,
    Term,
    Valuation,
    add,
    invert,
    leading_term,
    multiply,
    subtract,
    sum_series,
    valuation,
)


class ZeroElementInFamily(ValueError):
    pass


class UncertifiedSubspace(ValueError):
    pass


class NotNormalized(ValueError):
    pass


class NotIndependent(ValueError):
    pass


class NotInSpan(ValueError):
    pass


class ProbeInK(ValueError):
    pass


@dataclass
class VectorFamily:
    """A finite ordered family of nonzero series over a presentation.

    ``relative_to`` names the subspace W the family is considered over; it
    must be independence-certified before it is used that way.
    """

    elements: tuple
    over: SubfieldPresentation
    relative_to: Optional["VectorFamily"] = None
    certificate: Optional["IndependenceVerdict"] = None
    scalings: Optional[tuple] = None

    @property
    def is_certified(self) -> bool:
        return self.certificate is not None and self.certificate.kind is VerdictKind.INDEPENDENT

    def __len__(self) -> int:
        return len(self.elements)


def make_family(over: SubfieldPresentation, elements: Sequence[Series], relative_to=None) -> VectorFamily:
    return VectorFamily(tuple(elements), over, relative_to)


class VerdictKind(Enum):
    INDEPENDENT = "independent"
    DEPENDENT = "dependent"
    INCONCLUSIVE = "inconclusive"


@dataclass
class DependenceWitness:
    """Coefficients certifying v(sum c_i b_i + a) > min_i v(c_i b_i).

    Coefficient series are finite K-elements; re-evaluating the combination
    must reproduce the strict inequality.
    """

    coefficients: list
    min_value: GroupElement
    achieved: Valuation
    shift: Optional[Series] = None
    shift_coefficients: Optional[list] = None


@dataclass
class IndependenceVerdict:
    kind: VerdictKind
    scaled: Optional[list] = None      # N1-scaled family for Independent verdicts
    scalings: Optional[list] = None    # the K-scalars applied
    witness: Optional[DependenceWitness] = None
    precision_note: Optional[str] = None


def _witnessed_leads(elements: Sequence[Series], prec: Precision) -> list[Term]:
    leads = []
    for i, x in enumerate(elements):
        t = leading_term(x, prec)
        if t is None:
            raise ZeroElementInFamily(
                f"element {i} has no witnessed term below {prec.ceiling}"
            )
        leads.append(t)
    return leads


def _partition_by_coset(values: Sequence[GroupElement], vk: Subgroup) -> list[list[int]]:
    classes: list[list[int]] = []
    for i, v in enumerate(values):
        for cls in classes:
            if coset_equal(v, values[cls[0]], vk):
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes


def is_valuation_independent(family: VectorFamily, prec: Precision) -> IndependenceVerdict:
    """Decide plain valuation independence of the family.

    Per value-coset class, scale to a common value through the monomial
    section and test the residue profile for Kv-linear independence.  A
    kernel vector lifts to a dependence witness with a strict-inequality
    certificate.
    """
    if family.relative_to is not None:
        return is_valuation_independent_over(family, family.relative_to, prec)
    K = family.over
    n = len(family.elements)
    if n == 0:
        verdict = IndependenceVerdict(VerdictKind.INDEPENDENT, scaled=[], scalings=[])
        family.certificate = verdict
        return verdict
    leads = _witnessed_leads(family.elements, prec)
    values = [t.exponent for t in leads]
    classes = _partition_by_coset(values, K.value_subgroup)
    scaled: list = [None] * n
    scalings: list = [None] * n
    for cls in classes:
        ref = cls[0]
        gamma_ref = values[ref]
        class_leads = []
        for i in cls:
            delta = gamma_ref - values[i]
            mono = K.monomial_term(delta)
            scalings[i] = K.ambient.monomial(mono.exponent, mono.coefficient)
            scaled[i] = multiply(scalings[i], family.elements[i])
            class_leads.append(Term(gamma_ref, mono.coefficient * leads[i].coefficient))
        profile = [t.coefficient / class_leads[0].coefficient for t in class_leads]
        rank, kernel = rank_over_subfield(profile, K.residue_field, K.ambient.coeff)
        if rank < len(cls):
            kappa = kernel[0]
            coefficients = [K.ambient.zero()] * n
            parts = []
            for pos, i in enumerate(cls):
                if kappa[pos].is_zero():
                    continue
                delta = gamma_ref - values[i]
                mono = K.monomial_term(delta)
                coeff_series = K.ambient.monomial(
                    mono.exponent, mono.coefficient * K.embed_residue(kappa[pos])
                )
                coefficients[i] = coeff_series
                parts.append(multiply(coeff_series, family.elements[i]))
            combination = sum_series(K.ambient, parts)
            achieved = valuation(combination, prec)
            if not _strictly_above(achieved, gamma_ref, prec):
                verdict = IndependenceVerdict(
                    VerdictKind.INCONCLUSIVE,
                    precision_note=(
                        "kernel witness could not be re-evaluated above "
                        f"{gamma_ref} within the precision budget"
                    ),
                )
                return verdict
            witness = DependenceWitness(coefficients, gamma_ref, achieved)
            return IndependenceVerdict(VerdictKind.DEPENDENT, witness=witness)
    verdict = IndependenceVerdict(VerdictKind.INDEPENDENT, scaled=scaled, scalings=scalings)
    family.certificate = verdict
    return verdict


def _strictly_above(achieved: Valuation, floor_value: GroupElement, prec: Precision) -> bool:
    if achieved.is_value:
        return floor_value < achieved.value
    if achieved.exhausted:
        return True
    return achieved.up_to is not None and floor_value < achieved.up_to


def _is_zero_coefficient(c: Series) -> bool:
    return c.exhausted and not c.witnessed_terms()


def is_valuation_independent_over(
    family: VectorFamily, w_basis: VectorFamily, prec: Precision
) -> IndependenceVerdict:
    """Independence over W, reduced to the concatenated plain check."""
    if w_basis.over != family.over:
        raise UncertifiedSubspace("family and subspace use different presentations")
    if not w_basis.is_certified:
        raise UncertifiedSubspace("the subspace family carries no independence certificate")
    m = len(w_basis.elements)
    combined = make_family(family.over, tuple(w_basis.elements) + tuple(family.elements))
    verdict = is_valuation_independent(combined, prec)
    if verdict.kind is VerdictKind.INDEPENDENT:
        out = IndependenceVerdict(
            VerdictKind.INDEPENDENT,
            scaled=verdict.scaled[m:],
            scalings=verdict.scalings[m:],
        )
        family.certificate = out
        if family.relative_to is None:
            family.relative_to = w_basis
        return out
    if verdict.kind is VerdictKind.DEPENDENT:
        w = verdict.witness
        shift_coeffs = w.coefficients[:m]
        body = w.coefficients[m:]
        if all(_is_zero_coefficient(c) for c in body):
            raise UncertifiedSubspace(
                "dependence witness lives entirely inside the certified subspace"
            )
        shift_parts = [
            multiply(c, e)
            for c, e in zip(shift_coeffs, w_basis.elements)
            if not _is_zero_coefficient(c)
        ]
        shift = sum_series(family.over.ambient, shift_parts)
        witness = DependenceWitness(body, w.min_value, w.achieved, shift, shift_coeffs)
        return IndependenceVerdict(VerdictKind.DEPENDENT, witness=witness)
    return verdict


def residue_profile(family: VectorFamily, a: Series, prec: Precision) -> ResidueProfile:
    """The ordered multiset res(a'/a) over family elements of value v(a)."""
    ta = leading_term(a, prec)
    if ta is None:
        raise ZeroElementInFamily("profile reference has no witnessed term")
    entries = []
    for x in family.elements:
        tx = leading_term(x, prec)
        if tx is None:
            raise ZeroElementInFamily("family element has no witnessed term")
        if tx.exponent == ta.exponent:
            entries.append(tx.coefficient / ta.coefficient)
    return ResidueProfile(tuple(entries))


# normalization: conditions N1 to N4


@dataclass
class NormalizationCheck:
    ok: bool
    condition: Optional[str] = None
    witness: Optional[dict] = None


def check_normalized(family: VectorFamily, prec: Precision) -> NormalizationCheck:
    K = family.over
    leads = _witnessed_leads(family.elements, prec)
    values = [t.exponent for t in leads]
    n = len(values)
    for i in range(n):
        for j in range(i + 1, n):
            if coset_equal(values[i], values[j], K.value_subgroup) and values[i] != values[j]:
                return NormalizationCheck(False, "N1", {"indices": [i, j]})
    classes = _partition_by_coset(values, K.value_subgroup)
    for cls in classes:
        profile = [leads[i].coefficient / leads[cls[0]].coefficient for i in cls]
        rank, kernel = rank_over_subfield(profile, K.residue_field, K.ambient.coeff)
        if rank < len(cls):
            return NormalizationCheck(
                False, "N2", {"indices": cls, "kernel": [c.describe() for c in kernel[0]]}
            )
    zero = K.ambient.group.zero()
    for i, v in enumerate(values):
        if K.value_in_subgroup(v) and v != zero:
            return NormalizationCheck(False, "N3", {"index": i})
    one = K.residue_field.one()
    for i, v in enumerate(values):
        if v == zero:
            res = K.restrict_residue(leads[i].coefficient)
            if res is not None and res != one:
                return NormalizationCheck(False, "N4", {"index": i})
    return NormalizationCheck(True)


def normalize(family: VectorFamily, prec: Precision) -> VectorFamily:
    """Scale each element by a K-scalar so the family satisfies N1 to N4.

    Follows the constructive recipe: one common value per coset class (the
    trivial class is pulled to value 0), then residues lying in Kv are
    divided away.  Raises NotIndependent when the family is not certified
    independent.
    """
    verdict = family.certificate or is_valuation_independent(family, prec)
    if verdict.kind is not VerdictKind.INDEPENDENT:
        raise NotIndependent(f"cannot normalize a {verdict.kind.value} family")
    K = family.over
    leads = _witnessed_leads(family.elements, prec)
    values = [t.exponent for t in leads]
    classes = _partition_by_coset(values, K.value_subgroup)
    zero = K.ambient.group.zero()
    scalings: list = [None] * len(values)
    out: list = [None] * len(values)
    for cls in classes:
        gamma_ref = values[cls[0]]
        if K.value_in_subgroup(gamma_ref):
            gamma_ref = zero
        for i in cls:
            delta = gamma_ref - values[i]
            mono = K.monomial_term(delta)
            coeff = mono.coefficient
            lead_coeff = coeff * leads[i].coefficient
            if gamma_ref == zero:
                res = K.restrict_residue(lead_coeff)
                if res is not None and res != K.residue_field.one():
                    coeff = coeff * K.embed_residue(res.invert())
            scalings[i] = K.ambient.monomial(mono.exponent, coeff)
            out[i] = multiply(scalings[i], family.elements[i])
    normalized = VectorFamily(tuple(out), K, relative_to=family.relative_to)
    normalized.scalings = tuple(scalings)
    confirm = is_valuation_independent(normalized, prec)
    if confirm.kind is not VerdictKind.INDEPENDENT:
        raise NotIndependent("normalization lost independence; input certificate was stale")
    return normalized


# nearest point reduction


class NearestKind(Enum):
    VALUE = "value"
    EXACT_MEMBER = "exact_member"
    UNBOUNDED = "unbounded"
    PRECISION_EXHAUSTED = "precision_exhausted"


@dataclass
class NearestPointResult:
    kind: NearestKind
    best: Series
    coefficients: list
    value: Optional[GroupElement] = None
    evidence: list = dataclass_field(default_factory=list)
    initial_value: Optional[GroupElement] = None
    approximants: list = dataclass_field(default_factory=list)
    steps: list = dataclass_field(default_factory=list)

    @property
    def full_evidence(self) -> list:
        """Witnessed elements of v(b - W) including the trivial approximant."""
        head = [self.initial_value] if self.initial_value is not None else []
        return head + list(self.evidence)


def _class_table(w_basis: VectorFamily, prec: Precision):
    leads = _witnessed_leads(w_basis.elements, prec)
    values = [t.exponent for t in leads]
    classes = _partition_by_coset(values, w_basis.over.value_subgroup)
    table = []
    for cls in classes:
        common = values[cls[0]]
        for i in cls:
            if values[i] != common:
                raise NotNormalized("class members disagree on values (N1 fails)")
        table.append((common, cls))
    return leads, table


def nearest_point(b: Series, w_basis: VectorFamily, prec: Precision) -> NearestPointResult:
    """Greedy ultrametric reduction of b against a normalized basis of W.

    Each successful step strictly increases v(r); a failed coset or residue
    solve certifies the current value as max v(b - W).  Caps: a strictly
    increasing trace of max_terms values is reported as unboundedness
    evidence, while running out of witnessed terms below the ceiling is a
    precision verdict.
    """
    K = w_basis.over
    if not w_basis.is_certified:
        raise UncertifiedSubspace("nearest_point needs a certified basis")
    check = check_normalized(w_basis, prec)
    if not check.ok:
        raise NotNormalized(f"basis violates {check.condition}")
    n = len(w_basis.elements)
    zero_series = K.ambient.zero()
    coeff_terms: list[list] = [[] for _ in range(n)]

    def materialize() -> list:
        return [K.ambient.from_terms(ts) for ts in coeff_terms]

    initial = valuation(b, prec)
    if not initial.is_value:
        if initial.exhausted:
            return NearestPointResult(
                NearestKind.EXACT_MEMBER, zero_series, materialize(), initial_value=None
            )
        return NearestPointResult(
            NearestKind.PRECISION_EXHAUSTED, zero_series, materialize(),
            value=initial.up_to,
        )

    if K.full_field and n >= 1:
        quotient = multiply(b, invert(w_basis.elements[0], prec))
        coefficients = [quotient] + [zero_series] * (n - 1)
        return NearestPointResult(
            NearestKind.EXACT_MEMBER, b, coefficients, initial_value=initial.value
        )

    leads, table = _class_table(w_basis, prec)
    r = b
    best = zero_series
    evidence: list = []
    approximants: list = []
    steps: list = []
    current = initial
    while True:
        gamma = current.value
        matched = None
        for common, cls in table:
            if coset_equal(gamma, common, K.value_subgroup):
                matched = (common, cls)
                break
        if matched is None:
            return NearestPointResult(
                NearestKind.VALUE, best, materialize(), value=gamma,
                evidence=evidence, initial_value=initial.value,
                approximants=approximants, steps=steps,
            )
        common, cls = matched
        delta = gamma - common
        mono = K.monomial_term(delta)
        r_lead = leading_term(r, prec)
        profile = [
            (mono.coefficient * leads[i].coefficient) / r_lead.coefficient for i in cls
        ]
        solution = solve_over_subfield(
            K.ambient.coeff.one(), profile, K.residue_field, K.ambient.coeff
        )
        if solution is None:
            return NearestPointResult(
                NearestKind.VALUE, best, materialize(), value=gamma,
                evidence=evidence, initial_value=initial.value,
                approximants=approximants, steps=steps,
            )
        parts = []
        kappa_used = []
        for pos, i in enumerate(cls):
            if solution[pos].is_zero():
                continue
            coefficient = mono.coefficient * K.embed_residue(solution[pos])
            coeff_terms[i].append((mono.exponent, coefficient))
            parts.append(multiply(K.ambient.monomial(mono.exponent, coefficient), w_basis.elements[i]))
            kappa_used.append((i, solution[pos]))
        subtracted = sum_series(K.ambient, parts)
        best = add(best, subtracted)
        r = subtract(r, subtracted)
        steps.append({
            "value_killed": gamma,
            "class_value": common,
            "kappa": kappa_used,
        })
        current = valuation(r, prec)
        if not current.is_value:
            if current.exhausted:
                return NearestPointResult(
                    NearestKind.EXACT_MEMBER, best, materialize(),
                    evidence=evidence, initial_value=initial.value,
                    approximants=approximants, steps=steps,
                )
            return NearestPointResult(
                NearestKind.PRECISION_EXHAUSTED, best, materialize(),
                value=current.up_to, evidence=evidence,
                initial_value=initial.value, approximants=approximants, steps=steps,
            )
        evidence.append(current.value)
        approximants.append(best)
        if len(evidence) >= prec.max_terms:
            return NearestPointResult(
                NearestKind.UNBOUNDED, best, materialize(),
                evidence=evidence, initial_value=initial.value,
                approximants=approximants, steps=steps,
            )


# orthogonalization and basis manipulation


@dataclass
class OrthogonalizeResult:
    basis: Optional[VectorFamily] = None
    obstruction_index: Optional[int] = None
    obstruction: Optional[NearestPointResult] = None

    @property
    def ok(self) -> bool:
        return self.basis is not None


def orthogonalize(
    generators: Sequence[Series], K: SubfieldPresentation, prec: Precision
) -> OrthogonalizeResult:
    """Build a normalized valuation basis of the span, generator by generator.

    Residuals of nearest-point reductions are adjoined and the family is
    re-normalized after each step; an Unbounded or PrecisionExhausted
    reduction is returned as an obstruction for that generator.
    """
    basis: Optional[VectorFamily] = None
    for index, g in enumerate(generators, start=1):
        lead = leading_term(g, prec)
        if lead is None:
            raise ZeroElementInFamily(f"generator {index} has no witnessed term")
        if basis is None:
            fresh = make_family(K, [g])
            is_valuation_independent(fresh, prec)
            basis = normalize(fresh, prec)
            continue
        reduction = nearest_point(g, basis, prec)
        if reduction.kind is NearestKind.EXACT_MEMBER:
            continue
        if reduction.kind is not NearestKind.VALUE:
            return OrthogonalizeResult(obstruction_index=index, obstruction=reduction)
        residual = subtract(g, reduction.best)
        grown = make_family(K, list(basis.elements) + [residual])
        verdict = is_valuation_independent(grown, prec)
        if verdict.kind is not VerdictKind.INDEPENDENT:
            raise NotIndependent(
                "residual failed the independence check; reduction was incomplete"
            )
        basis = normalize(grown, prec)
    if basis is None:
        basis = make_family(K, [])
        is_valuation_independent(basis, prec)
    return OrthogonalizeResult(basis=basis)


@dataclass
class ExchangeResult:
    removed_index: Optional[int]
    removed: Optional[Series]
    shift: Series
    adjoined: Series              # x - shift, spanning the new subspace direction
    new_subspace: VectorFamily    # previous W extended by the adjoined element
    remaining: VectorFamily       # basis minus the removed element, over new_subspace
    already_in_subspace: bool = False


def basis_exchange(basis: VectorFamily, x: Series, prec: Precision) -> ExchangeResult:
    """Trade one basis vector for x, keeping a valuation basis over W + Kx.

    x must reduce to an exact member of span(basis) + W; the removed vector
    is the expansion summand of minimal value (lowest index on ties).
    """
    K = basis.over
    if not basis.is_certified:
        raise UncertifiedSubspace("basis_exchange needs a certified basis")
    w_family = basis.relative_to
    w_elements = list(w_family.elements) if w_family is not None else []
    m = len(w_elements)
    combined_raw = make_family(K, w_elements + list(basis.elements))
    verdict = is_valuation_independent(combined_raw, prec)
    if verdict.kind is not VerdictKind.INDEPENDENT:
        raise UncertifiedSubspace("combined family failed its independence re-check")
    combined = normalize(combined_raw, prec)
    reduction = nearest_point(x, combined, prec)
    if reduction.kind is not NearestKind.EXACT_MEMBER:
        raise NotInSpan(f"x does not reduce into the span ({reduction.kind.value})")
    # coefficients are against the normalized family; pull back the scalings
    original_coeffs = [
        K.ambient.zero() if _is_zero_coefficient(c) else multiply(c, s)
        for c, s in zip(reduction.coefficients, combined.scalings)
    ]
    body = original_coeffs[m:]
    summand_values = []
    for i, c in enumerate(body):
        if _is_zero_coefficient(c):
            continue
        lead_c = leading_term(c, prec)
        lead_b = leading_term(basis.elements[i], prec)
        summand_values.append((lead_c.exponent + lead_b.exponent, i))
    if not summand_values:
        shift_parts = [
            multiply(c, e) for c, e in zip(original_coeffs[:m], w_elements)
            if not _is_zero_coefficient(c)
        ]
        shift = sum_series(K.ambient, shift_parts)
        subspace = w_family if w_family is not None else make_family(K, [])
        return ExchangeResult(
            None, None, shift, subtract(x, shift), subspace, basis,
            already_in_subspace=True,
        )
    min_value = min(v for v, _ in summand_values)
    removed_index = min(i for v, i in summand_values if v == min_value)
    shift_parts = [
        multiply(c, e) for c, e in zip(original_coeffs[:m], w_elements)
        if not _is_zero_coefficient(c)
    ]
    shift = sum_series(K.ambient, shift_parts)
    adjoined = subtract(x, shift)
    new_w_elements = w_elements + [adjoined]
    new_subspace = make_family(K, new_w_elements)
    sub_verdict = is_valuation_independent(new_subspace, prec)
    if sub_verdict.kind is not VerdictKind.INDEPENDENT:
        raise NotInSpan("the adjoined direction failed its independence certificate")
    remaining_elements = tuple(
        e for i, e in enumerate(basis.elements) if i != removed_index
    )
    remaining = make_family(K, remaining_elements, relative_to=new_subspace)
    rem_verdict = is_valuation_independent_over(remaining, new_subspace, prec)
    if rem_verdict.kind is not VerdictKind.INDEPENDENT:
        raise NotInSpan("exchange lost independence over the extended subspace")
    return ExchangeResult(
        removed_index, basis.elements[removed_index], shift, adjoined,
        new_subspace, remaining,
    )


def relative_basis(
    basis: VectorFamily, subspace_generators: Sequence[Series], prec: Precision
) -> tuple[VectorFamily, VectorFamily]:
    """A valuation basis A of the generated subspace W' over W, plus the
    complementary subset B' of the original basis, certified over W'."""
    current = basis
    adjoined: list[Series] = []
    for g in subspace_generators:
        result = basis_exchange(current, g, prec)
        if result.already_in_subspace:
            continue
        adjoined.append(result.adjoined)
        current = result.remaining
    over_original = make_family(basis.over, adjoined, relative_to=basis.relative_to)
    if basis.relative_to is not None:
        is_valuation_independent_over(over_original, basis.relative_to, prec)
    else:
        is_valuation_independent(over_original, prec)
    return over_original, current


# immediacy evidence


class ImmediacyKind(Enum):
    NOT_IMMEDIATE = "not_immediate"
    IMMEDIATE_EVIDENCE = "immediate_evidence"


@dataclass
class ImmediacyResult:
    kind: ImmediacyKind
    witness: Optional[Series] = None           # maximizing a for NotImmediate
    max_value: Optional[GroupElement] = None
    evidence: list = dataclass_field(default_factory=list)
    precision_limited: bool = False
    reduction: Optional[NearestPointResult] = None


def immediacy_evidence(
    K: SubfieldPresentation, probe: Series, prec: Precision
) -> ImmediacyResult:
    """Chase v(probe - K) through the closure filtration of K.

    A failed coset or residue solve at a finite stage yields a witness that
    the extension step is not immediate; otherwise the strictly increasing
    achieved values are reported as immediacy evidence.
    """
    unit = make_family(K, [K.ambient.one()])
    is_valuation_independent(unit, prec)
    reduction = nearest_point(probe, unit, prec)
    if reduction.kind is NearestKind.EXACT_MEMBER:
        raise ProbeInK("the probe reduces exactly into K")
    if reduction.kind is NearestKind.VALUE:
        return ImmediacyResult(
            ImmediacyKind.NOT_IMMEDIATE,
            witness=reduction.best,
            max_value=reduction.value,
            evidence=reduction.full_evidence,
            reduction=reduction,
        )
    evidence = reduction.full_evidence[: prec.max_terms]
    return ImmediacyResult(
        ImmediacyKind.IMMEDIATE_EVIDENCE,
        evidence=evidence,
        precision_limited=reduction.kind is NearestKind.PRECISION_EXHAUSTED,
        reduction=reduction,
    )

"""Witness re-checking for emitted reports.

Two layers: a determinism check (the scenario is re-run from scratch and
the structured task outcomes must match byte for byte) and per-witness
re-evaluation, where serialized coefficients, approximants and truncations
are parsed back out of the report and their claimed inequalities are
recomputed against freshly resolved elements.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .groups import GroupElement
from .reports import Report, emit
from .series import Precision, Series, leading_term, multiply, subtract, sum_series, valuation
from .spaces import _strictly_above
from .scenarios import Runtime, Scenario, resolve_runtime, run


def _exp_from_json(doc: list, runtime: Runtime) -> GroupElement:
    return runtime.ambient.group.element(*[Fraction(c) for c in doc])


def _coeff_from_json(doc, runtime: Runtime):
    field = runtime.ambient.coeff
    if isinstance(doc, dict):
        return field.fraction(doc["num"], doc["den"])
    if field.kind == "Q":
        return field.element(Fraction(doc))
    return field.element(doc)


def _series_from_json(doc: dict, runtime: Runtime) -> Optional[Series]:
    """Rebuild a serialized series; None when only a truncation was stored."""
    if not doc.get("exact") and not doc.get("complete_below"):
        return None
    terms = [
        (_exp_from_json(exp, runtime), _coeff_from_json(c, runtime))
        for exp, c in doc["terms"]
    ]
    return runtime.ambient.from_terms(terms)


def _check(checks: list, check_id: str, ok: bool, detail: str = "") -> None:
    entry = {"id": check_id, "ok": bool(ok)}
    if detail and not ok:
        entry["detail"] = detail
    checks.append(entry)


def _family_elements(task_spec: dict, runtime: Runtime):
    from .scenarios import _resolve_family_elements

    spec = task_spec.get("family")
    if isinstance(spec, dict):
        return _resolve_family_elements(spec, runtime)
    return [runtime.elements[n] for n in spec]


def _verify_dependence(checks, check_id, witness_doc, elements, runtime, prec):
    coeffs = [_series_from_json(c, runtime) for c in witness_doc["coefficients"]]
    if any(c is None for c in coeffs):
        _check(checks, check_id, False, "witness coefficients were serialized truncated")
        return
    min_value = _exp_from_json(witness_doc["min_value"], runtime)
    parts = [multiply(c, b) for c, b in zip(coeffs, elements) if c.witnessed_terms()]
    if "shift" in witness_doc:
        shift = _series_from_json(witness_doc["shift"], runtime)
        if shift is None:
            _check(checks, check_id, False, "witness shift was serialized truncated")
            return
        parts.append(shift)
    combined = sum_series(runtime.ambient, parts)
    achieved = valuation(combined, prec)
    summand_min = None
    for c, b in zip(coeffs, elements):
        if not c.witnessed_terms():
            continue
        lead_c = leading_term(c, prec)
        lead_b = leading_term(b, prec)
        v = lead_c.exponent + lead_b.exponent
        summand_min = v if summand_min is None else min(summand_min, v)
    ok = (
        summand_min == min_value
        and _strictly_above(achieved, min_value, prec)
    )
    _check(checks, check_id, ok, f"achieved {achieved.describe()} vs min {min_value}")


def _verify_independence(checks, check_id, outcome, elements, runtime, prec):
    """Confirm the N1-scaling witnesses by sampled minimum equality."""
    import random

    scalings = [_series_from_json(s, runtime) for s in outcome.get("scalings", [])]
    if len(scalings) != len(elements) or any(s is None for s in scalings):
        _check(checks, check_id, False, "scaling witnesses were serialized truncated")
        return
    rng = random.Random(8128)
    base = runtime.base
    for _ in range(20):
        coefficients = [base.sample_element(rng, 2) for _ in elements]
        parts = []
        expected = None
        for c, b in zip(coefficients, elements):
            parts.append(multiply(c, b))
            lead_c = leading_term(c, prec)
            lead_b = leading_term(b, prec)
            v = lead_c.exponent + lead_b.exponent
            expected = v if expected is None or v < expected else expected
        total = sum_series(runtime.ambient, parts)
        val = valuation(total, prec)
        if not (val.is_value and val.value == expected):
            _check(checks, check_id, False, f"minimum equality failed: {val.describe()}")
            return
    _check(checks, check_id, True)


def _verify_chain(checks, check_id, target, outcome_doc, runtime, prec):
    """Each serialized approximant must realize its evidence entry."""
    evidence = outcome_doc.get("evidence", [])
    approximants = outcome_doc.get("approximants", [])
    if len(approximants) < len(evidence):
        _check(checks, check_id, False, "fewer approximants than evidence entries")
        return
    previous = None
    for k, ev in enumerate(evidence):
        claimed = _exp_from_json(ev, runtime)
        if previous is not None and not previous < claimed:
            _check(checks, check_id, False, f"evidence not strictly increasing at {k}")
            return
        previous = claimed
        approximant = _series_from_json(approximants[k], runtime)
        if approximant is None:
            continue  # truncated serialization: covered by the determinism check
        val = valuation(subtract(target, approximant), prec)
        if not (val.is_value and val.value == claimed):
            _check(checks, check_id, False, f"approximant {k} realizes {val.describe()}, claimed {claimed}")
            return
    _check(checks, check_id, True)


def _verify_value(checks, check_id, target, outcome_doc, runtime, prec):
    best = _series_from_json(outcome_doc["best"], runtime)
    claimed = _exp_from_json(outcome_doc["value"], runtime)
    if best is None:
        _check(checks, check_id, False, "best approximant was serialized truncated")
        return
    val = valuation(subtract(target, best), prec)
    ok = val.is_value and val.value == claimed
    _check(checks, check_id, ok, f"v(b-best) is {val.describe()}, claimed {claimed}")


def verify_report(scenario: Scenario, report: Report, precision: Optional[Precision] = None,
                  seed: Optional[int] = None) -> list:
    """Re-run the scenario and re-evaluate each embedded witness."""
    checks: list = []
    fresh = run(scenario, precision, seed)
    _check(
        checks, "determinism",
        emit(fresh, "structured") == emit(Report(report.scenario, report.tasks), "structured"),
        "re-run produced a different structured report",
    )
    runtime = resolve_runtime(scenario, precision)
    prec = runtime.precision
    for task_outcome in report.tasks:
        if task_outcome.error is not None:
            continue
        spec = scenario.canonical["tasks"][task_outcome.index]
        outcome = task_outcome.outcome
        tid = f"task{task_outcome.index}"
        kind = task_outcome.task

        if kind == "independence" and outcome.get("verdict") == "dependent":
            elements = [runtime.elements[n] for n in spec["family"]]
            _verify_dependence(checks, f"{tid}:dependence", outcome["witness"], elements, runtime, prec)
        elif kind == "independence" and outcome.get("verdict") == "independent":
            elements = [runtime.elements[n] for n in spec["family"]]
            _verify_independence(checks, f"{tid}:independence", outcome, elements, runtime, prec)
        elif kind == "nearest_point":
            target = runtime.elements[spec["target"]]
            if outcome["kind"] == "value":
                _verify_value(checks, f"{tid}:max", target, outcome, runtime, prec)
            if outcome.get("evidence"):
                _verify_chain(checks, f"{tid}:chain", target, outcome, runtime, prec)
        elif kind == "orthogonalize" and outcome.get("kind") == "obstruction":
            generators = [runtime.elements[n] for n in spec["generators"]]
            probe = generators[outcome["index"] - 1]
            _verify_chain(checks, f"{tid}:chain", probe, outcome["result"], runtime, prec)
        elif kind == "immediacy":
            probe = runtime.elements[spec["probe"]]
            reduction = outcome.get("reduction")
            if reduction is None:
                pass
            elif outcome["kind"] == "not_immediate":
                _verify_value(checks, f"{tid}:max", probe, reduction, runtime, prec)
                _verify_chain(checks, f"{tid}:chain", probe, reduction, runtime, prec)
            else:
                _verify_chain(checks, f"{tid}:chain", probe, reduction, runtime, prec)
        elif kind == "analyze_extension" and "standard_basis" in outcome:
            from .spaces import is_valuation_independent, make_family, VerdictKind

            products = [
                _series_from_json(p, runtime)
                for p in outcome["standard_basis"]["products"]
            ]
            if any(p is None for p in products):
                _check(checks, f"{tid}:standard", True)  # truncated: determinism covers it
            else:
                fam = make_family(runtime.base, products)
                verdict = is_valuation_independent(fam, prec)
                _check(
                    checks, f"{tid}:standard",
                    verdict.kind is VerdictKind.INDEPENDENT,
                    f"standard products re-check as {verdict.kind.value}",
                )
        elif kind == "approximate":
            base_elements = [runtime.elements[n] for n in spec["family"]]
            matrix = [[runtime.elements[n] for n in row] for row in spec["matrix"]]
            ok = True
            detail = ""
            for pair in outcome["pairs"]:
                i, j = pair["row"], pair["col"]
                finite = _series_from_json(outcome["coefficients"][i][j], runtime)
                if finite is None:
                    ok = False
                    detail = "truncated coefficient serialization"
                    break
                required = _exp_from_json(pair["required_above"], runtime)
                diff_val = valuation(
                    multiply(subtract(finite, matrix[i][j]), base_elements[j]), prec
                )
                if not _strictly_above(diff_val, required, prec):
                    ok = False
                    detail = f"pair ({i},{j}) fails the strict inequality"
                    break
            _check(checks, f"{tid}:approximation", ok, detail)
    return checks

import random

import pytest
from hypothesis import given, strategies as st

from ultragram.residues import (
    DivisionByZero,
    ResidueField,
    embed_from_subfield,
    linear_rank,
    rank_over_subfield,
    restrict_to_subfield,
    solve_in_span,
    solve_over_subfield,
)

F3 = ResidueField.prime(3)
F5 = ResidueField.prime(5)
Q = ResidueField.rationals()
F5s = ResidueField.rational_functions(5)


def test_field_ops_examples():
    assert F3.element(2).invert() == F3.element(2)  # 2*2 = 4 = 1 mod 3
    sp1 = F5s.element(1) + F5s.generator()
    assert sp1 * sp1.invert() == F5s.one()
    assert Q.element("1/2") + Q.element("1/3") == Q.element("5/6")


def test_invert_zero_raises():
    with pytest.raises(DivisionByZero):
        F3.zero().invert()
    with pytest.raises(DivisionByZero):
        F5s.zero().invert()


def test_function_field_canonical_form():
    # (s^2 - 1)/(s - 1) reduces to s + 1; denominators stay monic
    num = [4, 0, 1]  # s^2 - 1 over F5
    den = [4, 1]     # s - 1
    assert F5s.fraction(num, den) == F5s.fraction([1, 1], [1])
    # 2/(2s) reduces with a monic denominator
    assert F5s.fraction([2], [0, 2]) == F5s.fraction([1], [0, 1])


def test_prime_requires_prime():
    with pytest.raises(ValueError):
        ResidueField.prime(6)


def test_linear_rank_examples():
    rank, kernel = linear_rank([[F3.one(), F3.zero()], [F3.zero(), F3.one()]], F3)
    assert rank == 2 and kernel == []
    rows = [[F5.element(1), F5.element(2)], [F5.element(2), F5.element(4)]]
    rank, kernel = linear_rank(rows, F5)
    assert rank == 1 and len(kernel) == 1
    k = kernel[0]
    for col in range(2):
        acc = k[0] * rows[0][col] + k[1] * rows[1][col]
        assert acc.is_zero()


def test_rank_over_subfield_one_and_s():
    rank, kernel = rank_over_subfield([F5s.one(), F5s.generator()], F5, F5s)
    assert rank == 2 and kernel == []


def test_solve_in_span_examples():
    basis = [[F3.one(), F3.element(2)]]
    sol = solve_in_span([F3.one(), F3.element(2)], basis, F3)
    assert sol == [F3.one()]
    assert solve_in_span([F3.zero(), F3.zero()], basis, F3) == [F3.zero()]
    # over F3 with basis {(1,1)}: (1,2) is not a multiple (oracle: 3 multiples)
    assert solve_in_span([F3.one(), F3.element(2)], [[F3.one(), F3.one()]], F3) is None


def test_solve_over_subfield():
    sinv = F5s.generator().invert()
    assert solve_over_subfield(F5s.one(), [sinv], F5, F5s) is None
    sol = solve_over_subfield(sinv + sinv, [sinv], F5, F5s)
    assert sol == [F5.element(2)]


def test_restrict_and_embed():
    assert restrict_to_subfield(F5s.element(3), F5, F5s) == F5.element(3)
    assert restrict_to_subfield(F5s.generator(), F5, F5s) is None
    assert embed_from_subfield(F5.element(3), F5s) == F5s.element(3)


def _random_rows(rng, field, n, m):
    return [[field.element(rng.randrange(field.p)) for _ in range(m)] for _ in range(n)]


def test_rank_invariant_under_permutation_and_scaling():
    rng = random.Random(7)
    for _ in range(60):
        rows = _random_rows(rng, F5, rng.randint(1, 4), rng.randint(1, 4))
        rank, _ = linear_rank(rows, F5)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        scaled = []
        for row in shuffled:
            c = F5.element(rng.randrange(1, 5))
            scaled.append([c * x for x in row])
        assert linear_rank(shuffled, F5)[0] == rank
        assert linear_rank(scaled, F5)[0] == rank


def test_solution_reconstructs_target():
    rng = random.Random(11)
    for _ in range(60):
        m, width = rng.randint(1, 3), rng.randint(1, 4)
        basis = _random_rows(rng, F5, m, width)
        coeffs = [F5.element(rng.randrange(5)) for _ in range(m)]
        target = [F5.zero()] * width
        for c, row in zip(coeffs, basis):
            target = [t + c * x for t, x in zip(target, row)]
        sol = solve_in_span(target, basis, F5)
        assert sol is not None
        rebuilt = [F5.zero()] * width
        for c, row in zip(sol, basis):
            rebuilt = [t + c * x for t, x in zip(rebuilt, row)]
        assert rebuilt == target


def test_appending_span_element_keeps_rank_and_yields_witness():
    rng = random.Random(13)
    for _ in range(40):
        m, width = rng.randint(1, 3), rng.randint(2, 4)
        basis = _random_rows(rng, F5, m, width)
        rank, _ = linear_rank(basis, F5)
        coeffs = [F5.element(rng.randrange(5)) for _ in range(m)]
        extra = [F5.zero()] * width
        for c, row in zip(coeffs, basis):
            extra = [t + c * x for t, x in zip(extra, row)]
        rank2, kernel = linear_rank(basis + [extra], F5)
        assert rank2 == rank
        if any(not c.is_zero() for c in extra) or rank == len(basis):
            assert kernel or rank < len(basis) + 1


@given(st.integers(0, 4), st.integers(0, 4), st.integers(1, 4))
def test_fp_field_axioms(a, b, c):
    x, y, z = F5.element(a), F5.element(b), F5.element(c)
    assert x + y == y + x
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert (z * z.invert()) == F5.one()

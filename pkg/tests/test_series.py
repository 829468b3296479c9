import random

import pytest

from ultragram.groups import OrderedGroup
from ultragram.residues import ResidueField
from ultragram.series import (
    LeadingTermUnknown,
    MismatchedAmbient,
    Precision,
    SeriesField,
    ValuationMismatch,
    add,
    artin_schreier,
    custom_powers,
    equal_up_to,
    geometric,
    invert,
    leading_term,
    multiply,
    negate,
    residue_ratio,
    subtract,
    truncate,
    valuation,
)

Z = OrderedGroup.integers()
F3 = ResidueField.prime(3)
F5 = ResidueField.prime(5)
L5 = SeriesField(Z, F5)
L3 = SeriesField(Z, F3)
PREC = Precision(Z.element(32), max_terms=8)


# independent oracle: dict-based finite polynomial arithmetic


def poly_of(series, bound=64):
    fuel = Precision(Z.element(bound), max_terms=64).fuel()
    fuel.steps = 10_000
    assert series.ensure_below(Z.element(bound), fuel)
    return {int(t.exponent.coords[0]): t.coefficient for t in series.terms_below(Z.element(bound))}


def poly_mul(a, b, field):
    out = {}
    for i, c in a.items():
        for j, d in b.items():
            k = i + j
            prev = out.get(k, field.zero())
            out[k] = prev + c * d
    return {k: v for k, v in out.items() if not v.is_zero()}


def poly_sub(a, b, field):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, field.zero()) - v
    return {k: v for k, v in out.items() if not v.is_zero()}


def test_valuation_examples():
    t = L5.monomial(1)
    v = valuation(add(t, L5.monomial(2)), PREC)
    assert v.is_value and v.value == Z.element(1)
    v0 = valuation(L5.zero(), PREC)
    assert not v0.is_value and v0.exhausted


def test_telescoping_product_is_one():
    # (1-t) * sum t^i - 1 has no witnessed term below any tested ceiling
    g = geometric(L5)
    expr = subtract(multiply(subtract(L5.one(), L5.monomial(1)), g), L5.one())
    for ceiling in (8, 16, 32):
        v = valuation(expr, Precision(Z.element(ceiling), max_terms=8))
        assert not v.is_value
    # oracle: truncated polynomial product telescopes to 1 + t^N
    N = 20
    partial = {i: F5.one() for i in range(N)}
    one_minus_t = {0: F5.one(), 1: -F5.one()}
    prod = poly_mul(one_minus_t, partial, F5)
    assert prod == {0: F5.one(), N: -F5.one()}


def test_add_cancellation_and_multiplication():
    t = L5.monomial(1)
    assert not valuation(add(t, negate(t)), PREC).is_value
    prod = multiply(add(L5.one(), t), subtract(L5.one(), t))
    expected = L5.from_terms([(0, 1), (2, -1)])
    assert equal_up_to(prod, expected, Z.element(20), PREC)


def test_artin_schreier_identity():
    # x = sum t^(3^i) over F3 satisfies x^3 - x = -t (freshman's dream)
    x = artin_schreier(L3, 3)
    cube = multiply(x, multiply(x, x))
    diff = subtract(cube, x)
    target = L3.monomial(1, -1)
    prec = Precision(Z.element(30), max_terms=12)
    assert equal_up_to(diff, target, Z.element(30), prec)
    # oracle: cube the partial sum termwise in dict arithmetic
    partial = {3**i: F3.one() for i in range(4)}
    cube_oracle = poly_mul(partial, poly_mul(partial, partial, F3), F3)
    diff_oracle = poly_sub(cube_oracle, partial, F3)
    below = {k: v for k, v in diff_oracle.items() if k < 27}
    assert below == {1: -F3.one()}


def test_invert_examples():
    inv = invert(subtract(L5.one(), L5.monomial(1)), PREC)
    assert equal_up_to(inv, geometric(L5), Z.element(20), PREC)
    back = multiply(inv, subtract(L5.one(), L5.monomial(1)))
    assert equal_up_to(back, L5.one(), Z.element(20), PREC)
    tinv = invert(L5.monomial(1), PREC)
    lead = leading_term(tinv, PREC)
    assert lead.exponent == Z.element(-1)
    with pytest.raises(LeadingTermUnknown):
        invert(L5.zero(), PREC)


def test_invert_random_roundtrip():
    rng = random.Random(5)
    for _ in range(25):
        terms = sorted(rng.sample(range(0, 9), rng.randint(1, 4)))
        coeffs = [rng.randrange(1, 5) for _ in terms]
        x = L5.from_terms(list(zip(terms, coeffs)))
        inv = invert(x, PREC)
        assert equal_up_to(multiply(x, inv), L5.one(), Z.element(24), PREC)


def test_residue_ratio_examples():
    a = L5.from_terms([(1, 1), (2, 1)])
    b = L5.from_terms([(1, 1), (2, -1)])
    assert residue_ratio(a, b, PREC) == F5.one()
    assert residue_ratio(a, a, PREC) == F5.one()
    assert residue_ratio(L5.monomial(1, 2), L5.monomial(1), PREC) == F5.element(2)
    with pytest.raises(ValuationMismatch):
        residue_ratio(L5.monomial(1), L5.monomial(2), PREC)


def test_truncate_and_equal_up_to():
    g = geometric(L5)
    cut = truncate(g, Z.element(3))
    fuel = PREC.fuel()
    assert cut.ensure_below(Z.element(100), fuel)
    assert cut.exhausted
    assert [int(t.exponent.coords[0]) for t in cut.terms_below(Z.element(100))] == [0, 1, 2]

    x = artin_schreier(L3, 3)
    fin = L3.from_terms([(1, 1), (3, 1)])
    prec = Precision(Z.element(40), max_terms=12)
    assert equal_up_to(x, fin, Z.element(9), prec)
    assert not equal_up_to(x, fin, Z.element(10), prec)
    assert equal_up_to(x, x, Z.element(40), prec)


def test_custom_powers_builder():
    sq = custom_powers(L5, lambda i: i * i + 1)
    fuel = PREC.fuel()
    sq.ensure_below(Z.element(20), fuel)
    assert [int(t.exponent.coords[0]) for t in sq.terms_below(Z.element(20))] == [1, 2, 5, 10, 17]


def test_mismatched_ambient():
    with pytest.raises(MismatchedAmbient):
        add(L5.one(), L3.one())


def test_determinism_of_enumeration():
    for build in (lambda: geometric(L5), lambda: artin_schreier(L3, 3)):
        s = build()
        fuel = PREC.fuel()
        s.ensure_below(Z.element(25), fuel)
        first = [(t.exponent, t.coefficient) for t in s.terms_below(Z.element(25))]
        fuel = PREC.fuel()
        s.ensure_below(Z.element(25), fuel)
        second = [(t.exponent, t.coefficient) for t in s.terms_below(Z.element(25))]
        assert first == second


def _random_series(rng, field):
    support = sorted(rng.sample(range(-3, 12), rng.randint(0, 5)))
    return field.from_terms([(e, rng.randrange(1, field.coeff.p)) for e in support])


def test_ultrametric_inequality_random():
    rng = random.Random(17)
    for _ in range(200):
        x = _random_series(rng, L5)
        y = _random_series(rng, L5)
        vx = valuation(x, PREC)
        vy = valuation(y, PREC)
        vsum = valuation(add(x, y), PREC)
        if not (vx.is_value and vy.is_value):
            continue
        lower = min(vx.value, vy.value)
        if vsum.is_value:
            assert not vsum.value < lower
        if vx.value != vy.value:
            assert vsum.is_value and vsum.value == lower


def test_valuation_multiplicative_random():
    rng = random.Random(19)
    for _ in range(200):
        x = _random_series(rng, L5)
        y = _random_series(rng, L5)
        vx = valuation(x, PREC)
        vy = valuation(y, PREC)
        vprod = valuation(multiply(x, y), PREC)
        if vx.is_value and vy.is_value:
            assert vprod.is_value
            assert vprod.value == vx.value + vy.value
        else:
            assert not vprod.is_value


def test_lex_ambient_basics():
    L2 = OrderedGroup.lex(2)
    LL = SeriesField(L2, F3)
    prec = Precision(L2.element(1, 24), max_terms=8)
    x = add(artin_schreier(LL, 3, axis=1), LL.monomial(L2.element(1, 0)))
    v = valuation(x, prec)
    assert v.is_value and v.value == L2.element(0, 1)
    r = subtract(x, LL.monomial(L2.element(0, 1)))
    v = valuation(r, prec)
    assert v.is_value and v.value == L2.element(0, 3)
    # inverse of 1 - t^(0,1) genuinely has infinitely many terms below (1,0)
    inv = invert(subtract(LL.one(), LL.monomial(L2.element(0, 1))), prec)
    fuel = prec.fuel()
    complete = inv.ensure_below(L2.element(1, 0), fuel)
    assert not complete
    terms = inv.terms_below(L2.element(1, 0))
    assert [t.exponent.coords for t in terms[:3]] == [(0, 0), (0, 1), (0, 2)]


def test_multiply_matches_dict_oracle():
    rng = random.Random(31)
    prec = Precision(Z.element(40), max_terms=16)

    def dict_of(s, bound):
        fuel = prec.fuel()
        fuel.steps = 100_000
        assert s.ensure_below(Z.element(bound), fuel)
        return {int(t.exponent.coords[0]): t.coefficient.rep for t in s.terms_below(Z.element(bound))}

    for _ in range(150):
        def rnd():
            support = sorted(rng.sample(range(-2, 10), rng.randint(1, 5)))
            return L5.from_terms([(e, rng.randrange(1, 5)) for e in support])

        x, y = rnd(), rnd()
        got = dict_of(multiply(x, y), 18)
        dx, dy = dict_of(x, 100), dict_of(y, 100)
        want = {}
        for i, c in dx.items():
            for j, d in dy.items():
                if i + j < 18:
                    want[i + j] = (want.get(i + j, 0) + c * d) % 5
        assert got == {k: v for k, v in want.items() if v}


def test_lex_inversion_roundtrip():
    L2 = OrderedGroup.lex(2)
    LL = SeriesField(L2, F3)
    prec = Precision(L2.element(1, 6), max_terms=8)
    rng = random.Random(37)
    bound = L2.element(0, 6)
    for _ in range(40):
        terms = {(0, 0): 1 + rng.randrange(2)}
        for _ in range(rng.randint(1, 3)):
            coords = (rng.randint(0, 1), rng.randint(1, 4))
            terms[coords] = 1 + rng.randrange(2)
        x = LL.from_terms([(L2.element(*e), c) for e, c in sorted(terms.items())])
        back = multiply(x, invert(x, prec))
        diff = subtract(back, LL.one())
        fuel = prec.fuel()
        diff.ensure_below(bound, fuel)
        assert not diff.terms_below(bound)

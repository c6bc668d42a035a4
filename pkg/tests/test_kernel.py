from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from prymtheta.kernel import (ClassExpr, SpaceDescriptor, SpaceMismatchError, binomial,
                              class_add, class_coefficient, class_mul, class_substitute)

SPACE = SpaceDescriptor.of([("x1", 3), ("theta1", 3), ("h", 3), ("h'", 1)], total_dimension=7)
NAMES = SPACE.names

coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
exponents = st.tuples(*[st.integers(0, 4) for _ in NAMES])


@st.composite
def classes(draw, space=SPACE):
    terms = draw(st.dictionaries(exponents, coeffs, max_size=6))
    return ClassExpr(space, terms)


# -- binomial -----------------------------------------------------------------

@pytest.mark.parametrize("n,k,expected", [(6, 3, 20), (0, 0, 1), (5, 7, 0), (4, -1, 0)])
def test_binomial_examples(n, k, expected):
    assert binomial(n, k) == expected
    assert isinstance(binomial(n, k), Fraction)


def test_pascal_rule():
    for n in range(1, 61):
        for k in range(0, n + 1):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


def test_binomial_matches_math_comb():
    for n in range(0, 40):
        for k in range(-2, n + 3):
            assert binomial(n, k) == (comb(n, k) if k >= 0 else 0)


def test_vandermonde_sums():
    for r in range(51):
        assert sum(binomial(r, k) ** 2 for k in range(r + 1)) == binomial(2 * r, r)
        assert sum(binomial(r, k) * binomial(r + 1, k + 1) for k in range(r + 1)) == binomial(2 * r + 1, r + 1)


# -- structure ------------------------------------------------------------------

def test_zero_coefficients_and_truncated_terms_are_dropped():
    e = ClassExpr(SPACE, {(0, 0, 0, 2): 5, (4, 0, 0, 0): 1, (1, 0, 0, 0): 0, (0, 1, 0, 0): 3})
    assert dict(e.terms) == {(0, 1, 0, 0): Fraction(3)}


def test_total_dimension_truncation():
    S = SpaceDescriptor.of([("a", None), ("b", None)], total_dimension=2)
    a, b = S.gen("a"), S.gen("b")
    assert (a * b * a).is_zero()
    assert a * b == S.monomial({"a": 1, "b": 1})


def test_text_form_is_sorted_and_canonical():
    S = SpaceDescriptor.of([("theta1", 3), ("h'", 1)])
    e = (S.gen("theta1") + S.gen("h'")) ** 2
    assert e.to_text() == "2/1 * theta1 h' + 1/1 * theta1^2"
    assert S.zero().to_text() == "0"
    assert S.one().to_text() == "1/1 * 1"


def test_space_mismatch_rejected():
    other = SpaceDescriptor.of([("theta1", 3)])
    with pytest.raises(SpaceMismatchError):
        class_add(SPACE.gen("theta1"), other.gen("theta1"))
    with pytest.raises(SpaceMismatchError):
        class_mul(SPACE.gen("theta1"), other.gen("theta1"))


def test_add_examples():
    t, h = SPACE.gen("theta1"), SPACE.gen("h")
    assert class_add(t + h, -t) == h
    assert class_add(SPACE.zero(), t) == t
    assert class_add(SPACE.gen("x1"), SPACE.gen("x1")) == 2 * SPACE.gen("x1")


def test_mul_examples():
    t, hp = SPACE.gen("theta1"), SPACE.gen("h'")
    assert class_mul(t + hp, t + hp) == t ** 2 + 2 * t * hp
    P = SpaceDescriptor.of([("theta1", 3)])
    assert (P.gen("theta1") ** 2 * P.gen("theta1") ** 2).is_zero()


def test_mul_example_pullback_times_c2():
    S = SpaceDescriptor.of([("x", None), ("theta", None), ("h", None), ("h'", 1)])
    x, t, h, hp = (S.gen(n) for n in S.names)
    c2 = t ** 2 / 2 + 2 * x * t + x ** 2
    for r in range(4):
        lhs = (x + hp) * h ** r * c2
        rhs = (x * t ** 2 / 2 + 2 * x ** 2 * t + x ** 3 + hp * (t ** 2 / 2 + 2 * x * t + x ** 2)) * h ** r
        assert lhs == rhs


def test_coefficient_examples():
    P = SpaceDescriptor.of([("xi", 3), ("h", 2)])
    xi, h = P.gen("xi"), P.gen("h")
    # the g = 3 Prym class: sum_r h^r xi^(3-r)/(3-r)! C(4-2r, 2-r)
    e = xi ** 3 / 6 * binomial(4, 2) + h * xi ** 2 / 2 * binomial(2, 1) + h ** 2 * xi
    assert class_coefficient(e, {"xi": 3}) == 1
    assert class_coefficient(e, (0, 1)) == 0
    assert class_coefficient(e, {"h": 2, "xi": 1}) == 1


def test_substitute_examples():
    t, h, hp = SPACE.gen("theta1"), SPACE.gen("h"), SPACE.gen("h'")
    for k in range(4):
        assert class_substitute(t ** k * hp, {"h'": SPACE.zero()}, SPACE).is_zero()
    P = SpaceDescriptor.of([("xi", 3), ("h", 3)])
    img = class_substitute(t ** 2 * h, {"theta1": P.gen("xi")}, P)
    assert img == P.gen("xi") ** 2 * P.gen("h")
    e = t ** 2 * h + 3 * hp - SPACE.gen("x1")
    assert class_substitute(e, {}, SPACE) == e


def test_substitute_rejects_missing_generator():
    P = SpaceDescriptor.of([("xi", 3)])
    with pytest.raises(ValueError):
        class_substitute(SPACE.gen("h"), {"theta1": P.gen("xi")}, P)


# -- properties -----------------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(classes(), classes(), classes())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == SPACE.zero()
    assert a * SPACE.one() == a


@settings(max_examples=100, deadline=None)
@given(classes())
def test_truncation_idempotent(a):
    assert a.truncate() == a
    assert a.truncate().truncate() == a.truncate()


@settings(max_examples=100, deadline=None)
@given(classes(), classes(), coeffs, coeffs)
def test_substitution_is_homomorphism(a, b, p, q):
    # every truncation relation of SPACE maps into the ideal of T
    T = SpaceDescriptor.of([("xi", 3), ("h", 3)], total_dimension=6)
    rules = {
        "x1": T.gen("xi") * p,
        "theta1": T.gen("xi") * q,
        "h": T.gen("h"),
        "h'": T.zero(),
    }
    f = lambda e: class_substitute(e, rules, T)
    assert f(a * b) == f(a) * f(b)
    assert f(a + b) == f(a) + f(b)


@settings(max_examples=100, deadline=None)
@given(classes(), st.integers(0, 5))
def test_power_matches_repeated_product(a, n):
    expected = SPACE.one()
    for _ in range(n):
        expected = expected * a
    assert a ** n == expected


@settings(max_examples=100, deadline=None)
@given(classes())
def test_stored_terms_respect_truncation(a):
    for exps, c in a.items():
        assert c != 0
        assert SPACE.admits(exps)

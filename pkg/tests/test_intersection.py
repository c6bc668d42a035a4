import math
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from prymtheta.intersection import (CaseTag, ReductionError, abel_pushforward, center_correction,
                                    chern_mather_theta_pipeline, chern_mather_xi, closed_form_theta,
                                    conormal_class_symmetric, derive_theta_class, eval_bundle_chern,
                                    gauss_degree, lemma_form_theta, picbar_space, restrict_to_prym,
                                    symmetric_space, tnd_pullback)
from prymtheta.kernel import ClassExpr, SpaceDescriptor, binomial, class_substitute


def q(x):
    return Fraction(int(sp.numer(x)), int(sp.denom(x)))


# -- independent oracle ---------------------------------------------------------

def sympy_truncate(expr, gens, bounds, total):
    poly = sp.Poly(sp.expand(expr), *gens)
    out = {}
    for exps, c in poly.terms():
        if all(e <= b for e, b in zip(exps, bounds)) and sum(exps) <= total and c != 0:
            out[exps] = q(c)
    return out


def sympy_pipeline(g, case):
    """Conormal, pullback, correction and pushforward redone with sympy."""
    h, hp = sp.symbols("h hp")
    if case is CaseTag.D_G:
        x, t = sp.symbols("x t")

        def c(r):
            if r < 0:
                return 0
            return sum(sp.binomial(r, k) * x ** k * t ** (r - k) / sp.factorial(r - k) for k in range(r + 1))

        up = (x + hp) * sum(h ** r * c(g - r) for r in range(g + 1))
        up -= x ** 2 * sum(h ** r * c(g - r - 1) for r in range(g + 1))
        gens, bounds = (x, t, h, hp), (g, g, g, 1)
        terms = sympy_truncate(up, gens, bounds, 2 * g + 1)
        out = {}
        for (a, b, e, f), cf in terms.items():
            key = (a + b, e, f)
            out[key] = out.get(key, 0) + cf / math.factorial(a)
        return {k: v for k, v in out.items() if v and k[0] <= g}
    x1, t1, x2, t2 = sp.symbols("x1 t1 x2 t2")

    def c2(r):
        if r < 0:
            return 0
        return sum(sp.binomial(r, k) * x2 ** k * t2 ** (r - k) / sp.factorial(r - k) for k in range(r + 1))

    con = sum(h ** r * (2 * x1 * c2(g - r - 1) + c2(g - r)) for r in range(g + 1))
    up = (x1 + x2 + hp) * con
    up -= (2 * x1 * x2 + x2 ** 2) * sum(h ** r * c2(g - r - 1) for r in range(g + 1))
    gens, bounds = (x1, t1, x2, t2, h, hp), (1, 1, g - 1, g - 1, g, 1)
    terms = sympy_truncate(up, gens, bounds, 2 * g + 1)
    out = {}
    for (a1, b1, a2, b2, e, f), cf in terms.items():
        key = (a1 + b1, a2 + b2, e, f)
        out[key] = out.get(key, 0) + cf / (math.factorial(a1) * math.factorial(a2))
    return {k: v for k, v in out.items() if v and k[0] <= 1 and k[1] <= g - 1}


def sympy_closed_form(g, case):
    h, hp, t1, t2 = sp.symbols("h hp t1 t2")
    theta = t1 if case is CaseTag.D_G else t1 + t2
    e = sum(h ** r * (theta + hp) ** (g - r + 1) / sp.factorial(g - r + 1) * sp.binomial(2 * g - 2 * r, g - r)
            for r in range(g + 1))
    if case is CaseTag.D_G:
        return sympy_truncate(e.subs(t2, 0), (t1, h, hp), (g, g, 1), 2 * g + 1)
    corr = sum(2 * h ** r * hp * t1 * t2 ** (g - r - 1) / sp.factorial(g - r - 1) * sp.binomial(2 * g - 2 * r - 2, g - r)
               for r in range(g))
    return sympy_truncate(e - corr, (t1, t2, h, hp), (1, g - 1, g, 1), 2 * g + 1)


@pytest.mark.parametrize("case", list(CaseTag))
@pytest.mark.parametrize("g", [3, 4, 5, 6])
def test_pipeline_matches_sympy_oracle(g, case):
    derived = derive_theta_class(g, case)
    assert dict(derived.terms) == sympy_pipeline(g, case)
    assert dict(closed_form_theta(g, case).terms) == sympy_closed_form(g, case)


# -- operation examples ---------------------------------------------------------

def test_eval_bundle_chern_examples():
    S = SpaceDescriptor.of([("x1", 5), ("theta1", 5)])
    x, t = S.gen("x1"), S.gen("theta1")
    assert eval_bundle_chern(1, 0, S) == S.one()
    assert eval_bundle_chern(1, 1, S) == x + t
    assert eval_bundle_chern(1, 2, S) == x ** 2 + 2 * x * t + t ** 2 / 2
    assert eval_bundle_chern(1, -1, S).is_zero()
    with pytest.raises(KeyError):
        eval_bundle_chern(2, 1, S)


def test_abel_pushforward_examples():
    S = SpaceDescriptor.of([("x1", 4), ("theta1", 4)])
    T = SpaceDescriptor.of([("theta1", 4)])
    x = S.gen("x1")
    assert abel_pushforward(x * eval_bundle_chern(1, 1, S), [4]) == T.gen("theta1") ** 2 * Fraction(3, 2)
    assert abel_pushforward(eval_bundle_chern(1, 2, S), [4]) == 3 * T.gen("theta1") ** 2
    assert abel_pushforward(S.one(), [4]) == T.one()


def test_abel_pushforward_rejects_unknown_generator():
    S = SpaceDescriptor.of([("x1", 4), ("theta1", 4), ("y", 2)])
    with pytest.raises(ValueError):
        abel_pushforward(S.gen("y"), [4])


@pytest.mark.parametrize("j", [0, 1, 2])
def test_pushforward_identities(j):
    for r in range(51):
        top = r + j
        S = SpaceDescriptor.of([("x1", top), ("theta1", top)])
        T = SpaceDescriptor.of([("theta1", top)])
        lhs = abel_pushforward(S.gen("x1") ** j * eval_bundle_chern(1, r, S), [top])
        assert lhs == T.gen("theta1") ** top * Fraction(math.comb(2 * r + j, top), math.factorial(top))


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.tuples(*[st.integers(0, 3)] * 4),
                       st.fractions(min_value=-9, max_value=9, max_denominator=7), max_size=6),
       st.sampled_from(["theta1", "h", "h'"]))
def test_projection_formula(terms, name):
    S = symmetric_space(3, CaseTag.D_G)
    e = ClassExpr(S, terms)
    lhs = abel_pushforward(S.gen(name) * e, [3])
    rhs = lhs.space.gen(name) * abel_pushforward(e, [3])
    assert lhs == rhs


def test_conormal_examples():
    S = symmetric_space(3, CaseTag.D_G)
    e = conormal_class_symmetric(3, CaseTag.D_G)
    assert e.slice("h", 3) == S.one()
    assert e.slice("h", 2) == S.gen("x1") + S.gen("theta1")
    S2 = symmetric_space(3, CaseTag.D_1G)
    e2 = conormal_class_symmetric(3, CaseTag.D_1G)
    assert e2.slice("h", 2) == 2 * S2.gen("x1") + S2.gen("x2") + S2.gen("theta2")


def test_tnd_pullback_examples():
    S = symmetric_space(3, CaseTag.D_G)
    assert tnd_pullback(S.one(), CaseTag.D_G) == S.gen("x1") + S.gen("h'")
    S2 = symmetric_space(3, CaseTag.D_1G)
    assert tnd_pullback(S2.one(), CaseTag.D_1G) == S2.gen("x1") + S2.gen("x2") + S2.gen("h'")
    assert tnd_pullback(S.zero(), CaseTag.D_G).is_zero()


def test_center_correction_examples():
    S = symmetric_space(3, CaseTag.D_G)
    c = center_correction(3, CaseTag.D_G)
    assert c.slice("h", 3).is_zero()
    assert c.slice("h", 2) == S.gen("x1") ** 2
    S2 = symmetric_space(3, CaseTag.D_1G)
    c2 = center_correction(3, CaseTag.D_1G)
    assert c2.slice("h", 2) == 2 * S2.gen("x1") * S2.gen("x2") + S2.gen("x2") ** 2


def test_closed_form_examples():
    e = closed_form_theta(3, CaseTag.D_G)
    assert e.coefficient({"theta1": 3, "h'": 1}) == Fraction(10, 3)
    for g in range(3, 9):
        e = closed_form_theta(g, CaseTag.D_G)
        # the r = g-1 summand carries theta h'
        assert e.coefficient({"h": g - 1, "theta1": 1, "h'": 1}) == 2
        assert e.coefficient({"h": g, "theta1": 1, "h'": 1}) == 0
    e = closed_form_theta(3, CaseTag.D_1G)
    # theta2 is truncated at g-1 = 2, so theta1 theta2^3 h' is the zero class
    assert e.coefficient({"theta1": 1, "theta2": 2, "h'": 1}) == 6
    assert picbar_space(3, CaseTag.D_1G).monomial({"theta1": 1, "theta2": 3, "h'": 1}).is_zero()


def literal_correction_form(g):
    T = picbar_space(g, CaseTag.D_1G)
    h, hp, t1, t2 = T.gen("h"), T.gen("h'"), T.gen("theta1"), T.gen("theta2")
    out = T.zero()
    for r in range(g + 1):
        m = g - r
        out = out + h ** r * (t1 + t2 + hp) ** (m + 1) * (binomial(2 * m, m) / math.factorial(m + 1))
        out = out - h ** r * hp * t1 * t2 ** m * (binomial(2 * m - 2, m) / math.factorial(m))
    return out


@pytest.mark.parametrize("g", [3, 4, 5, 6])
def test_literal_correction_term_does_not_match(g):
    # theta1 theta2^m h' has degree m+2; only the theta2^(m-1) version fits
    assert literal_correction_form(g) != derive_theta_class(g, CaseTag.D_1G)


@pytest.mark.parametrize("case", list(CaseTag))
def test_pipeline_matches_closed_form(case):
    for g in range(3, 13):
        rep = chern_mather_theta_pipeline(g, case)
        assert rep.match
        assert [r for r, _ in rep.mather_coefficients] == list(range(g))


def test_pipeline_g10_match():
    assert chern_mather_theta_pipeline(10, CaseTag.D_G).match


def test_reindexing_identity():
    for g in range(3, 12):
        for case in CaseTag:
            derived = derive_theta_class(g, case)
            T = derived.space
            free = class_substitute(derived, {"h'": T.zero()}, T)
            assert free == lemma_form_theta(g, case)


def test_restrict_to_prym_g3():
    out = restrict_to_prym(derive_theta_class(3, CaseTag.D_G), 3)
    xi, h = out.space.gen("xi"), out.space.gen("h")
    expected = out.space.zero()
    for r in range(3):
        expected = expected + h ** r * xi ** (3 - r) * (binomial(4 - 2 * r, 2 - r) / math.factorial(3 - r))
    assert out == expected


def test_restrict_kills_h_prime_and_shifts_h():
    T = picbar_space(4, CaseTag.D_G)
    t, h, hp = T.gen("theta1"), T.gen("h"), T.gen("h'")
    for k in range(5):
        assert restrict_to_prym(hp * t ** k, 4).is_zero()
    out = restrict_to_prym(h * t ** 3 * 7, 4)
    assert out == out.space.gen("xi") ** 3 * 7
    assert restrict_to_prym(t ** 3, 4).is_zero()


def test_restrict_rejects_non_polarization_class():
    T = picbar_space(4, CaseTag.D_1G)
    with pytest.raises(ReductionError):
        restrict_to_prym(T.gen("h") * T.gen("theta2") ** 2, 4)


def test_chern_mather_examples():
    xi4 = dict(chern_mather_xi(4, CaseTag.D_G))
    assert xi4[1] == 1
    assert xi4[0] == Fraction(5, 6)
    for g in range(3, 10):
        assert dict(chern_mather_xi(g, CaseTag.D_1G))[g - 1] == 1


def test_case_independence():
    for g in range(3, 12):
        assert chern_mather_xi(g, CaseTag.D_G) == chern_mather_xi(g, CaseTag.D_1G)


@pytest.mark.parametrize("g,deg", [(3, 6), (4, 20), (5, 70)])
def test_gauss_degree_examples(g, deg):
    assert gauss_degree(g) == deg
    assert gauss_degree(g, CaseTag.D_1G) == deg


def test_genus_precondition():
    with pytest.raises(ValueError):
        chern_mather_theta_pipeline(2, CaseTag.D_G)


def test_report_json_shape():
    import json
    rep = chern_mather_theta_pipeline(4, CaseTag.D_1G)
    data = json.loads(rep.to_json())
    assert set(data) >= {"g", "case", "match", "mather", "derived_class", "closed_form"}
    assert data["mather"][0] == {"r": 0, "coefficient": "5/6", "binomial_check": True}
    assert data["case"] == "1g-1"

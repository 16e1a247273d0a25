from fractions import Fraction

import pytest

from e0struct.formal_group import (compose_bivariate, eval_at, formal_exp,
                                   formal_log, formal_sum, g_polynomial,
                                   generic_mult_by_n, inverse_series,
                                   specialize, specialized_mult_by_n, w_series)
from e0struct.series import GENERIC_A, Series, WPoly

from conftest import FIXTURE_COEFFS, make_curve


def test_w_series_satisfies_curve_equation():
    # [DERIVED] w = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3
    D = 12
    a1, a2, a3, a4, a6 = GENERIC_A
    w = w_series(GENERIC_A, D)
    t = Series.variable(1, D, 0)
    w2 = w * w
    rhs = (t ** 3 + (t * w).scale(a1) + (t * t * w).scale(a2)
           + w2.scale(a3) + (t * w2).scale(a4) + (w2 * w).scale(a6))
    assert w == rhs


def test_w_series_leading_terms():
    # [PAPER] w = T^3 + a1*T^4 + (a1^2 + a2)*T^5 + ...
    a1, a2, a3, a4, a6 = GENERIC_A
    w = w_series(GENERIC_A, 6)
    assert w.coefficient((3,)) == 1
    assert w.coefficient((4,)) == a1
    assert w.coefficient((5,)) == a1 * a1 + a2
    assert w.coefficient((6,)) == a1 * a1 * a1 + 2 * a1 * a2 + a3


def test_formal_sum_leading_terms():
    # [PAPER] the degree <= 4 part of F(T1, T2)
    F = formal_sum(GENERIC_A, 4)
    assert F.pretty(["T1", "T2"]) == (
        "T1 + T2 - a1*T1*T2 - a2*T1^2*T2 - a2*T1*T2^2 - 2*a3*T1^3*T2"
        " + (a1*a2 - 3*a3)*T1^2*T2^2 - 2*a3*T1*T2^3")


def test_formal_sum_symmetric_and_unital():
    D = 8
    F = formal_sum(GENERIC_A, D)
    for (i, j), v in F.c.items():
        assert F.coefficient((j, i)) == v
    # F(T, 0) = T: only the (1, 0) key survives setting T2 = 0
    for (i, j), v in F.c.items():
        if j == 0:
            assert (i, v) == (1, 1)


def _subst2(F, f, g):
    """F(f, g) for bivariate F and multivariate f, g (test-local helper;
    the library version only substitutes univariate series)."""
    D = min(F.trunc, f.trunc, g.trunc)
    rows = {}
    for (i, j), v in F.c.items():
        rows.setdefault(i, {})[j] = v
    out = Series(f.nvars, D)
    for i in range(max(rows), -1, -1):
        out = out * f
        for j, v in rows.get(i, {}).items():
            out = out + (g ** j).scale(v)
    return out


def test_formal_sum_associative_small():
    # [DERIVED] F(F(S,T), U) = F(S, F(T,U)) through total degree 6
    D = 6
    F = formal_sum(GENERIC_A, D)
    S = Series.variable(3, D, 0)
    T = Series.variable(3, D, 1)
    U = Series.variable(3, D, 2)
    assert _subst2(F, _subst2(F, S, T), U) == _subst2(F, S, _subst2(F, T, U))


def test_inverse_series():
    # [DERIVED] F(T, i(T)) = 0
    D = 9
    F = formal_sum(GENERIC_A, D)
    t = Series.variable(1, D, 0)
    inv = inverse_series(GENERIC_A, D)
    assert compose_bivariate(F, t, inv) == Series.zero(1, D)


def test_generic_mult_by_2_leading_terms():
    # [PAPER] [2](T) through degree 5
    m2 = generic_mult_by_n(2, 5)
    assert m2.pretty(["T"]) == (
        "2*T - a1*T^2 - 2*a2*T^3 + (a1*a2 - 7*a3)*T^4"
        " + (-6*a1*a3 + 2*a2^2 - 12*a4)*T^5")


def test_generic_mult_by_7_degree_7_coefficient():
    # [PAPER] the a6 and a1^6 monomials of the T^7 coefficient of [7]
    c = generic_mult_by_n(7, 7).coefficient((7,))
    assert c.coefficient((0, 0, 0, 0, 1)) == -352944
    assert c.coefficient((6, 0, 0, 0, 0)) == 1


def test_mult_by_n_additivity():
    # [DERIVED] [3] = F([2], [1]) in the generic ring
    D = 6
    F = formal_sum(GENERIC_A, D)
    t = Series.variable(1, D, 0)
    m2 = generic_mult_by_n(2, D)
    m3 = generic_mult_by_n(3, D)
    assert compose_bivariate(F, m2, t) == m3


def test_log_exp_roundtrip():
    D = 10
    lg = formal_log(GENERIC_A, D)
    ex = formal_exp(GENERIC_A, D)
    t = Series.variable(1, D, 0)
    assert lg.compose(ex) == t
    assert ex.compose(lg) == t
    assert lg.coefficient((1,)) == 1


def test_log_linearizes_group_law():
    # [DERIVED] log F(S, T) = log S + log T
    D = 8
    F = formal_sum(GENERIC_A, D).map_coeffs(
        lambda v: v.map_coeffs(Fraction) if isinstance(v, WPoly) else Fraction(v))
    lg = formal_log(GENERIC_A, D)
    S = Series.variable(2, D, 0)
    T = Series.variable(2, D, 1)
    logF = lg.compose(F)
    logS = Series(2, D, {k: v for k, v in logF.c.items() if k[1] == 0})
    assert logF == lg.compose(S) + lg.compose(T)
    assert logS == lg.compose(S)


def test_specialized_routes_agree(Q3):
    # [DERIVED] direct specialization of the generic [3] matches the
    # specialized fast path
    E = make_curve(Q3, FIXTURE_COEFFS["E3"][1])
    D = 8
    fast = specialized_mult_by_n(E.a, 3, D)
    generic = specialize(generic_mult_by_n(3, D), E.a, Q3.one())
    for k in set(fast.c) | set(generic.c):
        diff = fast.coefficient(k) - generic.coefficient(k)
        v = diff.valuation_or_none()
        assert v is None or v >= 10


def test_specialized_mult_by_2_fixture(Q2):
    # [DERIVED] for Y^2 + 2Y = X^3 - 2, [2](T) = 2T - 14T^4 + O(T^7)
    E = make_curve(Q2, FIXTURE_COEFFS["E2"][1])
    m = specialized_mult_by_n(E.a, 2, 6)
    def as_residue(v):
        if isinstance(v, int):
            return v % 2 ** 10
        return v.coeffs[0] % 2 ** 10 if not v.is_zero_at_precision() else 0

    nonzero = {k: as_residue(v) for k, v in m.c.items() if as_residue(v)}
    assert nonzero == {(1,): 2, (4,): (-14) % 2 ** 10}


@pytest.mark.parametrize("name,expect", [
    ("E3", [1, 2]), ("E5", [1, 4]), ("E7", [1, 6])])
def test_g_polynomial_fixtures(name, expect, Q2, Q3, Q5, Q7):
    # [DERIVED] g has the additive form T + c*T^p with nontrivial kernel
    fields = {2: Q2, 3: Q3, 5: Q5, 7: Q7}
    p, a = FIXTURE_COEFFS[name]
    E = make_curve(fields[p], a)
    g = g_polynomial(E)
    assert [c.as_int() for c in g.coeffs] == expect


def test_g_polynomial_large_p_is_identity():
    # [DERIVED] for p > 7 additive reduction forces g = T
    from e0struct.local_field import LocalField
    Q11 = LocalField.unramified(11, 1, 10)
    E = make_curve(Q11, (0, 0, 0, 11, 11))
    g = g_polynomial(E)
    assert [c.as_int() for c in g.coeffs] == [1]


def test_eval_at_stable_under_degree(Q2):
    # [DERIVED] the tail bound makes the result independent of the
    # series truncation once it covers the target precision
    E = make_curve(Q2, FIXTURE_COEFFS["E2"][1])
    x = Q2.element([6], 12)
    lo = eval_at(specialized_mult_by_n(E.a, 2, 6), x, 5)
    hi = eval_at(specialized_mult_by_n(E.a, 2, 12), x, 5)
    v = (lo - hi).valuation_or_none()
    assert v is None or v >= 5

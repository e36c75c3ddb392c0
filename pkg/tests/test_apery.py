import mpmath
import pytest

from apery_verify.apery import (CpasParams, FussParams, cb_series, cpas_lhs, fc_G, fc_series,
                                fuss_radius, half_integer_lhs, param_cb_check, param_cb_closed,
                                param_cb_direct)
from apery_verify.errors import DomainError, InvalidInput, PoleError
from apery_verify.identities import rhs_cor23, rhs_cor24, rhs_cor25, rhs_cor25_q2
from apery_verify.numerics import PrecisionContext, RootOfUnity
from apery_verify.polylog import cyclotomic_li, li


def test_cpas_q1_matches_closed_form(ctx50):
    x = RootOfUnity(1, 2)
    a = ctx50.convert("1/4")
    lhs = cpas_lhs(CpasParams(1, a, x), ctx50).value
    assert abs(lhs - rhs_cor23(a, x, ctx50)) < 1e-20


def test_cpas_q2_matches_closed_form(ctx50):
    x = RootOfUnity(1, 4)
    a = ctx50.convert("1/3")
    lhs = cpas_lhs(CpasParams(2, a, x), ctx50).value
    assert abs(lhs - rhs_cor24(a, x, ctx50)) < 1e-35


def test_cpas_conjugate_symmetry(ctx40):
    a = ctx40.convert("2/7")
    for x in (RootOfUnity(1, 3), RootOfUnity(2, 5)):
        u = cpas_lhs(CpasParams(3, a, x), ctx40).value
        v = cpas_lhs(CpasParams(3, a, x.inverse()), ctx40).value
        assert abs(u - ctx40.mp.conj(v)) < 1e-38


def test_cpas_half_integer_approach(ctx30):
    # the bilateral sum tends to pi times the half-integer series, with an O(offset) gap
    m = ctx30.mp
    x = RootOfUnity(1, 2)
    target = m.pi * half_integer_lhs(2, x, ctx30).value
    gaps = []
    for k in (4, 6, 8):
        a = m.mpf(0.5) + m.mpf(10) ** -k
        gaps.append(abs(cpas_lhs(CpasParams(2, a, x), ctx30).value - target))
    assert gaps[2] < 1e-6
    for coarse, fine in zip(gaps, gaps[1:]):
        assert 30 < coarse / fine < 300


@pytest.mark.parametrize("kwargs", [
    {"q": 0, "a": "1/3", "x": RootOfUnity(1, 2)},
    {"q": 1, "a": "1/3", "x": RootOfUnity(0, 1)},
    {"q": 2, "a": "2", "x": RootOfUnity(1, 2)},
    {"q": 2, "a": "1/3", "b": "4/3", "x": RootOfUnity(1, 2)},
    {"q": 2, "a": "1/3", "b": "5/6", "x": RootOfUnity(1, 2)},
    {"q": 2, "a": "1/3", "b": "-1", "x": RootOfUnity(1, 2)},
])
def test_cpas_params_rejected(ctx30, kwargs):
    with pytest.raises(InvalidInput):
        CpasParams(**kwargs).validate(ctx30)


def test_cpas_shifted_params_accepted(ctx30):
    CpasParams(2, "1/3", RootOfUnity(1, 2), b="10/21").validate(ctx30)


def test_cb_series_examples(ctx50):
    m = ctx50.mp
    assert abs(cb_series(-1, m.mpf(0.5), ctx50).value - (m.sqrt(2) - 1)) < 1e-50
    assert abs(cb_series(0, 1, ctx50).value - 2 * m.log(2)) < 1e-50
    s2 = m.sqrt(2)
    want = 2 * li(2, (1 - s2) / 2, ctx50) - m.log((1 + s2) / 2) ** 2
    assert abs(cb_series(1, -1, ctx50).value - want) < 1e-50
    # RootOfUnity input takes the grouped route and agrees with the numeric one
    assert abs(cb_series(1, RootOfUnity(1, 2), ctx50).value - want) < 1e-50


def test_cb_series_errors(ctx30):
    with pytest.raises(DomainError):
        cb_series(0, 1.1, ctx30)
    with pytest.raises(DomainError):
        cb_series(-1, 1, ctx30)
    with pytest.raises(InvalidInput):
        cb_series(-2, 0.5, ctx30)


@pytest.mark.parametrize("p", [-1, 0, 3])
def test_cb_term_ratio_tends_to_x(ctx30, p):
    m = ctx30.mp
    x = m.mpc(0.3, -0.8)
    n = 1000

    def term(k):
        return m.binomial(2 * k, k) * x ** k / (m.mpf(k) ** (p + 1) * m.mpf(4) ** k)

    assert abs(term(n + 1) / term(n) / x - 1) < 0.01


def test_half_integer_q1_display(ctx50):
    m = ctx50.mp
    x = RootOfUnity(1, 2)
    xv = x.embed(ctx50)
    half = m.mpf(0.5)
    want = (xv * cyclotomic_li(1, x.inverse(), half, ctx50) - cyclotomic_li(1, x, half, ctx50)) / (
        m.pi * m.sqrt(1 - xv))
    assert abs(half_integer_lhs(1, x, ctx50).value - want) < 1e-20


def test_half_integer_q2_display(ctx50):
    x = RootOfUnity(1, 4)
    assert abs(half_integer_lhs(2, x, ctx50).value - rhs_cor25_q2(x, ctx50)) < 1e-35


def test_half_integer_q3_general(ctx50):
    x = RootOfUnity(1, 2)
    assert abs(half_integer_lhs(3, x, ctx50).value - rhs_cor25(3, x, ctx50)) < 1e-35


def test_half_integer_errors(ctx30):
    with pytest.raises(InvalidInput):
        half_integer_lhs(1, RootOfUnity(0, 1), ctx30)


def test_fc_G_examples(ctx50):
    m = ctx50.mp
    assert abs(fc_G(1, m.mpf("0.3"), ctx50) - 1 / (1 - m.mpf("0.3"))) < 1e-55
    assert abs(fc_G(2, ctx50.convert("1/8"), ctx50) - (4 - 2 * m.sqrt(2))) < 1e-55
    for k in (1, 2, 3, 5):
        assert fc_G(k, 0, ctx50) == 1


@pytest.mark.parametrize("m", [2, 3, 4])
def test_fc_G_monotone_and_in_range(ctx30, m):
    r = fuss_radius(m, ctx30)
    grid = [-r + 2 * r * j / 49 for j in range(50)]
    vals = [fc_G(m, x, ctx30) for x in grid]
    for g, x in zip(vals, grid):
        assert abs(g - 1 - x * g ** m) < 1e-28
        assert ctx30.mp.mpf(0.5) < g <= ctx30.mp.mpf(m) / (m - 1) + 1e-28
    assert all(u < v for u, v in zip(vals, vals[1:]))


def test_fc_G_radius_endpoint(ctx30):
    for m in (2, 3, 4):
        g = fc_G(m, fuss_radius(m, ctx30), ctx30)
        assert abs(g - ctx30.mp.mpf(m) / (m - 1)) < 1e-28


def test_fc_G_complex_argument(ctx30):
    x = ctx30.convert("0.05+0.08i")
    g = fc_G(3, x, ctx30)
    assert abs(g - 1 - x * g ** 3) < 1e-28


def test_fc_G_errors(ctx30):
    with pytest.raises(DomainError):
        fc_G(2, 0.3, ctx30)
    with pytest.raises(DomainError):
        fc_G(1, 1, ctx30)


def test_fc_series_examples(ctx50):
    m = ctx50.mp
    y = ctx50.convert("-1/8")
    assert abs(fc_series(2, 0, y, ctx50).value - 2 * m.log(fc_G(2, y, ctx50))) < 1e-50
    half = m.mpf(0.5)
    assert abs(fc_series(1, 1, half, ctx50).value - li(2, half, ctx50)) < 1e-50


def test_fc_series_boundary_reference(ctx30):
    # partial sums at N = 250..8000 with the tail N^-(2.5 + j) eliminated by a linear solve
    with mpmath.workdps(40):
        x = mpmath.mpf(4) / 27
        ns = [250, 500, 1000, 2000, 4000, 8000]
        sums, t, s = [], 3 * x, mpmath.mpf(0)
        for n in range(1, ns[-1] + 1):
            s += t / mpmath.mpf(n) ** 3
            if n in ns:
                sums.append(s)
            t *= mpmath.mpf((3 * n + 1) * (3 * n + 2) * (3 * n + 3)) / ((n + 1) * (2 * n + 1) * (2 * n + 2)) * x
        mat = mpmath.matrix([[1] + [mpmath.mpf(n) ** -(mpmath.mpf(1.5) + j) for j in range(1, len(ns))]
                             for n in ns])
        ref = mpmath.lu_solve(mat, mpmath.matrix(sums))[0]
    assert abs(fc_series(3, 2, "4/27", ctx30).value - ref) < 1e-17


@pytest.mark.parametrize("m", [2, 3])
def test_fc_series_log_identity(ctx50, m):
    r = fuss_radius(m, ctx50)
    for frac in ("-0.9", "-0.3", "0.5", "0.95"):
        x = ctx50.convert(frac) * r
        got = fc_series(m, 0, x, ctx50).value
        assert abs(got - m * ctx50.mp.log(fc_G(m, x, ctx50))) <= 10 * ctx50.target_tol


def test_fuss_params_rejected(ctx30):
    with pytest.raises(InvalidInput):
        FussParams(0, 1, 0.1).validate(ctx30)
    with pytest.raises(InvalidInput):
        FussParams(2, -1, 0.1).validate(ctx30)
    with pytest.raises(DomainError):
        FussParams(3, 1, 0.2).validate(ctx30)


def test_param_cb_examples(ctx50):
    m = ctx50.mp
    assert abs(param_cb_closed(m.mpf(0.5), ctx50) - m.pi) < 1e-55
    assert abs(param_cb_closed(1, ctx50) - 2) < 1e-55
    assert abs(param_cb_direct(1, ctx50).value - 2) < 1e-40
    closed, direct, residual = param_cb_check(ctx50.convert("1/3"), ctx50)
    assert residual <= 1e-40
    with pytest.raises(PoleError):
        param_cb_closed(-2, ctx50)
    with pytest.raises(PoleError):
        param_cb_direct(0, ctx50)


def test_fuss_radius_values():
    ctx = PrecisionContext.from_digits(30)
    assert fuss_radius(1, ctx) == 1
    assert abs(fuss_radius(2, ctx) - ctx.mp.mpf(1) / 4) < 1e-35
    assert abs(fuss_radius(3, ctx) - ctx.mp.mpf(4) / 27) < 1e-35

import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apery_verify.errors import DomainError, PoleError, UnsupportedOrder
from apery_verify.gamma_suite import (bernoulli, central_weight, cot_derivative_poly, digamma,
                                      euler_gamma, gamma, gen_binom, log_gamma, polygamma,
                                      recip_central_binom)
from apery_verify.numerics import PrecisionContext


def test_bernoulli_numbers():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert bernoulli(7) == 0


def test_log_gamma_examples(ctx50):
    m = ctx50.mp
    assert abs(log_gamma(1, ctx50)) < 1e-55
    assert abs(log_gamma(5, ctx50) - m.log(24)) < 1e-55
    assert abs(log_gamma(m.mpf(0.5), ctx50) - m.log(m.pi) / 2) < 1e-55


@pytest.mark.parametrize("z", ["0.3+40i", "-7.5+0.25i", "-20.3", "1e-3", "3-200i", "-0.5-3i"])
def test_log_gamma_principal_branch(ctx50, oracle, z):
    v = log_gamma(ctx50.convert(z), ctx50)
    ref = oracle.loggamma(oracle.mpmathify(z.replace("i", "j")))
    assert abs(v - ref) < 1e-45 * max(1, abs(ref))


@pytest.mark.parametrize("z", [0, -1, -5])
def test_log_gamma_poles(ctx30, z):
    with pytest.raises(PoleError):
        log_gamma(z, ctx30)


def test_gamma_negative_real(ctx50, oracle):
    for z in ("-2.5", "-0.5", "-7.25"):
        assert abs(gamma(ctx50.convert(z), ctx50) - oracle.gamma(oracle.mpf(z))) < 1e-45


def test_digamma_examples(ctx50):
    m = ctx50.mp
    assert abs(digamma(1, ctx50) + euler_gamma(ctx50)) < 1e-55
    assert abs(polygamma(1, 1, ctx50) - m.pi ** 2 / 6) < 1e-55
    z = m.mpf(2) / 3
    assert abs(digamma(z + 1, ctx50) - digamma(z, ctx50) - 1 / z) < 1e-55


@pytest.mark.parametrize("j", [0, 1, 2, 5, 12])
@pytest.mark.parametrize("z", ["1/3", "0.3+0.2i", "-3.7", "25.5-4i", "-40.2+1i"])
def test_polygamma_against_mpmath(ctx50, oracle, j, z):
    v = polygamma(j, ctx50.convert(z), ctx50)
    ref = oracle.psi(j, ctx50.convert(z))
    assert abs(v - ref) < 1e-45 * max(1, abs(ref))


def test_polygamma_limits(ctx30):
    with pytest.raises(UnsupportedOrder):
        polygamma(13, 1, ctx30)
    with pytest.raises(PoleError):
        polygamma(2, -3, ctx30)


def test_cot_derivative_poly():
    assert cot_derivative_poly(0) == [0, 1]
    assert cot_derivative_poly(1) == [-1, 0, -1]
    assert cot_derivative_poly(2) == [0, 2, 0, 2]
    with mpmath.workdps(40):
        u = mpmath.mpf("0.7")
        for j in range(6):
            p = cot_derivative_poly(j)
            val = sum(c * mpmath.cot(u) ** k for k, c in enumerate(p))
            assert abs(val - mpmath.diff(mpmath.cot, u, j)) < 1e-25


def test_gen_binom_examples(ctx50):
    m = ctx50.mp
    assert abs(gen_binom(4, 2, ctx50) - 6) < 1e-55
    assert abs(gen_binom(1, m.mpf(0.5), ctx50) - 4 / m.pi) < 1e-55
    assert abs(gen_binom(20, 10, ctx50) - 184756) < 1e-45
    with pytest.raises(DomainError):
        gen_binom(-2, 1, ctx50)


def test_recip_central_binom_examples(ctx50):
    m = ctx50.mp
    assert recip_central_binom(-1, m.mpf(0.5), ctx50) == 0
    assert recip_central_binom(-4, m.mpf(0.5), ctx50) == 0
    assert abs(recip_central_binom(2, 0, ctx50) - m.one / 6) < 1e-55
    assert abs(recip_central_binom(0, m.mpf(0.5), ctx50) - m.pi / 4) < 1e-55


def test_recip_central_binom_negative_side(ctx50, oracle):
    # reflection branch: compare with gamma ratio evaluated by mpmath
    a = oracle.mpf(1) / 3
    for n in (-1, -3, -30, -400):
        v = recip_central_binom(n, ctx50.convert("1/3"), ctx50)
        ref = oracle.gamma(n + a + 1) ** 2 / oracle.gamma(2 * n + 2 * a + 1)
        assert abs(v - ref) < 1e-45 * abs(ref)


def test_recip_central_binom_integer_pole(ctx30):
    with pytest.raises(PoleError):
        recip_central_binom(-2, 0, ctx30)


def test_central_weight_matches_product(ctx50):
    m = ctx50.mp
    a = ctx50.convert("0.3+0.2i")
    for n in (-5, 0, 7):
        w = central_weight(n, a, ctx50)
        assert abs(w - m.power(4, n + a) * recip_central_binom(n, a, ctx50)) < 1e-45 * abs(w)


def test_legendre_duplication_grid(ctx40):
    m = ctx40.mp
    rng = random.Random(7)
    for _ in range(100):
        s = m.mpc(rng.uniform(0.01, 10), rng.uniform(-5, 5))
        lhs = gamma(s, ctx40) * gamma(s + m.mpf(0.5), ctx40)
        rhs = m.sqrt(m.pi) * m.power(2, 1 - 2 * s) * gamma(2 * s, ctx40)
        assert abs(lhs - rhs) / abs(gamma(2 * s, ctx40)) <= 10 * ctx40.target_tol


@settings(max_examples=40, deadline=None)
@given(st.floats(-30, 30, allow_nan=False), st.floats(-3, 3, allow_nan=False))
def test_reflection(re, im):
    ctx = PrecisionContext.from_digits(30)
    m = ctx.mp
    z = m.mpc(re, im)
    if im == 0 and abs(re - round(re)) < 1e-6:
        return
    val = gamma(z, ctx) * gamma(1 - z, ctx) * m.sinpi(z) / m.pi
    assert abs(val - 1) < 1e-25


def test_ratio_asymptotics(ctx40):
    m = ctx40.mp
    a, b = m.mpf(1) / 3, m.mpf(3) / 4
    prev = None
    for s in (m.mpf(100), m.mpf(1000), m.mpf(10000)):
        ratio = m.exp(log_gamma(s + a, ctx40) - log_gamma(s + b, ctx40))
        scaled = abs(ratio - s ** (a - b)) / s ** (a - b - 1)
        # the O(s^(a-b-1)) constant is (a-b)(a+b-1)/2
        assert abs(scaled - abs((a - b) * (a + b - 1) / 2)) < 1 / s * 2
        prev = scaled
    assert prev is not None


def test_central_binomial_growth(ctx40):
    m = ctx40.mp
    for n in (10 ** 3, 10 ** 4, 10 ** 5):
        v = m.power(4, n) * recip_central_binom(n, 0, ctx40) / m.sqrt(n)
        assert abs(v - m.sqrt(m.pi)) < 1.0 / n

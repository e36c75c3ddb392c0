import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apery_verify.errors import InvalidInput, NonConvergence, NonFinite
from apery_verify.numerics import (PrecisionContext, RootOfUnity, group_terms, levin_u,
                                   parse_number, rotated_terms, sum_grouped_unit_circle,
                                   sum_series)


def test_context_from_digits():
    ctx = PrecisionContext.from_digits(50)
    assert ctx.precision_bits == math.ceil(50 * math.log2(10))
    assert ctx.guard_digits == 10
    assert abs(ctx.target_tol * mpmath.mpf(10) ** 50 - 1) < 1e-15
    assert ctx.working_bits > ctx.precision_bits
    assert ctx.dps >= 60


@pytest.mark.parametrize("kwargs", [
    {"precision_bits": 32},
    {"precision_bits": 128, "target_tol": 0},
    {"precision_bits": 128, "max_terms": 0},
    {"precision_bits": 128, "guard_digits": -1},
])
def test_context_rejects_bad_fields(kwargs):
    with pytest.raises(InvalidInput):
        PrecisionContext(**kwargs)


def test_context_convert_is_exact_for_fractions(ctx50):
    v = ctx50.convert(Fraction(1, 3))
    assert abs(v * 3 - 1) < ctx50.eps


@pytest.mark.parametrize("text, re, im", [
    ("1/3", Fraction(1, 3), 0),
    ("-2/7", Fraction(-2, 7), 0),
    ("0.3+0.2i", Fraction(3, 10), Fraction(1, 5)),
    ("i", 0, 1),
    ("-i", 0, -1),
    ("1e-3-2i", Fraction(1, 1000), -2),
])
def test_parse_number(ctx30, text, re, im):
    v = parse_number(text, ctx30)
    expected = ctx30.mp.mpc(ctx30.convert(Fraction(re)), ctx30.convert(Fraction(im)))
    assert abs(v - expected) < 1e-35


@pytest.mark.parametrize("text", ["", "abc", "1/0", "1/2/3"])
def test_parse_number_rejects(ctx30, text):
    with pytest.raises(InvalidInput):
        parse_number(text, ctx30)


def test_root_of_unity_normalisation():
    assert RootOfUnity.of(2, 4) == RootOfUnity(1, 2)
    assert RootOfUnity.of(-1, 3) == RootOfUnity(2, 3)
    assert RootOfUnity.of(5, 5).is_one
    assert str(RootOfUnity.parse(" 3/7 ")) == "3/7"
    assert RootOfUnity(1, 4).inverse() == RootOfUnity(3, 4)


@pytest.mark.parametrize("args", [(2, 4), (4, 3), (0, 3), (1, 0)])
def test_root_of_unity_invariants(args):
    with pytest.raises(InvalidInput):
        RootOfUnity(*args)


@pytest.mark.parametrize("text", ["1.5", "1/3/4", "x"])
def test_root_of_unity_parse_rejects(text):
    with pytest.raises(InvalidInput):
        RootOfUnity.parse(text)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(-100, 100))
def test_root_of_unity_power_order_is_one(n, p):
    ctx = PrecisionContext.from_digits(30)
    x = RootOfUnity.of(p, n)
    assert x.power(x.order).is_one
    z = x.embed(ctx)
    assert abs(abs(z) - 1) < 10 * ctx.eps
    assert abs(z ** x.order - 1) < 100 * ctx.eps


def test_sum_geometric(ctx50):
    res = sum_series(lambda n: mpmath.mpf(2) ** -n, 1, ctx50)
    assert res.converged
    assert abs(res.value - 1) <= ctx50.target_tol
    assert res.err_estimate <= ctx50.target_tol


def test_sum_basel(ctx50):
    m = ctx50.mp

    def factory(c):
        return lambda n: c.mp.one / c.mp.mpf(n) ** 2

    res = sum_series(factory(ctx50), 1, ctx50, term_factory=factory)
    assert res.converged and res.method == "levin"
    assert abs(res.value - m.pi ** 2 / 6) <= ctx50.target_tol


def test_sum_basel_working_precision_terms():
    # terms carrying only working precision still give ~80% of the digits
    ctx = PrecisionContext.from_digits(50, target_tol=mpmath.mpf(10) ** -36)
    m = ctx.mp
    res = sum_series(lambda n: m.one / m.mpf(n) ** 2, 1, ctx)
    assert abs(res.value - m.pi ** 2 / 6) < 1e-36


def test_sum_apery_zeta3(ctx50):
    m = ctx50.mp
    res = sum_series(lambda n: (-1) ** (n + 1) / (m.mpf(n) ** 3 * m.binomial(2 * n, n)), 1, ctx50)
    assert abs(res.value - 2 * m.zeta(3) / 5) < 1e-48


def test_sum_nonconvergence():
    ctx = PrecisionContext.from_digits(30, max_terms=50)
    with pytest.raises(NonConvergence):
        sum_series(lambda n: mpmath.mpf(1) / n ** 2, 1, ctx, accelerate=False)


def test_sum_nonfinite(ctx30):
    with pytest.raises(NonFinite):
        sum_series(lambda n: mpmath.inf if n == 3 else mpmath.mpf(0), 1, ctx30)


def test_sum_monotone_refinement():
    coarse = PrecisionContext.from_digits(25)
    fine = PrecisionContext.from_digits(50, max_terms=400_000)

    def term(n):
        return mpmath.mpf(3) ** -n / n

    a = sum_series(term, 1, coarse)
    b = sum_series(term, 1, fine)
    assert abs(a.value - b.value) <= a.err_estimate + coarse.target_tol


def test_grouped_log2(ctx50):
    m = ctx50.mp
    res = sum_grouped_unit_circle(lambda n: m.one / n, RootOfUnity(1, 2), ctx50)
    assert abs(res.value + m.log(2)) < 1e-48


def test_grouped_complex_log(ctx50):
    m = ctx50.mp
    res = sum_grouped_unit_circle(lambda n: m.one / n, RootOfUnity(1, 4), ctx50)
    assert abs(res.value + m.log(1 - m.mpc(0, 1))) < 1e-48


def test_grouped_fractional_power(ctx40, oracle):
    # sum x^n n^(-3/2) = N^(-3/2) sum_r x^r zeta(3/2, r/N)
    m = ctx40.mp
    x = RootOfUnity(1, 3)
    res = sum_grouped_unit_circle(lambda n: m.mpf(n) ** m.mpf(-1.5), x, ctx40)
    z = oracle.expjpi(oracle.mpf(2) / 3)
    ref = sum(z ** r * oracle.zeta(1.5, oracle.mpf(r) / 3) for r in range(1, 4)) / oracle.mpf(3) ** 1.5
    assert abs(res.value - ref) < 1e-38


def test_grouped_block_mode_agrees(ctx30):
    # block sums converge logarithmically; that route targets about half the digits
    loose = ctx30.with_tol(mpmath.mpf(10) ** -14)
    m = ctx30.mp
    x = RootOfUnity(1, 3)
    plain = sum_grouped_unit_circle(lambda n: m.one / n ** 2, x, ctx30)
    blocks = sum_grouped_unit_circle(lambda n: m.one / n ** 2, x, loose, blocks=True)
    assert abs(plain.value - blocks.value) < 1e-14


def test_grouped_rejects_one(ctx30):
    with pytest.raises(InvalidInput):
        sum_grouped_unit_circle(lambda n: 1, RootOfUnity(0, 1), ctx30)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 9), st.integers(1, 8), st.integers(1, 12))
def test_grouping_is_exact_rearrangement(order, numer, groups):
    ctx = PrecisionContext.from_digits(20)
    x = RootOfUnity.of(numer, order)
    root = x.embed(ctx)
    term = lambda n: ctx.mp.one / (n + ctx.mp.mpf(0.25))  # noqa: E731
    gen = group_terms(term, root, x.order, 1)
    grouped = sum(next(gen) for _ in range(groups))
    flat = rotated_terms(term, root, x.order, 1)
    plain = sum(next(flat) for _ in range(groups * x.order))
    assert abs(grouped - plain) < 1e-15


def test_acceleration_matches_plain_sum(ctx30):
    m = ctx30.mp
    x = RootOfUnity(1, 2)
    acc = sum_grouped_unit_circle(lambda n: m.one / n ** 3, x, ctx30)
    plain = sum_series(lambda n: m.mpf(-1) ** n / n ** 3, 1, ctx30)
    assert abs(acc.value - plain.value) <= acc.err_estimate + plain.err_estimate + 1e-28
    assert abs(acc.value + 3 * m.zeta(3) / 4) < 1e-28


def test_levin_on_alternating_series():
    with mpmath.workdps(40):
        terms = [mpmath.mpf(-1) ** (n + 1) / n for n in range(1, 25)]
        sums = [sum(terms[: k + 1]) for k in range(len(terms))]
        value, cond = levin_u(sums, terms)
        assert abs(value - mpmath.log(2)) < 1e-25
        assert cond >= 1

"""Right-hand sides of the identities, the cot-derivative machinery and the
identity registry with residual reports.

Shorthand used below: ``L(p, x, s) = sum_{n>=1} x^n/(n+s-1)^p`` and
``pair(m, x, a) = L(m+1, x, 1-a) - (-1)^m x L(m+1, 1/x, a)``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import apery
from .bell_harmonic import c_const, c_param_sequence, d_const, d_param_sequence
from .errors import DomainError, InvalidInput, PoleError, UnsupportedOrder
from .gamma_suite import cot_derivative_poly
from .numerics import LOG2_10, ComplexValue, PrecisionContext, RootOfUnity
from .polylog import cyclotomic_li, hurwitz_pair, li, li_multi

MAX_COT_ORDER = 8


# ---------------------------------------------------------------------------
# Shared pieces


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _convolution(q: int, cs1, cs2, ds, pair_of: Callable[[int], ComplexValue], ctx: PrecisionContext):
    """``sum_{k1+..+k5=q-1} C C D 2^(k3+k4) log^k4(2)/(k1!k2!k3!k4!) * (-(-1)^k5 pair(k5))``."""
    m = ctx.mp
    log2 = m.log(2)
    pairs = {}
    total = 0
    for k1, k2, k3, k4, k5 in _compositions(q - 1, 5):
        if k5 not in pairs:
            pairs[k5] = -(-1) ** k5 * pair_of(k5)
        coeff = (cs1[k1] * cs2[k2] * ds[k3] * m.mpf(2) ** (k3 + k4) * log2 ** k4
                 / (math.factorial(k1) * math.factorial(k2) * math.factorial(k3) * math.factorial(k4)))
        total += coeff * pairs[k5]
    return total


def _cd_constants(n: int, ctx: PrecisionContext):
    cs = [c_const(k, ctx) for k in range(n + 1)]
    ds = [d_const(k, ctx) for k in range(n + 1)]
    return cs, ds


def _L(p: int, x: RootOfUnity, s, ctx: PrecisionContext):
    return cyclotomic_li(p, x, s, ctx)


def _check_q_x(q: int, x: RootOfUnity):
    if int(q) != q or q < 1:
        raise InvalidInput("q must be a positive integer")
    if q == 1 and x.is_one:
        raise InvalidInput("the case (q, x) = (1, 1) is excluded")


def _check_a(a, ctx: PrecisionContext, name: str = "a"):
    m = ctx.mp
    v = ctx.convert(a)
    if getattr(v, "imag", 0) == 0 and m.isint(m.re(v)):
        raise PoleError(f"{name} = {a} must not be an integer")
    return v


# ---------------------------------------------------------------------------
# Bilateral series with b = a


def rhs_thm21(q: int, a, x: RootOfUnity, ctx: PrecisionContext) -> ComplexValue:
    """Closed form of the bilateral series with ``b = a``.

    The coupling term ``(-1)^q pair(0, x, a) * sum binom(2n,n) x^n/(n^(q-1) 4^n)``
    is moved to the right, so the result is directly comparable to ``cpas_lhs``.
    """
    _check_q_x(q, x)
    a = _check_a(a, ctx)
    cs, ds = _cd_constants(q - 1, ctx)
    conv = _convolution(q, cs, cs, ds, lambda k: hurwitz_pair(k, x, a, ctx), ctx)
    coupling = (-1) ** q * hurwitz_pair(0, x, a, ctx) * apery.cb_series(q - 2, x, ctx).value
    return conv + coupling


def rhs_cor23(a, x: RootOfUnity, ctx: PrecisionContext) -> ComplexValue:
    if x.is_one:
        raise InvalidInput("x = 1 is excluded for q = 1")
    a = _check_a(a, ctx)
    m = ctx.mp
    xv = x.embed(ctx)
    return (xv * _L(1, x.inverse(), a, ctx) - _L(1, x, 1 - a, ctx)) / m.sqrt(1 - xv)


def rhs_cor24(a, x: RootOfUnity, ctx: PrecisionContext) -> ComplexValue:
    a = _check_a(a, ctx)
    m = ctx.mp
    xv = x.embed(ctx)
    first = _L(2, x, 1 - a, ctx) + xv * _L(2, x.inverse(), a, ctx)
    return first - 2 * hurwitz_pair(0, x, a, ctx) * m.log(1 + m.sqrt(1 - xv))


def rhs_cor25(q: int, x: RootOfUnity, ctx: PrecisionContext) -> ComplexValue:
    """Half-integer case: the convolution at shift ``1/2`` divided by ``pi``."""
    _check_q_x(q, x)
    m = ctx.mp
    half = m.mpf(0.5)
    cs, ds = _cd_constants(q - 1, ctx)
    conv = _convolution(q, cs, cs, ds, lambda k: hurwitz_pair(k, x, half, ctx), ctx)
    coupling = (-1) ** q * hurwitz_pair(0, x, half, ctx) * apery.cb_series(q - 2, x, ctx).value
    return (conv + coupling) / m.pi


def rhs_cor25_q1(x: RootOfUnity, ctx: PrecisionContext) -> ComplexValue:
    if x.is_one:
        raise InvalidInput("x = 1 is excluded for q = 1")
    m = ctx.mp
    half = m.mpf(0.5)
    xv = x.embed(ctx)
    return (xv * _L(1, x.inverse(), half, ctx) - _L(1, x, half, ctx)) / (m.pi * m.sqrt(1 - xv))


def rhs_cor25_q2(x: RootOfUnity, ctx: PrecisionContext) -> ComplexValue:
    m = ctx.mp
    half = m.mpf(0.5)
    xv = x.embed(ctx)
    first = (_L(2, x, half, ctx) + xv * _L(2, x.inverse(), half, ctx)) / m.pi
    return first - 2 / m.pi * hurwitz_pair(0, x, half, ctx) * m.log(1 + m.sqrt(1 - xv))


# ---------------------------------------------------------------------------
# Derivatives of (i - cot(pi a)) x^a


def _log_x(x, ctx: PrecisionContext):
    """``i theta`` with ``theta`` in ``(0, 2 pi)`` for ``x = e^{i theta}``."""
    mp = ctx.mp
    if isinstance(x, RootOfUnity):
        if x.is_one:
            raise DomainError("x = 1 (theta = 0) is excluded")
        t = Fraction(2 * x.numer, x.order) % 2
        return 1j * mp.pi * mp.mpf(t.numerator) / t.denominator
    xv = mp.mpc(ctx.convert(x))
    if abs(abs(xv) - 1) > 8 * ctx.eps:
        raise DomainError("x must lie on the unit circle")
    theta = mp.arg(xv)
    if theta < 0:
        theta += 2 * mp.pi
    if theta == 0:
        raise DomainError("x = 1 (theta = 0) is excluded")
    return 1j * theta


def cot_deriv_combo(m_order: int, a, x, ctx: PrecisionContext) -> ComplexValue:
    """``(pi/m!) d^m/da^m [(i - cot(pi a)) x^a]`` with ``x^a = exp(i theta a)``, ``theta`` in ``(0, 2 pi)``."""
    if int(m_order) != m_order or m_order < 0:
        raise InvalidInput("m must be a non-negative integer")
    if m_order > MAX_COT_ORDER:
        raise UnsupportedOrder(f"derivative order {m_order} exceeds {MAX_COT_ORDER}")
    mp = ctx.mp
    a = _check_a(a, ctx)
    ilog = _log_x(x, ctx)
    xa = mp.exp(ilog * a)
    c = mp.cospi(a) / mp.sinpi(a)
    total = 0
    for j in range(m_order + 1):
        poly = cot_derivative_poly(j)
        val = 0
        for coef in reversed(poly):
            val = val * c + coef
        g = -mp.pi ** j * val
        if j == 0:
            g += 1j
        total += math.comb(m_order, j) * g * ilog ** (m_order - j)
    return mp.pi / math.factorial(m_order) * total * xa


def cot_combo_m1_display(a, x, ctx: PrecisionContext) -> ComplexValue:
    """``pi^2 csc^2(pi a) x^a + pi (i - cot(pi a)) x^a log x``."""
    mp = ctx.mp
    a = _check_a(a, ctx)
    ilog = _log_x(x, ctx)
    xa = mp.exp(ilog * a)
    return mp.pi ** 2 / mp.sinpi(a) ** 2 * xa + mp.pi * (1j - mp.cospi(a) / mp.sinpi(a)) * xa * ilog


# ---------------------------------------------------------------------------
# Shifted denominators (b != a)


def rhs_thm41(q: int, a, b, x: RootOfUnity, ctx: PrecisionContext) -> ComplexValue:
    """Closed form of the bilateral series with ``(n+b)^q`` in the denominator.

    The residue at ``s = a - b`` carries the factor ``4^(a-b)`` from ``4^s``;
    it equals 1 when ``b = a``.
    """
    _check_q_x(q, x)
    mp = ctx.mp
    a = _check_a(a, ctx)
    b = _check_a(b, ctx, "b")
    d = a - b
    cs = c_param_sequence(q - 1, d, ctx)
    ds = d_param_sequence(q - 1, 2 * d, ctx)
    conv = _convolution(q, cs, cs, ds, lambda k: hurwitz_pair(k, x, b, ctx), ctx)
    coupling = (-1) ** q * hurwitz_pair(0, x, a, ctx) * apery.shifted_cb_series(q, d, x, ctx).value
    return mp.power(4, d) * conv + coupling


def rhs_thm41_bhalf(a, x: RootOfUnity, ctx: PrecisionContext) -> ComplexValue:
    """The ``q = 1``, ``b = a + 1/2`` product formula."""
    if x.is_one:
        raise InvalidInput("x = 1 is excluded for q = 1")
    mp = ctx.mp
    a = _check_a(a, ctx)
    half = mp.mpf(0.5)
    xv = x.embed(ctx)
    first = (xv * _L(1, x.inverse(), a, ctx) - _L(1, x, 1 - a, ctx)) / mp.pi
    second = (_L(1, x, half, ctx) - xv * _L(1, x.inverse(), half, ctx)) / mp.sqrt(1 - 1 / xv)
    return first * second


def thm41_bhalf_limit(a, x: RootOfUnity, ctx: PrecisionContext, exponents=(4, 5, 6, 7, 8)) -> ComplexValue:
    """Limit of :func:`rhs_thm41` at ``q = 1`` as ``b -> a + 1/2``.

    Evaluated at ``b = a + 1/2 - 10^-e`` and extrapolated to zero offset by
    Neville's polynomial scheme.
    """
    mp = ctx.mp
    a = ctx.convert(a)
    hs, vals = [], []
    for e in exponents:
        h = mp.mpf(10) ** (-e)
        hs.append(h)
        vals.append(rhs_thm41(1, a, a + mp.mpf(0.5) - h, x, ctx))
    table = list(vals)
    n = len(hs)
    for level in range(1, n):
        for i in range(n - level):
            table[i] = (hs[i] * table[i + 1] - hs[i + level] * table[i]) / (hs[i] - hs[i + level])
    return table[0]


# ---------------------------------------------------------------------------
# Central binomial and Fuss-Catalan families


class _MplCache:
    """Memoized ``Li_{k, {1}_r}(y)`` values for one argument."""

    def __init__(self, y, ctx: PrecisionContext):
        if abs(y) > 1 + 8 * ctx.eps:
            raise DomainError(f"polylog argument {ctx.mp.nstr(y, 10)} is outside the closed unit disk")
        self.y = y
        self.ctx = ctx
        self.values: dict = {}

    def __call__(self, first: int, ones: int):
        key = (first, ones)
        if key not in self.values:
            self.values[key] = li_multi((first,) + (1,) * ones, self.y, self.ctx)
        return self.values[key]


def _principal_logs(x, y, ctx: PrecisionContext, scale: int):
    """``log(x/scale)`` and ``log(y)``: real parts of the logs for real arguments, principal logs otherwise."""
    mp = ctx.mp
    if getattr(mp.convert(x), "imag", 0) == 0 and getattr(mp.convert(y), "imag", 0) == 0:
        return mp.log(abs(x) / scale), mp.log(abs(y))
    return mp.log(x / scale), mp.log(y)


def rhs_prop22(p: int, x, ctx: PrecisionContext) -> ComplexValue:
    """Multiple-polylog form of ``sum binom(2n,n) x^n/(n^(p+1) 4^n)`` at ``y = (1 - sqrt(1-x))/2``."""
    if int(p) != p or p < 1:
        raise InvalidInput("p must be a positive integer")
    mp = ctx.mp
    x = ctx.convert(x)
    if x == 0:
        raise DomainError("x = 0 makes the logarithms singular (the series is 0 there)")
    if abs(x) > 1 + 8 * ctx.eps:
        raise DomainError("|x| must be at most 1")
    y = (1 - mp.sqrt(1 - x)) / 2
    mpl = _MplCache(y, ctx)
    l1, l2 = _principal_logs(x, y, ctx, 4)
    total = 0
    for k in range(p):
        for j in range(k + 1):
            for l in range(k - j + 1):
                coef = ((-1) ** (j + l + k) * (j + 1) * l1 ** (p - 1 - k) * l2 ** (k - j - l)
                        / (math.factorial(p - 1 - k) * math.factorial(k - j - l)))
                total += coef * (mpl(l + 1, j + 1) - mpl(l + 2, j))
    return -2 * total


def rhs_case1(x, ctx: PrecisionContext) -> ComplexValue:
    mp = ctx.mp
    x = ctx.convert(x)
    s = mp.sqrt(1 - x)
    return 2 * li(2, (1 - s) / 2, ctx) - mp.log((1 + s) / 2) ** 2


def rhs_case2(x, ctx: PrecisionContext) -> ComplexValue:
    mp = ctx.mp
    x = ctx.convert(x)
    s = mp.sqrt(1 - x)
    y = (1 - s) / 2
    lg = mp.log((1 + s) / 2)
    return (2 * lg * li(2, y, ctx) - lg ** 3 / 3 + 2 * li_multi((2, 1), y, ctx) + 2 * li(3, y, ctx))


def _w_arg(x, ctx: PrecisionContext):
    mp = ctx.mp
    s = mp.sqrt(1 + x)
    return (s - 1) / (s + 1), s


def rhs_case2_1(x, ctx: PrecisionContext) -> ComplexValue:
    mp = ctx.mp
    x = ctx.convert(x)
    w, s = _w_arg(x, ctx)
    return -2 * li(2, w, ctx) - 2 * mp.log(2 / (1 + s)) ** 2


def rhs_case2_2(x, ctx: PrecisionContext) -> ComplexValue:
    mp = ctx.mp
    x = ctx.convert(x)
    w, s = _w_arg(x, ctx)
    lg = mp.log(2 / (1 + s))
    li2 = li(2, w, ctx)
    return (2 * mp.log(4 / abs(x) * abs(w)) * (li2 + lg ** 2) - 2 * li(3, w, ctx)
            + 4 * li_multi((2, 1), w, ctx) - mp.mpf(8) / 3 * lg ** 3)


def rhs_thm51(m: int, p: int, x, ctx: PrecisionContext) -> ComplexValue:
    """Multiple-polylog form of ``sum binom(mn,n) x^n/n^(p+1)`` at ``y = 1 - 1/G_m(x)``."""
    apery.FussParams(m, p, x).validate(ctx)
    if p < 1:
        raise InvalidInput("p must be a positive integer")
    x = ctx.convert(x)
    if x == 0:
        raise DomainError("x = 0 makes the logarithms singular (the series is 0 there)")
    y = 1 - 1 / apery.fc_G(m, x, ctx)
    mpl = _MplCache(y, ctx)
    l1, l2 = _principal_logs(x, y, ctx, 1)
    total = 0
    for k in range(p):
        for j in range(k + 1):
            for l in range(k - j + 1):
                coef = ((-1) ** (j + l + k) * (j + 1) * (m - 1) ** j * l1 ** (p - 1 - k) * l2 ** (k - j - l)
                        / (math.factorial(p - 1 - k) * math.factorial(k - j - l)))
                total += coef * ((m - 1) * mpl(l + 1, j + 1) - mpl(l + 2, j))
    return -m * total


def _afsn_sum(p: int, mult: int, lx, y, ctx: PrecisionContext):
    mpl = _MplCache(y, ctx)
    ly = ctx.mp.log(abs(y)) if getattr(y, "imag", 0) == 0 else ctx.mp.log(y)
    total = 0
    for k in range(p):
        for j in range(k + 1):
            for l in range(k - j + 1):
                coef = ((-1) ** (l + k) * (j + 1) * mult ** (j + 1) * lx ** (p - 1 - k) * ly ** (k - j - l)
                        / (math.factorial(p - 1 - k) * math.factorial(k - j - l)))
                total += coef * (mpl(l + 2, j) + mult * mpl(l + 1, j + 1))
    return -total


def rhs_thm52(m: int, p: int, x, ctx: PrecisionContext) -> ComplexValue:
    """Multiple-polylog form of ``sum binom(mn,n) (-x)^n/n^(p+1)`` at ``y = 1 - G_m(-x)``."""
    mp = ctx.mp
    apery.FussParams(m, p, x).validate(ctx)
    if p < 1:
        raise InvalidInput("p must be a positive integer")
    x = ctx.convert(x)
    if m == 1 and not (getattr(x, "imag", 0) == 0 and -0.5 < x < 1):
        raise DomainError("for m = 1 the identity needs x in (-1/2, 1)")
    if x == 0:
        raise DomainError("x = 0 makes the logarithms singular (the series is 0 there)")
    y = 1 - apery.fc_G(m, -x, ctx)
    lx = mp.log(abs(x)) if getattr(x, "imag", 0) == 0 else mp.log(x)
    return _afsn_sum(p, m, lx, y, ctx)


def rhs_cor53(m: int, x, ctx: PrecisionContext) -> ComplexValue:
    mp = ctx.mp
    x = ctx.convert(x)
    g = apery.fc_G(m, -x, ctx)
    return -m * li(2, 1 - g, ctx) - mp.mpf(m) ** 2 / 2 * mp.log(g) ** 2


def rhs_cor54(p: int, x, ctx: PrecisionContext) -> ComplexValue:
    mp = ctx.mp
    x = ctx.convert(x)
    if x == 0:
        raise DomainError("x = 0 makes the logarithms singular (the series is 0 there)")
    if abs(x) > 1 + 8 * ctx.eps:
        raise DomainError("|x| must be at most 1")
    w, _ = _w_arg(x, ctx)
    lx = mp.log(abs(x) / 4) if getattr(x, "imag", 0) == 0 else mp.log(x / 4)
    return _afsn_sum(p, 2, lx, w, ctx)


def _li21_pieces(x, ctx: PrecisionContext):
    mp = ctx.mp
    x = ctx.convert(x)
    if x == 0:
        raise DomainError("x = 0 makes the logarithms singular")
    s = mp.sqrt(1 - x)
    y = (1 - s) / 2
    w = (s - 1) / (s + 1)
    lg = mp.log((1 + s) / 2)
    lhs = 2 * li_multi((2, 1), y, ctx) - 4 * li_multi((2, 1), w, ctx)
    printed = (2 * mp.log(4 / abs(x) * abs(w)) * (li(2, w, ctx) + lg ** 2)
               - 2 * li(3, y, ctx) - 2 * li(3, w, ctx) + 3 * lg ** 3)
    return lhs, printed, lg, y


def li21_printed_sides(x, ctx: PrecisionContext) -> tuple[ComplexValue, ComplexValue]:
    """The ``Li_{2,1}`` cross relation exactly as displayed; it is off by ``-2 log((1+s)/2) Li2(y)``."""
    lhs, printed, _, _ = _li21_pieces(x, ctx)
    return lhs, printed


def li21_cross_sides(x, ctx: PrecisionContext) -> tuple[ComplexValue, ComplexValue]:
    """Both sides of the ``Li_{2,1}`` relation from equating the two ``p = 2`` forms.

    With ``s = sqrt(1-x)``, ``y = (1-s)/2`` and ``w = (s-1)/(s+1)``, equating
    :func:`rhs_case2` at ``x`` with :func:`rhs_case2_2` at ``-x`` leaves the
    term ``-2 log((1+s)/2) Li2(y)`` on the right.
    """
    lhs, printed, lg, y = _li21_pieces(x, ctx)
    return lhs, printed - 2 * lg * li(2, y, ctx)


# ---------------------------------------------------------------------------
# Registry


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    anchor: str
    description: str
    kind: str  # parameter kinds, e.g. "q,a,x"
    grid: tuple
    evaluate: Callable = field(repr=False, compare=False)
    conditional: Callable = field(default=lambda params: False, repr=False, compare=False)


@dataclass
class IdentityReport:
    id: str
    params: dict
    lhs: Any
    rhs: Any
    residual: Any
    residual_mode: str
    tolerance: Any
    terms_used: int
    elapsed_ms: float
    passed: bool
    error: str | None = None
    details: dict = field(default_factory=dict)
    convergence: str = "absolute"  # "conditional" for the q = 1 classes


def _frac_complex(text: str) -> tuple[Fraction, Fraction]:
    """Exact parse of grid strings such as ``"1/3"`` or ``"0.3+0.2i"``."""
    s = text.replace(" ", "")
    if s.endswith("i"):
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut <= 0:
            return Fraction(0), Fraction(body or "1")
        return Fraction(body[:cut]), Fraction(body[cut:] if body[cut:] not in "+-" else body[cut:] + "1")
    return Fraction(s), Fraction(0)


def _fmt_frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def add_exact(a: str, b: str) -> str:
    """Sum of two exact grid numbers, formatted like the inputs."""
    ar, ai = _frac_complex(a)
    br, bi = _frac_complex(b)
    re, im = ar + br, ai + bi
    if im == 0:
        return _fmt_frac(re)
    sign = "+" if im > 0 else "-"
    return f"{_fmt_frac(re)}{sign}{_fmt_frac(abs(im))}i"


A_GRID = ("1/3", "1/4", "2/7", "0.3+0.2i")
X_GRID = ("1/2", "1/4", "1/3", "1/5", "3/7")  # -1, i, e^{2 pi i/3}, e^{2 pi i/5}, e^{6 pi i/7}
P_GRID = (1, 2, 3)
M_GRID = (2, 3, 4)
FUSS_FRACTIONS = (Fraction(-9, 10), Fraction(-1, 2), Fraction(-1, 4), Fraction(1, 4),
                  Fraction(1, 2), Fraction(3, 4), Fraction(9, 10))
M1_X_GRID = ("-2/5", "-1/4", "3/10", "1/2", "9/10")


def fuss_grid(m: int) -> tuple[str, ...]:
    """Seven rational points strictly inside the radius of convergence of ``G_m``."""
    r = Fraction((m - 1) ** (m - 1), m ** m)
    return tuple(_fmt_frac(f * r) for f in FUSS_FRACTIONS)


def _root(params) -> RootOfUnity:
    return RootOfUnity.parse(params["x"])


def _num(params, key, ctx):
    return ctx.convert(params[key])


def _series_eval(lhs_fn, rhs_fn):
    def run(params, ctx):
        res = lhs_fn(params, ctx)
        return res.value, rhs_fn(params, ctx), res.terms_used, {}
    return run


def _plain_eval(lhs_fn, rhs_fn):
    def run(params, ctx):
        return lhs_fn(params, ctx), rhs_fn(params, ctx), 0, {}
    return run


def _eval_thm26(params, ctx):
    m = int(params["m"])
    x = _root(params)
    a = _num(params, "a", ctx)
    lhs = hurwitz_pair(m, x, a, ctx)
    rhs = cot_deriv_combo(m, a, x, ctx)
    details = {}
    if m == 1:
        details["display_residual"] = abs(rhs - cot_combo_m1_display(a, x, ctx))
    return lhs, rhs, 0, details


def _eval_bhalf(params, ctx):
    a = _num(params, "a", ctx)
    x = _root(params)
    mp = ctx.mp
    res = apery.bilateral_sum(1, a, a + mp.mpf(0.5), x, ctx)
    rhs = rhs_thm41_bhalf(a, x, ctx)
    limit = thm41_bhalf_limit(a, x, ctx)
    return res.value, rhs, res.terms_used, {"limit_residual": abs(limit - rhs)}


def _eval_li21(params, ctx):
    lhs, rhs = li21_cross_sides(_num(params, "x", ctx), ctx)
    return lhs, rhs, 0, {}


def _eval_zeta3(params, ctx):
    from .numerics import sum_series
    mp = ctx.mp
    state = {"c": mp.one}

    def term(n):
        state["c"] = state["c"] * (2 * n) * (2 * n - 1) / (n * n) if n > 1 else mp.mpf(2)
        return (-1) ** (n + 1) / (mp.mpf(n) ** 3 * state["c"])

    res = sum_series(term, 1, ctx, accelerate=False)
    from .polylog import zeta
    return res.value, 2 * zeta(3, ctx) / 5, res.terms_used, {}


def _eval_param_cb(params, ctx):
    a = _num(params, "a", ctx)
    res = apery.param_cb_direct(a, ctx)
    return res.value, apery.param_cb_closed(a, ctx), res.terms_used, {}


def _eval_li2_half(params, ctx):
    mp = ctx.mp
    return li(2, mp.mpf(0.5), ctx), mp.pi ** 2 / 12 - mp.log(2) ** 2 / 2, 0, {}


def _eval_dilog_a(params, ctx):
    mp = ctx.mp
    x = _num(params, "x", ctx)
    return 2 * li(2, -x, ctx) + 2 * li(2, x / (1 + x), ctx), -mp.log(1 + x) ** 2, 0, {}


def _eval_dilog_b(params, ctx):
    mp = ctx.mp
    x = _num(params, "x", ctx)
    s = mp.sqrt(1 - x)
    lhs = 2 * li(2, (1 - s) / 2, ctx) + 2 * li(2, (s - 1) / (s + 1), ctx)
    return lhs, -mp.log((1 + s) / 2) ** 2, 0, {}


def _grid(*dicts) -> tuple:
    return tuple(tuple(sorted((k, str(v)) for k, v in d.items())) for d in dicts)


def _product(**axes) -> list[dict]:
    keys = list(axes)
    out: list[dict] = [{}]
    for k in keys:
        out = [dict(d, **{k: v}) for d in out for v in axes[k]]
    return out


def _build_registry() -> dict[str, IdentitySpec]:
    reg: list[IdentitySpec] = []

    def add(id_, anchor, description, kind, grid, evaluate, conditional=None):
        reg.append(IdentitySpec(id_, anchor, description, kind, _grid(*grid), evaluate,
                                conditional or (lambda params: False)))

    thm21_grid = _product(q=(2, 3, 4), a=A_GRID, x=X_GRID) + _product(q=(2, 3), a=("1/3",), x=("0/1",))
    add("THM21", "equ-thm-CPAS: \"cyclotomic Hurwitz zeta function\"",
        "bilateral series vs. Bell-constant convolution of cyclotomic Hurwitz values", "q,a,x",
        thm21_grid,
        _series_eval(lambda p, c: apery.cpas_lhs(apery.CpasParams(int(p["q"]), _num(p, "a", c), _root(p)), c),
                     lambda p, c: rhs_thm21(int(p["q"]), _num(p, "a", c), _root(p), c)))
    add("PROP22", "equ-thm-CAS: \"denotes the sequence of $1$ repeated\"",
        "sum binom(2n,n) x^n/(n^(p+1) 4^n) as multiple polylogarithms", "p,x",
        _product(p=P_GRID, x=("-1", "-1/2", "1/2", "1", "i")),
        _series_eval(lambda p, c: apery.cb_series(int(p["p"]), _num(p, "x", c), c),
                     lambda p, c: rhs_prop22(int(p["p"]), _num(p, "x", c), c)))
    add("COR23", "equ-cor-case-CPAS-one: \"Let $x$ be a root of unity and $x\\neq 1$\"",
        "q = 1 bilateral series (conditionally convergent)", "a,x",
        _product(a=A_GRID, x=X_GRID),
        _series_eval(lambda p, c: apery.cpas_lhs(apery.CpasParams(1, _num(p, "a", c), _root(p)), c),
                     lambda p, c: rhs_cor23(_num(p, "a", c), _root(p), c)),
        lambda params: True)
    add("COR24", "equ-cor-case-CPAS",
        "q = 2 bilateral series", "a,x",
        _product(a=A_GRID, x=X_GRID + ("0/1",)),
        _series_eval(lambda p, c: apery.cpas_lhs(apery.CpasParams(2, _num(p, "a", c), _root(p)), c),
                     lambda p, c: rhs_cor24(_num(p, "a", c), _root(p), c)))
    add("COR25", "equ-cor-CPAS-casea: \"taking the limit as $a\\rightarrow 1/2$\"",
        "half-integer series vs. convolution at shift 1/2", "q,x",
        _product(q=(1, 2, 3, 4), x=X_GRID) + _product(q=(2, 3), x=("0/1",)),
        _series_eval(lambda p, c: apery.half_integer_lhs(int(p["q"]), _root(p), c),
                     lambda p, c: rhs_cor25(int(p["q"]), _root(p), c)),
        lambda params: params.get("q") == "1")
    add("COR25_Q1", "equ-cor-CPAS-casea, q = 1: \"setting $q=1,2$ in\"",
        "q = 1 half-integer series closed form", "x",
        _product(x=X_GRID),
        _series_eval(lambda p, c: apery.half_integer_lhs(1, _root(p), c),
                     lambda p, c: rhs_cor25_q1(_root(p), c)),
        lambda params: True)
    add("COR25_Q2", "equ-cor-CPAS-casea, q = 2: \"setting $q=1,2$ in\"",
        "q = 2 half-integer series closed form", "x",
        _product(x=X_GRID + ("0/1",)),
        _series_eval(lambda p, c: apery.half_integer_lhs(2, _root(p), c),
                     lambda p, c: rhs_cor25_q2(_root(p), c)))
    add("THM26", "equ-thm-main-two: \"Let $x=e^{i\\theta}$ and\"",
        "Hurwitz combination vs. derivatives of (i - cot(pi a)) x^a", "m,a,x",
        _product(m=(0, 1, 2, 3), a=("1/4", "1/3", "0.2+0.1i"), x=("1/6", "2/5")),
        _eval_thm26)
    thm41_grid = [dict(d, b=add_exact(d["a"], d.pop("d"))) for d in _product(q=(2, 3), a=A_GRID, d=("1/7", "1/3"), x=X_GRID)]
    add("THM41", "equ-general-thm-CPAS: \"digamma function and its higher derivatives\"",
        "shifted bilateral series vs. parametric Bell convolution", "q,a,b,x",
        thm41_grid,
        _series_eval(lambda p, c: apery.cpas_lhs(apery.CpasParams(int(p["q"]), _num(p, "a", c), _root(p),
                                                                  _num(p, "b", c)), c),
                     lambda p, c: rhs_thm41(int(p["q"]), _num(p, "a", c), _num(p, "b", c), _root(p), c)))
    add("THM41_BHALF", "equ-general-thm-CPAS, q = 1, b -> a + 1/2: \"noting that $\\lim_{x\\rightarrow -1}D_0(x)=0$\"",
        "b = a + 1/2 product formula (and the extrapolated limit of the general form)", "a,x",
        _product(a=("1/5", "1/3"), x=("1/2", "1/4")),
        _eval_bhalf, lambda params: True)
    add("THM51", "FSN3: \"For positive integers $m$ and $p$\"",
        "sum binom(mn,n) x^n/n^(p+1) at y = 1 - 1/G_m(x)", "m,p,x",
        [d for m in M_GRID for d in _product(m=(m,), p=P_GRID, x=fuss_grid(m))]
        + _product(m=(1,), p=P_GRID, x=M1_X_GRID),
        _series_eval(lambda p, c: apery.fc_series(int(p["m"]), int(p["p"]), _num(p, "x", c), c),
                     lambda p, c: rhs_thm51(int(p["m"]), int(p["p"]), _num(p, "x", c), c)))
    add("THM52", "AFSN3: \"For positive integers $m>1$ and $p$\"",
        "sum binom(mn,n) (-x)^n/n^(p+1) at y = 1 - G_m(-x)", "m,p,x",
        [d for m in M_GRID for d in _product(m=(m,), p=P_GRID, x=fuss_grid(m))]
        + _product(m=(1,), p=P_GRID, x=M1_X_GRID),
        _series_eval(lambda p, c: apery.fc_series(int(p["m"]), int(p["p"]), -_num(p, "x", c), c),
                     lambda p, c: rhs_thm52(int(p["m"]), int(p["p"]), _num(p, "x", c), c)))
    add("COR53", "equ-cor-sec4-one",
        "p = 1 case: -m Li2(1 - G_m(-x)) - (m^2/2) log^2 G_m(-x)", "m,x",
        [d for m in M_GRID for d in _product(m=(m,), x=fuss_grid(m))] + _product(m=(1,), x=M1_X_GRID),
        _series_eval(lambda p, c: apery.fc_series(int(p["m"]), 1, -_num(p, "x", c), c),
                     lambda p, c: rhs_cor53(int(p["m"]), _num(p, "x", c), c)))
    add("COR54", "equ-cor-anotherexa",
        "m = 2 case with argument (sqrt(1+x)-1)/(sqrt(1+x)+1)", "p,x",
        _product(p=P_GRID, x=("-3/4", "-1/2", "1/4", "1/2", "1")),
        _series_eval(lambda p, c: apery.cb_series(int(p["p"]), -_num(p, "x", c), c),
                     lambda p, c: rhs_cor54(int(p["p"]), _num(p, "x", c), c)))
    case_x = ("-1", "-1/2", "1/2", "1", "i")
    add("EQ_CASE1", "case-equ-apery-1: \"Setting $p=1$ and $2$\"",
        "p = 1: 2 Li2(y) - log^2((1+sqrt(1-x))/2)", "x", _product(x=case_x),
        _series_eval(lambda p, c: apery.cb_series(1, _num(p, "x", c), c),
                     lambda p, c: rhs_case1(_num(p, "x", c), c)))
    add("EQ_CASE2", "case-equ-apery-2: \"Setting $p=1$ and $2$\"",
        "p = 2 closed form with Li_{2,1}", "x", _product(x=case_x),
        _series_eval(lambda p, c: apery.cb_series(2, _num(p, "x", c), c),
                     lambda p, c: rhs_case2(_num(p, "x", c), c)))
    case2_x = ("-1", "-1/2", "1/4", "1/2", "1")
    add("EQ_CASE2_1", "case2-equ-apery-1",
        "alternating p = 1 form", "x", _product(x=case2_x),
        _series_eval(lambda p, c: apery.cb_series(1, -_num(p, "x", c), c),
                     lambda p, c: rhs_case2_1(_num(p, "x", c), c)))
    add("EQ_CASE2_2", "case2-equ-apery-2",
        "alternating p = 2 form", "x", _product(x=case2_x),
        _series_eval(lambda p, c: apery.cb_series(2, -_num(p, "x", c), c),
                     lambda p, c: rhs_case2_2(_num(p, "x", c), c)))
    add("DILOG_A", "cor-one-case-1: \"setting $m=1$ yields the following known result\"",
        "2 Li2(-x) + 2 Li2(x/(1+x)) + log^2(1+x) = 0", "x",
        _product(x=("-2/5", "-1/4", "3/10", "1/2", "9/10")), _eval_dilog_a)
    add("DILOG_B", "case-speci-x",
        "2 Li2((1-s)/2) + 2 Li2((s-1)/(s+1)) + log^2((1+s)/2) = 0, s = sqrt(1-x)", "x",
        _product(x=("-1", "-1/2", "1/4", "1/2", "1")), _eval_dilog_b)
    add("LI21_X", "Li_{2,1} relation after case-speci-x: \"must be essentially equal\"",
        "Li_{2,1} cross identity from the two p = 2 forms (with the -2 log((1+s)/2) Li2(y) term)", "x",
        _product(x=("1/4", "1/2", "3/4", "-1/2")), _eval_li21)
    add("ZETA3_APERY", "\"proved the irrationality of $\\zeta(3)$\"",
        "sum (-1)^(n+1)/(n^3 binom(2n,n)) = (2/5) zeta(3)", "", _product(), _eval_zeta3)
    add("PARAM_CB_X1", "\"the result for $x=1$ can be derived\"",
        "sum binom(2n,n)/((n+a) 4^n) = Gamma(a)^2 4^a/(2 Gamma(2a))", "a",
        _product(a=("1/2", "1/3", "1", "5/4")), _eval_param_cb)
    add("LI2_HALF", "\"\\Li_2(1/2)=\\frac{\\pi^2}{12}\"",
        "Li2(1/2) = pi^2/12 - log^2(2)/2", "", _product(), _eval_li2_half)
    return {spec.id: spec for spec in reg}


REGISTRY: dict[str, IdentitySpec] = _build_registry()
IDENTITY_IDS: tuple[str, ...] = tuple(REGISTRY)


def context_digits(ctx: PrecisionContext) -> int:
    return int(round(ctx.precision_bits / LOG2_10))


def class_tolerance(spec: IdentitySpec, params: dict, ctx: PrecisionContext):
    """``10^-(D-10)`` for absolutely convergent classes, ``10^-(D/2)`` for the q = 1 conditional ones."""
    d = context_digits(ctx)
    mp = ctx.mp
    if spec.conditional(params):
        return mp.mpf(10) ** (-(d // 2))
    return mp.mpf(10) ** (-(d - 10))


def verify(identity: str, params: dict | None, ctx: PrecisionContext, tolerance=None) -> IdentityReport:
    """Evaluate both sides of a registered identity and compare them.

    Lower-level errors are caught and turned into a failing report.
    """
    if identity not in REGISTRY:
        raise InvalidInput(f"unknown identity {identity!r}")
    spec = REGISTRY[identity]
    params = {k: str(v) for k, v in (params or {}).items()}
    tol = ctx.mp.convert(tolerance) if tolerance is not None else class_tolerance(spec, params, ctx)
    convergence = "conditional" if spec.conditional(params) else "absolute"
    start = time.perf_counter()
    try:
        lhs, rhs, terms, details = spec.evaluate(params, ctx)
    except Exception as exc:  # noqa: BLE001 - every failure becomes a failing report
        elapsed = (time.perf_counter() - start) * 1000
        return IdentityReport(identity, params, None, None, None, "none", tol, 0, elapsed, False,
                              f"{type(exc).__name__}: {exc}", convergence=convergence)
    elapsed = (time.perf_counter() - start) * 1000
    diff = abs(lhs - rhs)
    if abs(rhs) <= 1:
        mode, residual = "absolute", diff
    else:
        mode, residual = "relative", diff / abs(rhs)
    passed = residual <= tol and all(v <= tol for v in details.values())
    return IdentityReport(identity, params, lhs, rhs, residual, mode, tol, terms, elapsed, bool(passed),
                          None, details, convergence)


def default_grid(identity: str) -> list[dict]:
    return [dict(p) for p in REGISTRY[identity].grid]


ROOT_X_IDS = frozenset({"THM21", "COR23", "COR24", "COR25", "COR25_Q1", "COR25_Q2", "THM26", "THM41", "THM41_BHALF"})
Q1_IDS = frozenset({"COR23", "COR25_Q1", "THM41_BHALF"})
FUSS_IDS = frozenset({"THM51", "THM52", "COR53"})
UNIT_DISK_IDS = frozenset({"PROP22", "COR54", "EQ_CASE1", "EQ_CASE2", "EQ_CASE2_1", "EQ_CASE2_2",
                           "DILOG_B", "LI21_X"})


def _int_param(params: dict, key: str, low: int) -> int:
    try:
        v = int(params[key])
    except ValueError as exc:
        raise InvalidInput(f"{key} must be an integer, got {params[key]!r}") from exc
    if v < low:
        raise InvalidInput(f"{key} must be >= {low}")
    return v


def validate_params(identity: str, params: dict, ctx: PrecisionContext) -> None:
    """Check a parameter record against the hypotheses of ``identity``.

    Raises :class:`InvalidInput` (or a subclass of :class:`AperyError`) with a
    message naming the violated condition.
    """
    if identity not in REGISTRY:
        raise InvalidInput(f"unknown identity {identity!r}")
    spec = REGISTRY[identity]
    needed = [k for k in spec.kind.split(",") if k]
    missing = [k for k in needed if k not in params]
    if missing:
        raise InvalidInput(f"{identity} needs parameters {', '.join(missing)}")
    extra = sorted(set(params) - set(needed))
    if extra:
        raise InvalidInput(f"{identity} does not take parameters {', '.join(extra)}")
    mp = ctx.mp
    q = _int_param(params, "q", 1) if "q" in params else None
    if "m" in params:
        _int_param(params, "m", 0 if identity == "THM26" else 1)
        if identity == "THM26" and int(params["m"]) > MAX_COT_ORDER:
            raise UnsupportedOrder(f"derivative order exceeds {MAX_COT_ORDER}")
    if "p" in params:
        _int_param(params, "p", 1)
    for key in ("a", "b"):
        if key in params:
            v = ctx.convert(params[key])
            if identity == "PARAM_CB_X1":
                if getattr(v, "imag", 0) != 0 or v <= 0:
                    raise InvalidInput("a must be a positive real number")
            elif getattr(v, "imag", 0) == 0 and mp.isint(mp.re(v)):
                raise PoleError(f"{key} = {params[key]} must not be an integer")
    if identity in ROOT_X_IDS:
        x = RootOfUnity.parse(params["x"])
        if q == 1 and x.is_one:
            raise InvalidInput("the case (q, x) = (1, 1) is excluded: the series diverges")
        if (identity in Q1_IDS or identity == "THM26") and x.is_one:
            raise InvalidInput(f"x = 1 is excluded for {identity}")
        if identity == "THM41":
            apery.CpasParams(q, params["a"], x, params["b"]).validate(ctx)
    elif "x" in params:
        x = ctx.convert(params["x"])
        if x == 0:
            raise DomainError("x = 0 makes the logarithms singular")
        if identity in FUSS_IDS:
            m = int(params["m"])
            apery.FussParams(m, int(params.get("p", 1)), x).validate(ctx)
            if m == 1 and not (getattr(x, "imag", 0) == 0 and -0.5 < x < 1):
                raise DomainError("for m = 1 the identity needs x in (-1/2, 1)")
        elif identity in UNIT_DISK_IDS and abs(x) > 1 + 8 * ctx.eps:
            raise DomainError("|x| must be at most 1")
        elif identity == "DILOG_A" and not (getattr(x, "imag", 0) == 0 and -0.5 < x < 1):
            raise DomainError("x must lie in (-1/2, 1)")

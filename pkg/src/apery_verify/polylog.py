"""Polylogarithms on the closed unit disk and cyclotomic Hurwitz zeta values.

Notation used throughout the package::

    li(k, z)                 = sum_{n>=1} z^n / n^k
    li_multi((k1..kr), z)    = sum_{n1>...>nr>=1} z^n1 / (n1^k1 ... nr^kr)
    cyclotomic_li(p, x, s)   = sum_{n>=1} x^n / (n+s-1)^p      (x a root of unity)
    gen_digamma(s, x)        = sum_{k>=0} x^k / (k+s)
    ext_trig(s, x)           = gen_digamma(s, x) - gen_digamma(-s, 1/x) - 1/s
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InvalidInput, PoleError
from .gamma_suite import bernoulli, polygamma
from .numerics import ComplexValue, PrecisionContext, RootOfUnity, sum_series


@dataclass(frozen=True)
class Composition:
    ks: tuple[int, ...]

    def __post_init__(self):
        ks = tuple(int(k) for k in self.ks)
        if not ks or any(k < 1 for k in ks):
            raise InvalidInput("a composition is a non-empty tuple of positive integers")
        object.__setattr__(self, "ks", ks)

    @property
    def weight(self) -> int:
        return sum(self.ks)

    @property
    def depth(self) -> int:
        return len(self.ks)


@dataclass(frozen=True)
class HurwitzArg:
    """Parameters of ``sum_{n>=1} x^n / (n+b)^p``."""

    p: int
    x: RootOfUnity
    b: ComplexValue = 0


def _is_zero(v) -> bool:
    return v == 0


def _is_nonpositive_int(m, v) -> bool:
    v = m.convert(v)
    return getattr(v, "imag", 0) == 0 and m.isint(m.re(v)) and m.re(v) <= 0


# ---------------------------------------------------------------------------
# Hurwitz zeta (integer order) by Euler-Maclaurin


def hurwitz_zeta(p: int, c, ctx: PrecisionContext) -> ComplexValue:
    """``sum_{n>=0} (n+c)^-p`` for integer ``p >= 2`` and ``c`` not a non-positive integer."""
    if p < 2:
        raise DomainError("hurwitz_zeta needs p >= 2")
    m = ctx.mp
    c = m.convert(c)
    if _is_nonpositive_int(m, c):
        raise PoleError(f"hurwitz_zeta has a pole at c = {c}")
    radius = max(10, int(0.12 * ctx.working_bits) + p + 10)
    head = 0
    w = c
    while m.re(w) < radius:
        head += w ** (-p)
        w += 1
    # Euler-Maclaurin tail at large |w|
    eps = ctx.eps
    s = w ** (1 - p) / (p - 1) + w ** (-p) / 2
    winv2 = 1 / (w * w)
    power = w ** (-p - 1)
    rising = Fraction(p)  # (p)_{2k-1}
    k = 1
    while True:
        b = bernoulli(2 * k)
        coeff = b / math.factorial(2 * k) * rising
        term = m.mpf(coeff.numerator) / coeff.denominator * power
        s += term
        if abs(term) < eps * abs(s):
            break
        rising *= (p + 2 * k - 1) * (p + 2 * k)
        power *= winv2
        k += 1
        if k > 4 * ctx.working_bits:
            break
    return head + s


@functools.lru_cache(maxsize=None)
def _zeta_table(bits: int, kmax: int, ctx: PrecisionContext) -> tuple:
    return tuple(hurwitz_zeta(k, 1, ctx) for k in range(2, kmax + 1))


def zeta(k: int, ctx: PrecisionContext):
    """Riemann zeta at an integer ``k >= 2``."""
    if int(k) != k or k < 2:
        raise DomainError("zeta(k) needs an integer k >= 2")
    kmax = 16
    while kmax < k:
        kmax *= 2
    return _zeta_table(ctx.working_bits, kmax, ctx)[k - 2]


def _zeta_any(k: int, ctx: PrecisionContext):
    """zeta at any integer except 1 (non-positive values via Bernoulli numbers)."""
    m = ctx.mp
    if k >= 2:
        return zeta(k, ctx)
    if k == 0:
        return m.mpf(-0.5)
    n = -k
    b = bernoulli(n + 1)
    v = -b / (n + 1)
    return m.mpf(v.numerator) / v.denominator


# ---------------------------------------------------------------------------
# Cyclotomic Hurwitz values


def li_hurwitz(arg: HurwitzArg, ctx: PrecisionContext) -> ComplexValue:
    """``sum_{n>=1} x^n / (n+b)^p`` via an ``N``-periodic reduction (``N = order(x)``)."""
    p, x = arg.p, arg.x
    m = ctx.mp
    b = m.convert(arg.b)
    if p < 1:
        raise DomainError("order p must be positive")
    if x.is_one and p == 1:
        raise DomainError("(p, x) = (1, 1) diverges")
    if _is_nonpositive_int(m, b + 1):
        raise PoleError(f"shift b = {b} is a negative integer")
    if x.is_one:
        return hurwitz_zeta(p, 1 + b, ctx)
    n_ord = x.order
    root = x.embed(ctx)
    total = 0
    rp = m.one
    for r in range(1, n_ord + 1):
        rp = rp * root
        arg_r = (r + b) / n_ord
        if p == 1:
            total += rp * polygamma(0, arg_r, ctx)
        else:
            total += rp * hurwitz_zeta(p, arg_r, ctx)
    if p == 1:
        return -total / n_ord
    return total / m.mpf(n_ord) ** p


def cyclotomic_li(p: int, x: RootOfUnity, s, ctx: PrecisionContext) -> ComplexValue:
    """``Li_p(x; s) = sum_{n>=1} x^n / (n+s-1)^p``."""
    return li_hurwitz(HurwitzArg(p, x, ctx.convert(s) - 1), ctx)


def hurwitz_pair(order: int, x: RootOfUnity, a, ctx: PrecisionContext) -> ComplexValue:
    """``Li_{m+1}(x; 1-a) - (-1)^m x Li_{m+1}(1/x; a)`` with ``m = order``.

    For ``x = 1`` and ``m = 0`` both pieces diverge; the symmetric difference
    ``psi(a) - psi(1-a)`` is returned.
    """
    m = ctx.mp
    a = m.convert(a)
    if x.is_one and order == 0:
        return polygamma(0, a, ctx) - polygamma(0, 1 - a, ctx)
    xv = x.embed(ctx)
    return (cyclotomic_li(order + 1, x, 1 - a, ctx)
            - (-1) ** order * xv * cyclotomic_li(order + 1, x.inverse(), a, ctx))


# ---------------------------------------------------------------------------
# Classical polylogarithm


def _check_disk(z, ctx: PrecisionContext):
    if abs(z) > 1 + 8 * ctx.eps:
        raise DomainError(f"|z| = {ctx.mp.nstr(abs(z), 8)} > 1 is outside the closed unit disk")


def li(k: int, z, ctx: PrecisionContext) -> ComplexValue:
    """Polylogarithm ``Li_k(z)`` on the closed unit disk (principal branch).

    ``z`` may be a :class:`RootOfUnity`, in which case the periodic Hurwitz
    reduction is used.
    """
    if int(k) != k or k < 1:
        raise DomainError("li needs an integer order k >= 1")
    m = ctx.mp
    if isinstance(z, RootOfUnity):
        if z.is_one and k == 1:
            raise DomainError("Li_1(1) diverges")
        return li_hurwitz(HurwitzArg(k, z, 0), ctx)
    z = m.convert(z)
    _check_disk(z, ctx)
    if _is_zero(z):
        return m.zero
    if z == 1:
        if k == 1:
            raise DomainError("Li_1(1) diverges")
        return zeta(k, ctx)
    if k == 1:
        return -m.log(1 - z)
    if abs(z) <= 0.5:
        return _li_power_series(k, z, ctx)
    return _li_log_series(k, z, ctx)


def _li_power_series(k: int, z, ctx: PrecisionContext):
    m = ctx.mp
    state = {"zn": m.one}

    def term(n):
        state["zn"] *= z
        return state["zn"] / m.mpf(n) ** k

    return sum_series(term, 1, ctx.with_tol(ctx.eps), accelerate=False).value


def _li_log_series(k: int, z, ctx: PrecisionContext):
    """Expansion in ``mu = log z``, valid for ``|mu| < 2 pi``."""
    m = ctx.mp
    mu = m.log(z)
    harmonic = sum(m.mpf(1) / j for j in range(1, k))
    s = mu ** (k - 1) / math.factorial(k - 1) * (harmonic - m.log(-mu))
    eps = ctx.eps
    power = m.one
    small = 0
    for j in range(0, 10 * ctx.working_bits):
        if j > 0:
            power = power * mu / j
        if j == k - 1:
            continue
        t = _zeta_any(k - j, ctx) * power
        s += t
        # odd-index Bernoulli numbers vanish, so require several small terms in a row
        if j > k and abs(t) < eps * abs(s):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    return s


# ---------------------------------------------------------------------------
# Multiple polylogarithms


def _word(ks) -> list[int]:
    w: list[int] = []
    for k in ks:
        w.extend([0] * (k - 1))
        w.append(1)
    return w


def _ks_from_word(word) -> tuple[int, ...]:
    ks = []
    run = 0
    for letter in word:
        run += 1
        if letter == 1:
            ks.append(run)
            run = 0
    return tuple(ks)


def li_multi(ks, z, ctx: PrecisionContext) -> ComplexValue:
    """Single-variable multiple polylogarithm ``Li_{k1,...,kr}(z)``."""
    if not isinstance(ks, Composition):
        ks = Composition(tuple(ks))
    kk = ks.ks
    m = ctx.mp
    if isinstance(z, RootOfUnity):
        z = z.embed(ctx)
    z = m.convert(z)
    _check_disk(z, ctx)
    on_circle = abs(abs(z) - 1) <= 8 * ctx.eps
    if kk[0] == 1 and on_circle:
        raise DomainError("Li_{1,...}(z) with |z| = 1 is not supported")
    if len(kk) == 1:
        return li(kk[0], z, ctx)
    if _is_zero(z):
        return m.zero
    if z == 1:
        return _mzv_split(kk, ctx)
    return _nested_sum(kk, z, ctx, accelerate=on_circle)


def _nested_sum(kk, z, ctx: PrecisionContext, accelerate: bool = False):
    m = ctx.mp
    r = len(kk)
    inner = [m.zero] * (r + 1)  # inner[d] = sum over n > n_d > ... with the last index <= n-1
    inner[r] = m.one
    state = {"zn": m.one, "n": 0}

    def term(n):
        if n != state["n"] + 1:
            raise RuntimeError("nested sum terms must be requested in order")
        state["n"] = n
        state["zn"] *= z
        nn = m.mpf(n)
        t = state["zn"] / nn ** kk[0] * inner[1]
        # advance inner sums to include index n; outer levels use the old inner values
        for d in range(1, r):
            inner[d] += inner[d + 1] / nn ** kk[d]
        return t

    # terms below n = r vanish identically; skip them so the stopping rule never sees a zero run
    for n in range(1, r):
        term(n)
    tol_ctx = ctx.with_tol(ctx.eps * 16)
    if accelerate:
        tol_ctx = ctx.with_tol(ctx.target_tol)
    return sum_series(term, r, tol_ctx, accelerate=accelerate).value


def _mzv_split(kk, ctx: PrecisionContext):
    """Value at ``z = 1`` by splitting the iterated integral at ``t = 1/2``."""
    m = ctx.mp
    word = _word(kk)
    half = m.mpf(0.5)
    total = m.zero
    for j in range(len(word) + 1):
        upper = [1 - letter for letter in reversed(word[:j])]
        lower = word[j:]
        f_up = m.one if not upper else li_multi(_ks_from_word(upper), half, ctx)
        f_lo = m.one if not lower else li_multi(_ks_from_word(lower), half, ctx)
        total += f_up * f_lo
    return total


# ---------------------------------------------------------------------------
# Generalized digamma and the extended trigonometric function


def gen_digamma(s, x: RootOfUnity, ctx: PrecisionContext) -> ComplexValue:
    """``sum_{k>=0} x^k / (k+s)`` for ``x != 1`` a root of unity."""
    m = ctx.mp
    s = m.convert(s)
    if x.is_one:
        raise DomainError("gen_digamma needs x != 1")
    if _is_nonpositive_int(m, s):
        raise PoleError(f"gen_digamma has a pole at s = {s}")
    n_ord = x.order
    root = x.embed(ctx)
    total = 0
    rp = m.one
    for r in range(n_ord):
        total += rp * polygamma(0, (r + s) / n_ord, ctx)
        rp *= root
    return -total / n_ord


def ext_trig(s, x: RootOfUnity, ctx: PrecisionContext) -> ComplexValue:
    """``gen_digamma(s, x) - gen_digamma(-s, 1/x) - 1/s`` for non-integer ``s``."""
    m = ctx.mp
    s = m.convert(s)
    if getattr(s, "imag", 0) == 0 and m.isint(m.re(s)):
        raise PoleError(f"ext_trig has a pole at the integer {s}")
    return gen_digamma(s, x, ctx) - gen_digamma(-s, x.inverse(), ctx) - 1 / s


def ext_trig_laurent(n: int, x: RootOfUnity, order: int, ctx: PrecisionContext) -> list:
    """Regular-part coefficients of ``ext_trig`` about the integer ``n``.

    ``ext_trig(s) = x^-n (1/(s-n) + sum_m c_m (s-n)^m)`` with
    ``c_m = (-1)^m Li_{m+1}(x) - Li_{m+1}(1/x)``; returns ``[x^-n * c_m]``.
    """
    if x.is_one:
        raise DomainError("ext_trig needs x != 1")
    xinv_n = x.power(-n).embed(ctx)
    out = []
    for k in range(order + 1):
        c = (-1) ** k * li(k + 1, x, ctx) - li(k + 1, x.inverse(), ctx)
        out.append(xinv_n * c)
    return out


def ext_trig_shifted_taylor(n: int, a, x: RootOfUnity, order: int, ctx: PrecisionContext) -> list:
    """Taylor coefficients of ``ext_trig(s - a, x)`` about ``s = -n`` (``n >= 0``).

    Coefficient ``m`` is ``x^n ((-1)^m Li_{m+1}(x; 1-a) - x Li_{m+1}(1/x; a))``.
    """
    m = ctx.mp
    a = m.convert(a)
    xv = x.embed(ctx)
    xn = x.power(n).embed(ctx)
    out = []
    for k in range(order + 1):
        c = (-1) ** k * cyclotomic_li(k + 1, x, 1 - a, ctx) - xv * cyclotomic_li(k + 1, x.inverse(), a, ctx)
        out.append(xn * c)
    return out

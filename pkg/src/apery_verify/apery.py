"""Left-hand sides: bilateral parametric Apery-like series, central binomial
series and Fuss-Catalan generating functions.

Slowly decaying sums on the unit circle are passed to the Levin u-transform
with terms generated above the working precision: twice it for ``x != 1`` and
three times it at ``x = 1``, where the sums are only logarithmically
convergent and the transform must run to high order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, InvalidInput, NoConvergence, PoleError, RangeViolation
from .gamma_suite import central_weight, gamma
from .numerics import (ComplexValue, PrecisionContext, RootOfUnity, SeriesResult,
                       _levin_terms, accelerated_sum, sum_series)


def _is_integer(m, v) -> bool:
    v = m.convert(v)
    return getattr(v, "imag", 0) == 0 and m.isint(m.re(v))


def _is_natural(m, v, include_zero: bool) -> bool:
    # parameter differences such as 5/6 - 1/3 are not exact in binary
    v = m.convert(v)
    r = m.nint(m.re(v))
    if abs(v - r) > 8 * m.eps * max(1, abs(r)):
        return False
    return r >= 0 if include_zero else r >= 1


@dataclass(frozen=True)
class CpasParams:
    """Parameters of the bilateral series ``sum_n 4^(n+a) x^-n / ((n+b)^q binom(2n+2a, n+a))``."""

    q: int
    a: ComplexValue
    x: RootOfUnity
    b: ComplexValue = None

    def validate(self, ctx: PrecisionContext) -> None:
        m = ctx.mp
        if int(self.q) != self.q or self.q < 1:
            raise InvalidInput("q must be a positive integer")
        if self.q == 1 and self.x.is_one:
            raise InvalidInput("the case (q, x) = (1, 1) is excluded: the series diverges")
        a = ctx.convert(self.a)
        if _is_integer(m, a):
            raise InvalidInput(f"a = {self.a} must not be an integer")
        if self.b is not None:
            b = ctx.convert(self.b)
            if _is_integer(m, b):
                raise InvalidInput(f"b = {self.b} must not be an integer")
            if abs(b - a) > 8 * m.eps and (_is_natural(m, b - a, True) or _is_natural(m, 2 * (b - a), False)):
                raise InvalidInput("b - a and 2(b - a) must avoid the positive integers (and b - a != 0 unless b = a)")


def _hi_context(ctx: PrecisionContext) -> PrecisionContext:
    return ctx.extended(2 * ctx.working_bits)


def _sum_twisted(make_term: Callable[[PrecisionContext], Callable[[int], ComplexValue]],
                 x: RootOfUnity, ctx: PrecisionContext, start: int) -> SeriesResult:
    """``sum_{n>=start} t(n) x^n`` where ``make_term(c)`` builds ``t`` at context ``c``.

    Terms are built with extra bits: at ``x = 1`` the transform needs them to
    resolve the logarithmic tail, and for ``x`` near ``i`` or ``-i`` its
    condition number grows fast enough to eat the working guard digits.
    """
    hi = _hi_context(ctx) if x.is_one else ctx.extended(ctx.working_bits)
    return accelerated_sum(make_term(hi), x, ctx, start=start, term_eps=hi.eps)


def _sequential(step: Callable[[int, ComplexValue], ComplexValue], first: int, value0):
    """Turn a forward recurrence into a term function called with ``first, first+1, ...``.

    Asking for ``first`` again restarts the recurrence.
    """
    state = {"n": first, "v": value0}

    def term(n):
        if n == first:
            state["n"], state["v"] = first, value0
        if n == state["n"]:
            return state["v"]
        if n != state["n"] + 1:
            raise RuntimeError("recurrence terms must be requested in order")
        state["v"] = step(state["n"], state["v"])
        state["n"] = n
        return state["v"]

    return term


def _combine(*parts: SeriesResult) -> SeriesResult:
    value = sum(p.value for p in parts)
    return SeriesResult(value, sum(p.err_estimate for p in parts), sum(p.terms_used for p in parts),
                        all(p.converged for p in parts), "+".join(p.method for p in parts))


def cpas_lhs(params: CpasParams, ctx: PrecisionContext) -> SeriesResult:
    """Bilateral sum split at ``n = 0``.

    The weights ``4^(n+a)/binom(2n+2a, n+a)`` follow the exact ratio
    ``2(n+a+1)/(2n+2a+1)`` in both directions from a log-gamma anchor at
    ``n = 0``; walking down they hit an exact zero when ``a`` is a half-integer.
    """
    params.validate(ctx)
    return bilateral_sum(params.q, params.a, params.a if params.b is None else params.b, params.x, ctx)


def bilateral_sum(q: int, a, b, x: RootOfUnity, ctx: PrecisionContext) -> SeriesResult:
    """The bilateral series without parameter validation (used for limiting cases)."""

    def positive(c: PrecisionContext):
        a_ = c.convert(a)
        b_ = c.convert(b)
        w = _sequential(lambda n, v: v * 2 * (n + a_ + 1) / (2 * n + 2 * a_ + 1), 0, central_weight(0, a_, c))
        return lambda n: w(n) / (n + b_) ** q

    def negative(c: PrecisionContext):
        a_ = c.convert(a)
        b_ = c.convert(b)
        w0 = central_weight(0, a_, c)
        # k -> k+1 walks n = -k down to n = -k-1
        w = _sequential(lambda k, v: v * (2 * a_ - 2 * k - 1) / (2 * (a_ - k)), 0, w0)
        return lambda k: w(k) / (b_ - k) ** q

    pos = _sum_twisted(positive, x.inverse(), ctx, 0)
    neg = _sum_twisted(negative, x, ctx, 1)
    return _combine(pos, neg)


def cb_series(p: int, x, ctx: PrecisionContext) -> SeriesResult:
    """``sum_{n>=1} binom(2n,n) x^n / (n^(p+1) 4^n)`` for ``p >= -1``, ``|x| <= 1``."""
    if int(p) != p or p < -1:
        raise InvalidInput("p must be an integer >= -1")
    m = ctx.mp
    root = x if isinstance(x, RootOfUnity) else None
    if root is None:
        xv = ctx.convert(x)
        if abs(xv) > 1 + 8 * ctx.eps:
            raise DomainError("cb_series needs |x| <= 1")
        if xv == 1:
            root = RootOfUnity(0, 1)
    if root is not None and root.is_one and p == -1:
        raise DomainError("(p, x) = (-1, 1) diverges")

    def make_term(c: PrecisionContext):
        cm = c.mp
        w = _sequential(lambda n, v: v * (2 * n + 1) / (2 * n + 2), 1, cm.mpf(0.5))
        return lambda n: w(n) / cm.mpf(n) ** (p + 1)

    if root is not None:
        return _sum_twisted(make_term, root, ctx, 1)
    base = make_term(ctx)
    state = {"xn": m.one}

    def term(n):
        state["xn"] *= xv
        return base(n) * state["xn"]

    return sum_series(term, 1, ctx)


def shifted_cb_series(q: int, delta, x: RootOfUnity, ctx: PrecisionContext) -> SeriesResult:
    """``sum_{n>=1} n binom(2n,n) x^n / ((n+delta)^q 4^n)``."""
    if q == 1 and x.is_one:
        raise DomainError("(q, x) = (1, 1) diverges")

    def make_term(c: PrecisionContext):
        cm = c.mp
        d = c.convert(delta)
        w = _sequential(lambda n, v: v * (2 * n + 1) / (2 * n + 2), 1, cm.mpf(0.5))
        return lambda n: n * w(n) / (n + d) ** q

    return _sum_twisted(make_term, x, ctx, 1)


def half_integer_lhs(q: int, x: RootOfUnity, ctx: PrecisionContext) -> SeriesResult:
    """``sum_{n>=1} n/(n-1/2)^q * binom(2n,n)/4^n * x^(1-n)``."""
    if int(q) != q or q < 1:
        raise InvalidInput("q must be a positive integer")
    if q == 1 and x.is_one:
        raise InvalidInput("the case (q, x) = (1, 1) is excluded: the series diverges")

    def make_term(c: PrecisionContext):
        cm = c.mp
        w = _sequential(lambda n, v: v * (2 * n + 1) / (2 * n + 2), 1, cm.mpf(0.5))
        half = cm.mpf(0.5)
        return lambda n: n * w(n) / (n - half) ** q

    res = _sum_twisted(make_term, x.inverse(), ctx, 1)
    xv = x.embed(ctx)
    return SeriesResult(res.value * xv, res.err_estimate, res.terms_used, res.converged, res.method)


# ---------------------------------------------------------------------------
# Fuss-Catalan generating function


def fuss_radius(m: int, ctx: PrecisionContext):
    """``(m-1)^(m-1)/m^m``, the radius of convergence of ``G_m`` (1 for ``m = 1``)."""
    if int(m) != m or m < 1:
        raise InvalidInput("m must be a positive integer")
    if m == 1:
        return ctx.mp.one
    return ctx.mp.mpf(m - 1) ** (m - 1) / ctx.mp.mpf(m) ** m


@dataclass(frozen=True)
class FussParams:
    m: int
    p: int
    x: ComplexValue

    def validate(self, ctx: PrecisionContext) -> None:
        if int(self.m) != self.m or self.m < 1:
            raise InvalidInput("m must be a positive integer")
        if int(self.p) != self.p or self.p < 0:
            raise InvalidInput("p must be a non-negative integer")
        _check_fuss_x(self.m, ctx.convert(self.x), ctx)


def _check_fuss_x(m: int, x, ctx: PrecisionContext) -> None:
    r = fuss_radius(m, ctx)
    if m == 1:
        if abs(x) >= 1:
            raise DomainError("for m = 1 the argument must satisfy |x| < 1")
    elif abs(x) > r * (1 + 8 * ctx.eps):
        raise DomainError(f"|x| exceeds the radius (m-1)^(m-1)/m^m = {ctx.mp.nstr(r, 10)}")


def fc_G(m: int, x, ctx: PrecisionContext) -> ComplexValue:
    """The root of ``G = 1 + x G^m`` on the branch with ``G(0) = 1``."""
    mp = ctx.mp
    x = ctx.convert(x)
    _check_fuss_x(m, x, ctx)
    if x == 0:
        return mp.one
    if m == 1:
        return 1 / (1 - x)
    r = fuss_radius(m, ctx)
    if x == r:
        return mp.mpf(m) / (m - 1)
    tol = ctx.eps * 16

    def newton(g, iters):
        for _ in range(iters):
            f = g - 1 - x * g ** m
            df = 1 - m * x * g ** (m - 1)
            step = f / df
            g -= step
            if abs(step) <= tol * abs(g):
                return g, True
        return g, False

    g, ok = newton(mp.one, 200)
    if not ok:
        g = mp.one
        for _ in range(500):
            g = 1 + x * g ** m
        g, ok = newton(g, 200)
    if not ok:
        raise NoConvergence(f"Newton iteration for G_{m}({x}) did not converge")
    if getattr(x, "imag", 0) == 0:
        g = mp.re(g)
        if not (mp.mpf(0.5) < g <= mp.mpf(m) / (m - 1) * (1 + tol)):
            raise RangeViolation(f"G_{m}({x}) = {g} left the interval (1/2, m/(m-1)]")
    return g


def fc_series(m: int, p: int, x, ctx: PrecisionContext) -> SeriesResult:
    """``sum_{n>=1} binom(mn, n) x^n / n^(p+1)``."""
    FussParams(m, p, x).validate(ctx)
    xv = ctx.convert(x)
    r = fuss_radius(m, ctx)
    boundary = m >= 2 and abs(abs(xv) - r) <= 8 * ctx.eps * r

    def make_term(c: PrecisionContext):
        cm = c.mp
        xc = c.convert(x)

        def ratio(n):
            # binom(m(n+1), n+1) / binom(mn, n)
            num = 1
            for i in range(1, m + 1):
                num *= m * n + i
            den = n + 1
            for i in range(1, m):
                den *= (m - 1) * n + i
            return cm.mpf(num) / den

        w = _sequential(lambda n, v: v * ratio(n) * xc, 1, cm.mpf(m) * xc)
        return lambda n: w(n) / cm.mpf(n) ** (p + 1)

    if boundary:
        hi = _hi_context(ctx)
        source = make_term(hi)
        blocks = (source(n) for n in _count(1))
        return _levin_terms(blocks, ctx, term_eps=hi.eps)
    return sum_series(make_term(ctx), 1, ctx)


def _count(start: int):
    n = start
    while True:
        yield n
        n += 1


# ---------------------------------------------------------------------------
# Parametric central binomial series at x = 1


def param_cb_closed(a, ctx: PrecisionContext) -> ComplexValue:
    """``Gamma(a)^2 4^a / (2 Gamma(2a))``, the value of ``sum_{n>=0} binom(2n,n)/((n+a) 4^n)``."""
    mp = ctx.mp
    a = ctx.convert(a)
    if _is_integer(mp, a) and mp.re(a) <= 0:
        raise PoleError(f"a = {a} is a pole of the series")
    return gamma(a, ctx) ** 2 * mp.power(4, a) / (2 * gamma(2 * a, ctx))


def param_cb_direct(a, ctx: PrecisionContext) -> SeriesResult:
    """Direct evaluation of ``sum_{n>=0} binom(2n,n) / ((n+a) 4^n)``."""
    mp = ctx.mp
    av = ctx.convert(a)
    if _is_integer(mp, av) and mp.re(av) <= 0:
        raise PoleError(f"a = {a} is a pole of the series")

    def make_term(c: PrecisionContext):
        ac = c.convert(a)
        w = _sequential(lambda n, v: v * (2 * n + 1) / (2 * n + 2), 0, c.mp.one)
        return lambda n: w(n) / (n + ac)

    return _sum_twisted(make_term, RootOfUnity(0, 1), ctx, 0)


def param_cb_check(a, ctx: PrecisionContext) -> tuple[ComplexValue, SeriesResult, float]:
    """Closed form, direct sum and their absolute residual."""
    closed = param_cb_closed(a, ctx)
    direct = param_cb_direct(a, ctx)
    return closed, direct, abs(closed - direct.value)


__all__ = [
    "CpasParams", "FussParams", "cpas_lhs", "bilateral_sum", "cb_series", "shifted_cb_series", "half_integer_lhs", "fuss_radius",
    "fc_G", "fc_series", "param_cb_closed", "param_cb_direct", "param_cb_check",
]

"""Bell polynomials, multiple harmonic (star) sums and the gamma expansion constants.

``C_n`` and ``D_n`` are the Taylor coefficients (times ``n!``) of
``Gamma(s+1) e^{gamma s}`` and its reciprocal at ``s = 0``; ``C_n(x)`` and
``D_n(x)`` are the parametric versions built from polygamma values at ``x+1``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidInput
from .gamma_suite import euler_gamma, gamma, polygamma
from .numerics import ComplexValue, PrecisionContext
from .polylog import zeta


def bell_Y(xs: Sequence, ctx: PrecisionContext | None = None):
    """Complete exponential Bell polynomial ``Y_n(x_1, ..., x_n)`` with ``n = len(xs)``.

    Works on any numeric type supporting ``+`` and ``*`` (so Fractions stay exact).
    """
    return bell_sequence(xs, ctx)[-1]


def bell_sequence(xs: Sequence, ctx: PrecisionContext | None = None) -> list:
    """``[Y_0, Y_1(x_1), ..., Y_n(x_1..x_n)]``."""
    if ctx is not None:
        xs = [ctx.convert(v) for v in xs]
    ys = [1]
    for n in range(1, len(xs) + 1):
        acc = 0
        for j in range(n):
            acc += math.comb(n - 1, j) * xs[n - j - 1] * ys[j]
        ys.append(acc)
    return ys


@dataclass(frozen=True)
class HarmonicTable:
    """Strict and star sums ``zeta_n({1}_k)`` for ``n <= n_max``, ``k <= k_max``."""

    n_max: int
    k_max: int
    strict: tuple = field(repr=False)
    star: tuple = field(repr=False)

    @classmethod
    def build(cls, n_max: int, k_max: int, ctx: PrecisionContext) -> "HarmonicTable":
        if n_max < 0 or k_max < 0:
            raise InvalidInput("table bounds must be non-negative")
        m = ctx.mp
        e = [[m.zero] * (k_max + 1) for _ in range(n_max + 1)]
        h = [[m.zero] * (k_max + 1) for _ in range(n_max + 1)]
        for n in range(n_max + 1):
            e[n][0] = m.one
            h[n][0] = m.one
        for n in range(1, n_max + 1):
            inv = m.one / n
            for k in range(1, k_max + 1):
                e[n][k] = e[n - 1][k] + e[n - 1][k - 1] * inv
                h[n][k] = h[n - 1][k] + h[n][k - 1] * inv
        return cls(n_max, k_max, tuple(map(tuple, e)), tuple(map(tuple, h)))

    def _check(self, n: int, k: int):
        if not (0 <= n <= self.n_max and 0 <= k <= self.k_max):
            raise InvalidInput(f"({n}, {k}) is outside the table bounds ({self.n_max}, {self.k_max})")

    def mhs(self, n: int, k: int):
        self._check(n, k)
        return self.strict[n][k]

    def mhs_star(self, n: int, k: int):
        self._check(n, k)
        return self.star[n][k]


def mhs(n: int, k: int, ctx: PrecisionContext):
    """``zeta_n({1}_k)``: sum over ``n >= n_1 > ... > n_k >= 1`` of ``1/(n_1...n_k)``."""
    return HarmonicTable.build(n, k, ctx).mhs(n, k)


def mhs_star(n: int, k: int, ctx: PrecisionContext):
    """``zeta*_n({1}_k)``: as :func:`mhs` with non-strict inequalities."""
    return HarmonicTable.build(n, k, ctx).mhs_star(n, k)


def harmonic(n: int, order: int, ctx: PrecisionContext):
    """Generalized harmonic number ``H_n^(order)``."""
    m = ctx.mp
    return m.fsum(m.one / m.mpf(j) ** order for j in range(1, n + 1))


# ---------------------------------------------------------------------------
# Constant sequences C_n, D_n


@functools.lru_cache(maxsize=None)
def _cd_table(n_max: int, ctx: PrecisionContext) -> tuple[tuple, tuple]:
    slots_c = [ctx.mp.zero]
    slots_d = [ctx.mp.zero]
    for k in range(2, n_max + 1):
        v = math.factorial(k - 1) * zeta(k, ctx)
        slots_c.append((-1) ** k * v)
        slots_d.append((-1) ** (k - 1) * v)
    return tuple(bell_sequence(slots_c)), tuple(bell_sequence(slots_d))


def _table_size(n: int) -> int:
    size = 8
    while size < n:
        size *= 2
    return size


def c_const(n: int, ctx: PrecisionContext):
    """``C_n = Y_n(0, 1! zeta(2), -2! zeta(3), ...)``."""
    if n < 0:
        raise InvalidInput("n must be non-negative")
    return ctx.mp.convert(_cd_table(_table_size(n), ctx)[0][n])


def d_const(n: int, ctx: PrecisionContext):
    """``D_n = Y_n(0, -1! zeta(2), 2! zeta(3), ...)``."""
    if n < 0:
        raise InvalidInput("n must be non-negative")
    return ctx.mp.convert(_cd_table(_table_size(n), ctx)[1][n])


def _param_slots(n: int, x, ctx: PrecisionContext) -> list:
    m = ctx.mp
    x1 = m.convert(x) + 1
    slots = []
    for k in range(1, n + 1):
        v = polygamma(k - 1, x1, ctx)
        if k == 1:
            v += euler_gamma(ctx)
        slots.append(v)
    return slots


def c_param_sequence(n: int, x, ctx: PrecisionContext) -> list:
    """``[C_0(x), ..., C_n(x)]`` with ``C_k(x) = Gamma(x+1) Y_k(psi(x+1)+gamma, psi'(x+1), ...)``."""
    g = gamma(ctx.convert(x) + 1, ctx)
    return [g * y for y in bell_sequence(_param_slots(n, x, ctx))]


def d_param_sequence(n: int, x, ctx: PrecisionContext) -> list:
    """``[D_0(x), ..., D_n(x)]``: Bell polynomials in the negated slots, divided by ``Gamma(x+1)``.

    Every slot is negated, which is what makes ``sum C_k(x) t^k/k!`` and
    ``sum D_k(x) t^k/k!`` reciprocal up to the factor ``Gamma(x+1)^2`` and
    gives ``D_k(0) = D_k``.
    """
    slots = _param_slots(n, x, ctx)  # raises PoleError when x+1 is a pole
    g = gamma(ctx.convert(x) + 1, ctx)
    return [y / g for y in bell_sequence([-v for v in slots])]


def c_param(n: int, x, ctx: PrecisionContext) -> ComplexValue:
    return c_param_sequence(n, x, ctx)[n]


def d_param(n: int, x, ctx: PrecisionContext) -> ComplexValue:
    return d_param_sequence(n, x, ctx)[n]


# ---------------------------------------------------------------------------
# Expansion coefficients about the poles of Gamma


def a_coeff(k: int, n: int, ctx: PrecisionContext, table: HarmonicTable | None = None):
    """``A_k(n) = sum_{k1+k2=k} zeta*_n({1}_k1) C_k2 / k2!``."""
    if k < 0 or n < 0:
        raise InvalidInput("k and n must be non-negative")
    if table is None:
        table = HarmonicTable.build(n, k, ctx)
    return sum(table.mhs_star(n, k1) * c_const(k - k1, ctx) / math.factorial(k - k1)
               for k1 in range(k + 1))


def b_coeff(k: int, n: int, ctx: PrecisionContext, table: HarmonicTable | None = None):
    """``B_k(n) = sum_{k1+k2=k} (-1)^k1 zeta_n({1}_k1) D_k2 / k2!``."""
    if k < 0 or n < 0:
        raise InvalidInput("k and n must be non-negative")
    if table is None:
        table = HarmonicTable.build(n, k, ctx)
    return sum((-1) ** k1 * table.mhs(n, k1) * d_const(k - k1, ctx) / math.factorial(k - k1)
               for k1 in range(k + 1))

"""Complex gamma family: log-gamma, polygamma, generalized binomials.

Everything is assembled in the log domain and exponentiated once.  Stirling
and polygamma asymptotics use Bernoulli numbers that are computed exactly
(as fractions) on first use and cached.
"""

from __future__ import annotations

import cmath
import functools
import math
from fractions import Fraction

from .errors import DomainError, PoleError, UnsupportedOrder
from .numerics import ComplexValue, PrecisionContext

MAX_POLYGAMMA_ORDER = 12


@functools.lru_cache(maxsize=None)
def bernoulli_numbers(n_max: int) -> tuple[Fraction, ...]:
    """``(B_0, ..., B_n_max)`` with ``B_1 = -1/2``."""
    b = [Fraction(1)]
    for n in range(1, n_max + 1):
        acc = Fraction(0)
        for k in range(n):
            acc += math.comb(n + 1, k) * b[k]
        b.append(-acc / (n + 1))
    return tuple(b)


def bernoulli(n: int) -> Fraction:
    size = 64
    while size < n:
        size *= 2
    return bernoulli_numbers(size)[n]


def _is_real(z) -> bool:
    return getattr(z, "imag", 0) == 0


def _nonpositive_integer(m, z) -> bool:
    zz = m.convert(z)
    if not _is_real(zz):
        return False
    r = m.re(zz)
    return r <= 0 and m.isint(r)


def _negative_integer(m, z) -> bool:
    zz = m.convert(z)
    if not _is_real(zz):
        return False
    r = m.re(zz)
    return r < 0 and m.isint(r)


def _shift_radius(ctx: PrecisionContext) -> int:
    # Stirling's minimal term is about exp(-2*pi*|z|); this keeps it below 2**-bits.
    return int(0.12 * ctx.working_bits) + 10


def _stirling(z, ctx: PrecisionContext):
    """Asymptotic log-gamma for large ``|z|`` in the right half plane."""
    m = ctx.mp
    eps = ctx.eps
    s = (z - m.mpf(0.5)) * m.log(z) - z + m.log(2 * m.pi) / 2
    zinv = 1 / z
    z2 = zinv * zinv
    zp = zinv
    k = 1
    while True:
        b = bernoulli(2 * k)
        term = m.mpf(b.numerator) / (b.denominator * (2 * k) * (2 * k - 1)) * zp
        s += term
        if abs(term) < eps * max(abs(s), 1):
            break
        zp *= z2
        k += 1
        if k > 4 * ctx.working_bits:
            break
    return s


def _log_gamma_right(z, ctx: PrecisionContext):
    m = ctx.mp
    radius = _shift_radius(ctx)
    shift = 0
    if abs(z) < radius:
        shift = max(0, int(math.ceil(radius - float(m.re(z)))))
    corr = 0
    for j in range(shift):
        corr += m.log(z + j)
    return _stirling(z + shift, ctx) - corr


def _imag_log_gamma_estimate(z: complex) -> float:
    """Imaginary part of the principal log-gamma in double precision."""
    shift = max(0, int(math.ceil(8 - z.real)))
    w = z + shift
    s = (w - 0.5) * cmath.log(w) - w + 0.5 * math.log(2 * math.pi) + 1 / (12 * w) - 1 / (360 * w ** 3)
    for j in range(shift):
        s -= cmath.log(z + j)
    return s.imag


def log_gamma(z, ctx: PrecisionContext) -> ComplexValue:
    """Principal branch of ``log Gamma(z)``.

    The imaginary part is continuous off the negative real axis and, on it,
    equals the limit from above (so ``log_gamma(-1/2)`` has imaginary part
    ``-pi``).  Left half-plane arguments go through the reflection formula;
    the ``2*pi*i`` ambiguity that reflection introduces is resolved against a
    double-precision estimate of the continuous branch.
    """
    m = ctx.mp
    z = m.convert(z)
    if _nonpositive_integer(m, z):
        raise PoleError(f"log_gamma has a pole at {z}")
    if m.re(z) >= 0.5:
        return _log_gamma_right(z, ctx)
    v = m.log(m.pi) - m.log(m.sinpi(z)) - _log_gamma_right(1 - z, ctx)
    target = _imag_log_gamma_estimate(complex(z))
    k = round((target - float(m.im(v))) / (2 * math.pi))
    if k:
        v += 2j * m.pi * k
    return v


def gamma(z, ctx: PrecisionContext) -> ComplexValue:
    m = ctx.mp
    z = m.convert(z)
    lg = log_gamma(z, ctx)
    if _is_real(z):
        r = m.re(z)
        sign = 1
        if r < 0:
            sign = -1 if int(m.ceil(-r)) % 2 else 1
        return sign * m.exp(m.re(lg))
    return m.exp(lg)


def cot_derivative_poly(j: int) -> list[int]:
    """Integer coefficients of ``P_j`` with ``d^j/du^j cot(u) = P_j(cot u)``."""
    poly = [0, 1]
    for _ in range(j):
        # d/du c = -(1 + c^2); chain rule on sum p_k c^k
        new = [0] * (len(poly) + 1)
        for k, p in enumerate(poly):
            if k == 0 or p == 0:
                continue
            new[k - 1] -= k * p
            new[k + 1] -= k * p
        poly = new
        while len(poly) > 1 and poly[-1] == 0:
            poly.pop()
    return poly


def _pi_cot_derivative(j: int, z, ctx: PrecisionContext):
    """``d^j/dz^j [pi * cot(pi z)]``."""
    m = ctx.mp
    c = m.cospi(z) / m.sinpi(z)
    poly = cot_derivative_poly(j)
    val = 0
    for p in reversed(poly):
        val = val * c + p
    return m.pi ** (j + 1) * val


def polygamma(j: int, z, ctx: PrecisionContext) -> ComplexValue:
    """``psi^(j)(z)``; ``j = 0`` is the digamma function."""
    if j < 0 or int(j) != j:
        raise UnsupportedOrder("polygamma order must be a non-negative integer")
    if j > MAX_POLYGAMMA_ORDER:
        raise UnsupportedOrder(f"polygamma order {j} exceeds {MAX_POLYGAMMA_ORDER}")
    m = ctx.mp
    z = m.convert(z)
    if _nonpositive_integer(m, z):
        raise PoleError(f"polygamma has a pole at {z}")
    radius = _shift_radius(ctx)
    if m.re(z) < -radius:
        # (-1)^j psi^(j)(1 - z) - psi^(j)(z) = d^j/dz^j pi cot(pi z)
        return (-1) ** j * polygamma(j, 1 - z, ctx) - _pi_cot_derivative(j, z, ctx)
    shift = 0
    if abs(z) < radius + j:
        shift = max(0, int(math.ceil(radius + j - float(m.re(z)))))
    corr = 0
    for i in range(shift):
        corr += (z + i) ** (-j - 1)
    corr *= (-1) ** j * math.factorial(j)
    return _polygamma_asymptotic(j, z + shift, ctx) - corr


def _polygamma_asymptotic(j: int, z, ctx: PrecisionContext):
    m = ctx.mp
    eps = ctx.eps
    zinv = 1 / z
    if j == 0:
        s = m.log(z) - zinv / 2
        sign = -1
    else:
        s = m.mpf(math.factorial(j - 1)) * zinv ** j + m.mpf(math.factorial(j)) / 2 * zinv ** (j + 1)
        sign = 1
    z2 = zinv * zinv
    zp = zinv ** (j + 2)
    k = 1
    while True:
        b = bernoulli(2 * k)
        coeff = Fraction(math.factorial(2 * k + j - 1), math.factorial(2 * k)) * b
        if j == 0:
            coeff = b / (2 * k)
            zp_eff = zinv ** (2 * k)
        else:
            zp_eff = zp
        term = m.mpf(coeff.numerator) / coeff.denominator * zp_eff
        s += sign * term
        if abs(term) < eps * max(abs(s), 1):
            break
        zp *= z2
        k += 1
        if k > 4 * ctx.working_bits:
            break
    if j >= 1:
        s *= (-1) ** (j + 1)
    return s


def digamma(z, ctx: PrecisionContext) -> ComplexValue:
    return polygamma(0, z, ctx)


def euler_gamma(ctx: PrecisionContext):
    """Euler-Mascheroni constant, ``-psi(1)``."""
    return ctx.mp.euler


def _real_if_real(m, value, *args):
    if all(_is_real(m.convert(a)) for a in args):
        return m.re(value)
    return value


def gen_binom(a, b, ctx: PrecisionContext) -> ComplexValue:
    """``Gamma(a+1) / (Gamma(b+1) * Gamma(a-b+1))``."""
    m = ctx.mp
    a = m.convert(a)
    b = m.convert(b)
    for label, v in (("a", a), ("b", b), ("a-b", a - b)):
        if _negative_integer(m, v):
            raise DomainError(f"generalized binomial undefined: {label} is a negative integer")
    val = m.exp(log_gamma(a + 1, ctx) - log_gamma(b + 1, ctx) - log_gamma(a - b + 1, ctx))
    return _real_if_real(m, val, a, b)


def _central_log_parts(n: int, a, ctx: PrecisionContext):
    """Return ``(kind, payload)`` describing ``Gamma(m+1)^2 / Gamma(2m+1)``, ``m = n + a``."""
    m = ctx.mp
    mm = n + m.convert(a)
    twice = 2 * mm
    if _is_real(twice) and m.isint(m.re(twice)) and m.re(twice) <= 0:
        if m.isint(m.re(mm)):
            if m.re(mm) == 0:
                return "exact", m.one
            raise PoleError(f"1/binom(2m, m) has a pole at m = {mm}")
        # half-integer m with 2m a non-positive integer: zero by convention
        return "exact", m.zero
    if m.re(mm) >= -0.25:
        return "log", 2 * log_gamma(mm + 1, ctx) - log_gamma(2 * mm + 1, ctx)
    # Gamma(m+1)^2/Gamma(2m+1) = -2 pi cot(pi m) Gamma(-2m)/Gamma(-m)^2
    factor = -2 * m.pi * m.cospi(mm) / m.sinpi(mm)
    return "reflected", (factor, log_gamma(-2 * mm, ctx) - 2 * log_gamma(-mm, ctx))


def recip_central_binom(n: int, a, ctx: PrecisionContext) -> ComplexValue:
    """``1/binom(2n+2a, n+a) = Gamma(n+a+1)^2 / Gamma(2n+2a+1)``.

    Zero when ``a`` is a half-integer and ``2n+2a`` is a non-positive integer.
    """
    m = ctx.mp
    kind, payload = _central_log_parts(n, a, ctx)
    if kind == "exact":
        return payload
    if kind == "log":
        val = m.exp(payload)
    else:
        factor, lg = payload
        val = factor * m.exp(lg)
    return _real_if_real(m, val, a)


def central_weight(n: int, a, ctx: PrecisionContext) -> ComplexValue:
    """``4**(n+a) / binom(2n+2a, n+a)`` with the power of four folded into the exponent."""
    m = ctx.mp
    a = m.convert(a)
    kind, payload = _central_log_parts(n, a, ctx)
    expo = (n + a) * m.log(4)
    if kind == "exact":
        return payload * m.exp(expo) if payload != 0 else payload
    if kind == "log":
        val = m.exp(payload + expo)
    else:
        factor, lg = payload
        val = factor * m.exp(lg + expo)
    return _real_if_real(m, val, a)

"""Precision handling and the series summation engine.

Every evaluator in the package takes a :class:`PrecisionContext`.  The context
owns a private :class:`mpmath.MPContext` so that evaluations at different
precisions never touch mpmath's global state.

Error estimates produced here are heuristic (tail bounds from observed term
ratios, differences between successive Levin orders); they are not proved
enclosures.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterator

import mpmath

from .errors import InvalidInput, NonConvergence, NonFinite

LOG2_10 = math.log2(10)

# Scalar types: every evaluator returns an mpf or mpc of the context's MPContext.
ComplexValue = Any
TermFn = Callable[[int], ComplexValue]


@functools.lru_cache(maxsize=None)
def _mp_context(bits: int) -> mpmath.MPContext:
    m = mpmath.MPContext()
    m.prec = bits
    return m


def _as_tol(tol) -> mpmath.mpf:
    if isinstance(tol, Fraction):
        return _mp_context(64).mpf(tol.numerator) / tol.denominator
    return _mp_context(64).mpf(tol)


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision, target tolerance and truncation policy.

    ``precision_bits`` is the nominal binary precision; ``guard_digits``
    decimal digits are added on top of it for the actual arithmetic.
    """

    precision_bits: int = 212
    target_tol: Any = None
    max_terms: int = 200_000
    guard_digits: int = 0

    def __post_init__(self):
        if int(self.precision_bits) != self.precision_bits or self.precision_bits < 64:
            raise InvalidInput("precision_bits must be an integer >= 64")
        if self.max_terms < 1:
            raise InvalidInput("max_terms must be >= 1")
        if self.guard_digits < 0:
            raise InvalidInput("guard_digits must be >= 0")
        tol = self.target_tol
        if tol is None:
            tol = _mp_context(64).ldexp(1, -self.precision_bits)
        tol = _as_tol(tol)
        if not tol > 0:
            raise InvalidInput("target_tol must be positive")
        object.__setattr__(self, "target_tol", tol)

    @classmethod
    def from_digits(cls, digits: int, target_tol=None, max_terms: int = 200_000,
                    guard_digits: int | None = None) -> "PrecisionContext":
        """Context for ``digits`` significant decimal digits.

        The default guard is 20% of ``digits``; the default tolerance is
        ``10**-digits``.
        """
        if digits < 1:
            raise InvalidInput("digits must be positive")
        if guard_digits is None:
            guard_digits = math.ceil(0.2 * digits)
        bits = max(64, math.ceil(digits * LOG2_10))
        if target_tol is None:
            target_tol = _mp_context(64).mpf(10) ** (-digits)
        return cls(bits, target_tol, max_terms, guard_digits)

    @property
    def working_bits(self) -> int:
        return self.precision_bits + math.ceil(self.guard_digits * LOG2_10)

    @property
    def mp(self) -> mpmath.MPContext:
        return _mp_context(self.working_bits)

    @property
    def dps(self) -> int:
        return self.mp.dps

    @property
    def eps(self):
        return self.mp.ldexp(1, 1 - self.working_bits)

    def extended(self, extra_bits: int) -> "PrecisionContext":
        return dataclasses.replace(self, precision_bits=self.precision_bits + extra_bits)

    def with_tol(self, tol) -> "PrecisionContext":
        return dataclasses.replace(self, target_tol=tol)

    def convert(self, value) -> ComplexValue:
        """Convert ints, Fractions, floats, strings, complex or mpmath numbers."""
        m = self.mp
        if isinstance(value, Fraction):
            return m.mpf(value.numerator) / value.denominator
        if isinstance(value, str):
            return parse_number(value, self)
        return m.convert(value)


def parse_number(text: str, ctx: PrecisionContext) -> ComplexValue:
    """Parse ``"1/3"``, ``"0.3+0.2i"``, ``"-2/7"``, ``"i"`` and the like."""
    m = ctx.mp
    s = text.strip().replace(" ", "").replace("j", "i")
    if not s:
        raise InvalidInput("empty number")
    if s.endswith("i"):
        body = s[:-1]
        # split at the last sign that is not an exponent sign
        cut = -1
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                cut = k
                break
        if cut == -1:
            re_part, im_part = "0", body
        else:
            re_part, im_part = body[:cut], body[cut:]
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return m.mpc(_parse_real(re_part, m), _parse_real(im_part, m))
    return _parse_real(s, m)


def _parse_real(s: str, m):
    try:
        if "/" in s:
            num, den = s.split("/")
            return m.mpf(num) / m.mpf(den)
        return m.mpf(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"cannot parse number {s!r}") from exc


@dataclass(frozen=True)
class SeriesResult:
    value: ComplexValue
    err_estimate: Any
    terms_used: int
    converged: bool
    method: str = "direct"


@dataclass(frozen=True)
class RootOfUnity:
    """The exact root of unity ``exp(2*pi*i*numer/order)``."""

    numer: int
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise InvalidInput("order of a root of unity must be positive")
        if not 0 <= self.numer < self.order:
            raise InvalidInput("numerator must satisfy 0 <= p < N")
        if self.numer == 0 and self.order != 1:
            raise InvalidInput("x = 1 is represented as 0/1")
        if self.numer != 0 and math.gcd(self.numer, self.order) != 1:
            raise InvalidInput("numerator and order must be coprime")

    @classmethod
    def of(cls, p: int, n: int) -> "RootOfUnity":
        """Normalised constructor accepting any integers ``p`` and ``n > 0``."""
        if n < 1:
            raise InvalidInput("order must be positive")
        p %= n
        if p == 0:
            return cls(0, 1)
        g = math.gcd(p, n)
        return cls(p // g, n // g)

    @classmethod
    def parse(cls, text: str) -> "RootOfUnity":
        try:
            p, n = text.strip().split("/")
            return cls.of(int(p), int(n))
        except ValueError as exc:
            raise InvalidInput(f"root of unity must be written p/N, got {text!r}") from exc

    @property
    def is_one(self) -> bool:
        return self.order == 1

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity.of(-self.numer, self.order)

    def power(self, k: int) -> "RootOfUnity":
        return RootOfUnity.of(self.numer * k, self.order)

    def embed(self, ctx: PrecisionContext) -> ComplexValue:
        m = ctx.mp
        angle = m.mpf(2 * self.numer) / self.order
        return m.mpc(m.cospi(angle), m.sinpi(angle))

    def __str__(self) -> str:
        return f"{self.numer}/{self.order}"


def check_finite(value) -> None:
    bad = not (mpmath.isfinite(value.real) and mpmath.isfinite(getattr(value, "imag", 0)))
    if bad:
        raise NonFinite(f"non-finite value {value}")


def _ratio_estimate(mags) -> float:
    ratios = [b / a for a, b in zip(mags, list(mags)[1:]) if a != 0]
    if not ratios:
        return 0.0
    return min(0.99, float(max(ratios)))


_ACCEL_CHECKPOINTS = (32, 128, 512)


def sum_series(term: TermFn, start: int, ctx: PrecisionContext, *,
               tail_bound: Callable[[int], Any] | None = None,
               accelerate: bool = True, max_order: int | None = None, term_eps=None,
               term_factory: Callable[["PrecisionContext"], TermFn] | None = None) -> SeriesResult:
    """Sum ``term(n)`` for ``n >= start``.

    Direct summation stops once four consecutive terms are below
    ``target_tol/8`` and the tail bound (``tail_bound(n)`` if given, else a
    geometric bound from the last eight term ratios) is below ``target_tol/2``.
    When ``accelerate`` is set and the series is visibly slower than
    geometric (checked after 32, 128 and 512 terms), the partial sums are
    handed to the Levin u-transform instead.  Terms accurate only to working
    precision limit the transform on logarithmically convergent series to
    roughly 80% of the digits; ``term_factory(c)``, returning the term function
    evaluated in context ``c``, lets the accelerated pass rebuild the terms at
    three times the working precision.  If the transform fails on a series
    whose term ratios stay visibly below one, direct summation resumes.
    """
    tol = ctx.target_tol
    m = ctx.mp
    s = m.zero
    mags: deque = deque(maxlen=8)
    terms: list = []
    small_run = 0
    max_abs = m.zero

    def fetch(idx):
        # terms pulled by a failed Levin pass are kept so direct summation can resume
        while len(terms) <= idx:
            terms.append(term(start + len(terms)))
        return terms[idx]

    for i in range(ctx.max_terms):
        n = start + i
        t = fetch(i)
        check_finite(t)
        s += t
        mag = abs(t)
        mags.append(mag)
        max_abs = max(max_abs, abs(s))
        small_run = small_run + 1 if mag < tol / 8 else 0
        if small_run >= 4:
            if tail_bound is not None:
                tail = abs(tail_bound(n))
            else:
                r = _ratio_estimate(mags)
                tail = mag * r / (1 - r)
            if tail < tol / 2:
                err = tail + (i + 1) * ctx.eps * max_abs
                return SeriesResult(s, err, i + 1, True, "direct")
        if accelerate and i + 1 in _ACCEL_CHECKPOINTS and tail_bound is None and _ratio_estimate(mags) > 0.9:
            try:
                if term_factory is not None:
                    hi = ctx.extended(2 * ctx.working_bits)
                    hi_term = term_factory(hi)
                    source = (hi_term(k) for k in itertools.count(start))
                    return _levin_terms(source, ctx, max_order=max_order, term_eps=hi.eps)
                source = (fetch(k) for k in itertools.count())
                return _levin_terms(source, ctx, max_order=max_order, term_eps=term_eps)
            except NonConvergence:
                if _ratio_estimate(mags) >= 0.99:
                    raise
                accelerate = False
    raise NonConvergence(f"series did not converge within {ctx.max_terms} terms")


def group_terms(term: TermFn, root: ComplexValue, order: int, start: int) -> Iterator:
    """Yield ``sum term(n) * root**n`` over consecutive blocks of ``order`` indices."""
    n = start
    powers = [root ** ((start + r) % order) for r in range(order)]
    while True:
        block = 0
        for r in range(order):
            block += term(n + r) * powers[r]
        yield block
        n += order


def rotated_terms(term: TermFn, root: ComplexValue, order: int, start: int) -> Iterator:
    """Yield ``term(n) * root**n`` one index at a time (``root**order == 1``)."""
    powers = [root ** ((start + r) % order) for r in range(order)]
    n = start
    while True:
        yield term(n) * powers[(n - start) % order]
        n += 1


def sum_grouped_unit_circle(term_mag: TermFn, x: RootOfUnity, ctx: PrecisionContext, *,
                            start: int = 1, max_order: int | None = None, term_eps=None,
                            blocks: bool = False) -> SeriesResult:
    """Sum ``term_mag(n) * x**n`` for ``n >= start`` with ``x != 1`` a root of unity.

    ``term_mag`` must be smooth in ``n`` and decay at least like ``n**-1/2``.
    By default the Levin u-transform is applied to the partial sums of the
    rotated terms themselves: their ratio tends to ``x != 1``, a case the
    transform handles without loss of precision.  With ``blocks=True`` the
    terms are first added in blocks of ``N = order(x)`` and the (logarithmically
    convergent) block partial sums are transformed instead; that route loses
    roughly half a digit per order and is kept for cross-checks.  If the
    loss-of-precision monitor trips before the tolerance is met, Richardson
    extrapolation of the block sums takes over.

    ``term_eps`` is the relative accuracy of ``term_mag`` (default: the
    context's machine epsilon); supplying terms computed at higher precision
    lets the transform run to higher order.
    """
    if x.is_one:
        raise InvalidInput("sum_grouped_unit_circle requires x != 1")
    return accelerated_sum(term_mag, x, ctx, start=start, max_order=max_order,
                           term_eps=term_eps, blocks=blocks)


def accelerated_sum(term_mag: TermFn, x: RootOfUnity, ctx: PrecisionContext, *,
                    start: int = 1, max_order: int | None = None, term_eps=None,
                    blocks: bool = False) -> SeriesResult:
    """Levin-accelerated ``sum term_mag(n) * x**n``; ``x = 1`` is allowed here."""
    root = x.embed(ctx)
    if blocks and not x.is_one:
        source = group_terms(term_mag, root, x.order, start)
        group = x.order
    else:
        source = rotated_terms(term_mag, root, x.order, start)
        group = 1
    return _levin_terms(source, ctx, max_order=max_order, group=group, term_eps=term_eps,
                        richardson_source=(term_mag, root, x.order, start))


def levin_u(partial_sums, terms, beta: int = 1):
    """Levin u-transform of the whole sequence; returns ``(value, condition)``.

    The weights ``(-1)**j * C(k, j) * (beta + j)**(k - 1)`` are exact integers;
    the common factor ``(beta + k)**(1 - k)`` cancels between numerator and
    denominator.  ``condition`` bounds the relative amplification of input
    errors in the numerator.
    """
    k = len(partial_sums) - 1
    num = den = 0
    num_abs = 0
    for j in range(k + 1):
        c = (-1) ** j * math.comb(k, j) * (beta + j) ** max(k - 1, 0)
        w = (beta + j) * terms[j]
        ratio = partial_sums[j] / w
        num += c * ratio
        num_abs += abs(c) * abs(ratio)
        den += c / w
    value = num / den
    cond = num_abs / abs(num) if num != 0 else float("inf")
    return value, cond


def _levin_terms(blocks: Iterator, ctx: PrecisionContext, *, max_order: int | None = None,
                 group: int = 1, term_eps=None, richardson_source=None,
                 min_order: int = 6) -> SeriesResult:
    tol = ctx.target_tol
    if max_order is None:
        # series with logarithmic factors gain roughly one digit per order
        max_order = max(60, int(1.8 * ctx.dps) + 20)
    eps_in = ctx.eps if term_eps is None else term_eps
    in_bits = max(ctx.working_bits, -int(mpmath.log(eps_in, 2)))
    hi = _mp_context(in_bits + ctx.working_bits + 32)
    s = hi.zero
    sums: list = []
    terms: list = []
    prev = None
    prev_err = None
    best = None
    for k in range(max_order + 1):
        t = hi.convert(next(blocks))
        check_finite(t)
        skipped = 0
        while t == 0 and not terms and skipped < 16:
            # leading zeros carry no information about the tail
            t = hi.convert(next(blocks))
            check_finite(t)
            skipped += 1
        s += t
        terms.append(t)
        sums.append(s)
        if t == 0:
            # the u-transform divides by the terms; an exact zero means the
            # partial sums already stopped moving
            return SeriesResult(ctx.mp.convert(s), 4 * eps_in * abs(s), (k + 1) * group, True, "direct")
        if k < 2:
            continue
        value, cond = levin_u(sums, terms)
        loss = hi.mpf(cond) * eps_in * abs(value)
        if prev is not None:
            err = abs(value - prev)
            if best is None or err < best[1]:
                best = (value, err + loss, k)
            if (k >= min_order and prev_err is not None and err < tol / 4
                    and prev_err < tol / 4 and loss < tol / 4):
                return SeriesResult(ctx.mp.convert(value), max(err, prev_err) + loss,
                                    (k + 1) * group, True, "levin")
            if loss > tol / 4:
                break
            prev_err = err
        prev = value
    if best is not None and best[1] <= tol:
        return SeriesResult(ctx.mp.convert(best[0]), best[1], (best[2] + 1) * group, True, "levin")
    if richardson_source is not None:
        return _richardson_blocks(*richardson_source, ctx)
    raise NonConvergence("Levin acceleration did not reach the target tolerance")


def _richardson_blocks(term_mag: TermFn, root, order: int, start: int,
                       ctx: PrecisionContext) -> SeriesResult:
    """Polynomial extrapolation of block sums in ``h = M**-1/2`` at ``M = 16 * 2**i``."""
    m = ctx.mp
    tol = ctx.target_tol
    blocks = group_terms(term_mag, root, order, start)
    s = m.zero
    hs, ss = [], []
    count = 0
    target = 16
    table: list = []
    prev = None
    while count * order + order <= ctx.max_terms:
        s += next(blocks)
        count += 1
        if count != target:
            continue
        hs.append(m.mpf(count) ** m.mpf(-0.5))
        ss.append(s)
        target *= 2
        # Neville table toward h = 0
        row = [s]
        for j in range(1, len(ss)):
            i = len(ss) - 1
            num = row[j - 1] * hs[i - j] - table[j - 1] * hs[i]
            row.append(num / (hs[i - j] - hs[i]))
        est = row[-1]
        if prev is not None:
            err = abs(est - prev)
            if err < tol / 2:
                return SeriesResult(est, err, count * order, True, "richardson")
        prev = est
        table = row
    raise NonConvergence("grouped Richardson extrapolation did not reach the target tolerance")

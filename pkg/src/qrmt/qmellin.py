"""Jackson q-integrals, the q-Mellin transform, its inversion and Mera sums."""

from __future__ import annotations

import cmath
import math
from collections.abc import Callable
from dataclasses import dataclass, field

from .errors import ConvergenceError, DivergenceError, EstimationError, QError, QOverflowError
from .qcore import QContext, Strip
from .qseries import PointFunction, sum_series

__all__ = [
    "MellinResult",
    "IdentitySample",
    "IdentityReport",
    "jackson_integral",
    "jackson_integral_inf",
    "jackson_integral_improper",
    "q_mellin",
    "q_mellin_inverse",
    "mera_partial",
    "pi_over_sin",
    "strip_estimate",
]

# a tail whose terms have grown this many times in a row, by this factor
# overall, is declared divergent without waiting for max_terms
_GROWTH_RUN = 64
_GROWTH_FACTOR = 1e6
# block length for the stagnation test
_BLOCK = 256


@dataclass(frozen=True)
class MellinResult:
    value: complex
    err_estimate: float
    n_neg: int
    n_pos: int

    def __post_init__(self):
        if not math.isfinite(self.err_estimate) or self.err_estimate < 0:
            raise ValueError("err_estimate must be finite and nonnegative")
        if not self.n_neg <= 0 <= self.n_pos:
            raise ValueError("need n_neg <= 0 <= n_pos")

    def __complex__(self) -> complex:
        return complex(self.value)


@dataclass(frozen=True)
class IdentitySample:
    s: complex
    lhs: complex
    rhs: complex
    abs_resid: float
    rel_resid: float
    error: str | None = None

    @classmethod
    def compare(cls, s, lhs, rhs) -> "IdentitySample":
        lhs, rhs = complex(lhs), complex(rhs)
        a = abs(lhs - rhs)
        r = a / abs(rhs) if rhs != 0 else a
        return cls(complex(s), lhs, rhs, a, r)

    @classmethod
    def failure(cls, s, err: Exception) -> "IdentitySample":
        cat = getattr(err, "category", "numeric")
        nan = complex(math.nan, math.nan)
        return cls(complex(s), nan, nan, math.inf, math.inf, f"{cat}: {err}")


@dataclass
class IdentityReport:
    name: str
    samples: list[IdentitySample]
    tolerance: float
    findings: list = field(default_factory=list)

    @property
    def max_rel_resid(self) -> float:
        if not self.samples:
            return math.inf
        return max(s.rel_resid for s in self.samples)

    @property
    def passed(self) -> bool:
        return self.max_rel_resid <= self.tolerance


def _lattice_value(ctx: QContext, f: PointFunction, n: int, shift: int | None, A: float) -> complex:
    if shift is not None:
        return f.at(ctx, n + shift)
    return complex(f.eval(ctx.q**n / A))


def _tail(ctx: QContext, value: Callable[[int], complex], s: complex, ns, tail: str, scale: float):
    lq = ctx.log_q

    def terms():
        run = 0
        first = None
        prev = 0.0
        block = prev_block = 0.0
        for i, n in enumerate(ns):
            try:
                v = value(n)
            except (OverflowError, QOverflowError) as e:
                raise DivergenceError(f"f(q**{n}) overflows: {e}", tail=tail) from None
            if v == 0:
                t = 0j
            else:
                x = n * s * lq
                try:
                    t = v * cmath.exp(x) if abs(x.real) < 600 else cmath.exp(cmath.log(v) + x)
                except OverflowError:
                    raise DivergenceError(f"q-Mellin sum overflows at n={n}", tail=tail) from None
            a = abs(t)
            if first is None and a > 0:
                first = a
            run = run + 1 if a > prev > 0 else 0
            if run >= _GROWTH_RUN and first and a > _GROWTH_FACTOR * first:
                raise DivergenceError(f"terms grow without bound toward the {tail} tail", tail=tail)
            prev = a
            block = max(block, a)
            if i % _BLOCK == _BLOCK - 1:
                if prev_block and block > 0.999 * prev_block:
                    raise DivergenceError(f"terms stop decaying toward the {tail} tail", tail=tail)
                prev_block, block = block, 0.0
            yield t

    try:
        return sum_series(ctx, terms(), what=f"q-Mellin {tail} tail", scale=scale)
    except DivergenceError as e:
        if e.tail is None:
            raise DivergenceError(f"{e} ({tail} tail)", tail=tail) from e
        raise


def _bilateral(ctx: QContext, value: Callable[[int], complex], s: complex) -> MellinResult:
    def up():
        n = 0
        while True:
            yield n
            n += 1

    def down():
        n = -1
        while True:
            yield n
            n -= 1

    zero = _tail(ctx, value, s, up(), "zero", 0.0)
    inf = _tail(ctx, value, s, down(), "infinity", abs(zero.value))
    c = 1.0 - ctx.q
    total = c * (zero.value + inf.value)
    if not cmath.isfinite(total):
        raise DivergenceError("q-Mellin sum is not finite")
    err = c * (zero.err_estimate + inf.err_estimate)
    return MellinResult(total, err, -inf.n_terms, max(zero.n_terms - 1, 0))


def _exact_shift(ctx: QContext, f: PointFunction, A: float) -> int | None:
    """``-k`` when ``1/A == q**-k`` and ``f`` can be sampled exactly there."""
    if f.lattice is None or f.base != ctx.q:
        return None
    k = ctx.lattice_index(A)
    return None if k is None else -k


def q_mellin(ctx: QContext, f: PointFunction, s) -> MellinResult:
    """``M_q(f)(s) = (1-q) sum_n f(q**n) q**(n s)`` over all integers ``n``."""
    s = complex(s)
    # q**(n*T) == 1, so fold Im(s) into one period; keeps the phases of q**(ns) small
    T = ctx.period.imag
    k = round(s.imag / T)
    if k:
        s = complex(s.real, s.imag - k * T)
    return _bilateral(ctx, lambda n: f.at(ctx, n), s)


def jackson_integral(ctx: QContext, f: PointFunction, a: float) -> MellinResult:
    """``int_0^a f d_q x = (1-q) a sum_{n>=0} f(a q**n) q**n``."""
    if not a > 0:
        raise ValueError("a must be positive")
    shift = _exact_shift(ctx, f, 1.0 / a)
    q = ctx.q

    def terms():
        n = 0
        while True:
            v = f.at(ctx, n + shift) if shift is not None else complex(f.eval(a * q**n))
            yield v * q**n
            n += 1

    res = _tail_sum(ctx, terms())
    c = (1.0 - q) * a
    return MellinResult(c * res.value, c * res.err_estimate, 0, max(res.n_terms - 1, 0))


def _tail_sum(ctx, terms):
    try:
        return sum_series(ctx, terms, what="Jackson integral")
    except DivergenceError as e:
        raise DivergenceError(str(e), tail="zero") from e


def jackson_integral_inf(ctx: QContext, f: PointFunction) -> MellinResult:
    """``int_0^inf f d_q x = (1-q) sum_n f(q**n) q**n``."""
    return q_mellin(ctx, f, 1.0)


def jackson_integral_improper(ctx: QContext, f: PointFunction, A: float) -> MellinResult:
    """``int_0^{inf/A} f d_q x = (1-q) sum_n f(q**n / A) q**n / A``.

    When ``A`` is itself a lattice point the samples come from ``f``'s exact
    lattice evaluator.
    """
    if not A > 0:
        raise ValueError("A must be positive")
    shift = _exact_shift(ctx, f, A)
    res = _bilateral(ctx, lambda n: _lattice_value(ctx, f, n, shift, A), 1.0 + 0j)
    return MellinResult(res.value / A, res.err_estimate / A, res.n_neg, res.n_pos)


def q_mellin_inverse(ctx: QContext, F: Callable[[complex], complex], c: float, x: float) -> complex:
    """Recover ``f(x)`` at ``x = q**m`` from ``F = M_q f`` on the line ``Re(s) = c``.

    The inversion integral runs over one period ``2*pi/|ln q|`` of the
    periodic integrand, so it is a Fourier coefficient and the trapezoidal
    rule converges geometrically.  Nodes double (reusing the old ones) until
    successive values agree to ``eps`` relative to the integrand's scale.
    """
    m = ctx.lattice_index(x)
    if m is None:
        raise ValueError(f"x={x!r} is not a point q**m of the lattice")
    lq = ctx.log_q
    T = 2.0 * math.pi / abs(lq)

    def g(t: float) -> complex:
        s = complex(c, t)
        return complex(F(s)) * cmath.exp(-m * s * lq)

    n = 16
    samples = [g(j * T / n) for j in range(n)]
    total = math.fsum(v.real for v in samples) + 1j * math.fsum(v.imag for v in samples)
    l1 = sum(abs(v) for v in samples)
    prev = total / n
    while True:
        if 2 * n > ctx.max_terms:
            raise ConvergenceError(f"inversion quadrature did not settle with {n} nodes")
        mids = [g((j + 0.5) * T / n) for j in range(n)]
        total += math.fsum(v.real for v in mids) + 1j * math.fsum(v.imag for v in mids)
        l1 += sum(abs(v) for v in mids)
        n *= 2
        cur = total / n
        if abs(cur - prev) <= ctx.eps * max(abs(cur), l1 / n):
            return cur / (1.0 - ctx.q)
        prev = cur


def pi_over_sin(s) -> complex:
    """``pi / sin(pi s)`` written to stay finite far from the real axis."""
    z = math.pi * complex(s)
    if z.imag >= 0:
        e = cmath.exp(1j * z)
        return 2j * math.pi * e / (e * e - 1.0)
    e = cmath.exp(-1j * z)
    return 2j * math.pi * e / (1.0 - e * e)


def mera_partial(ctx: QContext, M_classical: Callable[[complex], complex], s, N: int) -> complex:
    """``-(1-q)/ln q * sum_{|n|<=N} M(s + 2 pi i n / ln q)``, summed by increasing ``|n|``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    s = complex(s)
    step = 2j * math.pi / ctx.log_q

    def at(n: int) -> complex:
        try:
            return complex(M_classical(s + n * step))
        except QError as e:
            e.shift_index = n
            raise
        except (ArithmeticError, ValueError) as e:
            raise QError(f"classical transform failed at shift n={n}: {e}") from e

    total = at(0)
    for n in range(1, N + 1):
        total += at(n) + at(-n)
    return -(1.0 - ctx.q) / ctx.log_q * total


def _log_profile(ctx: QContext, f: PointFunction, ns) -> list[float]:
    out = []
    for n in ns:
        try:
            v = abs(f.at(ctx, n))
        except QError as e:
            raise EstimationError(f"cannot probe f at q**{n}: {e}") from e
        out.append(math.inf if v == 0 else math.log(v) / ctx.log_q)
    return out


def strip_estimate(ctx: QContext, f: PointFunction, depth: int = 40, margin: float = 0.05) -> Strip:
    """Estimate the fundamental strip from the decay of ``f(q**n)`` at both ends.

    With ``g(n) = ln|f(q**n)| / ln q``, ``f(q**n) ~ q**(n*slope)`` gives the
    edge ``-slope``.  A slope that keeps growing means faster than any power
    (infinite edge); a slope that jumps around means no trend.
    """
    half = depth // 2

    def edge(sign: int) -> float:
        ns = [sign * k for k in range(half, depth + 1)]
        g = _log_profile(ctx, f, ns)
        if any(math.isinf(v) for v in g):
            return -sign * math.inf
        slopes = [sign * (g[i + 1] - g[i]) for i in range(len(g) - 1)]
        early, late = slopes[: len(slopes) // 2], slopes[len(slopes) // 2 :]
        drift = sum(late) / len(late) - sum(early) / len(early)
        diffs = [b - a for a, b in zip(late, late[1:])]
        monotone = all(d * sign >= -1e-9 for d in diffs)
        if sign * drift > 0.5 and monotone:
            return -sign * math.inf
        if max(late) - min(late) > 0.5:
            raise EstimationError("lattice samples oscillate without a clear power law")
        return -late[-1]

    lower = edge(+1)
    upper = edge(-1)
    lo, hi = lower + margin, upper - margin
    if not lo < hi:
        raise EstimationError(f"no convergence strip: estimated edges {lower:.3g} and {upper:.3g}")
    return Strip(lo, hi)

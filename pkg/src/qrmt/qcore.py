"""Scalar q-calculus primitives.

All functions take a :class:`QContext` first and complex (or real) arguments
after it; complex powers of ``q`` use the real logarithm ``ln q < 0`` so that
``q**s`` is single valued and exactly periodic in ``s`` with period
``2*pi*i / ln q``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from functools import lru_cache

from .errors import ConvergenceError, PoleError, QOverflowError

__all__ = [
    "QContext",
    "Strip",
    "qpow",
    "q_bracket",
    "q_factorial",
    "qpoch_finite",
    "qpoch_infinite",
    "qpoch_lattice",
    "q_gamma",
    "k_q",
    "q_exp_lower",
    "q_exp_upper",
    "q_beta",
]


@dataclass(frozen=True)
class QContext:
    """Deformation parameter plus the numerical policy shared by every routine."""

    q: float
    eps: float = 1e-12
    max_terms: int = 10_000
    pole_guard: float = 1e-8

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 < q < 1.0):
            raise ValueError(f"q must lie in the open interval (0, 1), got {self.q!r}")
        if not (self.eps > 0.0):
            raise ValueError("eps must be positive")
        if int(self.max_terms) < 1:
            raise ValueError("max_terms must be >= 1")
        if not (self.pole_guard > 0.0):
            raise ValueError("pole_guard must be positive")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "max_terms", int(self.max_terms))

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    @property
    def period(self) -> complex:
        """Imaginary period ``2*pi*i/ln q`` of every function of ``q**s``."""
        return 2j * math.pi / self.log_q

    def with_q(self, q: float) -> "QContext":
        return replace(self, q=q)

    def rebase(self, alpha: float) -> "QContext":
        """Context for base ``q**alpha`` with the same tolerances."""
        return replace(self, q=self.q**alpha)

    def lattice_index(self, x: float) -> int | None:
        """Return ``k`` when ``x == q**k`` to within a few ulps, else ``None``."""
        if not (isinstance(x, (int, float)) and x > 0):
            return None
        k = round(math.log(x) / self.log_q)
        if abs(self.q**k - x) <= 8 * 2.0**-52 * x:
            return int(k)
        return None


@dataclass(frozen=True)
class Strip:
    """Vertical strip ``lower < Re(s) < upper`` (edges may be infinite)."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (self.lower < self.upper):
            raise ValueError(f"empty strip <{self.lower}; {self.upper}>")

    def __contains__(self, s) -> bool:
        return self.lower < complex(s).real < self.upper

    def width(self) -> float:
        return self.upper - self.lower


def _finite(z: complex, what: str) -> complex:
    if not cmath.isfinite(z):
        raise QOverflowError(f"{what} is not finite ({z!r})")
    return z


def qpow(ctx: QContext, x) -> complex:
    """``q**x`` on the principal branch."""
    try:
        return cmath.exp(complex(x) * ctx.log_q)
    except OverflowError:
        raise QOverflowError(f"q**x overflows for x={x!r}") from None


def q_bracket(ctx: QContext, x) -> complex:
    return (1.0 - qpow(ctx, x)) / (1.0 - ctx.q)


def q_factorial(ctx: QContext, n: int) -> float:
    """``[n]_q! = (q;q)_n / (1-q)**n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    q = ctx.q
    out = 1.0
    for k in range(1, n + 1):
        out *= (1.0 - q**k) / (1.0 - q)
    return out


def qpoch_finite(ctx: QContext, a, n: int) -> complex:
    if n < 0:
        raise ValueError("n must be nonnegative")
    a = complex(a)
    q = ctx.q
    out = 1.0 + 0j
    for k in range(n):
        out *= 1.0 - a * q**k
    return _finite(out, "(a;q)_n")


def qpoch_infinite(ctx: QContext, a, guard: float | None = None) -> complex:
    """Truncated ``(a;q)_inf``.

    Factors are multiplied until the log-magnitude bound on the remaining
    tail, ``|a| q**K / ((1-q)(1-|a| q**K))``, drops below ``ctx.eps``.
    With ``guard`` set, a factor smaller than ``guard`` in modulus raises
    :class:`PoleError` carrying its index instead of returning a near-zero.
    """
    a = complex(a)
    if a == 0:
        return 1.0 + 0j
    q = ctx.q
    abs_a = abs(a)
    out = 1.0 + 0j
    for k in range(ctx.max_terms):
        qk = q**k
        m = abs_a * qk
        if m < 1.0 and m <= ctx.eps * (1.0 - q) * (1.0 - m):
            return out
        factor = 1.0 - a * qk
        if guard is not None and abs(factor) < guard:
            raise PoleError(f"factor k={k} of (a;q)_inf vanishes", k=k)
        if factor == 0:
            return 0j
        out *= factor
        if not cmath.isfinite(out):
            raise QOverflowError(f"(a;q)_inf overflows for a={a!r}")
    raise ConvergenceError(f"(a;q)_inf did not converge within {ctx.max_terms} factors")


def qpoch_lattice(ctx: QContext, e: int) -> float:
    """``(q**e; q)_inf`` for an integer exponent, exactly zero when ``e <= 0``."""
    if e <= 0:
        return 0.0
    return _euler_tail(ctx.q, ctx.eps, ctx.max_terms, e)


@lru_cache(maxsize=4096)
def _euler_tail(q: float, eps: float, max_terms: int, e: int) -> float:
    return qpoch_infinite(QContext(q, eps, max_terms), q**e).real


def _gamma_pole_check(ctx: QContext, s: complex, what: str) -> None:
    # (q**s; q)_inf has zeros where q**(s+k) == 1, k = 0, 1, 2, ...
    x = -s.real
    for k in {math.floor(x), math.ceil(x)}:
        if 0 <= k <= ctx.max_terms:
            if abs(1.0 - qpow(ctx, s + k)) < ctx.pole_guard:
                raise PoleError(f"{what} has a pole at s={s!r} (k={k})", k=k, factor=what)


def q_gamma(ctx: QContext, s) -> complex:
    """``Gamma_q(s) = (q;q)_inf / (q**s;q)_inf * (1-q)**(1-s)``."""
    s = complex(s)
    _gamma_pole_check(ctx, s, "Gamma_q")
    num = _euler_tail(ctx.q, ctx.eps, ctx.max_terms, 1)
    den = qpoch_infinite(ctx, qpow(ctx, s))
    if den == 0:
        raise PoleError(f"Gamma_q has a pole at s={s!r}", factor="Gamma_q")
    try:
        scale = cmath.exp((1.0 - s) * math.log1p(-ctx.q))
    except OverflowError:
        raise QOverflowError(f"(1-q)**(1-s) overflows at s={s!r}") from None
    return _finite(num / den * scale, "Gamma_q(s)")


def k_q(ctx: QContext, s) -> complex:
    """``K_q(s) = (-q;q)_inf (-1;q)_inf / ((-q**s;q)_inf (-q**(1-s);q)_inf)``."""
    s = complex(s)
    num = _k_numerator(ctx.q, ctx.eps, ctx.max_terms)
    g = ctx.pole_guard
    den = qpoch_infinite(ctx, -qpow(ctx, s), guard=g) * qpoch_infinite(ctx, -qpow(ctx, 1.0 - s), guard=g)
    return _finite(num / den, "K_q(s)")


@lru_cache(maxsize=256)
def _k_numerator(q: float, eps: float, max_terms: int) -> float:
    ctx = QContext(q, eps, max_terms)
    return (qpoch_infinite(ctx, -q) * qpoch_infinite(ctx, -1.0)).real


def q_exp_lower(ctx: QContext, z) -> complex:
    """Small q-exponential ``e_q^z = 1/((1-q)z; q)_inf`` (meromorphic in z)."""
    den = qpoch_infinite(ctx, (1.0 - ctx.q) * complex(z), guard=ctx.pole_guard)
    return _finite(1.0 / den, "e_q^z")


def q_exp_upper(ctx: QContext, z) -> complex:
    """Big q-exponential ``E_q^z = (-(1-q)z; q)_inf`` (entire in z)."""
    return qpoch_infinite(ctx, -(1.0 - ctx.q) * complex(z))


def q_beta(ctx: QContext, t, s) -> complex:
    """``B_q(t, s) = Gamma_q(t) Gamma_q(s) / Gamma_q(t+s)``."""
    t, s = complex(t), complex(s)
    return q_gamma(ctx, t) * q_gamma(ctx, s) / q_gamma(ctx, t + s)

"""Basic hypergeometric series and the series families behind each master theorem.

Every series here is summed by :func:`sum_series`, which stops once three
consecutive terms are below ``eps`` relative to the running sum.
"""

from __future__ import annotations

import cmath
import enum
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

from .errors import BranchError, ConvergenceError, DivergenceError, PoleError
from .qcore import QContext, q_gamma, qpow

__all__ = [
    "SeriesSum",
    "sum_series",
    "phi_rs",
    "q_cos",
    "q_sin",
    "q_bessel3",
    "CoefficientFunction",
    "SeriesFamily",
    "SeriesSpec",
    "PointFunction",
    "build_series",
]

_HUGE = 1e300
_ULP = 2.0**-52


@dataclass(frozen=True)
class SeriesSum:
    value: complex
    err_estimate: float
    n_terms: int


def sum_series(ctx: QContext, terms: Iterable[complex], *, what: str = "series", min_terms: int = 1,
               scale: float = 0.0) -> SeriesSum:
    """Sum ``terms`` with the shared stopping rule.

    ``scale`` is a floor for the reference magnitude, used when a partial
    sum is one piece of a larger total.

    Raises :class:`DivergenceError` if a term overflows or the terms are not
    decaying when ``ctx.max_terms`` is reached, :class:`ConvergenceError` if
    they are decaying but too slowly.
    """
    eps = ctx.eps
    cap = ctx.max_terms
    total = 0j
    small = 0
    n = 0
    max_abs = 0.0
    last = prev = 0.0
    early_peak = late_peak = 0.0
    for t in terms:
        if n >= cap:
            if late_peak >= 0.1 * early_peak and late_peak > eps * abs(total):
                raise DivergenceError(f"{what}: terms are not decaying after {cap} terms")
            raise ConvergenceError(f"{what}: stopping rule did not fire within {cap} terms")
        a = abs(t)
        if not math.isfinite(a) or a > _HUGE:
            raise DivergenceError(f"{what}: term {n} overflows")
        total += t
        n += 1
        prev, last = last, a
        if a > max_abs:
            max_abs = a
        if n <= cap // 2:
            early_peak = max(early_peak, a)
        else:
            late_peak = max(late_peak, a)
        if a <= eps * max(abs(total), scale) and (total != 0 or n >= 16):
            small += 1
            if small >= 3 and n >= min_terms:
                break
        else:
            small = 0
    tail = last
    if 0 < last < prev:
        r = last / prev
        tail = last * r / (1.0 - r)
    return SeriesSum(total, tail + n * _ULP * max_abs, n)


def _check_lower_params(ctx: QContext, lower: Sequence[complex]) -> None:
    lq = ctx.log_q
    for b in lower:
        if b == 0:
            continue
        # b*q**j == 1 needs j = -ln(b)/ln(q) to be a nonnegative integer
        j = round(-math.log(abs(b)) / lq)
        for jj in (j - 1, j, j + 1):
            if 0 <= jj <= ctx.max_terms and abs(1.0 - b * ctx.q**jj) < ctx.pole_guard:
                raise PoleError(f"lower parameter {b!r} equals q**-{jj}", k=jj, factor="phi_rs")


def phi_rs(ctx: QContext, upper: Sequence, lower: Sequence, z) -> complex:
    """``_r phi_s(a_1..a_r; b_1..b_s; q, z)``."""
    upper = [complex(a) for a in upper]
    lower = [complex(b) for b in lower]
    z = complex(z)
    r, s = len(upper), len(lower)
    _check_lower_params(ctx, lower)
    if z == 0:
        return 1.0 + 0j
    if r > s + 1:
        raise DivergenceError(f"{r}phi{s} diverges for every z != 0")
    if r == s + 1 and abs(z) >= 1:
        raise DivergenceError(f"{r}phi{s} diverges for |z| >= 1 (|z|={abs(z):.6g})")
    e = 1 + s - r
    q = ctx.q

    def terms():
        t = 1.0 + 0j
        k = 0
        while True:
            yield t
            qk = q**k
            num = 1.0 + 0j
            for a in upper:
                num *= 1.0 - a * qk
            den = 1.0 - q ** (k + 1)
            for b in lower:
                den *= 1.0 - b * qk
            t *= num / den * z * ((-qk) ** e if e else 1.0)
            k += 1
            if t == 0:
                return

    return sum_series(ctx, terms(), what=f"{r}phi{s}").value


def _bracket_real(q: float, k: int) -> float:
    return (1.0 - q**k) / (1.0 - q)


def q_cos(ctx: QContext, x) -> complex:
    """``cos(x; q^2) = sum (-1)^n q^(n(n+1)) x^(2n) / [2n]_q!``."""
    x = complex(x)
    q = ctx.q
    x2 = x * x

    def terms():
        t = 1.0 + 0j
        n = 0
        while True:
            yield t
            n += 1
            t *= -(q ** (2 * n)) * x2 / (_bracket_real(q, 2 * n - 1) * _bracket_real(q, 2 * n))

    return sum_series(ctx, terms(), what="q-cosine").value


def q_sin(ctx: QContext, x) -> complex:
    """``sin(x; q^2) = sum (-1)^n q^(n(n+1)) x^(2n+1) / [2n+1]_q!``."""
    x = complex(x)
    if x == 0:
        return 0j
    q = ctx.q
    x2 = x * x

    def terms():
        t = x
        n = 0
        while True:
            yield t
            n += 1
            t *= -(q ** (2 * n)) * x2 / (_bracket_real(q, 2 * n) * _bracket_real(q, 2 * n + 1))

    return sum_series(ctx, terms(), what="q-sine").value


def _principal_power(x: complex, nu: float) -> complex:
    if x == 0:
        return 1.0 + 0j if nu == 0 else 0j
    if x.imag == 0 and x.real < 0 and not float(nu).is_integer():
        raise BranchError(f"x**nu undefined on the negative axis for nu={nu}")
    if float(nu).is_integer():
        return x ** int(nu)
    return cmath.exp(nu * cmath.log(x))


def q_bessel3(ctx: QContext, nu: float, x) -> complex:
    """Third Jackson (Hahn-Exton) q-Bessel function ``J_nu(x; q^2)``."""
    if not nu > -1:
        raise ValueError("nu must exceed -1")
    x = complex(x)
    p_ctx = ctx.rebase(2)
    p = p_ctx.q
    pre = _principal_power(x, nu)
    if pre == 0:
        return 0j
    pre /= (1.0 - p) ** nu * q_gamma(p_ctx, nu + 1.0)
    return pre * phi_rs(p_ctx, [0.0], [p ** (nu + 1.0)], p * x * x)


# ---------------------------------------------------------------------------
# Coefficient functions and series families


@dataclass(frozen=True)
class CoefficientFunction:
    """Coefficient map ``s -> phi(s)`` on the half-plane ``Re(s) >= -delta``.

    ``period`` is the multiple ``m`` for which ``phi`` (or the object the
    relevant theorem asks about) is declared ``2*pi*i/ln(q**m)``-periodic;
    ``None`` means undeclared.  ``growth`` is Hardy's ``(C, P, A)`` triple.
    """

    eval: Callable[[complex], complex]
    delta: float = 0.5
    period: float | None = 1.0
    growth: tuple[float, float, float] | None = None
    name: str = "phi"

    def __post_init__(self):
        if not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.period is not None and not self.period > 0:
            raise ValueError("period multiple must be positive")

    def __call__(self, s) -> complex:
        return complex(self.eval(complex(s)))

    @classmethod
    def constant(cls, c=1.0, **kw) -> "CoefficientFunction":
        c = complex(c)
        kw.setdefault("name", f"const({c})")
        return cls(lambda s: c, **kw)


class SeriesFamily(enum.Enum):
    PLAIN = "plain"
    POCHHAMMER_DENOM = "pochhammer_denom"
    QFACTORIAL_DENOM = "qfactorial_denom"
    TRIANGULAR = "triangular"
    TRIANGULAR_POCHHAMMER = "triangular_pochhammer"
    ALPHA_P_FIRST = "alpha_p_first"
    ALPHA_P_FIRST_INT = "alpha_p_first_int"
    ALPHA_P_SECOND = "alpha_p_second"
    ALPHA_P_SECOND_INT = "alpha_p_second_int"

    @property
    def is_alpha(self) -> bool:
        return self.name.startswith("ALPHA")

    @property
    def is_integer_alpha(self) -> bool:
        return self.name.endswith("_INT")

    @property
    def triangular(self) -> bool:
        """True for the families of the second (residue-based) theorem."""
        return self in (
            SeriesFamily.TRIANGULAR,
            SeriesFamily.TRIANGULAR_POCHHAMMER,
            SeriesFamily.ALPHA_P_SECOND,
            SeriesFamily.ALPHA_P_SECOND_INT,
        )


@dataclass(frozen=True)
class SeriesSpec:
    family: SeriesFamily
    alpha: float = 1.0
    p: int = 0

    def __post_init__(self):
        fam = SeriesFamily(self.family)
        object.__setattr__(self, "family", fam)
        if isinstance(self.p, bool) or int(self.p) != self.p or self.p < 0:
            raise ValueError("p must be a nonnegative integer")
        object.__setattr__(self, "p", int(self.p))
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if fam.is_alpha:
            if fam.is_integer_alpha:
                if float(self.alpha) != int(self.alpha):
                    raise ValueError(f"{fam.name} requires a positive integer alpha")
                object.__setattr__(self, "alpha", int(self.alpha))
        elif self.alpha != 1 or self.p != 0:
            raise ValueError(f"{fam.name} takes alpha=1 and p=0")

    @property
    def period_multiple(self) -> float:
        return self.alpha if self.family.is_alpha else 1.0


@dataclass(frozen=True, eq=False)
class PointFunction:
    """A function sampled on the q-lattice.

    ``lattice``, when given, evaluates ``f(base**n)`` for integer ``n``
    without forming ``base**n`` in floating point; this is how exact zeros
    and cancellation-free forms on ``R_{q,+}`` are supplied.  Lattice values
    are memoised.
    """

    eval: Callable[[complex], complex]
    support_note: str = "defined on R_{q,+}"
    lattice: Callable[[int], complex] | None = None
    base: float | None = None
    name: str = "f"
    _cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, x) -> complex:
        return complex(self.eval(x))

    def at(self, ctx: QContext, n: int) -> complex:
        """``f(q**n)`` for the context's ``q``."""
        if self.lattice is not None and self.base == ctx.q:
            try:
                return self._cache[n]
            except KeyError:
                v = self._cache[n] = complex(self.lattice(n))
                return v
        return complex(self.eval(ctx.q**n))


class _Coefficients:
    """Lazily grown list of ``c_n`` with ``f(x) = sum c_n y**n``."""

    def __init__(self, ctx: QContext, spec: SeriesSpec, phi: CoefficientFunction):
        self.ctx, self.spec, self.phi = ctx, spec, phi
        self.values: list[complex] = []
        self._gen = self._generate()

    def __getitem__(self, n: int) -> complex:
        while len(self.values) <= n:
            self.values.append(next(self._gen))
        return self.values[n]

    def _generate(self):
        fam = self.spec.family
        q = self.ctx.q
        alpha, p = self.spec.alpha, self.spec.p
        qa = q**alpha
        qq = 1.0  # (q;q)_n
        fact = 1.0  # [n]_q!
        fact_a = 1.0  # [n+p]_{q^alpha}!
        for j in range(1, p + 1):
            fact_a *= _bracket_real(qa, j)
        fact_i = 1.0  # [alpha n + p]_q!
        if fam.is_integer_alpha:
            for j in range(1, p + 1):
                fact_i *= _bracket_real(q, j)
        n = 0
        while True:
            if n > 0:
                qq *= 1.0 - q**n
                fact *= _bracket_real(q, n)
                fact_a *= _bracket_real(qa, n + p)
                if fam.is_integer_alpha:
                    for j in range(alpha * (n - 1) + p + 1, alpha * n + p + 1):
                        fact_i *= _bracket_real(q, j)
            if fam is SeriesFamily.PLAIN:
                w = 1.0
            elif fam is SeriesFamily.POCHHAMMER_DENOM:
                w = 1.0 / qq
            elif fam is SeriesFamily.QFACTORIAL_DENOM:
                w = 1.0 / fact
            elif fam is SeriesFamily.TRIANGULAR:
                w = q ** (n * (n + 1) / 2)
            elif fam is SeriesFamily.TRIANGULAR_POCHHAMMER:
                w = q ** (n * (n + 1) / 2) / qq
            elif fam is SeriesFamily.ALPHA_P_FIRST:
                w = 1.0 / fact_a
            elif fam is SeriesFamily.ALPHA_P_FIRST_INT:
                w = 1.0 / fact_i
            elif fam is SeriesFamily.ALPHA_P_SECOND:
                w = qa ** (n * (n + 1) / 2) / fact_a
            else:
                w = qa ** (n * (n + 1) / 2) / fact_i
            sign = -1.0 if n % 2 else 1.0
            yield 0j if w == 0 else sign * w * self.phi(n)
            n += 1


def build_series(ctx: QContext, spec: SeriesSpec, phi: CoefficientFunction) -> PointFunction:
    """Point function ``f`` summing the series family ``spec`` built from ``phi``."""
    coeffs = _Coefficients(ctx, spec, phi)
    alpha = spec.alpha
    label = f"{spec.family.name}[{phi.name}]"

    def f(x) -> complex:
        x = complex(x)
        y = x if not spec.family.is_alpha else _principal_power(x, alpha)
        if y == 0:
            return coeffs[0]

        def terms():
            yn = 1.0 + 0j
            n = 0
            while True:
                c = coeffs[n]
                yield 0j if c == 0 else c * yn
                yn *= y
                n += 1

        return sum_series(ctx, terms(), what=label).value

    return PointFunction(f, support_note="power series; diverges outside its disc for PLAIN",
                         lattice=lambda n: f(ctx.q**n), base=ctx.q, name=label)

"""Closed forms of the two q-analogues of Ramanujan's Master Theorem.

The first theorem covers the alternating series ``sum phi(n) (-x)^n`` and
its variants; its right-hand side carries the normaliser ``1/K_q(s)``.  The
second covers the series with the triangular weight ``q^(n(n+1)/2)`` and has
no ``K_q``.  :func:`verify_identity` pits each closed form against a
truncated q-Mellin sum.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .errors import HypothesisError, PoleError, QError
from .qcore import QContext, k_q, q_gamma
from .qmellin import IdentityReport, IdentitySample, q_mellin
from .qseries import CoefficientFunction, PointFunction, SeriesFamily, SeriesSpec, build_series

__all__ = [
    "ClosedForm",
    "Finding",
    "rmt1_rhs",
    "rmt2_rhs",
    "family_rhs",
    "periodicity_object",
    "hypothesis_check",
    "verify_identity",
]

# residual above which a periodicity spot check is reported
PERIODICITY_TOL = 1e-8
# deterministic probe points (offsets from -delta/2 in the half-plane)
_PROBES = (0.0, 0.25, 0.5 + 0.3j, 1.0 - 0.2j, 1.7 + 0.1j, 2.5 - 0.6j)


class ClosedForm(SeriesSpec):
    """Right-hand-side selector; same fields and invariants as :class:`SeriesSpec`."""

    @classmethod
    def of(cls, spec: SeriesSpec) -> "ClosedForm":
        return cls(spec.family, spec.alpha, spec.p)


@dataclass(frozen=True)
class Finding:
    kind: str
    message: str
    value: float | None = None

    def to_dict(self) -> dict:
        v = self.value
        return {"kind": self.kind, "message": self.message,
                "value": v if v is None or math.isfinite(v) else None}


def _check_period(phi: CoefficientFunction, m: float) -> None:
    if phi.period is not None and abs(phi.period - m) > 1e-12 * max(1.0, m):
        raise HypothesisError(f"{phi.name} is declared with period multiple {phi.period}, the closed form needs {m}")


def _g(ctx: QContext, s: complex, factor: str) -> complex:
    try:
        return q_gamma(ctx, s)
    except PoleError as e:
        raise PoleError(f"{factor} has a pole at s={s!r}", k=e.k, factor=factor) from e


def _one_minus_q_pow(ctx: QContext, s: complex) -> complex:
    return cmath.exp(s * math.log1p(-ctx.q))


def rmt1_rhs(ctx: QContext, phi: CoefficientFunction, s) -> complex:
    """``Gamma_q(s) Gamma_q(1-s) phi(-s) / K_q(s)``."""
    s = complex(s)
    _check_period(phi, 1.0)
    v = phi(-s)
    if v == 0:
        return 0j
    return _g(ctx, s, "Gamma_q(s)") * _g(ctx, 1 - s, "Gamma_q(1-s)") * v / k_q(ctx, s)


def rmt2_rhs(ctx: QContext, phi: CoefficientFunction, s) -> complex:
    """``Gamma_q(s) Gamma_q(1-s) phi(-s)``."""
    s = complex(s)
    _check_period(phi, 1.0)
    v = phi(-s)
    if v == 0:
        return 0j
    return _g(ctx, s, "Gamma_q(s)") * _g(ctx, 1 - s, "Gamma_q(1-s)") * v


def family_rhs(ctx: QContext, cf: SeriesSpec, phi: CoefficientFunction, s) -> complex:
    """Closed form of ``M_q f`` for ``f = build_series(ctx, cf, phi)``."""
    s = complex(s)
    fam = cf.family
    if fam is SeriesFamily.PLAIN:
        return rmt1_rhs(ctx, phi, s)
    if fam is SeriesFamily.TRIANGULAR:
        return rmt2_rhs(ctx, phi, s)
    _check_period(phi, cf.period_multiple)
    if not fam.is_alpha:
        v = phi(-s)
        if v == 0:
            return 0j
        out = v * _g(ctx, s, "Gamma_q(s)")
        if fam in (SeriesFamily.POCHHAMMER_DENOM, SeriesFamily.TRIANGULAR_POCHHAMMER):
            out *= _one_minus_q_pow(ctx, s)
        if fam in (SeriesFamily.POCHHAMMER_DENOM, SeriesFamily.QFACTORIAL_DENOM):
            out /= k_q(ctx, s)
        return out

    alpha, p = cf.alpha, cf.p
    ca = ctx.rebase(alpha)
    w = s / alpha
    v = phi(-w)
    if v == 0:
        return 0j
    bracket = (1.0 - ctx.q) / (1.0 - ca.q)  # [1/alpha]_{q^alpha}
    out = bracket * v * _g(ca, 1 - w, "Gamma_{q^a}(1-s/a)") * _g(ca, w, "Gamma_{q^a}(s/a)")
    if fam.is_integer_alpha:
        out /= _g(ctx, 1 - s + p, "Gamma_q(1-s+p)")
    else:
        out /= _g(ca, 1 - w + p, "Gamma_{q^a}(1-s/a+p)")
    if fam in (SeriesFamily.ALPHA_P_FIRST, SeriesFamily.ALPHA_P_FIRST_INT):
        out /= k_q(ca, w)
    return out


def periodicity_object(ctx: QContext, phi: CoefficientFunction, cf: SeriesSpec) -> tuple[Callable, complex]:
    """The function each theorem requires to be periodic, and its period.

    PLAIN, POCHHAMMER_DENOM and both triangular families ask for ``phi``
    itself; the factorial family asks for ``(1-q)^s phi(s)``; the first
    (alpha, p) variants for ``(1-q^a)^s phi(s)``, the integer-alpha ones for
    ``(1-q)^(a s) phi(s)``.
    """
    fam = cf.family
    m = cf.period_multiple
    period = 2j * math.pi / (m * ctx.log_q)
    if fam is SeriesFamily.QFACTORIAL_DENOM:
        lc = math.log1p(-ctx.q)
    elif fam in (SeriesFamily.ALPHA_P_FIRST, SeriesFamily.ALPHA_P_SECOND):
        lc = math.log1p(-ctx.q**m)
    elif fam.is_integer_alpha:
        lc = m * math.log1p(-ctx.q)
    else:
        return phi, period
    return (lambda s: cmath.exp(lc * s) * phi(s)), period


def hypothesis_check(ctx: QContext, phi: CoefficientFunction, family: SeriesSpec) -> list[Finding]:
    """Numerical spot checks of the theorem hypotheses (never raises)."""
    findings: list[Finding] = []
    m = family.period_multiple
    if phi.period is None:
        findings.append(Finding("period-undeclared", f"{phi.name} declares no period; tested against multiple {m}"))
    elif abs(phi.period - m) > 1e-12 * max(1.0, m):
        findings.append(Finding("period-mismatch", f"{phi.name} declares multiple {phi.period}, family needs {m}",
                                float(phi.period)))
    obj, period = periodicity_object(ctx, phi, family)
    worst = 0.0
    for z in _PROBES:
        s = z - phi.delta / 2
        try:
            a, b = complex(obj(s)), complex(obj(s + period))
            r = abs(b - a) / (1.0 + abs(a))
        except (QError, ArithmeticError, ValueError):
            r = math.inf
        if not math.isfinite(r):
            r = math.inf
        worst = max(worst, r)
    if worst > PERIODICITY_TOL:
        findings.append(Finding("periodicity", f"periodicity residual {worst:.3g} over the probe points", worst))
    if phi.growth is not None:
        C, P, A = phi.growth
        if A >= math.pi:
            findings.append(Finding("growth-exponent", f"growth exponent A={A} is not below pi", float(A)))
        bad = 0
        for z in _PROBES + tuple(x + 3j * x for x in _PROBES):
            s = z - phi.delta / 2
            try:
                v = abs(phi(s))
            except (QError, ArithmeticError, ValueError):
                continue
            if v > C * math.exp(P * s.real + A * abs(s.imag)) * (1 + 1e-12):
                bad += 1
        if bad:
            findings.append(Finding("growth", f"{bad} probe points violate the declared growth bound", float(bad)))
    return findings


def verify_identity(
    ctx: QContext,
    spec: SeriesSpec,
    phi: CoefficientFunction,
    s_samples: Sequence,
    tolerance: float,
    *,
    f: PointFunction | None = None,
    rhs: Callable[[complex], complex] | None = None,
    shift: complex = 0,
    scale: complex = 1,
    name: str = "",
) -> IdentityReport:
    """Compare ``M_q f`` with the closed form on ``s_samples``.

    ``f`` defaults to the series built from ``phi``; a closed-form ``f`` may
    be supplied instead, in which case ``f(x) = scale * x**shift * series(x)``
    is spot-checked on lattice points and the right-hand side becomes
    ``scale * family_rhs(s + shift)``.  ``rhs`` overrides the right-hand side
    entirely.  Numerical failures are recorded per sample.
    """
    cf = ClosedForm.of(spec)
    findings = hypothesis_check(ctx, phi, cf)
    series = build_series(ctx, spec, phi)
    target = f if f is not None else series
    if f is not None:
        findings.extend(_agreement(ctx, f, series, shift, scale))
    if rhs is None:
        def rhs(s):
            return scale * family_rhs(ctx, cf, phi, s + shift)

    samples = []
    for s in s_samples:
        try:
            lhs = q_mellin(ctx, target, s).value
            samples.append(IdentitySample.compare(s, lhs, rhs(complex(s))))
        except (QError, ArithmeticError) as e:
            samples.append(IdentitySample.failure(s, e))
    return IdentityReport(name or f"{spec.family.name}[{phi.name}]", samples, tolerance, findings)


def _agreement(ctx, f, series, shift, scale, ns=range(1, 7)) -> list[Finding]:
    worst = 0.0
    for n in ns:
        x = ctx.q**n
        try:
            a = f.at(ctx, n)
            b = scale * cmath.exp(complex(shift) * n * ctx.log_q) * series(x)
        except (QError, ArithmeticError):
            return [Finding("series-agreement", f"series for {f.name} could not be evaluated at q**{n}")]
        d = abs(a - b)
        worst = max(worst, d / max(abs(a), abs(b)) if d else 0.0)
    if worst > 1e-9:
        return [Finding("series-agreement", f"{f.name} differs from its series by {worst:.3g}", worst)]
    return []

"""Built-in verification suites and their report formats."""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
import os
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from .errors import QError
from .functions import (
    big_exp_neg_qx,
    compose_power,
    one_over_one_plus_x,
    one_phi_one_function,
    power_times,
    qbessel_function,
    qbinomial_ratio,
    qcos_function,
    qsin_function,
    reciprocal_qpoch,
    reflect,
    shifted_qpoch,
    small_exp_neg,
)
from .qcore import QContext, k_q, q_beta, q_gamma, qpoch_infinite, qpow
from .qmellin import IdentityReport, IdentitySample, jackson_integral_improper, mera_partial, pi_over_sin, q_mellin, q_mellin_inverse
from .qseries import CoefficientFunction, SeriesFamily, SeriesSpec
from .rmt import Finding, verify_identity

__all__ = [
    "SuiteConfig",
    "SuiteReport",
    "SUITES",
    "run_suite",
    "s_grid",
    "sinpi",
    "report_to_dict",
    "report_to_json",
    "report_to_csv",
    "report_to_text",
    "load_report",
]

ENV_Q = "QMELLIN_DEFAULT_Q"
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
FORMATS = ("json", "csv", "text")


@dataclass(frozen=True)
class SuiteConfig:
    q: float | None = None
    eps: float = 1e-12
    max_terms: int = 10_000
    pole_guard: float = 1e-8
    tolerance: float = 1e-8
    grid: tuple[int, int] = (5, 3)
    output_format: str = "json"
    output_path: str | None = None
    force_q: bool = False

    def __post_init__(self):
        if self.q is not None:
            QContext(self.q)
        QContext(0.5, self.eps, self.max_terms, self.pole_guard)
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        nr, ni = self.grid
        if int(nr) < 1 or int(ni) < 1:
            raise ValueError("grid dimensions must be >= 1")
        object.__setattr__(self, "grid", (int(nr), int(ni)))
        if self.output_format not in FORMATS:
            raise ValueError(f"output_format must be one of {FORMATS}")

    def context(self, q: float) -> QContext:
        return QContext(q, self.eps, self.max_terms, self.pole_guard)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "eps": self.eps,
            "max_terms": self.max_terms,
            "pole_guard": self.pole_guard,
            "tolerance": self.tolerance,
            "grid": list(self.grid),
            "format": self.output_format,
            "force_q": self.force_q,
        }


@dataclass
class IdentityEntry:
    suite: str
    q: float
    report: IdentityReport
    informative: bool = False


@dataclass
class SuiteReport:
    suite_name: str
    config_echo: dict
    identity_reports: list[IdentityEntry]
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(e.report.passed for e in self.identity_reports)

    @property
    def informative(self) -> bool:
        return any(e.informative for e in self.identity_reports)

    @property
    def has_errors(self) -> bool:
        return any(s.error for e in self.identity_reports for s in e.report.samples)


def s_grid(lo: float, hi: float, n_real: int = 5, n_imag: int = 3) -> list[complex]:
    """Cell midpoints of ``(lo, hi)`` times imaginary offsets in ``[-0.2, 0.2]``.

    Midpoints keep every sample strictly inside the open strip.
    """
    res = [lo + (i + 0.5) * (hi - lo) / n_real for i in range(n_real)]
    ims = [0.0] if n_imag == 1 else [-0.2 + 0.4 * j / (n_imag - 1) for j in range(n_imag)]
    return [complex(r, t) for r in res for t in ims]


def sinpi(s) -> complex:
    """``sin(pi s)``, exactly zero at the integers."""
    s = complex(s)
    n = round(s.real)
    v = cmath.sin(math.pi * (s - n))
    return -v if n % 2 else v


# ---------------------------------------------------------------------------
# q resolution


@dataclass
class _Run:
    """Resolved per-suite state handed to the suite builders."""

    name: str
    cfg: SuiteConfig
    q: float
    informative: bool
    notes: list[Finding] = field(default_factory=list)

    @property
    def ctx(self) -> QContext:
        return self.cfg.context(self.q)

    def grid(self, lo: float, hi: float) -> list[complex]:
        return s_grid(lo, hi, *self.cfg.grid)

    def entry(self, report: IdentityReport) -> IdentityEntry:
        report.findings[:0] = self.notes
        return IdentityEntry(self.name, self.q, report, self.informative)


def _env_q() -> float | None:
    raw = os.environ.get(ENV_Q)
    if raw is None or raw.strip() == "":
        return None
    q = float(raw)
    QContext(q)
    return q


def _lattice_ratio(c: float, base: float) -> float:
    return math.log(c) / math.log(base)


def _resolve(name: str, cfg: SuiteConfig, suite_q: float | None, lattice_c: Callable | None,
             even: bool = False) -> _Run:
    """Pick ``q`` for a suite.

    Unconstrained suites use ``--q``, then the environment, then 0.5.  A suite
    whose identities need ``ln(c)/ln(base)`` integral, with
    ``(c, base, label) = lattice_c(q)``, keeps its own ``q``
    unless ``--force-q`` is given; a forced run is labelled informative.
    """
    if suite_q is None:
        q = cfg.q if cfg.q is not None else (_env_q() or 0.5)
        return _Run(name, cfg, q, False)
    if cfg.q is None or cfg.q == suite_q:
        return _Run(name, cfg, suite_q, False)
    if not cfg.force_q:
        note = Finding("q-override", f"requested q={cfg.q} ignored; suite needs q={suite_q!r} (use --force-q)",
                       float(cfg.q))
        return _Run(name, cfg, suite_q, False, [note])
    run = _Run(name, cfg, cfg.q, True)
    c, base, label = lattice_c(cfg.q)
    ratio = _lattice_ratio(c, base)
    if abs(ratio - round(ratio)) > 1e-9:
        run.notes.append(Finding("lattice-constraint", f"{label} = {ratio:.6g} is not an integer", ratio))
    if even and (abs(ratio - round(ratio)) > 1e-9 or round(ratio) % 2):
        run.notes.append(Finding("declared-constraint", f"{label} = {ratio:.6g} is not an even integer", ratio))
    return run


# ---------------------------------------------------------------------------
# helpers


def _compare(name: str, samples: Sequence, lhs: Callable, rhs: Callable, tol: float, findings=()) -> IdentityReport:
    out = []
    for s in samples:
        try:
            out.append(IdentitySample.compare(s, lhs(s), rhs(s)))
        except (QError, ArithmeticError) as e:
            out.append(IdentitySample.failure(s, e))
    return IdentityReport(name, out, tol, list(findings))


def _phi_e(ctx: QContext) -> CoefficientFunction:
    """``phi(s) = (q^(s+1);q)_inf / (q;q)_inf``, i.e. ``1/(q;q)_n`` at the integers."""
    den = qpoch_infinite(ctx, ctx.q)
    return CoefficientFunction(lambda s: qpoch_infinite(ctx, qpow(ctx, s + 1)) / den, name="(q^(s+1);q)/(q;q)")


def _one(period: float = 1.0) -> CoefficientFunction:
    return CoefficientFunction.constant(1.0, period=period, name="1")


def _bracket_half(ctx: QContext) -> float:
    return (1.0 - ctx.q) / (1.0 - ctx.q**2)


# ---------------------------------------------------------------------------
# suites


def _suite_one_over(run: _Run) -> list[IdentityEntry]:
    ctx = run.ctx
    rep = verify_identity(ctx, SeriesSpec(SeriesFamily.PLAIN), _one(), run.grid(0.0, 1.0), run.cfg.tolerance,
                          f=one_over_one_plus_x(ctx), name="1/(1+x)")
    return [run.entry(rep)]


def _suite_reciprocal_qpoch(run: _Run) -> list[IdentityEntry]:
    ctx, tol = run.ctx, run.cfg.tolerance
    grid = run.grid(0.1, 2.0)
    f = reciprocal_qpoch(ctx)
    reps = [
        verify_identity(ctx, SeriesSpec(SeriesFamily.PLAIN), _phi_e(ctx), grid, tol, f=f, name="plain-series"),
        verify_identity(ctx, SeriesSpec(SeriesFamily.POCHHAMMER_DENOM), _one(), grid, tol, f=f,
                        name="pochhammer-series"),
    ]
    A = 1.0 - ctx.q
    e = small_exp_neg(ctx)
    reps.append(_compare("e_q-integral", grid,
                         lambda s: jackson_integral_improper(ctx, power_times(e, s - 1), A).value,
                         lambda s: q_gamma(ctx, s) / k_q(ctx, s), tol))
    return [run.entry(r) for r in reps]


def _suite_big_q_exp(run: _Run) -> list[IdentityEntry]:
    ctx, tol = run.ctx, run.cfg.tolerance
    grid = run.grid(0.1, 0.9)
    f = shifted_qpoch(ctx)
    reps = [
        verify_identity(ctx, SeriesSpec(SeriesFamily.TRIANGULAR), _phi_e(ctx), grid, tol, f=f,
                        name="triangular-series"),
        verify_identity(ctx, SeriesSpec(SeriesFamily.TRIANGULAR_POCHHAMMER), _one(), grid, tol, f=f,
                        name="triangular-pochhammer-series"),
    ]
    E = big_exp_neg_qx(ctx)
    A = 1.0 - ctx.q
    reps.append(_compare("E_q-integral", grid,
                         lambda s: jackson_integral_improper(ctx, power_times(E, s - 1), A).value,
                         lambda s: q_gamma(ctx, s), tol))
    return [run.entry(r) for r in reps]


def _suite_mera(run: _Run) -> list[IdentityEntry]:
    ctx = run.ctx
    f = one_over_one_plus_x(ctx)
    samples = [0.3 + 0j, 0.5 + 0.1j, 0.7 - 0.2j]
    tol = 100 * run.cfg.tolerance
    findings = []
    s0 = 0.5 + 0.1j
    try:
        ref = q_mellin(ctx, f, s0).value
        errs = [abs(mera_partial(ctx, pi_over_sin, s0, N) - ref) for N in (10, 20, 50, 100, 200)]
        if any(b > a for a, b in zip(errs, errs[1:])):
            findings.append(Finding("mera-monotone", "partial-sum error increases with N", max(errs)))
    except (QError, ArithmeticError) as e:
        findings.append(Finding("mera-monotone", f"N sweep failed: {e}"))
    rep = _compare("mera-N200", samples, lambda s: mera_partial(ctx, pi_over_sin, s, 200),
                   lambda s: q_mellin(ctx, f, s).value, tol, findings)
    return [run.entry(rep)]


def _suite_inversion(run: _Run) -> list[IdentityEntry]:
    ctx, tol = run.ctx, run.cfg.tolerance
    out = []
    for f in (one_over_one_plus_x(ctx), small_exp_neg(ctx)):
        cache: dict = {}

        def F(s, f=f, cache=cache):
            if s not in cache:
                cache[s] = q_mellin(ctx, f, s).value
            return cache[s]

        xs = [ctx.q**m for m in range(-5, 6)]
        rep = _compare(f.name, xs, lambda x, F=F: q_mellin_inverse(ctx, F, 0.5, x.real),
                       lambda x, f=f: f.at(ctx, ctx.lattice_index(x.real)), tol)
        out.append(run.entry(rep))
    return out


def _suite_qbinomial(run: _Run) -> list[IdentityEntry]:
    ctx, tol = run.ctx, run.cfg.tolerance
    a, gamma = 1.0, 2.0
    grid = run.grid(0.1, 0.9)
    g0 = q_gamma(ctx, gamma)
    phi = CoefficientFunction(lambda s: q_gamma(ctx, gamma + s) * a**s / g0, name="Gamma_q(2+s)/Gamma_q(2)")
    f = qbinomial_ratio(ctx, a, gamma)
    spec = SeriesSpec(SeriesFamily.QFACTORIAL_DENOM)
    reps = [
        verify_identity(ctx, spec, phi, grid, tol, f=f, name="factorial-series"),
        verify_identity(ctx, spec, phi, grid, tol, f=f, name="beta-form",
                        rhs=lambda s: a ** (-s) * q_beta(ctx, gamma - s, s) / k_q(ctx, s)),
    ]
    return [run.entry(r) for r in reps]


def _suite_qcos(run: _Run) -> list[IdentityEntry]:
    ctx, tol = run.ctx, run.cfg.tolerance
    c2 = ctx.rebase(2)
    grid = run.grid(0.0, 1.0)
    f = qcos_function(ctx)
    spec = SeriesSpec(SeriesFamily.ALPHA_P_SECOND_INT, 2, 0)
    reps = [
        verify_identity(ctx, spec, _one(2), grid, tol, f=f, name="alpha-series"),
        verify_identity(ctx, spec, _one(2), grid, tol, f=f, name="closed-form",
                        rhs=lambda s: _bracket_half(ctx) * q_gamma(c2, 1 - s / 2) * q_gamma(c2, s / 2)
                        / q_gamma(ctx, 1 - s)),
    ]
    return [run.entry(r) for r in reps]


def _suite_qsin(run: _Run) -> list[IdentityEntry]:
    ctx, tol = run.ctx, run.cfg.tolerance
    c2 = ctx.rebase(2)
    grid = run.grid(0.0, 1.0)
    f = qsin_function(ctx)
    spec = SeriesSpec(SeriesFamily.ALPHA_P_SECOND_INT, 2, 1)
    reps = [
        verify_identity(ctx, spec, _one(2), grid, tol, f=f, shift=1, name="alpha-series"),
        verify_identity(ctx, spec, _one(2), grid, tol, f=f, shift=1, name="closed-form",
                        rhs=lambda s: _bracket_half(ctx) * q_gamma(c2, (1 - s) / 2) * q_gamma(c2, (1 + s) / 2)
                        / q_gamma(ctx, 1 - s)),
    ]
    return [run.entry(r) for r in reps]


def _suite_qbessel(run: _Run) -> list[IdentityEntry]:
    ctx, tol = run.ctx, run.cfg.tolerance
    c2 = ctx.rebase(2)
    p = c2.q
    lp = math.log1p(-p)
    grid = run.grid(0.1, 0.9)
    spec = SeriesSpec(SeriesFamily.ALPHA_P_SECOND, 2, 0)
    out = []
    for nu in (0.0, 0.5, 1.0):
        phi = CoefficientFunction(lambda s, nu=nu: cmath.exp(-2 * s * lp) / q_gamma(c2, s + nu + 1), period=2,
                                  name=f"(1-q^2)^(-2s)/Gamma_q2(s+{nu}+1)")
        f = qbessel_function(ctx, nu)
        scale = math.exp(-nu * lp)
        out.append(verify_identity(ctx, spec, phi, grid, tol, f=f, shift=nu, scale=scale, name=f"nu={nu}:alpha-series"))
        out.append(verify_identity(
            ctx, spec, phi, grid, tol, f=f, shift=nu, scale=scale, name=f"nu={nu}:closed-form",
            rhs=lambda s, nu=nu: _bracket_half(ctx) * cmath.exp(s * lp) * q_gamma(c2, (s + nu) / 2)
            / q_gamma(c2, (nu + 2 - s) / 2)))
    return [run.entry(r) for r in out]


def _suite_rphir(run: _Run) -> list[IdentityEntry]:
    ctx, tol = run.ctx, run.cfg.tolerance
    a, b = 0.5, 1.5
    qa, qb = qpoch_infinite(ctx, ctx.q**a), qpoch_infinite(ctx, ctx.q**b)
    phi = CoefficientFunction(
        lambda s: qa * qpoch_infinite(ctx, qpow(ctx, b + s)) / (qb * qpoch_infinite(ctx, qpow(ctx, a + s))),
        name="(q^a;q)_s/(q^b;q)_s")
    f = one_phi_one_function(ctx, a, b)
    grid = run.grid(0.05, 0.45)
    spec = SeriesSpec(SeriesFamily.TRIANGULAR_POCHHAMMER)
    ga, gb = q_gamma(ctx, a), q_gamma(ctx, b)
    reps = [
        verify_identity(ctx, spec, phi, grid, tol, f=f, name="triangular-pochhammer-series"),
        verify_identity(ctx, spec, phi, grid, tol, f=f, name="closed-form",
                        rhs=lambda s: cmath.exp(s * math.log1p(-ctx.q)) * q_gamma(ctx, a - s) * gb
                        / (q_gamma(ctx, b - s) * ga) * q_gamma(ctx, s)),
    ]
    return [run.entry(r) for r in reps]


def _suite_transform_laws(run: _Run) -> list[IdentityEntry]:
    ctx = run.ctx
    tol = run.cfg.tolerance / 10
    f = one_over_one_plus_x(ctx)
    reps = [_compare("reflection", run.grid(-1.0, 0.0), lambda s: q_mellin(ctx, reflect(f), s).value,
                     lambda s: q_mellin(ctx, f, -s).value, tol)]
    for rho in (2, 3):
        cr = ctx.rebase(rho)
        fr = one_over_one_plus_x(cr)
        bracket = (1.0 - ctx.q) / (1.0 - cr.q)  # [1/rho]_{q^rho}
        reps.append(_compare(f"scaling-rho={rho}", run.grid(0.0, 1.0),
                             lambda s, rho=rho: q_mellin(ctx, compose_power(f, rho), s).value,
                             lambda s, cr=cr, fr=fr, bracket=bracket, rho=rho: bracket * q_mellin(cr, fr, s / rho).value,
                             tol))
    x0 = 0.3
    reps.append(_compare("shift", run.grid(-x0, 1.0 - x0), lambda s: q_mellin(ctx, power_times(f, x0), s).value,
                         lambda s: q_mellin(ctx, f, s + x0).value, tol))
    return [run.entry(r) for r in reps]


def _suite_negative_control(run: _Run) -> list[IdentityEntry]:
    ctx = run.ctx
    phi = CoefficientFunction(sinpi, growth=(1.0, 0.0, math.pi), name="sin(pi s)")
    rep = verify_identity(ctx, SeriesSpec(SeriesFamily.PLAIN), phi, run.grid(0.0, 1.0), run.cfg.tolerance,
                          name="sin(pi s)")
    return [run.entry(rep)]


def _one_minus_q(q: float) -> tuple:
    return 1.0 - q, q, "ln(1-q)/ln(q)"


def _one_minus_q2(q: float) -> tuple:
    return 1.0 - q * q, q * q, "ln(1-q^2)/ln(q^2)"


# name -> (builder, suite q or None, lattice constant, declared-even flag)
SUITES: dict[str, tuple] = {
    "one-over-one-plus-x": (_suite_one_over, None, None, False),
    "reciprocal-qpoch": (_suite_reciprocal_qpoch, None, None, False),
    "big-q-exp": (_suite_big_q_exp, None, None, False),
    "mera-bridge": (_suite_mera, None, None, False),
    "inversion-roundtrip": (_suite_inversion, None, None, False),
    "qbinomial-ratio": (_suite_qbinomial, None, None, False),
    "qcos": (_suite_qcos, GOLDEN, _one_minus_q, True),
    "qsin": (_suite_qsin, GOLDEN, _one_minus_q, True),
    "qbessel": (_suite_qbessel, 1.0 / math.sqrt(2.0), _one_minus_q2, False),
    "rphir": (_suite_rphir, None, None, False),
    "transform-laws": (_suite_transform_laws, None, None, False),
    "negative-control": (_suite_negative_control, None, None, False),
}
ALL_EXCLUDES = ("negative-control",)


def suite_names() -> list[str]:
    return [*SUITES, "all"]


def run_suite(name: str, cfg: SuiteConfig) -> SuiteReport:
    """Run one suite (or ``all``); harness-level exceptions propagate."""
    if name != "all" and name not in SUITES:
        raise KeyError(name)
    names = [n for n in SUITES if n not in ALL_EXCLUDES] if name == "all" else [name]
    t0 = time.perf_counter()
    entries: list[IdentityEntry] = []
    for n in names:
        builder, suite_q, lattice_c, even = SUITES[n]
        run = _resolve(n, cfg, suite_q, lattice_c, even)
        try:
            entries.extend(builder(run))
        except (QError, ArithmeticError) as e:
            # a failure while assembling the suite is recorded, not raised
            rep = IdentityReport("setup", [IdentitySample.failure(0j, e)], cfg.tolerance)
            entries.append(run.entry(rep))
    return SuiteReport(name, cfg.to_dict(), entries, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# serialisation


def _num(x: float):
    return x if math.isfinite(x) else None


def _cplx(z: complex):
    return [_num(z.real), _num(z.imag)]


def report_to_dict(rep: SuiteReport) -> dict:
    ids = []
    for e in rep.identity_reports:
        r = e.report
        ids.append({
            "suite": e.suite,
            "name": r.name,
            "q": e.q,
            "tolerance": r.tolerance,
            "informative": e.informative,
            "samples": [
                {"s": _cplx(s.s), "lhs": _cplx(s.lhs), "rhs": _cplx(s.rhs), "abs_resid": _num(s.abs_resid),
                 "rel_resid": _num(s.rel_resid), "error": s.error}
                for s in r.samples
            ],
            "max_rel_resid": _num(r.max_rel_resid),
            "passed": r.passed,
            "findings": [f.to_dict() for f in r.findings],
        })
    return {
        "suite": rep.suite_name,
        "config": rep.config_echo,
        "identities": ids,
        "passed": rep.passed,
        "informative": rep.informative,
        "wall_time": rep.wall_time,
    }


def report_to_json(rep: SuiteReport) -> str:
    return json.dumps(report_to_dict(rep), indent=2)


def load_report(text: str) -> dict:
    """Parse a JSON report; ``null`` residuals (non-finite) come back as ``inf``."""
    d = json.loads(text)
    for ident in d["identities"]:
        if ident["max_rel_resid"] is None:
            ident["max_rel_resid"] = math.inf
        for s in ident["samples"]:
            for k in ("abs_resid", "rel_resid"):
                if s[k] is None:
                    s[k] = math.inf
    return d


CSV_COLUMNS = ("suite", "identity", "s_re", "s_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_resid")


def report_to_csv(rep: SuiteReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for e in rep.identity_reports:
        for s in e.report.samples:
            w.writerow([e.suite, e.report.name, repr(s.s.real), repr(s.s.imag), repr(s.lhs.real), repr(s.lhs.imag),
                        repr(s.rhs.real), repr(s.rhs.imag), repr(s.rel_resid)])
    return buf.getvalue()


def report_to_text(rep: SuiteReport) -> str:
    lines = []
    for e in rep.identity_reports:
        r = e.report
        tag = "PASS" if r.passed else "FAIL"
        info = " (informative)" if e.informative else ""
        lines.append(f"[{tag}] {e.suite}/{r.name}  q={e.q:.6g}  max_rel_resid={r.max_rel_resid:.3e}"
                     f"  tol={r.tolerance:.0e}{info}")
        for f in r.findings:
            lines.append(f"       finding[{f.kind}]: {f.message}")
        errs = [s for s in r.samples if s.error]
        if errs:
            lines.append(f"       {len(errs)} sample(s) failed, first: {errs[0].error}")
    lines.append(f"{rep.suite_name}: {'PASSED' if rep.passed else 'FAILED'} in {rep.wall_time:.2f}s")
    return "\n".join(lines) + "\n"

import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import GOLDEN, rel
from qrmt import (
    ClosedForm,
    CoefficientFunction,
    HypothesisError,
    PoleError,
    QContext,
    SeriesFamily,
    SeriesSpec,
    build_series,
    family_rhs,
    hypothesis_check,
    k_q,
    q_gamma,
    q_mellin,
    qpoch_infinite,
    qpow,
    rmt1_rhs,
    rmt2_rhs,
    verify_identity,
)
from qrmt import functions as fn
from qrmt.suites import s_grid, sinpi

C = QContext(0.5)
ONE = CoefficientFunction.constant(1)
ZERO = CoefficientFunction.constant(0)


def phi_e(ctx):
    den = qpoch_infinite(ctx, ctx.q)
    return CoefficientFunction(lambda s: qpoch_infinite(ctx, qpow(ctx, s + 1)) / den, name="phi_e")


def one_minus_q_pow(ctx, s):
    return cmath.exp(s * math.log1p(-ctx.q))


def test_rmt1_examples():
    g = q_gamma(C, 0.5)
    assert rel(rmt1_rhs(C, ONE, 0.5), g * g / k_q(C, 0.5)) < 1e-13
    s = 0.3
    assert rel(rmt1_rhs(C, phi_e(C), s), one_minus_q_pow(C, s) * q_gamma(C, s) / k_q(C, s)) < 1e-11
    assert rmt1_rhs(C, ZERO, 0.5) == 0
    assert rel(rmt1_rhs(C, ONE, 0.5), q_mellin(C, fn.one_over_one_plus_x(C), 0.5).value) < 1e-10


def test_rmt2_examples():
    s = 0.4
    assert rel(rmt2_rhs(C, phi_e(C), s), one_minus_q_pow(C, s) * q_gamma(C, s)) < 1e-11
    assert rel(rmt2_rhs(C, ONE, 0.5), q_gamma(C, 0.5) ** 2) < 1e-14
    assert rmt2_rhs(C, ZERO, 0.5) == 0


def test_rhs_rejects_wrong_period_and_names_pole():
    with pytest.raises(HypothesisError):
        rmt1_rhs(C, CoefficientFunction.constant(1, period=2), 0.5)
    with pytest.raises(HypothesisError):
        family_rhs(C, SeriesSpec(SeriesFamily.ALPHA_P_SECOND, 2), ONE, 0.5)
    with pytest.raises(PoleError) as ei:
        rmt1_rhs(C, ONE, 1.0)
    assert ei.value.factor == "Gamma_q(1-s)"


def test_family_rhs_qcos_value():
    g = QContext(GOLDEN)
    g2 = g.rebase(2)
    one2 = CoefficientFunction.constant(1, period=2)
    expected = (1 - g.q) / (1 - g2.q) * q_gamma(g2, 0.75) * q_gamma(g2, 0.25) / q_gamma(g, 0.5)
    spec = ClosedForm(SeriesFamily.ALPHA_P_SECOND_INT, 2, 0)
    assert rel(family_rhs(g, spec, one2, 0.5), expected) < 1e-13
    assert rel(q_mellin(g, fn.qcos_function(g), 0.5).value, expected) < 1e-9
    # [2n]_q! and [n]_{q^2}! differ, so the non-integer variant is another function
    assert rel(family_rhs(g, ClosedForm(SeriesFamily.ALPHA_P_SECOND, 2, 0), one2, 0.5), expected) > 1e-2


def test_family_rhs_bessel_value():
    r = QContext(1 / math.sqrt(2))
    c2 = r.rebase(2)
    lp = math.log1p(-c2.q)
    nu, s = 0.0, 0.6
    phi = CoefficientFunction(lambda w: cmath.exp(-2 * w * lp) / q_gamma(c2, w + nu + 1), period=2)
    got = family_rhs(r, ClosedForm(SeriesFamily.ALPHA_P_SECOND, 2, 0), phi, s)
    expected = (1 - r.q) / (1 - c2.q) * cmath.exp(s * lp) * q_gamma(c2, (s + nu) / 2) / q_gamma(c2, (nu + 2 - s) / 2)
    assert rel(got, expected) < 1e-12
    assert rel(q_mellin(r, fn.qbessel_function(r, nu), s).value, expected) < 1e-9


@pytest.mark.parametrize("s", [0.2, 0.5 + 0.3j, 0.8 - 0.1j])
def test_alpha_one_reduction(s):
    phi = phi_e(C)
    first = family_rhs(C, ClosedForm(SeriesFamily.ALPHA_P_FIRST, 1, 0), phi, s)
    second = family_rhs(C, ClosedForm(SeriesFamily.ALPHA_P_SECOND, 1, 0), phi, s)
    # with alpha=1, p=0 the series carry 1/[n]_q!, so they coincide with the
    # factorial families, i.e. rmt1/rmt2 applied to phi(s)/Gamma_q(1+s)
    psi = CoefficientFunction(lambda w: phi(w) / q_gamma(C, 1 + w))
    assert rel(first, family_rhs(C, ClosedForm(SeriesFamily.QFACTORIAL_DENOM), phi, s)) < 1e-12
    assert rel(first, rmt1_rhs(C, psi, s)) < 1e-12
    assert rel(second, rmt2_rhs(C, psi, s)) < 1e-12
    # rmt1 with phi itself is a different function
    assert rel(first, rmt1_rhs(C, phi, s)) > 1e-3


def test_alpha_one_reduction_series_side():
    phi = phi_e(C)
    a = build_series(C, SeriesSpec(SeriesFamily.ALPHA_P_FIRST, 1, 0), phi)
    b = build_series(C, SeriesSpec(SeriesFamily.QFACTORIAL_DENOM), phi)
    for x in (0.1, 0.7, 1.5):  # radius of convergence is 1/(1-q)
        assert a(x) == b(x)


def test_triangular_is_plain_with_weight():
    phi = phi_e(C)
    wphi = CoefficientFunction(lambda s: C.q ** (s * (s + 1) / 2) * phi(s))
    t = build_series(C, SeriesSpec(SeriesFamily.TRIANGULAR), phi)
    p = build_series(C, SeriesSpec(SeriesFamily.PLAIN), wphi)
    for x in (0.2, 0.6, 0.9):
        assert rel(t(x), p(x)) < 1e-15


PERIODIC_CASES = [
    (SeriesSpec(SeriesFamily.PLAIN), "phi_e"),
    (SeriesSpec(SeriesFamily.TRIANGULAR), "phi_e"),
    (SeriesSpec(SeriesFamily.POCHHAMMER_DENOM), "one"),
    (SeriesSpec(SeriesFamily.TRIANGULAR_POCHHAMMER), "one"),
    (SeriesSpec(SeriesFamily.ALPHA_P_SECOND_INT, 2, 0), "one2"),
    (SeriesSpec(SeriesFamily.ALPHA_P_SECOND_INT, 2, 1), "one2"),
    (SeriesSpec(SeriesFamily.ALPHA_P_FIRST_INT, 2, 1), "one2"),
    (SeriesSpec(SeriesFamily.ALPHA_P_SECOND, 2, 0), "ap"),
    (SeriesSpec(SeriesFamily.ALPHA_P_FIRST, 2, 1), "ap"),
    (SeriesSpec(SeriesFamily.QFACTORIAL_DENOM), "fact"),
]


@pytest.mark.parametrize("spec,kind", PERIODIC_CASES, ids=lambda v: getattr(getattr(v, "family", None), "name", v))
@given(st.floats(0.1, 0.4), st.floats(-1.0, 1.0))
def test_rhs_is_periodic(spec, kind, sr, si):
    g = QContext(GOLDEN) if spec.family.is_alpha else C
    lq2 = math.log1p(-g.q**2)
    phi = {
        "phi_e": phi_e(g),
        "one": ONE,
        "one2": CoefficientFunction.constant(1, period=2),
        # (1-q^a)^s phi(s) must be periodic for the non-integer alpha families
        "ap": CoefficientFunction(lambda w: cmath.exp(-w * lq2), period=2),
        "fact": CoefficientFunction(lambda w: cmath.exp(-w * math.log1p(-g.q))),
    }[kind]
    s = complex(sr, si)
    # phi has period 2 pi i/ln(q^m) in its own argument -s/m, so every closed
    # form repeats under the q-Mellin period 2 pi i/ln q
    period = g.period
    cf = ClosedForm.of(spec)
    assert rel(family_rhs(g, cf, phi, s + period), family_rhs(g, cf, phi, s)) < 1e-10


def test_hypothesis_check_examples():
    assert hypothesis_check(C, phi_e(C), ClosedForm(SeriesFamily.PLAIN)) == []
    assert hypothesis_check(C, CoefficientFunction.constant(3.5), ClosedForm(SeriesFamily.PLAIN)) == []
    found = hypothesis_check(C, CoefficientFunction(lambda s: s, name="s"), ClosedForm(SeriesFamily.PLAIN))
    per = [f for f in found if f.kind == "periodicity"]
    assert per and per[0].value == pytest.approx(abs(C.period), rel=0.5)


def test_hypothesis_check_metadata_findings():
    undeclared = CoefficientFunction(lambda s: 1, period=None)
    assert [f.kind for f in hypothesis_check(C, undeclared, ClosedForm(SeriesFamily.PLAIN))] == ["period-undeclared"]
    kinds = [f.kind for f in hypothesis_check(C, ONE, ClosedForm(SeriesFamily.ALPHA_P_SECOND, 2))]
    assert "period-mismatch" in kinds
    grow = CoefficientFunction(sinpi, growth=(1.0, 0.0, math.pi))
    kinds = {f.kind for f in hypothesis_check(C, grow, ClosedForm(SeriesFamily.PLAIN))}
    assert {"periodicity", "growth-exponent"} <= kinds
    tight = CoefficientFunction(lambda s: cmath.exp(s), growth=(1.0, 0.5, 1.0))
    assert "growth" in {f.kind for f in hypothesis_check(C, tight, ClosedForm(SeriesFamily.PLAIN))}
    assert grow.growth is not None and hypothesis_check(C, grow, ClosedForm(SeriesFamily.PLAIN))[0].to_dict()["kind"]


def test_hypothesis_check_factorial_object():
    # (1-q)^s phi(s) must be periodic for the factorial family; phi_e / Gamma_q(1+s) qualifies
    phi = CoefficientFunction(lambda s: phi_e(C)(s) / q_gamma(C, 1 + s))
    assert hypothesis_check(C, phi, ClosedForm(SeriesFamily.QFACTORIAL_DENOM)) == []


GRID = s_grid(0.1, 0.9)


def test_verify_identity_examples():
    rep = verify_identity(C, SeriesSpec(SeriesFamily.PLAIN), ONE, GRID, 1e-8, f=fn.one_over_one_plus_x(C))
    assert rep.passed and not rep.findings
    assert {s.s.imag for s in rep.samples} == {-0.2, 0.0, 0.2}
    rep = verify_identity(C, SeriesSpec(SeriesFamily.TRIANGULAR), phi_e(C), GRID, 1e-8, f=fn.shifted_qpoch(C))
    assert rep.passed and not rep.findings


def test_verify_identity_negative_control():
    phi = CoefficientFunction(sinpi, growth=(1.0, 0.0, math.pi), name="sin(pi s)")
    rep = verify_identity(C, SeriesSpec(SeriesFamily.PLAIN), phi, s_grid(0.0, 1.0), 1e-8)
    assert not rep.passed
    assert rep.max_rel_resid > 1e-3
    assert {"periodicity", "growth-exponent"} <= {f.kind for f in rep.findings}


def test_verify_identity_records_failures():
    rep = verify_identity(C, SeriesSpec(SeriesFamily.PLAIN), ONE, [0.5, 1.5], 1e-8, f=fn.one_over_one_plus_x(C))
    assert rep.samples[0].error is None
    assert rep.samples[1].error.startswith("divergence")
    assert not rep.passed


def test_verify_identity_series_agreement_finding():
    rep = verify_identity(C, SeriesSpec(SeriesFamily.PLAIN), ONE, [0.5], 1e-8, f=fn.reciprocal_qpoch(C))
    assert "series-agreement" in {f.kind for f in rep.findings}


def test_residual_monotone_in_truncation():
    prev = math.inf
    for mt in (64, 128, 256, 512, 1024, 2048):
        c = QContext(0.5, max_terms=mt)
        rep = verify_identity(c, SeriesSpec(SeriesFamily.PLAIN), ONE, GRID, 1e-8, f=fn.one_over_one_plus_x(c))
        assert rep.max_rel_resid <= prev
        prev = rep.max_rel_resid
    assert prev <= 1e-8

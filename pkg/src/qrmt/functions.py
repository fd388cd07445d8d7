"""Named point functions used by the verification suites.

Each constructor returns a :class:`PointFunction` whose ``lattice`` evaluator
computes ``f(q**n)`` from integer exponents.  On ``R_{q,+}`` many of these
functions have exact zeros or huge cancelling factors; working with the
exponent ``n`` instead of the float ``q**n`` keeps the lattice values exact
(zeros stay zeros) and avoids catastrophic cancellation for large ``x``.
"""

from __future__ import annotations

import cmath
import math

from .errors import DivergenceError
from .qcore import QContext, q_exp_lower, q_exp_upper, q_gamma, qpoch_infinite, qpoch_lattice
from .qseries import PointFunction, phi_rs, q_bessel3, q_cos, q_sin, sum_series

__all__ = [
    "one_over_one_plus_x",
    "reciprocal_qpoch",
    "small_exp_neg",
    "shifted_qpoch",
    "big_exp_neg_qx",
    "qbinomial_ratio",
    "qcos_function",
    "qsin_function",
    "qbessel_function",
    "one_phi_one_function",
    "power_times",
    "reflect",
    "compose_power",
    "zero_function",
]


def _lattice_offset(ctx: QContext, c: float) -> int | None:
    """``j`` with ``c == q**j`` (e.g. ``1 - q`` at the special test values of ``q``)."""
    return ctx.lattice_index(c)


def one_over_one_plus_x(ctx: QContext) -> PointFunction:
    q = ctx.q

    def lattice(n: int) -> float:
        if n >= 0:
            return 1.0 / (1.0 + q**n)
        u = q**-n
        return u / (1.0 + u)

    return PointFunction(lambda x: 1.0 / (1.0 + complex(x)), support_note="analytic off (-inf, -1]",
                         lattice=lattice, base=q, name="1/(1+x)")


def reciprocal_qpoch(ctx: QContext) -> PointFunction:
    """``x -> 1/(-x;q)_inf``."""

    def f(x):
        return 1.0 / qpoch_infinite(ctx, -complex(x))

    return PointFunction(f, lattice=lambda n: f(ctx.q**n), base=ctx.q, name="1/(-x;q)_inf")


def small_exp_neg(ctx: QContext) -> PointFunction:
    """``x -> e_q^{-x}``."""

    def f(x):
        return q_exp_lower(ctx, -complex(x))

    return PointFunction(f, lattice=lambda n: f(ctx.q**n), base=ctx.q, name="e_q^{-x}")


def shifted_qpoch(ctx: QContext) -> PointFunction:
    """``x -> (qx;q)_inf``, vanishing on ``q**n`` for ``n <= -1``.

    This is the function produced by the triangular series with
    ``phi(s) = (q**(s+1);q)_inf/(q;q)_inf``; in terms of the big exponential
    it is ``E_q^{-qx/(1-q)}``.
    """

    def f(x):
        return qpoch_infinite(ctx, ctx.q * complex(x))

    return PointFunction(f, support_note="entire", lattice=lambda n: qpoch_lattice(ctx, n + 1),
                         base=ctx.q, name="(qx;q)_inf")


def big_exp_neg_qx(ctx: QContext) -> PointFunction:
    """``x -> E_q^{-qx} = ((1-q)qx;q)_inf``.

    When ``1 - q`` is a lattice point ``q**j`` the lattice values are exact.
    """
    j = _lattice_offset(ctx, 1.0 - ctx.q)

    def f(x):
        return q_exp_upper(ctx, -ctx.q * complex(x))

    lattice = (lambda n: qpoch_lattice(ctx, n + 1 + j)) if j is not None else (lambda n: f(ctx.q**n))
    return PointFunction(f, support_note="entire", lattice=lattice, base=ctx.q, name="E_q^{-qx}")


def qbinomial_ratio(ctx: QContext, a: float, gamma: float) -> PointFunction:
    """``x -> (-a x q**gamma;q)_inf / (-a x;q)_inf`` as one product of ratios."""
    q = ctx.q
    qg = q**gamma

    def f(x):
        ax = a * complex(x)
        if ax == 0:
            return 1.0 + 0j
        out = 1.0 + 0j
        m0 = abs(ax)
        for k in range(ctx.max_terms):
            qk = q**k
            m = m0 * qk
            if m < 1.0 and m <= ctx.eps * (1.0 - q) * (1.0 - m):
                return out
            out *= (1.0 + ax * qk * qg) / (1.0 + ax * qk)
        raise DivergenceError("q-binomial ratio product did not settle")

    return PointFunction(f, support_note="meromorphic; poles at x = -q**-k / a",
                         lattice=lambda n: f(q**n), base=q, name=f"qbinomial(a={a},gamma={gamma})")


def _swap_lattice_sum(ctx: QContext, p_ctx: QContext, b: float, e: int) -> float:
    """``_1phi_1(0; b; p, p**e)`` for integer ``e`` via

    ``_1phi_1(0;b;p,z) = sum_k (-1)^k p^(k(k-1)/2) b^k (z p^k;p)_inf / ((p;p)_k (b;p)_inf)``.

    Terms with ``e + k <= 0`` vanish identically, so they are skipped.
    """
    p = p_ctx.q
    k0 = max(0, 1 - e)
    t = 1.0
    for k in range(k0):
        t *= -(p**k) * b / (1.0 - p ** (k + 1))
        if t == 0.0:
            return 0.0

    def terms():
        nonlocal t
        k = k0
        while True:
            yield t * qpoch_lattice(p_ctx, e + k)
            t *= -(p**k) * b / (1.0 - p ** (k + 1))
            k += 1
            if t == 0.0:
                return

    s = sum_series(ctx, terms(), what="1phi1 lattice").value.real
    return s / qpoch_infinite(p_ctx, b).real


def _swap_sum(ctx: QContext, p_ctx: QContext, b: float, z: complex) -> complex:
    p = p_ctx.q

    def terms():
        t = 1.0
        k = 0
        while True:
            yield t * qpoch_infinite(p_ctx, z * p**k)
            t *= -(p**k) * b / (1.0 - p ** (k + 1))
            k += 1
            if t == 0.0:
                return

    return sum_series(ctx, terms(), what="1phi1 swap").value / qpoch_infinite(p_ctx, b)


def _qtrig(ctx: QContext, b_power: int, odd: bool) -> PointFunction:
    q = ctx.q
    p_ctx = ctx.rebase(2)
    j = _lattice_offset(ctx, 1.0 - q)
    b = q**b_power
    direct = q_sin if odd else q_cos

    def lattice(n: int):
        if j is not None:
            v = _swap_lattice_sum(ctx, p_ctx, b, n + 1 + j)
        else:
            v = _swap_sum(ctx, p_ctx, b, p_ctx.q * ((1 - q) * q**n) ** 2)
        return v * q**n if odd else v

    return PointFunction(lambda x: direct(ctx, x), support_note="entire", lattice=lattice, base=q,
                         name="sin(x;q^2)" if odd else "cos(x;q^2)")


def qcos_function(ctx: QContext) -> PointFunction:
    """``x -> cos(x; q**2)``."""
    return _qtrig(ctx, 1, odd=False)


def qsin_function(ctx: QContext) -> PointFunction:
    """``x -> sin(x; q**2)``."""
    return _qtrig(ctx, 3, odd=True)


def qbessel_function(ctx: QContext, nu: float) -> PointFunction:
    """``x -> J_nu(x; q**2)`` (third Jackson / Hahn-Exton)."""
    q = ctx.q
    p_ctx = ctx.rebase(2)
    p = p_ctx.q
    b = p ** (nu + 1.0)
    norm = (1.0 - p) ** nu * q_gamma(p_ctx, nu + 1.0).real

    def lattice(n: int):
        return q ** (n * nu) / norm * _swap_lattice_sum(ctx, p_ctx, b, n + 1)

    return PointFunction(lambda x: q_bessel3(ctx, nu, x), support_note="x**nu principal branch",
                         lattice=lattice, base=q, name=f"J_{nu}(x;q^2)")


def one_phi_one_function(ctx: QContext, a: float, b: float) -> PointFunction:
    """``x -> _1phi_1(q**a; q**b; q, q x)``.

    For ``x = q**-m`` with ``m > 0`` the transformation

    ``f(x) = (q^a;q)_inf/(q^b;q)_inf sum_k (q^(b-a);q)_k/(q;q)_k q^(ak) (x q^(k+1);q)_inf``

    is used; its terms with ``k < m`` vanish exactly.
    """
    q = ctx.q
    qa, qb = q**a, q**b
    qba = q ** (b - a)
    pre = (qpoch_infinite(ctx, qa) / qpoch_infinite(ctx, qb)).real

    def f(x):
        return phi_rs(ctx, [qa], [qb], q * complex(x))

    def lattice(n: int):
        if n >= 0:
            return f(q**n)
        k0 = -n
        t = 1.0
        for k in range(k0):
            t *= (1.0 - qba * q**k) / (1.0 - q ** (k + 1)) * qa

        def terms():
            nonlocal t
            k = k0
            while True:
                yield t * qpoch_lattice(ctx, n + k + 1)
                t *= (1.0 - qba * q**k) / (1.0 - q ** (k + 1)) * qa
                k += 1
                if t == 0.0:
                    return

        return pre * sum_series(ctx, terms(), what="1phi1 transformation").value

    return PointFunction(f, support_note="entire", lattice=lattice, base=q, name=f"1phi1(q^{a};q^{b};q,qx)")


def zero_function(ctx: QContext) -> PointFunction:
    return PointFunction(lambda x: 0j, lattice=lambda n: 0j, base=ctx.q, name="0")


# ---------------------------------------------------------------------------
# Transform helpers.  Each keeps the exact lattice evaluator of its argument.


def _lat(ctx_q: float, f: PointFunction, n: int) -> complex:
    if f.lattice is not None and f.base == ctx_q:
        return complex(f.lattice(n))
    return complex(f.eval(ctx_q**n))


def power_times(f: PointFunction, c, q: float | None = None) -> PointFunction:
    """``x -> x**c f(x)``."""
    c = complex(c)
    q = f.base if q is None else q

    def g(x):
        x = complex(x)
        return cmath.exp(c * cmath.log(x)) * f.eval(x)

    lattice = None
    if q is not None:
        lq = math.log(q)

        def lattice(n: int):
            return cmath.exp(c * n * lq) * _lat(q, f, n)

    return PointFunction(g, support_note=f.support_note, lattice=lattice, base=q, name=f"x^{c}*{f.name}")


def reflect(f: PointFunction) -> PointFunction:
    """``x -> f(1/x)``."""
    q = f.base
    lattice = None if q is None else (lambda n: _lat(q, f, -n))
    return PointFunction(lambda x: f.eval(1.0 / complex(x)), support_note=f.support_note,
                         lattice=lattice, base=q, name=f"{f.name}(1/x)")


def compose_power(f: PointFunction, rho: float) -> PointFunction:
    """``x -> f(x**rho)`` for ``rho > 0``."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    q = f.base
    lattice = None
    if q is not None and float(rho).is_integer():
        r = int(rho)
        lattice = lambda n: _lat(q, f, r * n)  # noqa: E731
    return PointFunction(lambda x: f.eval(complex(x) ** rho), support_note=f.support_note,
                         lattice=lattice, base=q, name=f"{f.name}(x^{rho})")

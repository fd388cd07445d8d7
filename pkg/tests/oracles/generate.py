"""Regenerate the frozen oracle values in ``tests/oracle_values.py``.

Independent of the package: every quantity is computed from its defining
product or series in mpmath at 50 significant digits (more where the
series cancels).  Run ``python tests/oracles/generate.py > tests/oracle_values.py``.
"""

import mpmath as mp

mp.mp.dps = 50
GOLDEN = (mp.sqrt(5) - 1) / 2


def poch(a, q, n=None):
    """(a;q)_n, or (a;q)_inf when n is None (terms until below 1e-60)."""
    out = mp.mpc(1)
    k = 0
    while True:
        if n is not None and k >= n:
            return out
        t = a * q**k
        if n is None and abs(t) < mp.mpf(10) ** -60:
            return out
        out *= 1 - t
        k += 1


def qpow(q, s):
    return mp.exp(s * mp.log(q))


def gamma_q(q, s):
    return poch(q, q) / poch(qpow(q, s), q) * mp.exp((1 - s) * mp.log(1 - q))


def kq(q, s):
    return poch(-q, q) * poch(-1, q) / (poch(-qpow(q, s), q) * poch(-qpow(q, 1 - s), q))


def bracket(q, k):
    return (1 - q**k) / (1 - q)


def series(term, tol=mp.mpf(10) ** -60):
    out = mp.mpc(0)
    n = 0
    small = 0
    while small < 5:
        t = term(n)
        out += t
        small = small + 1 if abs(t) < tol * max(1, abs(out)) else 0
        n += 1
    return out


def qcos(q, x):
    def term(n):
        f = mp.mpf(1)
        for k in range(1, 2 * n + 1):
            f *= bracket(q, k)
        return (-1) ** n * q ** (n * (n + 1)) * x ** (2 * n) / f
    return series(term)


def qsin(q, x):
    def term(n):
        f = mp.mpf(1)
        for k in range(1, 2 * n + 2):
            f *= bracket(q, k)
        return (-1) ** n * q ** (n * (n + 1)) * x ** (2 * n + 1) / f
    return series(term)


def qbessel(q, nu, x):
    p = q * q

    def term(n):
        return (-1) ** n * (1 - p) ** (-2 * n) * q ** (n * (n + 1)) * x ** (2 * n) / (
            gamma_q(p, n + nu + 1) * poch(p, p, n) / (1 - p) ** n)
    return x**nu / (1 - p) ** nu * series(term)


def one_phi_one(q, a, b, x):
    qa, qb = q**a, q**b

    def term(k):
        return poch(qa, q, k) / (poch(qb, q, k) * poch(q, q, k)) * (-1) ** k * q ** (k * (k - 1) / 2) * (q * x) ** k
    return series(term)


def mellin_gamma_ratio(q, s):
    return gamma_q(q, s) * gamma_q(q, 1 - s) / kq(q, s)


def c(z):
    z = mp.mpc(z)
    return complex(float(z.real), float(z.imag))


def main():
    q = mp.mpf("0.5")
    vals = {}
    vals["q_bracket_q05_x05p1j"] = c((1 - mp.exp(mp.mpc(0.5, 1) * mp.log(q))) / (1 - q))
    vals["q_factorial_q09_n10"] = c(mp.fprod(bracket(mp.mpf("0.9"), k) for k in range(1, 11)))
    vals["qpoch_inf_q05_a05"] = c(poch(q, q))
    vals["qpoch_inf_q05_am1"] = c(poch(-1, q))
    vals["qpoch_inf_q05_am05"] = c(poch(-q, q))
    vals["q_gamma_q05_s05"] = c(gamma_q(q, mp.mpf("0.5")))
    vals["q_gamma_q05_s03p07j"] = c(gamma_q(q, mp.mpc(0.3, 0.7)))
    vals["q_gamma_q09_s25m1j"] = c(gamma_q(mp.mpf("0.9"), mp.mpc(2.5, -1)))
    vals["k_q_q05_s05"] = c(kq(q, mp.mpf("0.5")))
    vals["k_q_q05_s03p04j"] = c(kq(q, mp.mpc(0.3, 0.4)))
    vals["e_lower_q05_zm1"] = c(1 / poch(-(1 - q), q))
    vals["e_lower_q05_z1"] = c(1 / poch(1 - q, q))
    vals["e_upper_q05_z1"] = c(poch(-(1 - q), q))
    vals["q_beta_q05_t15_s05"] = c(gamma_q(q, 1.5) * gamma_q(q, 0.5) / gamma_q(q, 2))
    vals["q_cos_q05_x02"] = c(qcos(q, mp.mpf("0.2")))
    vals["q_cos_golden_x1"] = c(qcos(GOLDEN, 1))
    vals["q_sin_q05_x02"] = c(qsin(q, mp.mpf("0.2")))
    vals["q_bessel_r2_nu05_x03"] = c(qbessel(1 / mp.sqrt(2), mp.mpf("0.5"), mp.mpf("0.3")))
    vals["q_bessel_q05_nu0_x01"] = c(qbessel(q, 0, mp.mpf("0.1")))
    vals["one_phi_zero_q05_a05_z03"] = c(poch(q * mp.mpf("0.3"), q) / poch(mp.mpf("0.3"), q))
    vals["mellin_1_over_1px_q05_s05"] = c(mellin_gamma_ratio(q, mp.mpf("0.5")))
    vals["mellin_1_over_1px_q05_s03p02j"] = c(mellin_gamma_ratio(q, mp.mpc(0.3, 0.2)))
    vals["mellin_recip_qpoch_q05_s07"] = c((1 - q) ** mp.mpf("0.7") * gamma_q(q, 0.7) / kq(q, 0.7))
    vals["mellin_qx_qpoch_q05_s03"] = c((1 - q) ** mp.mpf("0.3") * gamma_q(q, 0.3))

    # lattice values where the defining series cancels badly in double precision
    lattice = {}
    with mp.workdps(120):
        for m in (0, 2, 4, 6):
            lattice[f"qcos_golden_m{m}"] = c(qcos(GOLDEN, GOLDEN ** (-m)))
            lattice[f"qsin_golden_m{m}"] = c(qsin(GOLDEN, GOLDEN ** (-m)))
            r2 = 1 / mp.sqrt(2)
            lattice[f"qbessel_r2_nu05_m{m}"] = c(qbessel(r2, mp.mpf("0.5"), r2 ** (-m)))
            lattice[f"one_phi_one_q05_m{m}"] = c(one_phi_one(q, mp.mpf("0.5"), mp.mpf("1.5"), q ** (-m)))

    print('"""Frozen oracle values (50-digit mpmath); regenerate with tests/oracles/generate.py."""')
    print()
    print("ORACLE = {")
    for k, v in vals.items():
        print(f"    {k!r}: {v!r},")
    print("}")
    print()
    print("LATTICE = {")
    for k, v in lattice.items():
        print(f"    {k!r}: {v!r},")
    print("}")


if __name__ == "__main__":
    main()

"""Independent oracles used by the tests.

These deliberately avoid the library's own code paths: the characteristic
value comes from a continued-fraction root find (not the tridiagonal
eigensolver), Bessel values from mpmath's half-integer functions, and the
rigid-sphere surface field from the raw incident-minus-scattered series.
"""
import mpmath
import numpy as np
from mpmath import mp, mpf
from scipy.special import spherical_jn, spherical_yn


def _abc(m, r, c2):
    A = mpf((2 * m + r + 2) * (2 * m + r + 1)) * c2 / ((2 * m + 2 * r + 3) * (2 * m + 2 * r + 5))
    B = mpf((m + r) * (m + r + 1)) + mpf(2 * (m + r) * (m + r + 1) - 2 * m * m - 1) * c2 / (
        (2 * m + 2 * r - 1) * (2 * m + 2 * r + 3))
    C = mpf(r * (r - 1)) * c2 / ((2 * m + 2 * r - 3) * (2 * m + 2 * r - 1))
    return A, B, C


def characteristic_value_cf(m, n, c, dps=35):
    """Prolate characteristic value by continued-fraction root finding.

    Seeded at the c -> 0 limit n(n+1) and continued in small steps of c so
    the secant iteration tracks the correct branch.
    """
    with mp.workdps(dps):
        p = (n - m) % 2
        J = n - m

        def f(lam, c2):
            if J >= 2:
                dm2, dm0 = mpf(0), mpf(1)
                r = p
                while r < J:
                    A, B, C = _abc(m, r, c2)
                    dm2, dm0 = dm0, (-(B - lam) * dm0 - C * dm2) / A
                    r += 2
                head = dm2 / dm0
            else:
                head = mpf(0)
            rho = mpf(0)
            for r in range(J + 360, J, -2):
                A, B, C = _abc(m, r, c2)
                rho = -C / (B - lam + A * rho)
            AJ, BJ, CJ = _abc(m, J, c2)
            return BJ - lam + CJ * head + AJ * rho

        lam = mpf(n * (n + 1))
        steps = max(1, int(float(c) / 0.25))
        for i in range(1, steps + 1):
            ci = mpf(c) * i / steps
            c2 = ci * ci
            lam = mpmath.findroot(lambda L: f(L, c2), (lam, lam + mpf("0.001")),
                                  solver="secant", tol=mpf(10) ** (-dps + 5))
        return float(lam)


def sph_bessel_j_mp(n, x, dps=40):
    """j_n(x) through mpmath's half-integer Bessel function."""
    with mp.workdps(dps):
        xm = mpf(x)
        return float(mpmath.sqrt(mpmath.pi / (2 * xm)) * mpmath.besselj(n + mpf(1) / 2, xm))


def rigid_sphere_total_field(coeff_values, order, k, radius, thetas, phis):
    """Surface field as incident plus scattered series, term by term.

    p = sum A_nm [ j_n(kR) - h_n(kR) j_n'(kR) / h_n'(kR) ] Y_nm; independent
    of the Wronskian-simplified diagonal the library uses.
    """
    from scipy.special import sph_harm_y

    kr = k * radius
    out = np.zeros(len(thetas), dtype=complex)
    idx = 0
    for n in range(order + 1):
        jn = spherical_jn(n, kr)
        jnp = spherical_jn(n, kr, derivative=True)
        hn = jn + 1j * spherical_yn(n, kr)
        hnp = jnp + 1j * spherical_yn(n, kr, derivative=True)
        gain = jn - hn * jnp / hnp
        for m in range(-n, n + 1):
            out += coeff_values[idx] * gain * sph_harm_y(n, m, thetas, phis)
            idx += 1
    return out


def legendre_series_angular(table_d, m, parity, eta):
    """Angular function directly from scipy's lpmv (Condon-Shortley included)."""
    from scipy.special import lpmv

    out = np.zeros_like(np.atleast_1d(eta), dtype=float)
    for j, d in enumerate(table_d):
        r = parity + 2 * j
        out += d * lpmv(m, m + r, eta)
    return out

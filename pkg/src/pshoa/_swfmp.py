"""Extended-precision internals for the spheroidal wave function tables.

Everything here runs in mpmath arithmetic at a configurable number of
significant digits. Used for two jobs the double path cannot do reliably:

* refining the characteristic value and expansion coefficients beyond
  double precision (Rayleigh-quotient iteration on the symmetric
  tridiagonal form, then forward/continued-fraction reconstruction of the
  coefficients), and

* evaluating the radial function of the second kind close to the surface
  coordinate xi = 1, where the spherical Neumann expansion converges like
  (1/xi^2)^r per term. There the series is summed at a comfortable anchor
  point and continued inward by an exact-Taylor integration of the radial
  equation (polynomial coefficients, so the Taylor recurrence is closed
  form); integrating toward xi = 1 follows the dominant solution, which
  keeps the continuation well conditioned.
"""
from __future__ import annotations

from mpmath import mp, mpf

from .errors import ConvergenceError

ANCHOR = 1.5          # Neumann-series anchor for the inward continuation
DIRECT_MIN_XI = 1.4   # above this the mpf Neumann series is summed in place


def _abc(m, r, c2):
    """Three-term recurrence coefficients for the expansion coefficients."""
    A = mpf((2 * m + r + 2) * (2 * m + r + 1)) * c2 / ((2 * m + 2 * r + 3) * (2 * m + 2 * r + 5))
    B = mpf((m + r) * (m + r + 1)) + mpf(2 * (m + r) * (m + r + 1) - 2 * m * m - 1) * c2 / (
        (2 * m + 2 * r - 1) * (2 * m + 2 * r + 3)
    )
    C = mpf(r * (r - 1)) * c2 / ((2 * m + 2 * r - 3) * (2 * m + 2 * r - 1))
    return A, B, C


def refine_lambda(m: int, n: int, c: float, lam_seed: float, dps: int):
    """Characteristic value to dps digits by Rayleigh-quotient iteration."""
    with mp.workdps(dps + 10):
        p = (n - m) % 2
        c2 = mpf(c) * mpf(c)
        dim = (n - m) // 2 + int(1.5 * c) + 48
        rs = [p + 2 * j for j in range(dim)]
        diag = []
        off = []
        scale = [mpf(1)] * dim
        prevA = None
        for j, r in enumerate(rs):
            A, B, C = _abc(m, r, c2)
            diag.append(B)
            if j > 0:
                off.append(mp.sqrt(prevA * C))
                scale[j] = scale[j - 1] * mp.sqrt(C / prevA)
            prevA = A
        lam = mpf(lam_seed)
        jpk = min((n - m) // 2, dim - 1)
        v = [mpf(0)] * dim
        v[jpk] = mpf(1)
        tol = mpf(10) ** (-(dps + 4))
        for _ in range(24):
            a = [diag[j] - lam for j in range(dim)]
            cp = [mpf(0)] * dim
            dp_ = [mpf(0)] * dim
            cp[0] = off[0] / a[0]
            dp_[0] = v[0] / a[0]
            for j in range(1, dim):
                den = a[j] - off[j - 1] * cp[j - 1]
                if den == 0:
                    den = tol
                if j < dim - 1:
                    cp[j] = off[j] / den
                dp_[j] = (v[j] - off[j - 1] * dp_[j - 1]) / den
            w = [mpf(0)] * dim
            w[-1] = dp_[-1]
            for j in range(dim - 2, -1, -1):
                w[j] = dp_[j] - cp[j] * w[j + 1]
            nrm = mp.sqrt(mp.fsum(x * x for x in w))
            v = [x / nrm for x in w]
            tv0 = diag[0] * v[0] + off[0] * v[1]
            acc = v[0] * tv0
            for j in range(1, dim):
                tv = diag[j] * v[j] + off[j - 1] * v[j - 1]
                if j < dim - 1:
                    tv += off[j] * v[j + 1]
                acc += v[j] * tv
            if abs(acc - lam) < tol * abs(acc):
                lam = acc
                break
            lam = acc
        else:
            raise ConvergenceError(
                f"characteristic value iteration stalled for (m={m}, n={n}, c={c})"
            )
        return +lam


def _tail_ratios(m, lam, c2, r_lo, r_hi, extra=420):
    """Minimal-solution ratios d_(r+2)/d_r for r in [r_lo, r_hi], parity of r_lo."""
    ratios = {}
    rho = mpf(0)
    for r in range(r_hi + extra, r_lo, -2):
        A, B, C = _abc(m, r, c2)
        rho = -C / (B - lam + A * rho)
        if r - 2 <= r_hi:
            ratios[r - 2] = rho
    return ratios


def _legendre_at_zero(m, numax):
    """P_m^m(0) .. P_numax^m(0) and first derivatives, Condon-Shortley phase."""
    P0 = [mpf(0)] * (numax - m + 1)
    pmm = mpf(1)
    fact = mpf(1)
    for _ in range(m):
        pmm *= -fact
        fact += 2
    P0[0] = pmm
    for nu in range(m + 2, numax + 1):
        j = nu - m
        P0[j] = -mpf(nu + m - 1) * P0[j - 2] / (nu - m)
    dP0 = [mpf(0)] * (numax - m + 1)
    for j in range(1, numax - m + 1):
        dP0[j] = mpf(j + 2 * m) * P0[j - 1]
    return P0, dP0


def build_coeffs(m: int, n: int, c: float, lam, dim: int, dps: int):
    """Expansion coefficients to dps digits, given the characteristic value.

    Forward recurrence from the bottom row up to the nominal peak r = n - m,
    continued-fraction ratios beyond, normalized by the value (n - m even) or
    slope (odd) of the angular function at eta = 0.

    Returns (d, norm) where d is a list over the parity-matching r values
    and norm the squared-norm integral of the angular function.
    """
    with mp.workdps(dps + 10):
        p = (n - m) % 2
        c2 = mpf(c) * mpf(c)
        rs = [p + 2 * j for j in range(dim)]
        jm = (n - m) // 2
        d = [mpf(0)] * dim
        d[0] = mpf(1)
        if jm >= 1:
            A0, B0, _ = _abc(m, p, c2)
            d[1] = -(B0 - lam) * d[0] / A0
            for j in range(1, jm):
                A, B, C = _abc(m, rs[j], c2)
                d[j + 1] = (-(B - lam) * d[j] - C * d[j - 1]) / A
        ratios = _tail_ratios(m, lam, c2, rs[jm], rs[-1])
        for j in range(jm, dim - 1):
            d[j + 1] = d[j] * ratios[rs[j]]
        P0, dP0 = _legendre_at_zero(m, m + rs[-1])
        if p == 0:
            num = P0[n - m]
            den = mp.fsum(d[j] * P0[rs[j]] for j in range(dim))
        else:
            num = dP0[n - m]
            den = mp.fsum(d[j] * dP0[rs[j]] for j in range(dim))
        s = num / den
        d = [x * s for x in d]
        norm = mpf(0)
        w = mpf(1)
        for i in range(1, 2 * m + 1):
            w *= i  # (2m)!/0!
        for j, r in enumerate(rs):
            if j > 0:
                rq = rs[j - 1]
                w *= mpf((2 * m + rq + 2) * (2 * m + rq + 1)) / ((rq + 2) * (rq + 1))
            norm += d[j] * d[j] * 2 * w / (2 * m + 2 * r + 1)
        return d, +norm


def extend_coeffs(m, n, c, lam, d, dim_new, dps):
    """Lengthen a coefficient list by continued-fraction ratios."""
    with mp.workdps(dps + 10):
        p = (n - m) % 2
        c2 = mpf(c) * mpf(c)
        dim = len(d)
        if dim_new <= dim:
            return d
        r_last = p + 2 * (dim - 1)
        ratios = _tail_ratios(m, lam, c2, r_last, p + 2 * (dim_new - 2))
        d = list(d)
        for j in range(dim - 1, dim_new - 1):
            d.append(d[j] * ratios[p + 2 * j])
        return d


def _bessel_j_ladder(numax, x, dps):
    """j_0(x) .. j_numax(x) by Miller's downward recurrence."""
    top = numax + 24 + int(x) + mp.dps // 2
    jj = [mpf(0)] * (top + 2)
    jj[top] = mpf(10) ** (-dps - 10)
    for nu in range(top, 0, -1):
        jj[nu - 1] = mpf(2 * nu + 1) / x * jj[nu] - jj[nu + 1]
    scale = (mp.sin(x) / x) / jj[0]
    return [jj[nu] * scale for nu in range(numax + 1)]


def _bessel_y_ladder(numax, x):
    """y_0(x) .. y_numax(x) by the (stable upward) recurrence."""
    z = [mpf(0)] * (numax + 1)
    z[0] = -mp.cos(x) / x
    if numax >= 1:
        z[1] = -mp.cos(x) / (x * x) - mp.sin(x) / x
    for nu in range(1, numax):
        z[nu + 1] = mpf(2 * nu + 1) / x * z[nu] - z[nu - 1]
    return z


def radial_series(m, n, c, lam, d, kind, xi, dps):
    """Radial function and derivative by the Bessel-function expansion.

    kind 1 uses spherical j, kind 2 spherical y. Adaptive in the number of
    terms; the coefficient list is extended as needed and the (possibly
    longer) list is returned alongside the values.
    """
    with mp.workdps(dps + 10):
        p = (n - m) % 2
        x = mpf(c) * xi
        tol = mpf(10) ** (-(dps + 6))
        dim = len(d)
        numax = m + p + 2 * (dim - 1)
        ladder = _bessel_j_ladder(numax + 1, x, dps) if kind == 1 else _bessel_y_ladder(numax + 1, x)
        w = mpf(1)
        for i in range(1, 2 * m + 1):
            w *= i
        F = mpf(0)
        S0 = mpf(0)
        S1 = mpf(0)
        peak = max(n - m, int(float(x)) - m)
        j = 0
        t_ref = mpf(0)
        while True:
            if j >= dim:
                dim_new = dim + 64
                d = extend_coeffs(m, n, c, lam, d, dim_new, dps)
                dim = dim_new
                numax_new = m + p + 2 * (dim - 1)
                ladder = (
                    _bessel_j_ladder(numax_new + 1, x, dps)
                    if kind == 1
                    else _bessel_y_ladder(numax_new + 1, x)
                )
                numax = numax_new
            r = p + 2 * j
            if j > 0:
                rq = r - 2
                w *= mpf((2 * m + rq + 2) * (2 * m + rq + 1)) / ((rq + 2) * (rq + 1))
            nu = m + r
            dw = d[j] * w
            F += dw
            sgn = -1 if ((r + m - n) // 2) % 2 else 1
            zv = ladder[nu]
            dz = (ladder[nu - 1] - mpf(nu + 1) / x * zv) if nu >= 1 else -ladder[1]
            t = sgn * dw * zv
            S0 += t
            S1 += sgn * dw * dz
            if abs(t) > t_ref:
                t_ref = abs(t)
            if r > peak + 6 and abs(t) < tol * max(abs(S0), t_ref * mpf(10) ** (-dps)):
                break
            if r > 12000:
                raise ConvergenceError(
                    f"radial series did not converge for (m={m}, n={n}, c={c}, xi={float(xi)})"
                )
            j += 1
        pref = (1 - 1 / (xi * xi)) ** (mpf(m) / 2)
        dpref = mpf(m) / xi**3 * (1 - 1 / (xi * xi)) ** (mpf(m) / 2 - 1) if m > 0 else mpf(0)
        val = pref * S0 / F
        dval = (dpref * S0 + pref * mpf(c) * S1) / F
        return val, dval, d


def _taylor_step(lam, c2, m2, s, u, du, h, order):
    """Advance (u, u') of the radial equation by h with an exact Taylor series.

    The equation multiplied through by (xi^2 - 1) has polynomial
    coefficients, so the Taylor coefficients obey a short recurrence:
    P u'' + Q u' + W u = 0 around xi = s with
    P = ((s+t)^2-1)^2, Q = 2(s+t)((s+t)^2-1),
    W = -[(lam - c^2 (s+t)^2)((s+t)^2-1) + m^2].
    """
    one = mpf(1)
    A = [s * s - 1, 2 * s, one]
    B = [s * s, 2 * s, one]
    P = [A[0] * A[0], 2 * A[0] * A[1], A[1] * A[1] + 2 * A[0] * A[2], 2 * A[1] * A[2], A[2] * A[2]]
    Q = [2 * s * A[0], 2 * (A[0] + s * A[1]), 2 * (A[1] + s * A[2]), 2 * A[2]]
    BA = [
        B[0] * A[0],
        B[0] * A[1] + B[1] * A[0],
        B[0] * A[2] + B[1] * A[1] + B[2] * A[0],
        B[1] * A[2] + B[2] * A[1],
        B[2] * A[2],
    ]
    W = [
        -(lam * A[0] - c2 * BA[0] + m2),
        -(lam * A[1] - c2 * BA[1]),
        -(lam * A[2] - c2 * BA[2]),
        c2 * BA[3],
        c2 * BA[4],
    ]
    a = [u, du]
    for k in range(order):
        acc = P[1] * (k + 1) * k * a[k + 1] + Q[0] * (k + 1) * a[k + 1] + W[0] * a[k]
        if k >= 1:
            acc += P[2] * k * (k - 1) * a[k] + Q[1] * k * a[k] + W[1] * a[k - 1]
        if k >= 2:
            acc += P[3] * (k - 1) * (k - 2) * a[k - 1] + Q[2] * (k - 1) * a[k - 1] + W[2] * a[k - 2]
        if k >= 3:
            acc += P[4] * (k - 2) * (k - 3) * a[k - 2] + Q[3] * (k - 2) * a[k - 2] + W[3] * a[k - 3]
        if k >= 4:
            acc += W[4] * a[k - 4]
        a.append(-acc / (P[0] * (k + 2) * (k + 1)))
    val = a[-1]
    for k in range(len(a) - 2, -1, -1):
        val = val * h + a[k]
    dval = a[-1] * (len(a) - 1)
    for k in range(len(a) - 2, 0, -1):
        dval = dval * h + a[k] * k
    return val, dval


def radial2_inward(m, n, c, lam, d, xi_target, dps):
    """R^(2) and derivative at xi_target < DIRECT_MIN_XI.

    Sums the Neumann expansion at the anchor and continues inward with
    Taylor steps whose length is a fixed fraction of the distance to the
    singular point xi = 1.

    Returns (val, dval, d) with the possibly extended coefficient list.
    """
    with mp.workdps(dps + 10):
        anchor = mpf(ANCHOR)
        u, du, d = radial_series(m, n, c, lam, d, 2, anchor, dps)
        c2 = mpf(c) * mpf(c)
        m2 = mpf(m * m)
        order = int((dps + 10) * 2.3026 / 0.9163) + 12
        xi = anchor
        tgt = mpf(xi_target)
        while True:
            h_full = tgt - xi
            h_max = mpf("-0.4") * (xi - 1)
            if h_full >= h_max:
                u, du = _taylor_step(lam, c2, m2, xi, u, du, h_full, order)
                return u, du, d
            u, du = _taylor_step(lam, c2, m2, xi, u, du, h_max, order)
            xi = xi + h_max

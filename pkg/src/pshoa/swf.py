"""Prolate spheroidal wave functions.

Tables of characteristic values and expansion coefficients drive everything:
the angular function is a Legendre series over the parity-matching indices,

    S_mn(c, eta) = sum_r d_r^mn(c) P_(m+r)^m(eta),      (n - m) % 2 == r % 2,

and the radial functions are the matching spherical Bessel expansions

    R_mn^(p)(c, xi) = [sum_r d_r (2m+r)!/r!]^-1 ((xi^2-1)/xi^2)^(m/2)
                      * sum_r i^(r+m-n) d_r (2m+r)!/r! z_(m+r)^(p)(c xi),

with z^(1) = j, z^(2) = y and R^(3) = R^(1) + i R^(2). Conventions follow
Flammer (Spheroidal Wave Functions, 1957): the coefficients are fixed by the
value (n - m even) or slope (odd) of S_mn at eta = 0 matching P_n^m, so
S_mn -> P_n^m and lambda -> n(n+1) as c -> 0. The associated Legendre
functions carry the Condon-Shortley phase throughout, consistent with the
spherical harmonics in this package. N_mn(c) is the integral of S_mn^2 over
(-1, 1), not unity.

The expansion coefficients are built from the characteristic value by
forward recurrence up to the nominal peak r = n - m and continued-fraction
ratios beyond it, which keeps every coefficient accurate in a relative
sense; eigenvector output of the tridiagonal solver is only used to locate
and seed the characteristic value. Near the surface coordinate xi -> 1 the
Neumann series for R^(2) degenerates (term ratio 1/xi^2), so evaluation
switches to extended precision: series at an anchor point plus exact-Taylor
continuation inward (see _swfmp).
"""
from __future__ import annotations

import os
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import lgamma

import numpy as np
from mpmath import mpf
from scipy.special import spherical_jn

from . import _swfmp
from .errors import ConvergenceError, DomainError
from .linalg import tridiag_sym_eig
from .special import assoc_legendre_ladder

TAIL_RATIO = 1e-20          # required decay of the stored coefficient tail
SMALL_XI = 0.1              # xi - 1 below this routes through extended precision
DEFAULT_DPS = 50


def _abc_f64(m, r, c2):
    A = (2 * m + r + 2) * (2 * m + r + 1) * c2 / ((2 * m + 2 * r + 3) * (2 * m + 2 * r + 5))
    B = (m + r) * (m + r + 1) + (2 * (m + r) * (m + r + 1) - 2 * m * m - 1) * c2 / (
        (2 * m + 2 * r - 1) * (2 * m + 2 * r + 3)
    )
    C = r * (r - 1) * c2 / ((2 * m + 2 * r - 3) * (2 * m + 2 * r - 1))
    return A, B, C


@dataclass(frozen=True)
class SwfTable:
    """Characteristic value and expansion coefficients for one (m, n, c).

    d[j] holds the coefficient at r = (n - m) % 2 + 2 j. norm is the
    squared-norm integral N_mn(c) of the angular function. Immutable;
    internal evaluation caches live in the compare-excluded _cache dict.
    """

    m: int
    n: int
    c: float
    lam: float
    d: np.ndarray
    norm: float
    precision: str = "double"
    dps: int = DEFAULT_DPS
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def parity(self) -> int:
        return (self.n - self.m) % 2

    @property
    def r_values(self) -> np.ndarray:
        return self.parity + 2 * np.arange(len(self.d))

    def d_at(self, r: int) -> float:
        """Coefficient d_r, zero for parity-mismatched or out-of-range r."""
        if r < 0 or r % 2 != self.parity:
            return 0.0
        j = (r - self.parity) // 2
        return float(self.d[j]) if j < len(self.d) else 0.0


def _eigen_lambda(m, n, c, dim):
    """Characteristic value by the symmetric-tridiagonal eigenproblem."""
    p = (n - m) % 2
    c2 = c * c
    rs = p + 2 * np.arange(dim)
    diag = np.empty(dim)
    sup = np.empty(dim - 1)
    sub = np.empty(dim - 1)
    for j, r in enumerate(rs):
        A, B, C = _abc_f64(m, int(r), c2)
        diag[j] = B
        if j < dim - 1:
            sup[j] = A
        if j > 0:
            sub[j - 1] = C
    try:
        w, _ = tridiag_sym_eig(diag, np.sqrt(sup * sub))
    except ConvergenceError as exc:
        raise ConvergenceError(f"eigensolver failed for (m={m}, n={n}, c={c})") from exc
    return w[(n - m) // 2]


def _cf_ratios_f64(m, lam, c2, r_lo, r_hi, extra=420):
    """Minimal-solution ratios d_(r+2)/d_r for r_lo <= r <= r_hi (double).

    The sweep starts well above r_hi so the continued fraction has
    converged by the time its values are recorded; keys share the parity
    of r_lo.
    """
    ratios = {}
    rho = 0.0
    start = r_lo + 2 * ((r_hi + extra - r_lo + 1) // 2)
    for r in range(start, r_lo, -2):
        A, B, C = _abc_f64(m, r, c2)
        rho = -C / (B - lam + A * rho)
        if r - 2 <= r_hi:
            ratios[r - 2] = rho
    return ratios


def _signed_exp_products(d, logw):
    """d_j * w_j computed exponent-safely (w_j may overflow on its own)."""
    out = np.zeros_like(d)
    nz = d != 0.0
    out[nz] = np.sign(d[nz]) * np.exp(np.log(np.abs(d[nz])) + logw[nz])
    return out


def _build_d_f64(m, n, c, lam, dim):
    """Coefficients from lambda: forward head to r = n - m, CF tail beyond."""
    p = (n - m) % 2
    c2 = c * c
    rs = p + 2 * np.arange(dim)
    jm = (n - m) // 2
    d = np.zeros(dim)
    d[0] = 1.0
    if jm >= 1:
        A0, B0, _ = _abc_f64(m, p, c2)
        d[1] = -(B0 - lam) * d[0] / A0
        for j in range(1, jm):
            A, B, C = _abc_f64(m, int(rs[j]), c2)
            d[j + 1] = (-(B - lam) * d[j] - C * d[j - 1]) / A
    ratios = _cf_ratios_f64(m, lam, c2, int(rs[jm]), int(rs[-1]))
    for j in range(jm, dim - 1):
        d[j + 1] = d[j] * ratios[int(rs[j])]
    # Flammer normalization at eta = 0
    P0 = assoc_legendre_ladder(m, m + int(rs[-1]) + 1, np.array([0.0]))[:, 0]
    if p == 0:
        num = P0[n - m]
        den = float(np.dot(d, P0[rs]))
    else:
        dP0 = np.zeros_like(P0)
        dP0[1:] = np.arange(m + 1, m + int(rs[-1]) + 2) * P0[:-1]
        num = dP0[n - m]
        den = float(np.dot(d, dP0[rs]))
    d *= num / den
    logw = np.array([lgamma(2 * m + r + 1) - lgamma(r + 1) for r in rs])
    sq = np.zeros_like(d)
    nz = d != 0.0
    sq[nz] = np.exp(2.0 * np.log(np.abs(d[nz])) + logw[nz])
    norm = float(np.sum(sq * 2.0 / (2 * m + 2 * rs + 1)))
    return d, norm


def build_table(m: int, n: int, c: float, precision_mode: str = "double",
                dps: int = DEFAULT_DPS, r_cap: int | None = None) -> SwfTable:
    """Build the coefficient table for one (m, n) at spheroidal parameter c.

    Parameters
    ----------
    m, n : int
        Order and degree, 0 <= m <= n.
    c : float
        Spheroidal parameter k * a, positive.
    precision_mode : {"double", "extended"}
        Extended mode refines the characteristic value and coefficients to
        dps significant digits (kept alongside the double fields).
    r_cap : int, optional
        Largest stored expansion index; extended automatically until the
        coefficient tail has decayed below 1e-20 of the peak.
    """
    if not (0 <= m <= n):
        raise DomainError(f"need 0 <= m <= n, got m={m}, n={n}")
    if c <= 0:
        raise DomainError(f"spheroidal parameter must be positive, got {c}")
    if precision_mode not in ("double", "extended"):
        raise DomainError(f"unknown precision mode {precision_mode!r}")
    p = (n - m) % 2
    if r_cap is None:
        r_cap = 2 * n + 40
    dim = max((r_cap - p) // 2 + 1, (n - m) // 2 + int(1.5 * c) + 44)
    lam = float(_eigen_lambda(m, n, c, dim))
    for _ in range(6):
        if precision_mode == "extended":
            lam_mp = _swfmp.refine_lambda(m, n, c, lam, dps)
            d_mp, norm_mp = _swfmp.build_coeffs(m, n, c, lam_mp, dim, dps)
            d = np.array([float(x) for x in d_mp])
            lam_out, norm = float(lam_mp), float(norm_mp)
        else:
            d, norm = _build_d_f64(m, n, c, lam, dim)
            lam_out = lam
        dmax = np.max(np.abs(d))
        if abs(d[-1]) < TAIL_RATIO * dmax:
            break
        dim = int(dim * 1.5) + 8
    else:
        raise ConvergenceError(f"coefficient tail did not decay for (m={m}, n={n}, c={c})")
    # the extended payload is derived lazily from the rounded double fields
    # (same path as a cache reload), so fresh builds and cache hits agree bitwise
    return SwfTable(m=m, n=n, c=c, lam=lam_out, d=d, norm=norm,
                    precision=precision_mode, dps=dps)


# ---------------------------------------------------------------------------
# angular functions
# ---------------------------------------------------------------------------

def angular_S_all(table: SwfTable, eta) -> np.ndarray:
    """Angular function S_mn(c, eta) over an array of eta in [-1, 1]."""
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    if np.any(np.abs(eta) > 1.0):
        raise DomainError("angular argument must lie in [-1, 1]")
    rs = table.r_values
    ladder = assoc_legendre_ladder(table.m, table.m + int(rs[-1]), eta)
    return table.d @ ladder[rs]


def angular_S(table: SwfTable, eta: float) -> float:
    """Angular function S_mn(c, eta) at a single point."""
    return float(angular_S_all(table, eta)[0])


# ---------------------------------------------------------------------------
# radial functions
# ---------------------------------------------------------------------------

def _log_weights(m, rs):
    return np.array([lgamma(2 * m + r + 1) - lgamma(r + 1) for r in rs])


def _radial1_f64(table: SwfTable, xi):
    """R^(1) and derivative by the spherical-j expansion (vectorized in xi)."""
    m, n, c = table.m, table.n, table.c
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    x = c * xi
    rs = table.r_values
    dw = _signed_exp_products(table.d, _log_weights(m, rs))
    sgn = np.where(((rs + m - n) // 2) % 2 == 0, 1.0, -1.0)
    coef = dw * sgn
    F = float(np.sum(dw))
    nu = (m + rs)[:, None]
    z = spherical_jn(nu, x[None, :])
    dz = spherical_jn(nu, x[None, :], derivative=True)
    S0 = coef @ z
    S1 = coef @ dz
    pref = (1.0 - 1.0 / xi**2) ** (m / 2.0)
    if m > 0:
        dpref = m / xi**3 * (1.0 - 1.0 / xi**2) ** (m / 2.0 - 1.0)
    else:
        dpref = np.zeros_like(xi)
    val = pref * S0 / F
    dval = (dpref * S0 + pref * c * S1) / F
    return val, dval


def _radial2_f64(table: SwfTable, xi: float, rtol: float = 5e-15):
    """R^(2) and derivative by the spherical-y expansion, ratio-form tail.

    Terms keep growing until roughly r = 4m / ln(xi^2) because of the
    (2m+r)!/r! weights, typically far beyond the stored coefficients; the
    tail continues through continued-fraction ratios without forming the
    (under/overflowing) factors individually.
    """
    m, n, c = table.m, table.n, table.c
    p = table.parity
    x = c * xi
    d = table.d
    dim = len(d)
    lam = table.lam
    c2 = c * c
    rs = table.r_values
    F = float(np.sum(_signed_exp_products(d, _log_weights(m, rs))))

    lnq = np.log(xi * xi)
    r_peak = max(n - m, int(np.ceil(x)) - m, int(4 * m / lnq))
    r_need = min(int(r_peak + 2 * 36.0 / lnq) + 80, 12000)
    switch = max(n - m, int(np.ceil(x)) - m) + 6
    ratios = _cf_ratios_f64(m, lam, c2, p, r_need + 2)

    # explicit phase
    y_a = np.sin(x) / x          # y_(-1)
    y_b = -np.cos(x) / x         # y_0
    for nu in range(0, m + p):   # advance to nu = m + p
        y_a, y_b = y_b, (2 * nu + 1) / x * y_b - y_a
    S0 = 0.0
    S1 = 0.0
    w = np.exp(lgamma(2 * m + p + 1) - lgamma(p + 1))
    j = 0
    r = p
    dcur = d[0]
    dcur_prev = dcur
    while True:
        nu = m + r
        sgn = -1.0 if ((r + m - n) // 2) % 2 else 1.0
        t = sgn * dcur * w * y_b
        S0 += t
        S1 += sgn * dcur * w * (y_a - (nu + 1) / x * y_b)
        if r >= switch:
            break
        # advance r by 2
        w *= (2 * m + r + 2) * (2 * m + r + 1) / ((r + 2) * (r + 1))
        j += 1
        dcur = d[j] if j < dim else dcur_prev * ratios[r]
        dcur_prev = dcur
        for _ in range(2):
            y_a, y_b = y_b, (2 * nu + 1) / x * y_b - y_a
            nu += 1
        r += 2
        if not np.isfinite(y_b):
            raise ConvergenceError(
                f"Neumann ladder overflowed for (m={m}, n={n}, c={c}, xi={xi}); "
                "use extended precision"
            )
    # ratio phase
    g = y_a / y_b                # y_(nu-1)/y_nu
    while True:
        nu = m + r
        rho1 = (2 * nu + 1) / x - g
        g1 = 1.0 / rho1
        rho2 = (2 * (nu + 1) + 1) / x - g1
        wr = (2 * m + r + 2) * (2 * m + r + 1) / ((r + 2) * (r + 1))
        t = -t * ratios[r] * wr * rho1 * rho2
        g = 1.0 / rho2
        r += 2
        nu = m + r
        S0 += t
        S1 += t * (g - (nu + 1) / x)
        if abs(t) < rtol * abs(S0):
            break
        if r >= r_need:
            raise ConvergenceError(
                f"Neumann series did not converge by r={r} for "
                f"(m={m}, n={n}, c={c}, xi={xi}); use extended precision"
            )
    pref = (1.0 - 1.0 / xi**2) ** (m / 2.0)
    dpref = m / xi**3 * (1.0 - 1.0 / xi**2) ** (m / 2.0 - 1.0) if m > 0 else 0.0
    val = pref * S0 / F
    dval = (dpref * S0 + pref * c * S1) / F
    return val, dval


_MP_LOCK = threading.Lock()


def _mp_payload(table: SwfTable):
    """Characteristic value and coefficients refined to the table's dps."""
    with _MP_LOCK:
        if "mp" not in table._cache:
            lam_mp = _swfmp.refine_lambda(table.m, table.n, table.c, table.lam, table.dps)
            d_mp, _ = _swfmp.build_coeffs(table.m, table.n, table.c, lam_mp,
                                          len(table.d), table.dps)
            table._cache["mp"] = (lam_mp, d_mp)
        return table._cache["mp"]


def _radial_mp(table: SwfTable, kind: int, xi: float):
    """Extended-precision radial evaluation; memoized per (kind, xi)."""
    key = ("r", kind, float(xi))
    if key in table._cache:
        return table._cache[key]
    lam_mp, d_mp = _mp_payload(table)
    m, n, c, dps = table.m, table.n, table.c, table.dps
    if kind == 1 or xi >= _swfmp.DIRECT_MIN_XI:
        val, dval, d_mp = _swfmp.radial_series(m, n, c, lam_mp, d_mp, kind, mpf(xi), dps)
    else:
        val, dval, d_mp = _swfmp.radial2_inward(m, n, c, lam_mp, d_mp, xi, dps)
    with _MP_LOCK:
        table._cache["mp"] = (lam_mp, d_mp)
        table._cache[key] = (float(val), float(dval))
    return table._cache[key]


def radial_R(kind: int, table: SwfTable, xi: float):
    """Radial spheroidal wave function and first derivative at xi > 1.

    Parameters
    ----------
    kind : {1, 2, 3}
        First kind (regular), second kind, or third kind R^(1) + i R^(2).

    Returns
    -------
    (value, derivative) : complex pair
    """
    if kind not in (1, 2, 3):
        raise DomainError(f"radial kind must be 1, 2 or 3, got {kind}")
    xi = float(xi)
    if xi <= 1.0:
        raise DomainError(f"radial coordinate must exceed 1, got {xi}")
    small = (xi - 1.0) < SMALL_XI
    if kind == 3:
        v1, d1 = radial_R(1, table, xi)
        v2, d2 = radial_R(2, table, xi)
        return v1 + 1j * v2, d1 + 1j * d2
    if small:
        val, dval = _radial_mp(table, kind, xi)
    elif kind == 1:
        v, dv = _radial1_f64(table, xi)
        val, dval = float(v[0]), float(dv[0])
    else:
        val, dval = _radial2_f64(table, xi)
    return complex(val), complex(dval)


def radial1_many(table: SwfTable, xi) -> tuple[np.ndarray, np.ndarray]:
    """R^(1) and derivative over an array of xi > 1 (double precision)."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(xi <= 1.0):
        raise DomainError("radial coordinate must exceed 1")
    return _radial1_f64(table, xi)


def radial3_prime_surface(table: SwfTable, xi1: float) -> complex:
    """Derivative of R^(3) at the baffle surface; memoized on the table."""
    key = ("r3p", float(xi1))
    if key not in table._cache:
        _, d3 = radial_R(3, table, xi1)
        table._cache[key] = d3
    return table._cache[key]


# ---------------------------------------------------------------------------
# contexts and the table cache
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SwfContext:
    """All tables sharing one spheroidal parameter, for orders m <= n <= n_internal."""

    c: float
    order: int
    n_internal: int
    precision: str
    dps: int
    tables: dict

    def table(self, m: int, n: int) -> SwfTable:
        try:
            return self.tables[(m, n)]
        except KeyError:
            raise DomainError(
                f"no table for (m={m}, n={n}) at c={self.c}; build the context with "
                f"n_internal >= {n} (CLI: the `tables` command)"
            ) from None


def _build_one(args):
    m, n, c, precision, dps, r_cap = args
    return (m, n), build_table(m, n, c, precision, dps, r_cap)


def build_context(c: float, order: int, n_internal: int | None = None,
                  precision: str = "double", dps: int = DEFAULT_DPS,
                  cache_dir: str | None = None, threads: int = 1) -> SwfContext:
    """Build (or load from cache) all tables for 0 <= m <= n <= n_internal.

    Table construction is independent per (m, n); threads > 1 builds them in
    a process pool with deterministic assembly order.
    """
    if n_internal is None:
        n_internal = order
    if n_internal < order:
        raise DomainError(f"n_internal {n_internal} must cover the order {order}")
    if cache_dir is not None:
        path = cache_path(cache_dir, c, n_internal, precision)
        if os.path.exists(path):
            ctx = load_tables(path)
            if ctx.order >= order:
                return ctx
            ctx = SwfContext(c=ctx.c, order=order, n_internal=ctx.n_internal,
                             precision=ctx.precision, dps=ctx.dps, tables=ctx.tables)
            return ctx
    r_cap = 2 * n_internal + 40
    jobs = [(m, n, c, precision, dps, r_cap)
            for n in range(n_internal + 1) for m in range(n + 1)]
    tables = {}
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for key, tab in pool.map(_build_one, jobs, chunksize=4):
                tables[key] = tab
    else:
        for job in jobs:
            key, tab = _build_one(job)
            tables[key] = tab
    ctx = SwfContext(c=c, order=order, n_internal=n_internal, precision=precision,
                     dps=dps, tables=tables)
    if cache_dir is not None:
        os.makedirs(cache_dir, exist_ok=True)
        save_tables(ctx, cache_path(cache_dir, c, n_internal, precision))
    return ctx


def cache_path(cache_dir: str, c: float, n_internal: int, precision: str) -> str:
    """Cache file path, keyed by c (12 significant digits) and n_internal."""
    return os.path.join(cache_dir, f"swf_c{c:.12g}_n{n_internal}_{precision}.txt")


def save_tables(ctx: SwfContext, path: str) -> None:
    """Write a context's tables as decimal text, one record per (m, n, c)."""
    with open(path, "w") as fh:
        fh.write("# pshoa spheroidal wave function table cache\n")
        fh.write(f"# c={ctx.c:.17g} order={ctx.order} n_internal={ctx.n_internal} "
                 f"precision={ctx.precision} dps={ctx.dps}\n")
        for (m, n) in sorted(ctx.tables):
            t = ctx.tables[(m, n)]
            fh.write(f"table m={m} n={n} c={t.c:.17g} lambda={t.lam:.17g} "
                     f"normN={t.norm:.17g} r_count={len(t.d)} precision={t.precision}\n")
            for j, r in enumerate(t.r_values):
                fh.write(f"{int(r)} {t.d[j]:.17g}\n")


def load_tables(path: str) -> SwfContext:
    """Read a cache file written by save_tables."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("# pshoa"):
        raise DomainError(f"{path} is not a table cache file")
    meta = dict(kv.split("=") for kv in lines[1].lstrip("# ").split())
    c = float(meta["c"])
    order = int(meta["order"])
    n_internal = int(meta["n_internal"])
    precision = meta["precision"]
    dps = int(meta["dps"])
    tables = {}
    i = 2
    while i < len(lines):
        head = lines[i]
        if not head.startswith("table "):
            raise DomainError(f"malformed cache record at line {i + 1} of {path}")
        kv = dict(item.split("=") for item in head[len("table "):].split())
        m, n = int(kv["m"]), int(kv["n"])
        count = int(kv["r_count"])
        d = np.empty(count)
        for j in range(count):
            _, val = lines[i + 1 + j].split()
            d[j] = float(val)
        tables[(m, n)] = SwfTable(
            m=m, n=n, c=float(kv["c"]), lam=float(kv["lambda"]), d=d,
            norm=float(kv["normN"]), precision=kv["precision"], dps=dps,
        )
        i += 1 + count
    return SwfContext(c=c, order=order, n_internal=n_internal, precision=precision,
                      dps=dps, tables=tables)

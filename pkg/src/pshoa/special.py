"""Classical special functions used by both the spherical and spheroidal pipelines.

Conventions
-----------
Associated Legendre functions carry the Condon-Shortley phase,

    P_n^m(x) = (-1)^m (1-x^2)^(m/2) d^m/dx^m P_n(x),

and the spherical harmonics are the orthonormal complex ones,

    Y_n^m(theta, phi) = sqrt((2n+1)/(4 pi) (n-m)!/(n+m)!) P_n^m(cos theta) e^(i m phi).

Negative orders follow P_n^(-m) = (-1)^m (n-m)!/(n+m)! P_n^m and the equivalent
conjugation rule Y_n^(-m) = (-1)^m conj(Y_n^m).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lgamma

import numpy as np
from scipy.special import spherical_jn, spherical_yn

from .errors import DomainError


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on (-1, 1)."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.nodes)


def gauss_legendre(count: int) -> QuadratureRule:
    """K-point Gauss-Legendre rule, exact for polynomials of degree <= 2K-1.

    Parameters
    ----------
    count : int
        Number of nodes, at least 1.
    """
    if count < 1:
        raise DomainError(f"quadrature needs at least one node, got {count}")
    nodes, weights = np.polynomial.legendre.leggauss(count)
    return QuadratureRule(nodes=nodes, weights=weights)


def legendre_p(n: int, x):
    """Legendre polynomial P_n(x) by the stable forward recurrence."""
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("argument must lie in [-1, 1]")
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1) * x * cur - k * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def assoc_legendre_ladder(m: int, nmax: int, x) -> np.ndarray:
    """All of P_m^m(x) .. P_nmax^m(x) for fixed order m >= 0.

    Runs the (m,m) -> (m+1,m) -> upward-in-degree recurrence, which stays
    stable for the degrees used here (no factorial ratios are formed).

    Returns
    -------
    ndarray of shape (nmax - m + 1,) + x.shape
    """
    if m < 0 or nmax < m:
        raise DomainError(f"need 0 <= m <= nmax, got m={m}, nmax={nmax}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros((nmax - m + 1,) + x.shape)
    pmm = np.ones_like(x)
    if m > 0:
        somx2 = np.sqrt((1.0 - x) * (1.0 + x))
        fact = 1.0
        for _ in range(m):
            pmm *= -fact * somx2
            fact += 2.0
    out[0] = pmm
    if nmax > m:
        out[1] = (2 * m + 1) * x * pmm
    for nu in range(m + 2, nmax + 1):
        j = nu - m
        out[j] = ((2 * nu - 1) * x * out[j - 1] - (nu + m - 1) * out[j - 2]) / (nu - m)
    return out


def assoc_legendre(n: int, m: int, x):
    """Associated Legendre function P_n^m(x), Condon-Shortley phase included.

    Negative m is extended by the ratio-of-factorials identity.
    """
    if abs(m) > n:
        raise DomainError(f"need |m| <= n, got n={n}, m={m}")
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0):
        raise DomainError("argument must lie in [-1, 1]")
    ma = abs(m)
    val = assoc_legendre_ladder(ma, n, xa)[n - ma]
    if m < 0:
        val = val * ((-1) ** ma * np.exp(lgamma(n - ma + 1) - lgamma(n + ma + 1)))
    return val if np.ndim(x) else float(val)


def sph_bessel(kind: str, n: int, x):
    """Spherical Bessel function j_n, y_n or h_n = j_n + i y_n (first kind).

    Parameters
    ----------
    kind : {"j", "y", "h1"}
    n : int
        Nonnegative degree.
    x : positive real or array.
    """
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise DomainError("argument must be positive")
    if kind == "j":
        val = spherical_jn(n, xa)
    elif kind == "y":
        val = spherical_yn(n, xa)
    elif kind == "h1":
        val = spherical_jn(n, xa) + 1j * spherical_yn(n, xa)
    else:
        raise DomainError(f"unknown kind {kind!r}")
    return val if np.ndim(x) else complex(val) if kind == "h1" else float(val)


def sph_bessel_deriv(kind: str, n: int, x):
    """d/dx of j_n, y_n or h_n via f' = f_(n-1) - (n+1) f_n / x."""
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise DomainError("argument must be positive")
    if kind == "j":
        val = spherical_jn(n, xa, derivative=True)
    elif kind == "y":
        val = spherical_yn(n, xa, derivative=True)
    elif kind == "h1":
        val = spherical_jn(n, xa, derivative=True) + 1j * spherical_yn(n, xa, derivative=True)
    else:
        raise DomainError(f"unknown kind {kind!r}")
    return val if np.ndim(x) else complex(val) if kind == "h1" else float(val)


def sph_harmonic(n: int, m: int, theta, phi):
    """Orthonormal complex spherical harmonic Y_n^m(theta, phi)."""
    if abs(m) > n:
        raise DomainError(f"need |m| <= n, got n={n}, m={m}")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    ma = abs(m)
    norm = np.sqrt((2 * n + 1) / (4 * np.pi) * np.exp(lgamma(n - ma + 1) - lgamma(n + ma + 1)))
    val = norm * assoc_legendre_ladder(ma, n, np.cos(theta))[n - ma] * np.exp(1j * ma * phi)
    if m < 0:
        val = (-1) ** ma * np.conj(val)
    return val if np.ndim(theta) or np.ndim(phi) else complex(val)


def sph_harm_matrix(order: int, theta, phi) -> np.ndarray:
    """Matrix of Y_n^m over a batch of directions.

    Row q holds Y_n^m(theta_q, phi_q) in column n^2 + n + m, the flat
    coefficient layout used throughout the library.

    Returns
    -------
    ndarray of shape (len(theta), (order+1)^2), complex
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    ct = np.cos(theta)
    out = np.zeros((theta.size, (order + 1) ** 2), dtype=complex)
    for m in range(order + 1):
        ladder = assoc_legendre_ladder(m, order, ct)
        eimp = np.exp(1j * m * phi)
        for n in range(m, order + 1):
            norm = np.sqrt((2 * n + 1) / (4 * np.pi) * np.exp(lgamma(n - m + 1) - lgamma(n + m + 1)))
            ynm = norm * ladder[n - m] * eimp
            out[:, n * n + n + m] = ynm
            if m > 0:
                out[:, n * n + n - m] = (-1) ** m * np.conj(ynm)
    return out

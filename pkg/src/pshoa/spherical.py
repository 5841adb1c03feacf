"""Conventional spherical ambisonics on a rigid spherical baffle.

An incident field is represented by coefficients of the regular basis
j_n(kr) Y_n^m(theta, phi); the coefficient of (n, m) sits at flat index
n^2 + n + m. Scattering off the rigid sphere turns the surface pressure
into a diagonally weighted spherical harmonic series, which is what the
least-squares encoder inverts. Time convention exp(-i omega t), outgoing
waves are Hankel functions of the first kind.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import spherical_jn, spherical_yn

from .errors import DomainError
from .geometry import ArrayGeometry, PlaneWave, RigidSphere
from .linalg import rls_solve_info
from .special import gauss_legendre, sph_harm_matrix


@dataclass(frozen=True)
class SphericalCoeffs:
    """Ambisonic coefficients up to order N at wavenumber k.

    values[n^2 + n + m] holds the (n, m) coefficient.
    """

    order: int
    k: float
    values: np.ndarray
    frame: str = "global"

    def __post_init__(self):
        expected = (self.order + 1) ** 2
        if self.values.shape != (expected,):
            raise DomainError(
                f"coefficient vector must have length {expected}, got {self.values.shape}"
            )

    @staticmethod
    def index(n: int, m: int) -> int:
        return n * n + n + m

    def at(self, n: int, m: int) -> complex:
        return complex(self.values[self.index(n, m)])


def plane_wave_coeffs(pw: PlaneWave, order: int) -> SphericalCoeffs:
    """Exact ambisonic coefficients of a unit plane wave: 4 pi i^n conj(Y_n^m)."""
    if order < 0:
        raise DomainError(f"order must be nonnegative, got {order}")
    y = sph_harm_matrix(order, np.array([pw.theta]), np.array([pw.phi]))[0]
    ns = np.concatenate([[n] * (2 * n + 1) for n in range(order + 1)])
    values = 4.0 * np.pi * (1j ** ns) * np.conj(y)
    return SphericalCoeffs(order=order, k=pw.k, values=values)


def _surface_gains(order: int, k: float, radius: float) -> np.ndarray:
    """Per-degree factor i / ((kR)^2 h_n'(kR)) of the rigid-sphere surface field."""
    kr = k * radius
    if kr <= 0:
        raise DomainError(f"kR must be positive, got {kr}")
    ns = np.arange(order + 1)
    hp = spherical_jn(ns, kr, derivative=True) + 1j * spherical_yn(ns, kr, derivative=True)
    return 1j / (kr * kr * hp)


def encoding_matrix(mics: ArrayGeometry, order: int, k: float) -> np.ndarray:
    """Rigid-sphere encoding matrix: row q holds gain_n * Y_n^m(theta_q, phi_q)."""
    if not isinstance(mics.baffle, RigidSphere):
        raise DomainError("spherical encoding requires a rigid-sphere array")
    gains = _surface_gains(order, k, mics.baffle.radius)
    per_entry = np.concatenate([[gains[n]] * (2 * n + 1) for n in range(order + 1)])
    y = sph_harm_matrix(order, mics.native[:, 0], mics.native[:, 1])
    return y * per_entry[None, :]


def rigid_sphere_surface_pressure(coeffs: SphericalCoeffs, mics: ArrayGeometry) -> np.ndarray:
    """Total (incident plus scattered) pressure at the microphones."""
    return encoding_matrix(mics, coeffs.order, coeffs.k) @ coeffs.values


def encode_spherical(pressures, mics: ArrayGeometry, order: int, k: float,
                     sigma: float) -> SphericalCoeffs:
    """Estimate ambisonic coefficients from rigid-sphere observations.

    Solves the regularized least squares min ||p - M a||^2 + sigma ||a||^2
    through the SVD of the encoding matrix.
    """
    pressures = np.asarray(pressures, dtype=complex)
    length = (order + 1) ** 2
    if mics.count < length:
        raise DomainError(
            f"underdetermined encoding: {mics.count} microphones for {length} = (N+1)^2 unknowns"
        )
    matrix = encoding_matrix(mics, order, k)
    sol = rls_solve_info(matrix, pressures, sigma)
    if sol.rank < length:
        warnings.warn(
            f"spherical encoding matrix is rank deficient: effective rank {sol.rank} of {length}",
            stacklevel=2,
        )
    return SphericalCoeffs(order=order, k=k, values=sol.x)


def reconstruct_field(coeffs: SphericalCoeffs, points) -> np.ndarray:
    """Incident field at Cartesian points from the regular expansion, n <= N."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    r = np.linalg.norm(points, axis=1)
    theta = np.arccos(np.clip(np.divide(points[:, 2], r, out=np.zeros_like(r), where=r > 0),
                              -1.0, 1.0))
    phi = np.arctan2(points[:, 1], points[:, 0])
    order = coeffs.order
    y = sph_harm_matrix(order, theta, phi)
    ns = np.arange(order + 1)
    jn = spherical_jn(ns[:, None], coeffs.k * r[None, :])
    per_entry = np.concatenate([[n] * (2 * n + 1) for n in range(order + 1)])
    basis = y * jn[per_entry, :].T
    # r = 0 needs care: arccos clip handled theta; j_n(0) is exact in scipy
    return basis @ coeffs.values


def rotate_coeffs(coeffs: SphericalCoeffs, rotation: np.ndarray,
                  frame: str = "global") -> SphericalCoeffs:
    """Re-express coefficients under a rigid rotation of the frame.

    The field is evaluated on a quadrature sphere and re-projected onto the
    spherical harmonics, which is exact for content up to the coefficient
    order (the radius is picked away from Bessel zeros, and the quadrature
    order doubles the band limit).
    """
    rotation = np.asarray(rotation, dtype=float)
    order = coeffs.order
    k = coeffs.k
    # radius with all |j_n(kr)| comfortably nonzero
    candidates = np.linspace(max(order, 1) * 0.5 / k, (order + 6) * 1.5 / k, 241)
    ns = np.arange(order + 1)
    jmat = np.abs(spherical_jn(ns[:, None], k * candidates[None, :]))
    r0 = float(candidates[np.argmax(np.min(jmat, axis=0))])
    kt = 2 * order + 2
    kp = 4 * order + 4
    rule = gauss_legendre(kt)
    thetas = np.arccos(rule.nodes)
    phis = 2.0 * np.pi * np.arange(kp) / kp
    tg, pg = np.meshgrid(thetas, phis, indexing="ij")
    wg = np.repeat(rule.weights, kp) * (2.0 * np.pi / kp)
    dirs = np.column_stack([
        np.sin(tg.ravel()) * np.cos(pg.ravel()),
        np.sin(tg.ravel()) * np.sin(pg.ravel()),
        np.cos(tg.ravel()),
    ])
    # field of the rotated expansion at the quadrature points
    pts_old = r0 * dirs @ rotation
    vals = reconstruct_field(coeffs, pts_old)
    y = sph_harm_matrix(order, tg.ravel(), pg.ravel())
    proj = (np.conj(y) * (wg * vals)[:, None]).sum(axis=0)
    jn = spherical_jn(ns, k * r0)
    per_entry = np.concatenate([[n] * (2 * n + 1) for n in range(order + 1)])
    values = proj / jn[per_entry]
    return SphericalCoeffs(order=order, k=k, values=values, frame=frame)

"""Prolate spheroidal ambisonics on a rigid spheroidal baffle.

The incident field is expanded in the spheroid's local frame as

    p = sum_n sum_(m=0..n) R_mn^(1)(c, xi) S_mn(c, eta)
        (A_mn cos(m phi) + B_mn sin(m phi)),

so a coefficient set is the pair of vectors A (0 <= m <= n) and B
(1 <= m <= n); both are complex for complex fields. Flat layouts:
A_mn at n(n+1)/2 + m, B_mn at n(n-1)/2 + m - 1, jointly (N+1)^2 entries.

On the rigid surface xi = xi1 the total field collapses through the
Wronskian to i S_mn(c, eta_q) / (c (xi1^2 - 1) R_mn^(3)'(c, xi1)) per mode,
giving the inverse encoding matrix as an angular block times a diagonal
equalizer.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import ArrayGeometry, PlaneWave, ProlateParams, prolate_from_cartesian
from .linalg import rls_solve_info
from .swf import SwfContext, angular_S_all, radial1_many, radial3_prime_surface


@dataclass(frozen=True)
class SpheroidalCoeffs:
    """Spheroidal ambisonic coefficients up to order N.

    a holds the cosine-type coefficients A_mn, b the sine-type B_mn (no
    m = 0 entries, sin(0 phi) carries nothing). c is the spheroidal
    parameter k * half interfocal distance.
    """

    order: int
    c: float
    a_focal: float
    a: np.ndarray
    b: np.ndarray
    frame: str = "local"

    def __post_init__(self):
        la = (self.order + 1) * (self.order + 2) // 2
        lb = self.order * (self.order + 1) // 2
        if self.a.shape != (la,) or self.b.shape != (lb,):
            raise DomainError(
                f"coefficient lengths must be {la} and {lb}, got {self.a.shape}, {self.b.shape}"
            )

    @staticmethod
    def index_a(m: int, n: int) -> int:
        return n * (n + 1) // 2 + m

    @staticmethod
    def index_b(m: int, n: int) -> int:
        return n * (n - 1) // 2 + m - 1

    @property
    def k(self) -> float:
        return self.c / self.a_focal

    def at_a(self, m: int, n: int) -> complex:
        return complex(self.a[self.index_a(m, n)])

    def at_b(self, m: int, n: int) -> complex:
        return complex(self.b[self.index_b(m, n)])

    def as_vector(self) -> np.ndarray:
        """Concatenated [A; B] of length (N+1)^2."""
        return np.concatenate([self.a, self.b])

    @classmethod
    def from_vector(cls, vec, order: int, c: float, a_focal: float,
                    frame: str = "local") -> "SpheroidalCoeffs":
        vec = np.asarray(vec, dtype=complex)
        la = (order + 1) * (order + 2) // 2
        return cls(order=order, c=c, a_focal=a_focal, a=vec[:la].copy(),
                   b=vec[la:].copy(), frame=frame)


def _mode_pairs_a(order):
    return [(m, n) for n in range(order + 1) for m in range(n + 1)]


def _mode_pairs_b(order):
    return [(m, n) for n in range(1, order + 1) for m in range(1, n + 1)]


def plane_wave_coeffs_spheroidal(pw: PlaneWave, ctx: SwfContext, order: int) -> SpheroidalCoeffs:
    """Exact spheroidal coefficients of a unit plane wave (local frame).

    A_mn = 2 i^n eps_m / N_mn(c) S_mn(c, cos theta0) cos(m phi0) with the
    Neumann factor eps_0 = 1, eps_m = 2; B_mn the same with sin(m phi0).
    The wave's direction must already be expressed in the spheroid frame.
    """
    if order < 0:
        raise DomainError(f"order must be nonnegative, got {order}")
    la = (order + 1) * (order + 2) // 2
    lb = order * (order + 1) // 2
    a = np.zeros(la, dtype=complex)
    b = np.zeros(lb, dtype=complex)
    ct0 = np.cos(pw.theta)
    phi0 = pw.phi
    for n in range(order + 1):
        for m in range(n + 1):
            tab = ctx.table(m, n)
            eps = 1.0 if m == 0 else 2.0
            s0 = float(angular_S_all(tab, np.array([ct0]))[0])
            base = 2.0 * (1j ** n) * eps / tab.norm * s0
            a[SpheroidalCoeffs.index_a(m, n)] = base * np.cos(m * phi0)
            if m >= 1:
                b[SpheroidalCoeffs.index_b(m, n)] = base * np.sin(m * phi0)
    return SpheroidalCoeffs(order=order, c=ctx.c, a_focal=ctx.c / pw.k, a=a, b=b)


def angular_blocks(mics: ArrayGeometry, ctx: SwfContext, order: int):
    """Angular factor matrices S^(A), S^(B) at the microphone surface points.

    S^(A)[q, l_A(m,n)] = S_mn(c, eta_q) cos(m phi_q) and S^(B) the sine
    analogue.
    """
    etas = mics.native[:, 0]
    phis = mics.native[:, 1]
    q = mics.count
    la = (order + 1) * (order + 2) // 2
    lb = order * (order + 1) // 2
    sa = np.zeros((q, la))
    sb = np.zeros((q, lb))
    for n in range(order + 1):
        for m in range(n + 1):
            s = angular_S_all(ctx.table(m, n), etas)
            sa[:, SpheroidalCoeffs.index_a(m, n)] = s * np.cos(m * phis)
            if m >= 1:
                sb[:, SpheroidalCoeffs.index_b(m, n)] = s * np.sin(m * phis)
    return sa, sb


def equalizer_diagonal(params: ProlateParams, ctx: SwfContext, order: int) -> np.ndarray:
    """Diagonal of the surface equalization matrix, ordered [A-block; B-block].

    Entry for (m, n) is i / (c (xi1^2 - 1) R_mn^(3)'(c, xi1)).
    """
    xi1 = params.xi1
    scale = 1j / (ctx.c * (xi1 * xi1 - 1.0))
    vals_a = np.zeros((order + 1) * (order + 2) // 2, dtype=complex)
    vals_b = np.zeros(order * (order + 1) // 2, dtype=complex)
    for m, n in _mode_pairs_a(order):
        r3p = radial3_prime_surface(ctx.table(m, n), xi1)
        vals_a[SpheroidalCoeffs.index_a(m, n)] = scale / r3p
        if m >= 1:
            vals_b[SpheroidalCoeffs.index_b(m, n)] = scale / r3p
    return np.concatenate([vals_a, vals_b])


def encoding_matrix_spheroidal(mics: ArrayGeometry, ctx: SwfContext, order: int) -> np.ndarray:
    """Inverse encoding matrix: angular blocks times the diagonal equalizer."""
    if not isinstance(mics.baffle, ProlateParams):
        raise DomainError("spheroidal encoding requires a rigid-spheroid array")
    sa, sb = angular_blocks(mics, ctx, order)
    diag = equalizer_diagonal(mics.baffle, ctx, order)
    return np.hstack([sa, sb]) * diag[None, :]


def rigid_spheroid_surface_pressure(coeffs: SpheroidalCoeffs, params: ProlateParams,
                                    mics: ArrayGeometry, ctx: SwfContext) -> np.ndarray:
    """Total pressure at the microphones of a rigid spheroidal array."""
    if not isinstance(mics.baffle, ProlateParams):
        raise DomainError("spheroidal surface pressure requires a rigid-spheroid array")
    matrix = encoding_matrix_spheroidal(mics, ctx, coeffs.order)
    return matrix @ coeffs.as_vector()


def encode_spheroidal(pressures, mics: ArrayGeometry, ctx: SwfContext, order: int,
                      sigma: float, report: dict | None = None) -> SpheroidalCoeffs:
    """Estimate spheroidal coefficients from rigid-spheroid observations.

    The strongly flattened geometries make the equalized matrix very badly
    conditioned: modes the baffle barely radiates into are cut at the rank
    tolerance and a warning reports the effective rank. Pass a dict as
    report to receive rank and singular-value extrema.
    """
    pressures = np.asarray(pressures, dtype=complex)
    length = (order + 1) ** 2
    if mics.count < length:
        raise DomainError(
            f"underdetermined encoding: {mics.count} microphones for {length} = (N+1)^2 unknowns"
        )
    matrix = encoding_matrix_spheroidal(mics, ctx, order)
    sol = rls_solve_info(matrix, pressures, sigma)
    if report is not None:
        report["rank"] = sol.rank
        report["s_max"] = float(sol.singular_values[0])
        report["s_min"] = float(sol.singular_values[-1])
    if sigma == 0.0 and sol.rank < length:
        warnings.warn(
            f"spheroidal encoding matrix is rank deficient: effective rank {sol.rank} of "
            f"{length}; coefficients in the cut subspace are set to zero",
            stacklevel=2,
        )
    baffle = mics.baffle
    return SpheroidalCoeffs.from_vector(sol.x, order=order, c=ctx.c, a_focal=baffle.a)


def reconstruct_incident_spheroidal(coeffs: SpheroidalCoeffs, points_local,
                                    ctx: SwfContext) -> np.ndarray:
    """Incident field at local-frame Cartesian points, truncated at the order.

    Evaluates the regular expansion R^(1) S (A cos + B sin); points must
    satisfy xi >= 1, which holds for every point in space.
    """
    pts = np.atleast_2d(np.asarray(points_local, dtype=float))
    xi, eta, phi = prolate_from_cartesian(pts[:, 0], pts[:, 1], pts[:, 2], coeffs.a_focal)
    xi = np.maximum(xi, 1.0 + 1e-13)  # points on the focal segment map to xi = 1
    eta = np.clip(eta, -1.0, 1.0)
    out = np.zeros(pts.shape[0], dtype=complex)
    for n in range(coeffs.order + 1):
        for m in range(n + 1):
            tab = ctx.table(m, n)
            amn = coeffs.at_a(m, n)
            bmn = coeffs.at_b(m, n) if m >= 1 else 0.0
            if amn == 0 and bmn == 0:
                continue
            r1, _ = radial1_many(tab, xi)
            s = angular_S_all(tab, eta)
            azim = amn * np.cos(m * phi) + bmn * np.sin(m * phi)
            out += r1 * s * azim
    return out

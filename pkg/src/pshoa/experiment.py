"""Plane-wave encoding experiments: simulate, encode, transcode, reconstruct,
and score reconstructions by their signal-to-distortion ratio.

The evaluation grid lives in the z = 0 plane of the global frame. SDR is
pointwise, 10 log10(|p|^2 / |p - p_rec|^2), capped at 300 dB; the sweet spot
is the region above a threshold (30 dB by default). Points inside a baffle
are flagged: the incident-field expansions remain valid there so SDR is
still computed, but flagged cells are excluded from sweet-spot areas.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .geometry import ArrayGeometry, PlaneWave, ProlateParams, RigidSphere, prolate_from_cartesian
from .spherical import (
    SphericalCoeffs,
    encode_spherical,
    plane_wave_coeffs,
    reconstruct_field,
    rigid_sphere_surface_pressure,
    rotate_coeffs,
)
from .spheroidal import (
    SpheroidalCoeffs,
    encode_spheroidal,
    plane_wave_coeffs_spheroidal,
    rigid_spheroid_surface_pressure,
)
from .swf import SwfContext
from .transcode import transcode

SDR_CAP_DB = 300.0
TRUTH_FLOOR = 1e-12


@dataclass
class FieldGrid:
    """Regular z = 0 evaluation grid with true and reconstructed pressures."""

    xs: np.ndarray
    ys: np.ndarray
    k: float
    frame: str
    p_true: np.ndarray
    p_rec: np.ndarray
    sdr_db: np.ndarray
    interior: np.ndarray

    @property
    def shape(self):
        return (len(self.xs), len(self.ys))

    def points(self) -> np.ndarray:
        """Row-major (x, y, 0) points, x varying slowest."""
        xg, yg = np.meshgrid(self.xs, self.ys, indexing="ij")
        return np.column_stack([xg.ravel(), yg.ravel(), np.zeros(xg.size)])


@dataclass(frozen=True)
class SweetSpotMetrics:
    """Extent of the above-threshold region: axis widths through the origin
    and total (exterior) cell area."""

    threshold_db: float
    width_x: float
    width_y: float
    area_m2: float
    sdr_origin_db: float


def grid_points(extent: float, count: int):
    """Symmetric grid axes in [-extent, extent] with the origin on-grid for odd counts."""
    xs = np.linspace(-extent, extent, count)
    return xs, xs.copy()


def simulate_observation(pw: PlaneWave, mics: ArrayGeometry, ctx: SwfContext | None = None,
                         n_sim: int | None = None, tail_tol: float = 1e-6) -> np.ndarray:
    """Total pressure a unit plane wave produces at the array microphones.

    Pushes the analytic plane-wave coefficients through the rigid-baffle
    surface operator at internal order n_sim (defaults to twice the typical
    encoding order plus headroom). The last four orders' contribution is
    monitored as a truncation check.
    """
    if isinstance(mics.baffle, RigidSphere):
        if n_sim is None:
            n_sim = 30
        coeffs = plane_wave_coeffs(pw, n_sim)
        p_full = rigid_sphere_surface_pressure(coeffs, mics)
        low = coeffs.values.copy()
        low[(n_sim - 3) ** 2:] = 0.0
        p_low = rigid_sphere_surface_pressure(
            SphericalCoeffs(order=n_sim, k=pw.k, values=low), mics)
    elif isinstance(mics.baffle, ProlateParams):
        if ctx is None:
            raise DomainError("spheroid simulation needs a wave function context")
        if n_sim is None:
            n_sim = min(30, ctx.n_internal)
        if n_sim > ctx.n_internal:
            raise DomainError(
                f"simulation order {n_sim} exceeds the context's n_internal {ctx.n_internal}")
        pw_local = pw.rotated(mics.rotation.T)
        coeffs = plane_wave_coeffs_spheroidal(pw_local, ctx, n_sim)
        p_full = rigid_spheroid_surface_pressure(coeffs, mics.baffle, mics, ctx)
        vec = coeffs.as_vector().copy()
        la = (n_sim + 1) * (n_sim + 2) // 2
        for n in range(n_sim - 3, n_sim + 1):
            for m in range(n + 1):
                vec[SpheroidalCoeffs.index_a(m, n)] = 0.0
                if m >= 1:
                    vec[la + SpheroidalCoeffs.index_b(m, n)] = 0.0
        p_low = rigid_spheroid_surface_pressure(
            SpheroidalCoeffs.from_vector(vec, n_sim, ctx.c, mics.baffle.a),
            mics.baffle, mics, ctx)
    else:
        raise DomainError(f"unsupported baffle {type(mics.baffle).__name__}")
    tail = np.linalg.norm(p_full - p_low) / max(np.linalg.norm(p_full), TRUTH_FLOOR)
    if tail > tail_tol:
        raise ConvergenceError(
            f"surface series not converged at n_sim={n_sim}: tail ratio {tail:.2e}")
    return p_full


def sdr_map(p_true, p_rec) -> np.ndarray:
    """Pointwise signal-to-distortion ratio in dB, capped, NaN where the
    reference is numerically zero."""
    p_true = np.asarray(p_true, dtype=complex)
    p_rec = np.asarray(p_rec, dtype=complex)
    if p_true.shape != p_rec.shape:
        raise DomainError(f"shape mismatch {p_true.shape} vs {p_rec.shape}")
    out = np.full(p_true.shape, np.nan)
    ok = np.abs(p_true) >= TRUTH_FLOOR
    err = np.abs(p_true - p_rec) ** 2
    with np.errstate(divide="ignore"):
        val = 10.0 * np.log10(np.abs(p_true[ok]) ** 2 / err[ok])
    out[ok] = np.minimum(val, SDR_CAP_DB)
    return out


def _axis_run_width(sdr_line, axis, threshold):
    """Length of the contiguous above-threshold run containing the origin."""
    origin = int(np.argmin(np.abs(axis)))
    above = np.nan_to_num(sdr_line, nan=-np.inf) >= threshold
    if not above[origin]:
        return 0.0
    lo = origin
    while lo > 0 and above[lo - 1]:
        lo -= 1
    hi = origin
    while hi < len(axis) - 1 and above[hi + 1]:
        hi += 1
    return float(axis[hi] - axis[lo])


def sweet_spot(grid: FieldGrid, threshold_db: float = 30.0) -> SweetSpotMetrics:
    """Sweet-spot widths through the origin and above-threshold area.

    Widths use the raw SDR lines along the two grid axes (baffle-interior
    cells participate; the expansions are evaluated there too). The area
    counts exterior cells only.
    """
    nx, ny = grid.shape
    sdr = grid.sdr_db.reshape(nx, ny)
    interior = grid.interior.reshape(nx, ny)
    iy = int(np.argmin(np.abs(grid.ys)))
    ix = int(np.argmin(np.abs(grid.xs)))
    width_x = _axis_run_width(sdr[:, iy], grid.xs, threshold_db)
    width_y = _axis_run_width(sdr[ix, :], grid.ys, threshold_db)
    cell = (grid.xs[1] - grid.xs[0]) * (grid.ys[1] - grid.ys[0]) if nx > 1 and ny > 1 else 0.0
    above = (np.nan_to_num(sdr, nan=-np.inf) >= threshold_db) & ~interior
    area = float(np.count_nonzero(above) * cell)
    origin_sdr = float(sdr[ix, iy])
    return SweetSpotMetrics(threshold_db=threshold_db, width_x=width_x, width_y=width_y,
                            area_m2=area, sdr_origin_db=origin_sdr)


def truth_on_grid(pw: PlaneWave, points: np.ndarray) -> np.ndarray:
    kvec = pw.k * np.asarray(pw.direction)
    return np.exp(1j * points @ kvec)


def interior_mask(mics: ArrayGeometry, points: np.ndarray) -> np.ndarray:
    """Points lying inside the baffle (flagged, not scored for area)."""
    if isinstance(mics.baffle, RigidSphere):
        return np.linalg.norm(points, axis=1) < mics.baffle.radius
    local = mics.to_local(points)
    xi, _, _ = prolate_from_cartesian(local[:, 0], local[:, 1], local[:, 2], mics.baffle.a)
    return xi < mics.baffle.xi1


def run_sphere_pipeline(pw: PlaneWave, mics: ArrayGeometry, order: int, sigma: float,
                        points: np.ndarray, n_sim: int | None = None):
    """Simulate, encode and reconstruct on the rigid sphere.

    Returns (coefficients, reconstructed field at points).
    """
    p_q = simulate_observation(pw, mics, n_sim=n_sim)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        coeffs = encode_spherical(p_q, mics, order, pw.k, sigma)
    return coeffs, reconstruct_field(coeffs, points)


def run_spheroid_pipeline(pw: PlaneWave, mics: ArrayGeometry, ctx: SwfContext, order: int,
                          sigma: float, n_sum: int, points: np.ndarray,
                          n_sim: int | None = None):
    """Simulate, encode, transcode and reconstruct on the rigid spheroid.

    The transcoded coefficients are re-expressed in the global frame, so the
    returned SphericalCoeffs reconstruct directly at global points.
    """
    p_q = simulate_observation(pw, mics, ctx=ctx, n_sim=n_sim)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sph_coeffs = encode_spheroidal(p_q, mics, ctx, order, sigma)
    local = transcode(sph_coeffs, ctx, order_out=order, n_sum=n_sum)
    coeffs = rotate_coeffs(local, mics.rotation)
    return sph_coeffs, coeffs, reconstruct_field(coeffs, points)


def make_field_grid(pw: PlaneWave, mics: ArrayGeometry, p_rec: np.ndarray,
                    xs: np.ndarray, ys: np.ndarray, frame: str = "global") -> FieldGrid:
    xg, yg = np.meshgrid(xs, ys, indexing="ij")
    points = np.column_stack([xg.ravel(), yg.ravel(), np.zeros(xg.size)])
    p_true = truth_on_grid(pw, points)
    return FieldGrid(xs=xs, ys=ys, k=pw.k, frame=frame, p_true=p_true, p_rec=p_rec,
                     sdr_db=sdr_map(p_true, p_rec), interior=interior_mask(mics, points))

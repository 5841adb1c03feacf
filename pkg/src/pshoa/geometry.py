"""Coordinate systems, baffle shapes and microphone array layouts.

Prolate spheroidal coordinates (xi, eta, phi) with half interfocal distance a:

    x = a sqrt(1 - eta^2) sqrt(xi^2 - 1) cos phi
    y = a sqrt(1 - eta^2) sqrt(xi^2 - 1) sin phi
    z = a eta xi

with xi >= 1 and |eta| <= 1; the surface xi = xi1 is a prolate spheroid with
long radius a*xi1 along z and short radius a*sqrt(xi1^2 - 1). The spheroidal
math always runs in this local frame (long axis = local z); arrays may be
rigidly rotated so the long axis lands on any global coordinate axis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .special import gauss_legendre

DEFAULT_SOUND_SPEED = 343.0  # m/s


@dataclass(frozen=True)
class RigidSphere:
    """Sound-hard spherical baffle of the given radius (meters)."""

    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise DomainError(f"sphere radius must be positive, got {self.radius}")

    def surface_area(self) -> float:
        return 4.0 * np.pi * self.radius**2


@dataclass(frozen=True)
class ProlateParams:
    """Rigid prolate spheroid: half interfocal distance a and surface coordinate xi1."""

    a: float
    xi1: float

    def __post_init__(self):
        if self.a <= 0:
            raise DomainError(f"half interfocal distance must be positive, got {self.a}")
        if self.xi1 <= 1.0:
            raise DomainError(f"surface coordinate must exceed 1, got {self.xi1}")

    @property
    def r_long(self) -> float:
        return self.a * self.xi1

    @property
    def r_short(self) -> float:
        return self.a * np.sqrt(self.xi1**2 - 1.0)

    def surface_area(self) -> float:
        """Closed-form prolate spheroid area from the two radii."""
        rl, rs = self.r_long, self.r_short
        ecc = np.sqrt(1.0 - (rs / rl) ** 2)
        return 2.0 * np.pi * rs**2 + 2.0 * np.pi * rl * rs * np.arcsin(ecc) / ecc


def spheroid_from_radii(r_long: float, r_short: float) -> ProlateParams:
    """Spheroid parameters from its long and short radii.

    Inverts r_long = a xi1, r_short = a sqrt(xi1^2 - 1) through
    a = sqrt(r_long^2 - r_short^2), xi1 = r_long / a.
    """
    if not (r_long > r_short > 0):
        raise DomainError(
            f"need r_long > r_short > 0 (prolate), got r_long={r_long}, r_short={r_short}"
        )
    a = np.sqrt(r_long**2 - r_short**2)
    return ProlateParams(a=a, xi1=r_long / a)


@dataclass(frozen=True)
class PlaneWave:
    """Unit-amplitude plane wave exp(i k . r) with wave vector k * direction."""

    k: float
    direction: tuple
    frequency: float | None = None
    sound_speed: float | None = None

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        nrm = np.linalg.norm(d)
        if abs(nrm - 1.0) > 1e-12:
            if nrm == 0:
                raise DomainError("plane wave direction must be nonzero")
            d = d / nrm
        object.__setattr__(self, "direction", tuple(float(v) for v in d))
        if self.k <= 0:
            raise DomainError(f"wavenumber must be positive, got {self.k}")

    @classmethod
    def from_frequency(cls, frequency: float, direction, sound_speed: float = DEFAULT_SOUND_SPEED):
        k = 2.0 * np.pi * frequency / sound_speed
        return cls(k=k, direction=tuple(direction), frequency=frequency, sound_speed=sound_speed)

    @property
    def theta(self) -> float:
        """Polar angle of the propagation direction."""
        return float(np.arccos(np.clip(self.direction[2], -1.0, 1.0)))

    @property
    def phi(self) -> float:
        """Azimuth of the propagation direction, in (-pi, pi]."""
        return float(np.arctan2(self.direction[1], self.direction[0]))

    def rotated(self, rotation: np.ndarray) -> "PlaneWave":
        """Plane wave with its direction mapped through the given rotation matrix."""
        d = np.asarray(rotation, dtype=float) @ np.asarray(self.direction)
        return PlaneWave(k=self.k, direction=tuple(d), frequency=self.frequency,
                         sound_speed=self.sound_speed)


def cartesian_from_prolate(xi, eta, phi, a: float):
    """Map (xi, eta, phi) to Cartesian coordinates for half interfocal distance a."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(xi < 1.0) or np.any(np.abs(eta) > 1.0):
        raise DomainError("need xi >= 1 and |eta| <= 1")
    rho = a * np.sqrt(np.maximum(1.0 - eta**2, 0.0)) * np.sqrt(np.maximum(xi**2 - 1.0, 0.0))
    return rho * np.cos(phi), rho * np.sin(phi), a * eta * xi


def prolate_from_cartesian(x, y, z, a: float):
    """Map Cartesian coordinates to (xi, eta, phi); phi by atan2 in (-pi, pi]."""
    if a <= 0:
        raise DomainError(f"half interfocal distance must be positive, got {a}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    rp = np.sqrt(x**2 + y**2 + (z + a) ** 2)
    rm = np.sqrt(x**2 + y**2 + (z - a) ** 2)
    xi = (rp + rm) / (2.0 * a)
    eta = (rp - rm) / (2.0 * a)
    phi = np.arctan2(y, x)
    return xi, eta, phi


_AXIS_ROTATIONS = {
    # columns are the global images of the local x, y, z basis vectors
    "x": np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
    "y": np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]),
    "z": np.eye(3),
}


def rotation_for_long_axis(axis: str) -> np.ndarray:
    """Proper rotation mapping the local z axis onto the chosen global axis."""
    try:
        return _AXIS_ROTATIONS[axis].copy()
    except KeyError:
        raise DomainError(f"long axis must be one of x, y, z; got {axis!r}") from None


@dataclass(frozen=True)
class ArrayGeometry:
    """Microphone positions on a rigid baffle.

    positions holds global Cartesian coordinates, native the surface
    coordinates in the baffle's local frame: (theta_q, phi_q) on a sphere,
    (eta_q, phi_q) on a spheroid. rotation maps local to global coordinates.
    """

    baffle: RigidSphere | ProlateParams
    positions: np.ndarray
    native: np.ndarray
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))

    @property
    def count(self) -> int:
        return self.positions.shape[0]

    def to_local(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.rotation

    def to_global(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.rotation.T


def build_sphere_array(radius: float, k_theta: int, k_phi: int) -> ArrayGeometry:
    """Spherical array: Gauss-Legendre nodes in cos(theta), equispaced phi.

    The grid has k_theta rings of k_phi microphones; phi starts at 0 with no
    stagger between rings.
    """
    if k_theta < 1 or k_phi < 1:
        raise DomainError(f"grid counts must be positive, got {k_theta} x {k_phi}")
    baffle = RigidSphere(radius=radius)
    rule = gauss_legendre(k_theta)
    thetas = np.arccos(rule.nodes)
    phis = 2.0 * np.pi * np.arange(k_phi) / k_phi
    tg, pg = np.meshgrid(thetas, phis, indexing="ij")
    tg, pg = tg.ravel(), pg.ravel()
    positions = radius * np.column_stack(
        [np.sin(tg) * np.cos(pg), np.sin(tg) * np.sin(pg), np.cos(tg)]
    )
    native = np.column_stack([tg, pg])
    return ArrayGeometry(baffle=baffle, positions=positions, native=native)


def build_spheroid_array(params: ProlateParams, k_eta: int, k_phi: int,
                         long_axis: str = "z") -> ArrayGeometry:
    """Prolate spheroidal array on xi = xi1: GL nodes in eta, equispaced phi.

    The native coordinates live in the local frame (long axis = local z);
    positions are rotated so the long axis lies along the requested global
    axis.
    """
    if k_eta < 1 or k_phi < 1:
        raise DomainError(f"grid counts must be positive, got {k_eta} x {k_phi}")
    rule = gauss_legendre(k_eta)
    etas = rule.nodes
    phis = 2.0 * np.pi * np.arange(k_phi) / k_phi
    eg, pg = np.meshgrid(etas, phis, indexing="ij")
    eg, pg = eg.ravel(), pg.ravel()
    x, y, z = cartesian_from_prolate(np.full_like(eg, params.xi1), eg, pg, params.a)
    local = np.column_stack([x, y, z])
    rot = rotation_for_long_axis(long_axis)
    positions = local @ rot.T
    native = np.column_stack([eg, pg])
    return ArrayGeometry(baffle=params, positions=positions, native=native, rotation=rot)

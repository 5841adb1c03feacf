"""Prolate spheroidal ambisonics.

Sound fields captured on rigid spherical or prolate spheroidal microphone
arrays are encoded into basis-function coefficients by regularized least
squares; spheroidal coefficients can be transcoded analytically into the
conventional spherical representation. The numerical core is a double /
extended precision implementation of the prolate spheroidal wave functions.
"""
from .errors import ConvergenceError, DomainError
from .geometry import (
    ArrayGeometry,
    PlaneWave,
    ProlateParams,
    RigidSphere,
    build_sphere_array,
    build_spheroid_array,
    cartesian_from_prolate,
    prolate_from_cartesian,
    spheroid_from_radii,
)
from .linalg import rls_solve, rls_solve_info, tridiag_sym_eig
from .special import (
    QuadratureRule,
    assoc_legendre,
    gauss_legendre,
    legendre_p,
    sph_bessel,
    sph_bessel_deriv,
    sph_harmonic,
)
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
    reconstruct_incident_spheroidal,
    rigid_spheroid_surface_pressure,
)
from .swf import SwfContext, SwfTable, angular_S, angular_S_all, build_context, build_table, radial_R
from .transcode import i_factor, transcode

__version__ = "0.1.0"

__all__ = [
    "ArrayGeometry",
    "ConvergenceError",
    "DomainError",
    "PlaneWave",
    "ProlateParams",
    "QuadratureRule",
    "RigidSphere",
    "SphericalCoeffs",
    "SpheroidalCoeffs",
    "SwfContext",
    "SwfTable",
    "angular_S",
    "angular_S_all",
    "assoc_legendre",
    "build_context",
    "build_sphere_array",
    "build_spheroid_array",
    "build_table",
    "cartesian_from_prolate",
    "encode_spherical",
    "encode_spheroidal",
    "gauss_legendre",
    "i_factor",
    "legendre_p",
    "plane_wave_coeffs",
    "plane_wave_coeffs_spheroidal",
    "prolate_from_cartesian",
    "radial_R",
    "reconstruct_field",
    "reconstruct_incident_spheroidal",
    "rigid_sphere_surface_pressure",
    "rigid_spheroid_surface_pressure",
    "rls_solve",
    "rls_solve_info",
    "rotate_coeffs",
    "sph_bessel",
    "sph_bessel_deriv",
    "sph_harmonic",
    "spheroid_from_radii",
    "transcode",
    "tridiag_sym_eig",
]

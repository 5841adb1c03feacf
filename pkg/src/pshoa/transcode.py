"""Analytic conversion of spheroidal ambisonic coefficients to spherical ones.

The expansion coefficients d_r^mn(c) connect the two bases directly, giving
for each target (n', m')

    A_(n')^(m') = I(m') sqrt(pi (n'+|m'|)! / ((2n'+1)(n'-|m'|)!))
                  * sum_n (-1)^((n'-n)/2) d_(n'-|m'|)^(|m'| n)(c)
                          (A_(|m'| n) - i sgn(m') B_(|m'| n)),

the sum running over n >= |m'| with n - n' even, truncated at a
configurable cap. With the conventions used throughout this package
(Condon-Shortley associated Legendre functions inside both the spheroidal
angular functions and the spherical harmonics, Flammer normalization with
N_mn the squared-norm integral) the formula is exact as written; the
plane-wave regression test pins this down.
"""
from __future__ import annotations

from math import lgamma

import numpy as np

from .errors import DomainError
from .spherical import SphericalCoeffs
from .spheroidal import SpheroidalCoeffs
from .swf import SwfContext


def i_factor(m_prime: int) -> complex:
    """Combination weight: (-1)^m' below zero, 2 at zero, 1 above."""
    if m_prime < 0:
        return complex((-1) ** m_prime)
    return complex(2.0 if m_prime == 0 else 1.0)


def transcode(sph: SpheroidalCoeffs, ctx: SwfContext, order_out: int | None = None,
              n_sum: int | None = None) -> SphericalCoeffs:
    """Spherical ambisonic coefficients from spheroidal ones (local frame).

    Parameters
    ----------
    sph : SpheroidalCoeffs
    ctx : SwfContext
        Must cover degrees up to n_sum.
    order_out : int, optional
        Spherical truncation order; defaults to the input order.
    n_sum : int, optional
        Cap of the internal degree sum; defaults to the input order. Larger
        values tighten the conversion at the expense of more tables.
    """
    if order_out is None:
        order_out = sph.order
    if n_sum is None:
        n_sum = sph.order
    if n_sum > sph.order:
        n_sum = sph.order
    if n_sum > ctx.n_internal:
        raise DomainError(
            f"transcoding sum needs tables up to degree {n_sum}, context has {ctx.n_internal}"
        )
    if abs(ctx.c - sph.c) > 1e-9 * max(1.0, abs(sph.c)):
        raise DomainError(f"context c={ctx.c} does not match coefficients c={sph.c}")
    values = np.zeros((order_out + 1) ** 2, dtype=complex)
    for n_p in range(order_out + 1):
        for m_p in range(-n_p, n_p + 1):
            ma = abs(m_p)
            r = n_p - ma
            acc = 0.0 + 0.0j
            n_start = ma if (ma - n_p) % 2 == 0 else ma + 1
            for n in range(n_start, n_sum + 1, 2):
                d_r = ctx.table(ma, n).d_at(r)
                if d_r == 0.0:
                    continue
                amn = sph.at_a(ma, n)
                bmn = sph.at_b(ma, n) if ma >= 1 else 0.0
                sign = -1.0 if ((n_p - n) // 2) % 2 else 1.0
                acc += sign * d_r * (amn - 1j * np.sign(m_p) * bmn)
            pref = i_factor(m_p) * np.sqrt(
                np.pi * np.exp(lgamma(n_p + ma + 1) - lgamma(n_p - ma + 1)) / (2 * n_p + 1)
            )
            values[SphericalCoeffs.index(n_p, m_p)] = pref * acc
    return SphericalCoeffs(order=order_out, k=sph.k, values=values, frame=sph.frame)

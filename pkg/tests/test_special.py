from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pshoa.errors import DomainError
from pshoa.special import (
    assoc_legendre,
    assoc_legendre_ladder,
    gauss_legendre,
    legendre_p,
    sph_bessel,
    sph_bessel_deriv,
    sph_harm_matrix,
    sph_harmonic,
)

from _oracles import sph_bessel_j_mp


class TestLegendreP:
    def test_degree_zero(self):
        assert legendre_p(0, 0.3) == 1.0

    def test_degree_one(self):
        assert legendre_p(1, 0.3) == pytest.approx(0.3, abs=1e-15)

    def test_degree_two(self):
        assert legendre_p(2, 0.5) == pytest.approx(-0.125, abs=1e-15)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            legendre_p(2, 1.5)
        with pytest.raises(DomainError):
            legendre_p(-1, 0.5)

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(min_value=1, max_value=29),
           x=st.floats(min_value=-1.0, max_value=1.0))
    def test_three_term_recurrence(self, n, x):
        # (2n+1) x P_n = (n+1) P_(n+1) + n P_(n-1)
        lhs = (2 * n + 1) * x * legendre_p(n, x)
        rhs = (n + 1) * legendre_p(n + 1, x) + n * legendre_p(n - 1, x)
        assert lhs == pytest.approx(rhs, abs=1e-12)


class TestAssocLegendre:
    def test_p11_at_zero(self):
        assert assoc_legendre(1, 1, 0.0) == pytest.approx(-1.0, abs=1e-15)

    def test_reduces_to_legendre(self):
        assert assoc_legendre(2, 0, 0.5) == pytest.approx(-0.125, abs=1e-15)

    def test_against_symbolic_differentiation(self):
        # oracle: (-1)^m (1-x^2)^(m/2) d^m/dx^m P_n(x) via sympy at x = 0.4
        # P_3^2(0.4) = 126/25
        assert assoc_legendre(3, 2, 0.4) == pytest.approx(5.04, rel=1e-13)

    def test_negative_order_identity(self):
        n, m, x = 5, 3, 0.37
        expected = (-1) ** m * factorial(n - m) / factorial(n + m) \
            * assoc_legendre(n, m, x)
        assert assoc_legendre(n, -m, x) == pytest.approx(expected, rel=1e-13)

    def test_order_exceeds_degree(self):
        with pytest.raises(DomainError):
            assoc_legendre(2, 3, 0.1)

    def test_ladder_matches_scipy(self):
        from scipy.special import lpmv

        x = np.linspace(-0.95, 0.95, 7)
        for m in (0, 1, 4):
            ladder = assoc_legendre_ladder(m, m + 10, x)
            for n in range(m, m + 11):
                assert np.allclose(ladder[n - m], lpmv(m, n, x), rtol=1e-10, atol=1e-10)


class TestSphBessel:
    def test_j0_at_pi(self):
        assert abs(sph_bessel("j", 0, np.pi)) < 1e-14

    def test_h0_closed_form(self):
        # h_0(x) = -i exp(ix) / x
        got = sph_bessel("h1", 0, 1.0)
        assert got == pytest.approx(-1j * np.exp(1j), abs=1e-15)

    def test_high_degree_small_argument(self):
        # value in the kR regime of the reference sphere, vs mpmath series
        want = sph_bessel_j_mp(12, 1.9649)
        assert want == pytest.approx(3.8995000760796437e-10, rel=1e-12)  # frozen oracle value
        assert sph_bessel("j", 12, 1.9649) == pytest.approx(want, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            sph_bessel("j", 0, 0.0)
        with pytest.raises(DomainError):
            sph_bessel("q", 0, 1.0)
        with pytest.raises(DomainError):
            sph_bessel("j", -1, 1.0)

    def test_wronskian(self):
        # j_n y_n' - j_n' y_n = 1 / x^2
        for n in range(21):
            for x in (0.1, 0.7, 3.0, 12.5, 50.0):
                w = sph_bessel("j", n, x) * sph_bessel_deriv("y", n, x) \
                    - sph_bessel_deriv("j", n, x) * sph_bessel("y", n, x)
                assert w == pytest.approx(1.0 / x**2, rel=1e-10)


class TestSphHarmonic:
    def test_monopole(self):
        assert sph_harmonic(0, 0, 0.77, 1.3) == pytest.approx(0.2820947917738781, abs=1e-12)

    def test_dipole_on_axis(self):
        assert sph_harmonic(1, 0, 0.0, 0.0) == pytest.approx(0.4886025119029199, abs=1e-12)

    def test_conjugation(self):
        for n, m in [(3, 2), (5, 1), (7, 7)]:
            a = sph_harmonic(n, -m, 1.1, 0.6)
            b = (-1) ** m * np.conj(sph_harmonic(n, m, 1.1, 0.6))
            assert a == pytest.approx(b, rel=1e-12)

    def test_orthonormality_by_quadrature(self):
        order = 6
        rule = gauss_legendre(24)
        kphi = 32
        thetas = np.arccos(rule.nodes)
        phis = 2 * np.pi * np.arange(kphi) / kphi
        tg, pg = np.meshgrid(thetas, phis, indexing="ij")
        weights = np.repeat(rule.weights, kphi) * (2 * np.pi / kphi)
        y = sph_harm_matrix(order, tg.ravel(), pg.ravel())
        gram = (np.conj(y) * weights[:, None]).T @ y
        assert np.max(np.abs(gram - np.eye((order + 1) ** 2))) < 1e-10

    def test_matrix_matches_scalar(self):
        theta, phi = 0.85, 2.4
        y = sph_harm_matrix(3, np.array([theta]), np.array([phi]))[0]
        for n in range(4):
            for m in range(-n, n + 1):
                assert y[n * n + n + m] == pytest.approx(sph_harmonic(n, m, theta, phi), rel=1e-13)


class TestGaussLegendre:
    def test_single_node(self):
        rule = gauss_legendre(1)
        assert rule.nodes[0] == pytest.approx(0.0, abs=1e-15)
        assert rule.weights[0] == pytest.approx(2.0, abs=1e-15)

    def test_two_nodes(self):
        rule = gauss_legendre(2)
        assert np.allclose(rule.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)], atol=1e-12)
        assert np.allclose(rule.weights, [1.0, 1.0], atol=1e-12)

    def test_polynomial_exactness(self):
        rule = gauss_legendre(16)
        # degree 30 monomial integrates exactly (2K-1 = 31)
        assert np.dot(rule.weights, rule.nodes ** 30) == pytest.approx(2.0 / 31.0, abs=1e-12)

    def test_weights_and_ordering(self):
        for count in (3, 16, 64):
            rule = gauss_legendre(count)
            assert len(rule) == count
            assert np.sum(rule.weights) == pytest.approx(2.0, abs=1e-12)
            assert np.all(np.diff(rule.nodes) > 0)
            assert np.all(rule.weights > 0)

    def test_zero_count(self):
        with pytest.raises(DomainError):
            gauss_legendre(0)

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gauss_legendre_disk
from schwarzmult.bergman import (
    QuadratureGrid,
    basis_coefficient,
    basis_fn,
    bergman_norm,
    binomial_partial_sum,
    derivative_ratio,
    derivative_ratio_exact,
    disk_integral,
    gram_matrix,
    kernel_probe,
    monomial_norm_sq,
    weighted_norm_sq,
)
from schwarzmult.errors import DomainError, NormInfinite
from schwarzmult.series import TaylorSeries, build_from_spec


@pytest.mark.parametrize("beta", [0.0, 0.5, 1.0, 2.5])
def test_grid_integrates_polynomial_radial_moments(beta):
    # \iint |z|^(2n) (1-|z|^2)^beta = pi B(n+1, beta+1)
    from scipy.special import beta as B

    for n in (0, 3, 10):
        res = disk_integral(lambda z: np.abs(z) ** (2 * n), 1e-12, beta)
        assert res.value == pytest.approx(np.pi * B(n + 1, beta + 1), rel=1e-11)
        assert not res.diverged


def test_grid_matches_plain_gauss_legendre_on_smooth_integrand():
    g = lambda z: np.abs(np.exp(z) + z**3) ** 2  # noqa: E731
    ref = gauss_legendre_disk(g, 2.0)
    assert disk_integral(g, 1e-12, 2.0).value == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("alpha", [2.0, 2.5, 3.0, 5.0])
def test_monomial_norms_closed_form(alpha):
    for n in range(17):
        got = bergman_norm(TaylorSeries.monomial(n), alpha, tol=1e-12) ** 2
        assert got == pytest.approx(monomial_norm_sq(n, alpha), rel=1e-8)


def test_monomial_closed_form_values():
    # alpha = 2: pi / (n + 1)
    assert monomial_norm_sq(4, 2.0) == pytest.approx(np.pi / 5)
    assert monomial_norm_sq(0, 3.7) == pytest.approx(np.pi)


@pytest.mark.parametrize("alpha", [2.0, 3.0, 5.0])
def test_basis_has_paper_literal_norm(alpha):
    for n in (0, 1, 7, 20):
        assert bergman_norm(basis_fn(n, alpha), alpha, 1e-12) == pytest.approx(np.sqrt(np.pi), rel=1e-9)
        assert bergman_norm(basis_fn(n, alpha), alpha, 1e-12, unit_mass=True) == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("alpha", [2.5, 3.0])
@pytest.mark.parametrize("a", [0.0, 0.5, 0.9j, -0.99, 0.999])
def test_kernel_probe_norm_is_sqrt_pi(alpha, a):
    # reproducing-kernel identity: ||psi_a||^2 = pi for every a
    res = weighted_norm_sq(kernel_probe(a, alpha), alpha, 1e-11)
    assert res.value == pytest.approx(np.pi, rel=1e-9)


def test_kernel_probe_rejects_boundary():
    with pytest.raises(DomainError):
        kernel_probe(1.0, 3.0)


def test_alpha_precondition():
    with pytest.raises(DomainError):
        bergman_norm(TaylorSeries([1.0]), 1.0)


def test_divergent_norm_is_flagged():
    koebe = build_from_spec("koebe", with_dilatation=False)
    with pytest.raises(NormInfinite, match="norm infinite"):
        bergman_norm(koebe, 2.0, tol=1e-8)


def test_boundary_singular_but_integrable():
    # \iint (1-|z|^2)^3 / |1-z|^4 is finite; its integrand peaks at z = 1
    res = disk_integral(lambda z: 1 / np.abs(1 - z) ** 4, 1e-8, 3.0)
    assert not res.diverged
    # closed form: sum_n (n+1)^2 pi B(n+1, 4) = pi sum 6 (n+1) / ((n+2)(n+3)(n+4))
    n = np.arange(200000)
    ref = np.pi * np.sum(6 * (n + 1) / ((n + 2) * (n + 3) * (n + 4)))
    assert res.value == pytest.approx(ref, rel=1e-4)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 40), st.fractions(Fraction(1), Fraction(50), max_denominator=20))
def test_derivative_ratio_exact_is_rational(n, alpha):
    r = derivative_ratio_exact(n, alpha)
    assert isinstance(r, Fraction)
    # ratio of closed-form norms of n z^(n-1) in H_{alpha+2} and z^n in H_alpha
    a = float(alpha)
    if a > 1:
        closed = n**2 * monomial_norm_sq(n - 1, a + 2) / monomial_norm_sq(n, a)
        assert float(r) == pytest.approx(closed, rel=1e-10)


@pytest.mark.parametrize("n,alpha", [(1, 2.0), (5, 3.0), (12, 2.5)])
def test_derivative_ratio_quadrature(n, alpha):
    assert derivative_ratio(n, alpha) == pytest.approx(n * alpha * (alpha + 1) / (n + alpha))


def test_binomial_partial_sum_converges():
    x = np.array([0.1, 0.5, 0.8])
    assert np.allclose(binomial_partial_sum(3.0, x, 400), (1 - x) ** -3.0)
    c = [basis_coefficient(n, 3.0) ** 2 for n in range(5)]
    assert np.allclose(binomial_partial_sum(3.0, 1.0, 4), np.sum(c))


def test_gram_matrix_is_diagonal_for_radial_weight():
    alpha = 3.0
    G = gram_matrix(lambda z: np.ones(z.shape), alpha - 2, 12, 1e-12)
    diag = np.array([monomial_norm_sq(n, alpha) / (alpha - 1) for n in range(13)])
    assert np.allclose(np.diag(G).real, diag, rtol=1e-10)
    assert np.max(np.abs(G - np.diag(np.diag(G)))) < 1e-12


def test_gram_matrix_matches_pairwise_integrals():
    w = lambda z: np.abs(1 + 0.4 * z) ** -2  # noqa: E731
    G = gram_matrix(w, 1.0, 6, 1e-12)
    for m, n in [(0, 0), (1, 0), (2, 5), (6, 3)]:
        ref_im = gauss_legendre_disk(lambda z: np.imag(w(z) * np.conj(z**m) * z**n), 1.0, 120, 256)
        ref_re = gauss_legendre_disk(lambda z: np.real(w(z) * np.conj(z**m) * z**n), 1.0, 120, 256)
        assert G[m, n] == pytest.approx(ref_re + 1j * ref_im, abs=1e-11)
    assert np.allclose(G, G.conj().T)


def test_quadrature_levels_grow():
    a, b = QuadratureGrid.at_level(0), QuadratureGrid.at_level(2)
    assert len(b.panels) > len(a.panels)
    assert sum(p.w.sum() for p in a.panels) == pytest.approx(0.5)  # \int_0^1 ds / 2

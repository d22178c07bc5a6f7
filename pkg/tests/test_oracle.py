import math

import numpy as np
import pytest

from ptairy.errors import DomainError, UnmatchedEigenvalue
from ptairy.oracle import (
    DiscretizationConfig,
    Scheme,
    cheb,
    cross_check,
    discretize,
    grid,
    oracle_spectrum,
)

CHEB64 = DiscretizationConfig(64)


def test_cheb_matrix_differentiates_polynomials():
    x, D = cheb(12)
    assert np.allclose(D @ x**3, 3 * x**2, atol=1e-12)


def test_grid_increasing_and_interior():
    for scheme in Scheme:
        g = grid(DiscretizationConfig(32, scheme))
        assert np.all(np.diff(g) > 0)
        assert -1 < g[0] and g[-1] < 1


def test_dirichlet_laplacian_hook():
    # with a zero potential the eigenvalues are (pi k / 2)^2 / eps exactly
    M = discretize(2.0, CHEB64, potential=lambda x: np.zeros_like(x))
    ev = np.sort(np.linalg.eigvals(M).real)[:6]
    ref = [(math.pi * k / 2) ** 2 / 2.0 for k in range(1, 7)]
    assert np.allclose(ev, ref, rtol=1e-12)


@pytest.mark.parametrize("eps", [1.0, 5.0, 12.0])
def test_resolution_convergence(eps):
    spec = oracle_spectrum(eps, CHEB64)
    fine = oracle_spectrum(eps, DiscretizationConfig(128), spec.trust_count if spec.trust_count <= 32 else 32)
    assert spec.trust_count >= 5
    n = min(spec.trust_count, len(spec.eigenvalues))
    for lam in spec.eigenvalues[:n]:
        assert np.min(np.abs(fine.eigenvalues - lam)) <= 1e-8 * max(1, abs(lam))


def test_fd_second_order():
    eps = 5.0
    ref = oracle_spectrum(eps, CHEB64, 3).eigenvalues
    ns = [64, 128, 256]
    errs = []
    for n in ns:
        fd = oracle_spectrum(eps, DiscretizationConfig(n, Scheme.FINITE_DIFFERENCE_2ND_ORDER), 3).eigenvalues
        errs.append(np.max(np.abs(fd - ref)))
    slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert slope == pytest.approx(-2.0, abs=0.15)


@pytest.mark.parametrize("eps", [1.0, 2.0, 3.0, 3.5])
def test_real_and_simple_below_threshold(eps):
    ev = oracle_spectrum(eps, CHEB64).eigenvalues
    assert np.all(np.abs(ev.imag) <= 1e-8)
    assert np.min(np.diff(np.sort(ev.real))) > 1e-6


def test_complex_pair_above_first_collision():
    ev = oracle_spectrum(13.0, CHEB64, 2).eigenvalues
    assert ev[0] == pytest.approx(ev[1].conjugate(), abs=1e-10)
    assert abs(ev[0].imag) > 0.05


@pytest.mark.parametrize("eps", [1.0, 5.0, 12.0])
def test_cross_check(eps):
    rep = cross_check(eps, 5)
    assert rep.max_delta <= 1e-6
    assert np.all(rep.residuals <= 1e-10)


def test_cross_check_detects_mismatch():
    with pytest.raises(UnmatchedEigenvalue):
        cross_check(5.0, 3, DiscretizationConfig(16), match_tol=1e-14)


def test_abs_ordering():
    ev = oracle_spectrum(20.0, CHEB64, 6, order="abs").eigenvalues
    assert np.all(np.diff(np.abs(ev)) >= -1e-12)


def test_config_validation():
    with pytest.raises(DomainError):
        DiscretizationConfig(4)
    with pytest.raises(DomainError):
        DiscretizationConfig(1024)
    with pytest.raises(ValueError):
        DiscretizationConfig(64, "spline")
    with pytest.raises(DomainError):
        oracle_spectrum(1.0, CHEB64, 17)
    with pytest.raises(DomainError):
        discretize(-1.0, CHEB64)


def test_first_eigenvalue_small_eps():
    lam = oracle_spectrum(0.1, CHEB64, 1).eigenvalues[0]
    assert lam.real == pytest.approx((math.pi / 2) ** 2 / 0.1, rel=5e-3)


def test_first_eigenvalue_at_unit_eps():
    # reference computed by the determinant and by collocation at n = 128
    lam = oracle_spectrum(1.0, CHEB64, 1).eigenvalues[0]
    assert lam.real == pytest.approx(2.48498009868836, abs=1e-10)

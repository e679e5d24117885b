"""Spectra of unitary truncations: exact cases, refinement, invariances."""

import cmath
import math

import numpy as np
import pytest

from cmvkit.cmv import build_cmv, build_truncation
from cmvkit.eig import eigen_unitary, newton_refine, sigma_n
from cmvkit.errors import DomainError, ValidationError
from cmvkit.opuc import WRecurrence
from cmvkit.schur import Constant, Explicit, expand, rotate


def _random_prefix(rng, n, radius=0.7):
    vals = rng.uniform(-radius, radius, n) + 1j * rng.uniform(-radius, radius, n)
    return expand(Explicit(tuple(vals)), n)


def test_coefficient_free_spectrum_is_roots_of_minus_u():
    # a_k = 0 makes the order-n combination z^n + u, so the spectrum consists
    # of the n-th roots of -u
    res = sigma_n(Constant(0.0), 1.0 + 0.0j, 4)
    expected = sorted((2 * k + 1) * math.pi / 4.0 for k in range(4))
    assert np.allclose(res.angles, expected, atol=1e-12)

    u = cmath.exp(0.62j)
    res = sigma_n(Constant(0.0), u, 7)
    vals = np.sort(np.angle(res.points ** 7 / (-u)))
    assert np.allclose(vals, 0.0, atol=1e-10)


def test_order_one_spectrum():
    res = sigma_n(Constant(0.5), -1.0 + 0.0j, 1)
    assert res.points[0] == pytest.approx(1.0)


def test_spectrum_on_circle_and_simple():
    rng = np.random.default_rng(21)
    for n in (5, 17, 50):
        prefix = _random_prefix(rng, n, radius=0.45)
        res = sigma_n(prefix, 1j, n)
        assert np.allclose(np.abs(res.points), 1.0, atol=1e-12)
        gaps = np.diff(np.concatenate((res.angles, [res.angles[0] + 2.0 * math.pi])))
        assert np.min(gaps) > 1e-8
        assert res.max_residual <= 1e-9


def test_residuals_tight_for_slowly_varying_family():
    res = sigma_n(Constant(0.5), 1.0 + 0.0j, 200)
    assert res.converged
    assert res.max_residual <= 1e-12


def test_refinement_tightens_residuals():
    rng = np.random.default_rng(22)
    prefix = _random_prefix(rng, 80, radius=0.45)
    raw = sigma_n(prefix, 1.0 + 0.0j, 80, refine=False)
    polished = sigma_n(prefix, 1.0 + 0.0j, 80, refine=True)
    assert raw.residuals is None
    assert polished.max_residual <= 1e-9
    # same point set up to the polish
    d = np.abs(np.sort(raw.angles) - np.sort(polished.angles))
    assert np.max(np.minimum(d, 2.0 * math.pi - d)) <= 1e-6


def test_newton_refine_recovers_perturbed_angles():
    prefix = expand(Constant(0.0), 8)
    exact = np.sort([(2 * k + 1) * math.pi / 8.0 for k in range(8)])
    rng = np.random.default_rng(23)
    noisy = exact + rng.uniform(-0.02, 0.02, 8)
    angles, residuals, iterations, converged = newton_refine(prefix, 8, 1.0 + 0.0j, noisy)
    assert converged
    assert np.allclose(np.sort(angles), exact, atol=1e-12)
    assert np.max(residuals) <= 1e-12


def test_eigen_unitary_rejects_nonunitary_input():
    # interior coefficient of modulus < 1 in the last slot leaves the matrix
    # strictly contractive, which the spectrum path must refuse
    C = build_cmv(np.array([0.3, 0.4], dtype=np.complex128))
    with pytest.raises(ValidationError):
        eigen_unitary(C)


def test_sigma_n_accepts_prefix_and_family():
    prefix = expand(Constant(0.5), 10)
    a = sigma_n(prefix, 1.0 + 0.0j, 10)
    b = sigma_n(Constant(0.5), 1.0 + 0.0j, 10)
    assert np.allclose(a.points, b.points, atol=1e-13)
    with pytest.raises(DomainError):
        sigma_n("constant:0.5", 1.0, 4)
    with pytest.raises(DomainError):
        sigma_n(Constant(0.5), 1.0, 0)


def test_sigma_n_with_boundary_rule():
    # rule-driven boundary parameter: the pinned point stays in every order
    w = cmath.exp(0.25j)
    res = sigma_n(Constant(0.5), WRecurrence(w=w), 12)
    assert np.min(np.abs(res.points - w)) <= 1e-9


def test_rotation_equivariance():
    # scaling a_k by lam^-k and u by lam^-n rotates the spectrum by 1/lam
    rng = np.random.default_rng(24)
    prefix = _random_prefix(rng, 9)
    lam = cmath.exp(0.8j)
    u = cmath.exp(0.3j)
    base = sigma_n(prefix, u, 9)
    rotated = sigma_n(rotate(prefix, lam), u * lam ** (-9), 9)
    d1 = np.sort_complex(base.points / lam)
    d2 = np.sort_complex(rotated.points)
    assert np.allclose(d1, d2, atol=1e-10)


def test_spectrum_result_metadata():
    res = sigma_n(Constant(0.25), 1.0 + 0.0j, 6)
    assert res.order == 6
    assert res.unitarity <= 1e-13
    assert len(res.spectrum) == 6
    assert res.raw.shape == (6,)

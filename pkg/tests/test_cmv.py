"""Five-diagonal unitary truncations and shifted solves."""

import cmath
import io
import math

import numpy as np
import pytest

from cmvkit.cmv import (
    BandedUnitary,
    build_cmv,
    build_jacobi,
    build_truncation,
    cofinite_params,
    solve_shifted,
    theta_block,
)
from cmvkit.errors import DomainError, SingularShiftError, ValidationError
from cmvkit.opuc import para_coefficients
from cmvkit.schur import Constant, Explicit, TwoPeriodic, expand


def _random_prefix(rng, n, radius=0.7):
    vals = rng.uniform(-radius, radius, n) + 1j * rng.uniform(-radius, radius, n)
    return expand(Explicit(tuple(vals)), n)


def test_theta_block_is_unitary():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = complex(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))
        t = theta_block(a)
        assert np.allclose(t @ t.conj().T, np.eye(2), atol=1e-15)
        assert t[0, 0] == -a
        assert t[1, 1] == np.conj(a)
    with pytest.raises(DomainError):
        theta_block(1.0 + 1.0j)


def test_order_one_truncation():
    prefix = expand(Constant(0.5), 1)
    u = cmath.exp(0.3j)
    C = build_truncation(prefix, u, 1)
    assert C.order == 1
    assert C.dense()[0, 0] == pytest.approx(-u)


def test_truncation_is_unitary_and_pentadiagonal():
    rng = np.random.default_rng(2)
    for n in (2, 3, 8, 33):
        prefix = _random_prefix(rng, n - 1)
        u = cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        C = build_truncation(prefix, u, n)
        dense = C.dense()
        assert np.allclose(dense @ dense.conj().T, np.eye(n), atol=1e-13)
        for i in range(n):
            for j in range(n):
                if abs(i - j) > 2:
                    assert dense[i, j] == 0.0


def test_matvec_agrees_with_dense():
    rng = np.random.default_rng(3)
    prefix = _random_prefix(rng, 15)
    C = build_truncation(prefix, 1.0 + 0.0j, 16)
    dense = C.dense()
    for _ in range(5):
        x = rng.normal(size=16) + 1j * rng.normal(size=16)
        assert np.allclose(C.matvec(x), dense @ x, atol=1e-13)


def test_spectrum_equals_combination_zeros():
    # dual route: eigenvalues of the banded matrix vs roots of the
    # boundary-parameter combination's monomial coefficients
    rng = np.random.default_rng(4)
    for n in (2, 5, 10):
        prefix = _random_prefix(rng, n - 1)
        u = cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        C = build_truncation(prefix, u, n)
        eigs = np.sort_complex(np.linalg.eigvals(C.dense()))
        coeffs = para_coefficients(prefix, n, u)
        # normalize: combination = kappa * charpoly gives identical root sets
        roots = np.sort_complex(np.roots(coeffs[::-1]))
        assert np.allclose(eigs, roots, atol=1e-8)


def test_interior_unimodular_coefficient_decouples():
    # pushing an interior coefficient to the boundary splits the matrix
    vals = [0.3, 1.0, 0.4, cmath.exp(0.2j)]
    C = build_cmv(np.array(vals, dtype=np.complex128))
    dense = C.dense()
    assert np.allclose(dense[:2, 2:], 0.0, atol=1e-15)
    assert np.allclose(dense[2:, :2], 0.0, atol=1e-15)


def test_build_cmv_validation():
    with pytest.raises(DomainError):
        build_cmv(np.array([], dtype=np.complex128))
    with pytest.raises(ValidationError):
        build_cmv(np.array([1.5 + 0.0j]))


def test_build_truncation_validation():
    prefix = expand(Constant(0.5), 3)
    with pytest.raises(DomainError):
        build_truncation(prefix, 1.0, 0)
    with pytest.raises(DomainError):
        build_truncation(prefix, 1.0, 5)
    with pytest.raises(DomainError):
        build_truncation(prefix, 0.5, 2)


def test_unitarity_defect_scales():
    rng = np.random.default_rng(5)
    prefix = _random_prefix(rng, 63)
    C = build_truncation(prefix, -1.0 + 0.0j, 64)
    assert C.unitarity_defect() <= 1e-13


def test_dump_csv_round_trips_entries():
    prefix = expand(Constant(0.5), 3)
    C = build_truncation(prefix, 1.0 + 0.0j, 4)
    buf = io.StringIO()
    C.dump_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "i,j,re,im"
    dense = C.dense()
    seen = np.zeros_like(dense)
    for line in lines[1:]:
        i, j, re, im = line.split(",")
        seen[int(i), int(j)] = complex(float(re), float(im))
    assert np.allclose(seen, dense, atol=1e-16)


def test_cofinite_params_constant_and_two_periodic():
    u = cmath.exp(0.4j)
    spec = cofinite_params(Constant(0.5), 3, u)
    assert isinstance(spec, Constant)
    assert spec.a == pytest.approx(0.5 * u.conjugate())

    tp = cofinite_params(TwoPeriodic(0.25, 0.75), 1, 1.0 + 0.0j)
    assert isinstance(tp, TwoPeriodic)
    assert (tp.a_odd, tp.a_even) == (0.75, 0.25)


def test_cofinite_params_generic_shift():
    base = Explicit((0.1, 0.2, 0.3, 0.4, 0.5))
    u = -1.0 + 0.0j
    spec = cofinite_params(base, 2, u)
    vals = spec.generate(3)
    assert np.allclose(vals, np.conj(u) * np.array([0.3, 0.4, 0.5]))


def test_jacobi_comparison_matrix():
    prefix = expand(TwoPeriodic(0.25, 0.75), 4)
    J = build_jacobi(prefix, 4)
    assert np.allclose(J.diagonal, [0.75, -0.5, 0.5, -0.5])
    assert np.allclose(J.offdiagonal, prefix.rhos[:3])
    dense = J.dense()
    assert np.allclose(dense, dense.T)


def test_solve_shifted_accuracy():
    rng = np.random.default_rng(6)
    prefix = _random_prefix(rng, 40)
    C = build_truncation(prefix, 1j, 41)
    dense = C.dense()
    for z in (0.5 + 0.1j, 2.0 - 0.3j, 1.02 + 0.0j):
        b = rng.normal(size=41) + 1j * rng.normal(size=41)
        x = solve_shifted(C, z, b)
        res = np.linalg.norm((z * np.eye(41) - dense) @ x - b)
        assert res <= 1e-10 * np.linalg.norm(b)


def test_solve_shifted_reports_singular_shift():
    prefix = expand(Constant(0.0), 3)
    C = build_truncation(prefix, 1.0 + 0.0j, 4)
    # eigenvalue of the coefficient-free order-4 truncation
    lam = cmath.exp(1j * math.pi / 4.0)
    b = np.ones(4, dtype=np.complex128)
    with pytest.raises(SingularShiftError):
        solve_shifted(C, lam, b)


def test_solve_shifted_caches_factorization():
    prefix = expand(Constant(0.5), 20)
    C = build_truncation(prefix, 1.0 + 0.0j, 21)
    b = np.ones(21, dtype=np.complex128)
    x1 = solve_shifted(C, 0.5, b)
    assert 0.5 in C._lu_cache or any(abs(k - 0.5) < 1e-18 for k in C._lu_cache)
    x2 = solve_shifted(C, 0.5, b)
    assert np.array_equal(x1, x2)

import math

import numpy as np
import pytest

from squeezebath import fock
from squeezebath.gaussian import (
    apply,
    beam_splitter_op,
    make_thermal,
    partial_trace,
    squeeze_op,
    tensor,
)


def test_ladder_operators():
    d = 20
    a = fock.annihilation(d)
    comm = a @ a.T - a.T @ a
    assert np.allclose(comm[:-1, :-1], np.eye(d - 1))
    assert np.allclose(np.diag(fock.number(d)), np.arange(d))
    x, p = fock.quadratures(d)
    h = fock.hamiltonian(2.0, d)
    # omega (x^2 + p^2 - 1)/2 away from the cutoff
    assert np.allclose((h - (x @ x + p @ p - np.eye(d)))[:-2, :-2], 0.0)


def test_thermal_density():
    rho = fock.thermal_density(1.0, 1.0)
    n = fock.expectation(rho, fock.number(rho.dim))
    assert n == pytest.approx(1.0 / math.expm1(1.0), abs=1e-10)
    assert rho.trace() == pytest.approx(1.0)


def test_squeeze_unitary_is_orthogonal():
    u = fock.squeeze_unitary(0.7, 80).matrix
    assert np.allclose(u @ u.T, np.eye(80), atol=1e-12)


def test_squeezed_moments_match_gaussian():
    n, xi = 0.7, 0.8
    beta0 = math.log1p(1.0 / n)
    rho = fock.squeezed_thermal_density(beta0, xi, 1.0)
    _, cov = fock.moments(rho)
    assert np.allclose(cov, apply(squeeze_op(xi), make_thermal(n, 1.0)).cov, atol=1e-8)


def test_padding_grows_dimension():
    rho = fock.squeezed_thermal_density(0.5, 1.0, 1.0)
    assert rho.dim > fock.DEFAULT_DIM
    assert rho.tail_mass() < 1e-12


def test_truncation_error_without_padding():
    with pytest.raises(fock.TruncationError):
        fock.squeezed_thermal_density(0.5, 1.0, 1.0, 60, pad=False)


def test_gge_equivalence_single_point():
    a = fock.squeezed_thermal_density(1.0, 0.5, 1.0)
    b = fock.gge_density(1.0, 0.5, 1.0, a.dim, pad=False)
    assert fock.trace_norm(a.truncate(60), b.truncate(60)) < 1e-10


def test_negative_and_non_hermitian_inputs():
    bad = np.diag([1.1, -0.1])
    with pytest.raises(fock.NegativeStateError):
        fock.entropy_exact(bad)
    with pytest.raises(fock.NotHermitianError):
        fock.entropy_exact(np.array([[0.5, 0.1], [0.0, 0.5]]))
    # tiny negativity is clipped
    assert fock.entropy_exact(np.diag([1.0 + 1e-14, -1e-14])) == pytest.approx(0.0, abs=1e-12)


def test_beam_splitter_unitary_matches_phase_space():
    d = 30
    theta = 0.4
    u = fock.beam_splitter_unitary(theta, d)
    assert np.allclose(u.matrix @ u.matrix.T, np.eye(d * d), atol=1e-12)
    ra = fock.thermal_density(2.0, 1.0, d, pad=False, tail_tol=1e-9)
    rb = fock.squeezed_thermal_density(2.5, 0.3, 1.0, d, pad=False, tail_tol=1e-9)
    out = fock.evolve(u, fock.kron(ra, rb))
    ga = make_thermal(1.0 / math.expm1(2.0), 1.0)
    gb = apply(squeeze_op(0.3), make_thermal(1.0 / math.expm1(2.5), 1.0))
    gout = apply(beam_splitter_op(theta), tensor(ga, gb))
    for keep in (0, 1):
        _, cov = fock.moments(fock.reduce(out, keep))
        assert np.allclose(cov, partial_trace(gout, [keep]).cov, atol=1e-7)


def test_relative_entropy_support_check():
    rho = np.diag([0.5, 0.5])
    sigma = np.diag([1.0, 0.0])
    with pytest.raises(ValueError):
        fock.relative_entropy_exact(rho, sigma)
    assert fock.relative_entropy_exact(sigma, sigma) == pytest.approx(0.0)


def test_first_order_entropy_scaling():
    # mixing a thermal state towards a squeezed one keeps rho + eps*drho positive
    d = 60
    rho = fock.thermal_density(1.0, 1.0, d, pad=False)
    other = fock.squeezed_thermal_density(1.5, 0.4, 1.0, d, pad=False, tail_tol=1e-9)
    drho = other.matrix - rho.matrix
    table = fock.verify_first_order_entropy(rho, drho, [1e-2, 5e-3, 2.5e-3, 1.25e-3])
    for (_, err1), (_, err2) in zip(table, table[1:]):
        assert err2 / err1 == pytest.approx(0.25, abs=0.05)


def test_first_order_entropy_rejects_trace():
    rho = fock.thermal_density(4.0, 1.0, 10, pad=False, tail_tol=1e-6)
    with pytest.raises(ValueError):
        fock.verify_first_order_entropy(rho, np.eye(10), [1e-3])

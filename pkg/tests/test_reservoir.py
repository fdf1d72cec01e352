import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from squeezebath import fock
from squeezebath.gaussian import (
    DomainError,
    ModeFrame,
    apply,
    asymmetry,
    energy,
    entropy,
    make_thermal,
    relative_entropy_to_gge,
    squeeze_op,
)
from squeezebath.reservoir import (
    ReservoirSpec,
    derive_potentials,
    entropy_flow,
    equilibrium_state,
    noneq_free_energy,
    omega_equilibrium,
    omega_potential,
    xi_star,
)


def test_potentials(r_std):
    assert r_std.mu == pytest.approx(0.761594, abs=1e-6)
    assert r_std.beta == pytest.approx(math.cosh(1.0))
    assert r_std.n_th() == pytest.approx(0.581977, abs=1e-6)
    beta, mu = derive_potentials(2.0, 0.0)
    assert beta == 2.0 and mu == 0.0


def test_thermal_reservoir_has_no_asymmetry():
    r = ReservoirSpec(1.0, 0.0)
    assert r.mu == 0.0
    assert asymmetry(equilibrium_state(r)) == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [dict(beta0=0.0, xi=0.1), dict(beta0=1.0, xi=-0.1), dict(beta0=1.0, xi=0.1, omega=0.0),
     dict(beta0=1.0, xi=0.1, theta=0.3), dict(beta0=math.nan, xi=0.1)],
)
def test_invalid_reservoir(kwargs):
    with pytest.raises(DomainError):
        ReservoirSpec(**kwargs)


def test_ln_z_matches_trace(r_std):
    # ln Tr exp(-beta (H - mu A)) by brute-force diagonalization in a large space
    d = 400
    gen = r_std.beta * (fock.hamiltonian(1.0, d) - r_std.mu * fock.asymmetry_operator(1.0, d))
    w = np.linalg.eigvalsh(gen)
    ln_z = -w.min() + math.log(np.sum(np.exp(-(w - w.min()))))
    assert r_std.ln_z() == pytest.approx(ln_z, abs=1e-9)


def test_equilibrium_state_matches_gge_oracle():
    for b0w, xi in [(0.5, 1.0), (1.0, 0.5), (2.0, 0.25), (1.0, 0.0)]:
        r = ReservoirSpec(b0w, xi)
        rho = fock.gge_density(b0w, xi, 1.0)
        means, cov = fock.moments(rho)
        assert np.max(np.abs(means)) < 1e-10
        assert np.allclose(cov, equilibrium_state(r).cov, atol=1e-7, rtol=0)


def test_oracle_equivalence_of_charges_and_entropy():
    for n, xi in [(0.2, 0.3), (1.5, 1.0), (0.8, -0.6)]:
        beta0 = math.log1p(1.0 / n)
        s = apply(squeeze_op(xi), make_thermal(n, 1.0))
        rho = fock.squeezed_thermal_density(beta0, xi, 1.0)
        d = rho.dim
        assert fock.expectation(rho, fock.hamiltonian(1.0, d)) == pytest.approx(energy(s), abs=1e-6)
        assert fock.expectation(rho, fock.asymmetry_operator(1.0, d)) == pytest.approx(asymmetry(s), abs=1e-6)
        assert fock.entropy_exact(rho) == pytest.approx(entropy(s), abs=1e-6)


def test_relative_entropy_against_oracle(r_std):
    s = make_thermal(r_std.n_th(), 1.0)
    g = relative_entropy_to_gge(s, r_std)
    # ln sigma = S ln(rho_th) S^dag; the truncated spectrum of sigma itself
    # cannot resolve its tail, where the thermal state still has weight
    d = 200
    rho = fock.thermal_density(1.0, 1.0, d, pad=False)
    u = fock.squeeze_unitary(0.5, d).matrix
    k = np.arange(d)
    ln_p = -k + math.log(-math.expm1(-1.0))
    ln_sigma = (u * ln_p) @ u.T
    oracle = -fock.entropy_exact(rho) - fock.expectation(rho, ln_sigma)
    assert oracle == pytest.approx(g, abs=1e-6)


def test_omega_potential_difference(r_std):
    s = make_thermal(r_std.n_th(), 1.0)
    diff = omega_potential(s, r_std) - omega_equilibrium(r_std)
    d = relative_entropy_to_gge(s, r_std)
    assert diff == pytest.approx(d / r_std.beta, abs=1e-12)
    # frozen: sinh^2(1/2)(2 n_th + 1)/cosh(1)
    assert diff == pytest.approx(0.38079708, abs=1e-8)


def test_free_energy_relation(r_std):
    s = make_thermal(0.2, 1.0)
    f = noneq_free_energy(s, r_std)
    assert f - r_std.mu * asymmetry(s) == pytest.approx(omega_potential(s, r_std))


def test_equilibrium_in_a_frame_has_zero_divergence(r_std):
    frame = ModeFrame(1.7, squeeze_op(0.3).mat)
    eq = equilibrium_state(r_std, frame)
    assert relative_entropy_to_gge(eq, r_std, frame=frame) == pytest.approx(0.0, abs=1e-12)
    assert relative_entropy_to_gge(equilibrium_state(r_std), r_std) == pytest.approx(0.0, abs=1e-12)


def test_entropy_flow_split(r_std):
    f = entropy_flow(r_std, 0.3, 0.1)
    assert f.W_R == pytest.approx(r_std.mu * 0.1)
    assert f.Q_R + f.W_R == pytest.approx(0.3)
    assert f.dS_R == pytest.approx(r_std.beta * f.Q_R)
    assert entropy_flow(ReservoirSpec(1.0, 0.0), 0.3, 0.1).W_R == 0.0
    with pytest.raises(DomainError):
        entropy_flow(r_std, math.inf, 0.0)


def test_xi_star_values():
    # quoted range of the shot-noise threshold
    assert xi_star(0.01) == pytest.approx(2.65, abs=0.01)
    assert xi_star(1.0) == pytest.approx(0.39, abs=0.01)
    assert xi_star(0.1) == pytest.approx(1.498283, abs=1e-6)
    with pytest.raises(DomainError):
        xi_star(0.0)


@given(st.floats(0.05, 5.0), st.floats(0.0, 1.5))
def test_xi_star_is_shot_noise_crossing(b0w, xi):
    s = equilibrium_state(ReservoirSpec(b0w, xi))
    below = s.cov[0, 0] < 0.5
    if abs(xi - xi_star(b0w)) > 1e-9:
        assert below == (xi > xi_star(b0w))


@given(st.floats(0.1, 5.0), st.floats(0.0, 1.5), st.floats(0.0, 3.0), st.floats(-1.0, 1.0))
def test_gibbs_variational_principle(b0w, xi, n, s_xi):
    r = ReservoirSpec(b0w, xi)
    s = apply(squeeze_op(s_xi), make_thermal(n, 1.0))
    assert omega_potential(s, r) >= omega_equilibrium(r) - 1e-10

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from squeezebath.gaussian import (
    DomainError,
    GaussianState,
    InvalidStateError,
    ModeFrame,
    SymplecticOp,
    apply,
    asymmetry,
    beam_splitter_op,
    energy,
    entropy,
    make_thermal,
    partial_trace,
    relative_entropy_to_gge,
    rotation_op,
    single_mode_williamson,
    squeeze_op,
    symplectic_eigenvalues,
    symplectic_form,
    tensor,
    vacuum,
)
from squeezebath.reservoir import ReservoirSpec

# n_th at beta0*omega = 1, i.e. 1/(e - 1)
N1 = 0.5819767068693265


def test_vacuum_is_pure():
    v = vacuum()
    assert np.allclose(v.cov, 0.5 * np.eye(2))
    assert entropy(v) == 0.0
    assert energy(v) == 0.0


def test_two_vacua_tensor():
    s = tensor(vacuum(), vacuum())
    assert s.cov.shape == (4, 4)
    assert np.allclose(s.cov, 0.5 * np.eye(4))


def test_thermal_entropy_closed_form():
    s = make_thermal(N1, 1.0)
    expected = (N1 + 1) * math.log(N1 + 1) - N1 * math.log(N1)
    assert entropy(s) == pytest.approx(expected, abs=1e-12)
    # frozen: (n+1)ln(n+1) - n ln n at n = 1/(e-1)
    assert entropy(s) == pytest.approx(1.0406518522564, abs=1e-10)


def test_squeezed_thermal_moments():
    s = apply(squeeze_op(0.5), make_thermal(N1, 1.0))
    # <H> = (n + 1/2) cosh(2 xi) - 1/2 and <A> = (n + 1/2) sinh(2 xi)
    assert energy(s) == pytest.approx((N1 + 0.5) * math.cosh(1.0) - 0.5, abs=1e-12)
    assert asymmetry(s) == pytest.approx((N1 + 0.5) * math.sinh(1.0), abs=1e-12)
    assert asymmetry(s) == pytest.approx(1.2715403174, abs=1e-9)
    assert entropy(s) == pytest.approx(entropy(make_thermal(N1, 1.0)), abs=1e-12)


def test_squeeze_direction():
    s = apply(squeeze_op(0.3), vacuum())
    assert s.cov[0, 0] == pytest.approx(0.5 * math.exp(-0.6))
    assert s.cov[1, 1] == pytest.approx(0.5 * math.exp(0.6))


def test_displacement_enters_energy_and_asymmetry():
    s = GaussianState([1.0, 2.0], 0.5 * np.eye(2), [2.0])
    assert energy(s) == pytest.approx(2.0 * 0.5 * 5.0)
    assert asymmetry(s) == pytest.approx(0.5 * 2.0 * (4.0 - 1.0))


def test_invalid_states():
    with pytest.raises(InvalidStateError):
        GaussianState([0, 0], [[1.0, 0.2], [0.1, 1.0]], [1.0])
    with pytest.raises(InvalidStateError):
        GaussianState([0, 0], 0.4 * np.eye(2), [1.0])
    with pytest.raises(DomainError):
        GaussianState([0, 0, 0], 0.5 * np.eye(2), [1.0])
    with pytest.raises(DomainError):
        GaussianState([0, 0], 0.5 * np.eye(2), [0.0])
    with pytest.raises(DomainError):
        make_thermal(-0.1, 1.0)


def test_symplectic_validation():
    with pytest.raises(DomainError):
        SymplecticOp(np.diag([2.0, 2.0]))
    with pytest.raises(DomainError):
        SymplecticOp(np.eye(3))
    op = squeeze_op(0.7) @ rotation_op(0.3)
    assert np.allclose((op @ op.inverse()).mat, np.eye(2))
    with pytest.raises(DomainError):
        apply(beam_splitter_op(0.1), vacuum())
    with pytest.raises(DomainError):
        beam_splitter_op(0.1, modes=(0, 0))


def test_beam_splitter_full_swap():
    a = make_thermal(0.3, 1.0)
    b = apply(squeeze_op(0.4), make_thermal(1.2, 1.0))
    out = apply(beam_splitter_op(math.pi / 2), tensor(a, b))
    assert np.allclose(partial_trace(out, [0]).cov, b.cov)
    assert np.allclose(partial_trace(out, [1]).cov, a.cov)


def test_two_mode_squeezed_vacuum_reduces_to_thermal():
    r = 0.6
    local = squeeze_op(r, 0, 2) @ squeeze_op(-r, 1, 2)
    tmsv = apply(beam_splitter_op(math.pi / 4) @ local, vacuum(n_modes=2))
    assert entropy(tmsv) == pytest.approx(0.0, abs=1e-10)
    red = partial_trace(tmsv, [0])
    assert np.allclose(red.cov, 0.5 * math.cosh(2 * r) * np.eye(2))
    n = math.sinh(r) ** 2
    assert entropy(red) == pytest.approx((n + 1) * math.log(n + 1) - n * math.log(n), abs=1e-12)


def test_multimode_symplectic_spectrum():
    s = tensor(make_thermal(0.2, 1.0), make_thermal(1.7, 1.0))
    mixed = apply(beam_splitter_op(0.4), s)
    assert np.allclose(symplectic_eigenvalues(mixed), [0.7, 2.2])


def test_williamson_form():
    s = apply(rotation_op(0.7) @ squeeze_op(0.9), make_thermal(0.8, 1.0))
    nu, sg = single_mode_williamson(s.cov)
    assert nu == pytest.approx(1.3)
    assert np.allclose(nu * sg @ sg.T, s.cov)
    assert np.allclose(sg, sg.T)
    SymplecticOp(sg)


def test_relative_entropy_to_gge_thermal_input():
    r = ReservoirSpec(1.0, 0.5, 1.0)
    d = relative_entropy_to_gge(make_thermal(r.n_th(), 1.0), r)
    # beta0 omega sinh^2(xi) (2 n_th + 1)
    assert d == pytest.approx(math.sinh(0.5) ** 2 * (2 * N1 + 1), abs=1e-12)
    assert d == pytest.approx(0.587600, abs=1e-6)


def test_relative_entropy_needs_resonance():
    r = ReservoirSpec(1.0, 0.5, 1.0)
    with pytest.raises(DomainError):
        relative_entropy_to_gge(make_thermal(0.3, 2.0), r)


def test_mode_frame_identity_matches_bare():
    s = GaussianState([0.3, -0.2], apply(squeeze_op(0.4), make_thermal(0.5, 1.5)).cov, [1.5])
    f = ModeFrame(1.5)
    assert f.energy(s) == pytest.approx(energy(s))
    assert f.asymmetry(s) == pytest.approx(asymmetry(s))
    with pytest.raises(DomainError):
        ModeFrame(-1.0)


def test_mode_frame_squeezed_basis():
    # frame quadratures M_l (x, p): the frame Hamiltonian of a state squeezed by -l is the thermal energy
    lam = 0.35
    s = apply(squeeze_op(-lam), make_thermal(0.4, 1.0))
    f = ModeFrame(1.0, squeeze_op(lam).mat)
    assert f.energy(s) == pytest.approx(0.4)
    assert f.asymmetry(s) == pytest.approx(0.0, abs=1e-12)


symplectic_params = st.tuples(
    st.floats(0, 2 * math.pi), st.floats(-1.5, 1.5), st.floats(0, 2 * math.pi)
)


@given(symplectic_params, st.floats(0.0, 5.0))
def test_gaussian_unitaries_preserve_entropy(p, n):
    op = rotation_op(p[0]) @ squeeze_op(p[1]) @ rotation_op(p[2])
    omega = symplectic_form(1)
    assert np.allclose(op.mat @ omega @ op.mat.T, omega, atol=1e-10)
    s = make_thermal(n, 1.0)
    assert entropy(apply(op, s)) == pytest.approx(entropy(s), abs=1e-9)


@given(st.floats(0, math.pi / 2), st.floats(0, 3), st.floats(0, 3), st.floats(-1, 1), st.floats(-1, 1))
def test_beam_splitter_conserves_total_charges(theta, n1, n2, x1, x2):
    a = apply(squeeze_op(x1), make_thermal(n1, 1.0))
    b = apply(squeeze_op(x2), make_thermal(n2, 1.0))
    j = tensor(a, b)
    out = apply(beam_splitter_op(theta), j)
    assert energy(out, 0) + energy(out, 1) == pytest.approx(energy(j, 0) + energy(j, 1), abs=1e-10)
    assert asymmetry(out, 0) + asymmetry(out, 1) == pytest.approx(
        asymmetry(j, 0) + asymmetry(j, 1), abs=1e-10
    )
    assert entropy(out) == pytest.approx(entropy(j), abs=1e-9)

"""Squeezed thermal reservoir viewed as a two-charge generalized Gibbs ensemble."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import (
    DomainError,
    GaussianState,
    ModeFrame,
    bose_occupation,
    entropy,
    make_thermal,
    relative_entropy_to_gge,
    squeeze_op,
    apply,
)


def derive_potentials(beta0, xi):
    """Inverse temperature and squeezing potential ``(beta0 cosh 2xi, tanh 2xi)``."""
    if not beta0 > 0:
        raise DomainError(f"beta0 must be > 0, got {beta0}")
    return beta0 * np.cosh(2 * xi), np.tanh(2 * xi)


@dataclass(frozen=True)
class ReservoirSpec:
    """Reservoir parameters ``(beta0, xi, omega)``; the squeezing phase is fixed at 0."""

    beta0: float
    xi: float
    omega: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        for name in ("beta0", "xi", "omega", "theta"):
            val = getattr(self, name)
            if not np.isfinite(val):
                raise DomainError(f"{name} must be finite, got {val}")
            object.__setattr__(self, name, float(val))
        if self.beta0 <= 0:
            raise DomainError(f"beta0 must be > 0, got {self.beta0}")
        if self.omega <= 0:
            raise DomainError(f"omega must be > 0, got {self.omega}")
        if self.xi < 0:
            raise DomainError(f"xi must be >= 0, got {self.xi}")
        if self.theta != 0.0:
            raise DomainError("only squeezing phase theta = 0 is supported")

    @property
    def beta(self):
        return self.beta0 * np.cosh(2 * self.xi)

    @property
    def mu(self):
        return float(np.tanh(2 * self.xi))

    @property
    def temperature(self):
        return 1.0 / self.beta

    def n_th(self, omega=None):
        return float(bose_occupation(self.beta0 * (self.omega if omega is None else omega)))

    def ln_z0(self, omega=None):
        w = self.omega if omega is None else omega
        return float(-np.log(-np.expm1(-self.beta0 * w)))

    def ln_z(self, omega=None):
        """Log partition function of ``exp(-beta(H - mu A))`` for a mode at ``omega``."""
        w = self.omega if omega is None else omega
        return self.ln_z0(w) + self.beta0 * w * np.sinh(self.xi) ** 2

    def at(self, omega):
        """Same reservoir seen by a mode of another frequency."""
        return ReservoirSpec(self.beta0, self.xi, omega)

    def to_dict(self):
        return {"beta0": self.beta0, "xi": self.xi, "omega": self.omega}


def equilibrium_state(r, frame=None):
    """Equilibrium state of a mode in contact with ``r``.

    Without ``frame`` this is the squeezed thermal state of the bare mode. With a
    frame ``(omega_f, T)`` it is the state that looks squeezed-thermal at
    ``beta0 * omega_f`` in the frame quadratures ``T @ (x, p)``.
    """
    if frame is None:
        return apply(squeeze_op(r.xi), make_thermal(r.n_th(), r.omega))
    ninv = np.linalg.inv(frame.basis)
    diag = (r.n_th(frame.omega) + 0.5) * np.diag([np.exp(-2 * r.xi), np.exp(2 * r.xi)])
    cov = ninv @ diag @ ninv.T
    return GaussianState(np.zeros(2), 0.5 * (cov + cov.T), [r.omega])


@dataclass(frozen=True)
class FlowRecord:
    dE_R: float
    dA_R: float
    dS_R: float
    Q_R: float
    W_R: float


def entropy_flow(r, dE_R, dA_R):
    """Reservoir entropy change and its heat/squeezing-work split."""
    if not (np.isfinite(dE_R) and np.isfinite(dA_R)):
        raise DomainError("energy and asymmetry changes must be finite")
    ds = r.beta * (dE_R - r.mu * dA_R)
    w = r.mu * dA_R
    return FlowRecord(dE_R=dE_R, dA_R=dA_R, dS_R=ds, Q_R=dE_R - w, W_R=w)


def _frame_for(s, r):
    if abs(s.freqs[0] - r.omega) > 1e-12 * max(1.0, r.omega):
        raise DomainError(f"mode frequency {s.freqs[0]} is not resonant with reservoir {r.omega}")
    return ModeFrame(r.omega)


def omega_potential(s, r, frame=None):
    """Grand-potential-like ``<H> - mu <A> - S/beta``."""
    frame = frame or _frame_for(s, r)
    return frame.energy(s) - r.mu * frame.asymmetry(s) - entropy(s) / r.beta


def noneq_free_energy(s, r, frame=None):
    frame = frame or _frame_for(s, r)
    return frame.energy(s) - entropy(s) / r.beta


def omega_equilibrium(r, omega=None):
    return -r.ln_z(omega) / r.beta


def xi_star(beta0_omega):
    """Squeezing beyond which the squeezed quadrature drops below vacuum noise."""
    if not beta0_omega > 0:
        raise DomainError(f"beta0*omega must be > 0, got {beta0_omega}")
    return 0.5 * float(np.log(1.0 / np.tanh(0.5 * beta0_omega)))


__all__ = [
    "ReservoirSpec",
    "FlowRecord",
    "derive_potentials",
    "equilibrium_state",
    "entropy_flow",
    "omega_potential",
    "noneq_free_energy",
    "omega_equilibrium",
    "relative_entropy_to_gge",
    "xi_star",
]

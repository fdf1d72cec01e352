"""
Repeated-interaction dynamics and thermodynamic bookkeeping.

A collision tensors the system with a fresh reservoir mode in its equilibrium
state, mixes the two with a beam splitter, measures the outgoing ancilla and
discards it. Driving steps change the system Hamiltonian frame and/or apply a
unitary to the system alone.
"""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, field

import numpy as np

from . import kernels
from .gaussian import (
    DomainError,
    GaussianState,
    apply,
    asymmetry,
    beam_splitter_op,
    energy,
    entropy,
    partial_trace,
    tensor,
)
from .reservoir import ReservoirSpec, equilibrium_state

LEDGER_COLUMNS = ("step", "type", "dE_S", "dE_R", "dA_S", "dA_R", "W", "Asym", "W_sq", "Q", "dS", "Sigma")
RESONANCE_TOL = 1e-12


class NonResonantError(DomainError):
    """System and reservoir modes differ in frequency, so the charges are not conserved."""


@dataclass(frozen=True)
class CollisionConfig:
    theta_c: float
    reservoir: ReservoirSpec
    steps: int = 1

    def __post_init__(self):
        if not 0 < self.theta_c <= np.pi / 2:
            raise DomainError(f"collision angle must lie in (0, pi/2], got {self.theta_c}")
        if self.steps < 1:
            raise DomainError(f"steps must be >= 1, got {self.steps}")


@dataclass(frozen=True)
class LedgerRow:
    step: int
    type: str
    dE_S: float
    dE_R: float
    dA_S: float
    dA_R: float
    W: float
    Asym: float
    W_sq: float
    Q: float
    dS: float
    Sigma: float


def make_row(step, kind, r, dE_S, dA_S, dE_R=0.0, dA_R=0.0, W=0.0, Asym=0.0, dS=0.0):
    """Assemble a row; ``W_sq``, ``Q`` and ``Sigma`` follow from the first and second laws."""
    w_sq = -r.mu * dA_R
    q = dE_S - W - w_sq
    sigma = dS + r.beta * (W + w_sq - dE_S)
    return LedgerRow(step, kind, dE_S, dE_R, dA_S, dA_R, W, Asym, w_sq, q, dS, sigma)


@dataclass
class ThermoLedger:
    """Append-only list of ledger rows."""

    rows: list = field(default_factory=list)

    def append(self, row):
        self.rows.append(row)

    def extend(self, other):
        self.rows.extend(other.rows if isinstance(other, ThermoLedger) else other)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    def of_type(self, kind):
        return [r for r in self.rows if r.type == kind]

    def totals(self):
        return {name: float(np.sum(self.column(name))) for name in LEDGER_COLUMNS[2:]}

    def to_csv(self, fh=None):
        """Write the ledger as CSV (fixed column order, totals row last)."""
        out = io.StringIO() if fh is None else fh
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(LEDGER_COLUMNS)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in astuple(row)])
        tot = self.totals()
        writer.writerow(["total", "total"] + [_fmt(tot[c]) for c in LEDGER_COLUMNS[2:]])
        if fh is None:
            return out.getvalue()
        return None


def _fmt(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def _check_single_mode(system):
    if system.n_modes != 1:
        raise DomainError(f"system must be a single mode, got {system.n_modes} modes")


def _resonant(system, r):
    return abs(system.freqs[0] - r.omega) <= RESONANCE_TOL * max(1.0, r.omega)


def interact_step(system, cfg, step=0, allow_detuned=False):
    """One collision of a single-mode system with a fresh reservoir mode.

    Returns ``(new_state, row)``. Reservoir changes are measured on the outgoing
    ancilla. A detuned reservoir raises :class:`NonResonantError` unless
    ``allow_detuned`` is set, in which case the non-conserving row is returned.
    """
    _check_single_mode(system)
    r = cfg.reservoir
    if not _resonant(system, r) and not allow_detuned:
        raise NonResonantError(
            f"system frequency {system.freqs[0]} differs from reservoir frequency {r.omega}"
        )
    fresh = equilibrium_state(r)
    joint = apply(beam_splitter_op(cfg.theta_c), tensor(system, fresh))
    new = partial_trace(joint, [0])
    out = partial_trace(joint, [1])
    row = make_row(
        step,
        "interact",
        r,
        dE_S=energy(new) - energy(system),
        dA_S=asymmetry(new) - asymmetry(system),
        dE_R=energy(out) - energy(fresh),
        dA_R=asymmetry(out) - asymmetry(fresh),
        dS=entropy(new) - entropy(system),
    )
    return new, row


def drive_step(system, generator, before, after, step=0):
    """Unitary driving of the system with a change of Hamiltonian frame.

    ``W = <H_after>_new - <H_before>_old`` and likewise for the asymmetry; a
    sudden quench is the identity generator with ``after != before``. The
    reservoir is untouched and no entropy is produced.
    """
    _check_single_mode(system)
    if generator.n_modes != system.n_modes:
        raise DomainError("generator does not act on the system mode")
    new = apply(generator, system)
    w = after.energy(new) - before.energy(system)
    a = after.asymmetry(new) - before.asymmetry(system)
    return new, LedgerRow(step, "drive", w, 0.0, a, 0.0, w, a, 0.0, 0.0, 0.0, 0.0)


@dataclass
class RelaxationResult:
    states: list
    distances: np.ndarray
    ledger: ThermoLedger

    @property
    def final(self):
        return self.states[-1]


def run_relaxation(initial, cfg):
    """Iterate collisions from ``initial`` for ``cfg.steps`` steps.

    ``distances[k] = max|cov_k - cov_eq| + max|means_k|`` tracks convergence to
    the equilibrium state.
    """
    _check_single_mode(initial)
    r = cfg.reservoir
    if not _resonant(initial, r):
        raise NonResonantError(
            f"system frequency {initial.freqs[0]} differs from reservoir frequency {r.omega}"
        )
    eq = equilibrium_state(r)
    c, m, q = initial.cov, initial.means, eq.cov
    traj, deltas = kernels.collide_sweep(
        c[0, 0], c[0, 1], c[1, 1], m[0], m[1], q[0, 0], q[0, 1], q[1, 1],
        cfg.theta_c, cfg.steps, r.omega, r.omega,
    )
    freqs = initial.freqs
    states = [initial] + [
        GaussianState(t[3:], [[t[0], t[1]], [t[1], t[2]]], freqs) for t in traj[1:]
    ]
    dist = (
        np.max(np.abs(traj[:, :3] - [q[0, 0], q[0, 1], q[1, 1]]), axis=1)
        + np.max(np.abs(traj[:, 3:]), axis=1)
    )
    ledger = ThermoLedger(
        [
            make_row(k + 1, "interact", r, dE_S=d[0], dE_R=d[1], dA_S=d[2], dA_R=d[3], dS=d[4])
            for k, d in enumerate(deltas)
        ]
    )
    return RelaxationResult(states, dist, ledger)


def trajectory_csv(result, fh=None):
    out = io.StringIO() if fh is None else fh
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["step", "cov_xx", "cov_xp", "cov_pp", "mean_x", "mean_p", "distance"])
    for k, (s, d) in enumerate(zip(result.states, result.distances)):
        writer.writerow(
            [k] + [_fmt(v) for v in (s.cov[0, 0], s.cov[0, 1], s.cov[1, 1], *s.means, d)]
        )
    return out.getvalue() if fh is None else None


__all__ = [
    "LEDGER_COLUMNS",
    "CollisionConfig",
    "LedgerRow",
    "ThermoLedger",
    "NonResonantError",
    "interact_step",
    "drive_step",
    "run_relaxation",
    "make_row",
    "trajectory_csv",
]

"""
Reversible transformations, single-reservoir work cycles and the ergotropy comparison.

Sign convention: ledger rows record work and asymmetry *injected* into the
system (``W``, ``Asym``); the ``*_ext`` quantities and the ``W1``/``W2`` strokes
are the amounts *delivered* to the external agent, i.e. minus the injected sums.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.linalg import logm

from . import kernels
from .collisions import CollisionConfig, LedgerRow, ThermoLedger, drive_step, run_relaxation
from .gaussian import (
    DomainError,
    GaussianState,
    ModeFrame,
    SymplecticOp,
    make_thermal,
    relative_entropy_to_gge,
    rotation_op,
    single_mode_williamson,
    squeeze_op,
)
from .reservoir import equilibrium_state, xi_star

SCHEDULES = ("uniform", "cosine")
QUENCH_TOL = 1e-10
BOUND_TOL = 1e-9
SCAN_COLUMNS = ("xi", "ergotropy", "W_sq", "ratio", "xi_star_flag")


class InvariantError(RuntimeError):
    pass


# closed forms


def ergotropy_of_equilibrium(r):
    """Ergotropy ``omega sinh^2(xi) (2 n_th + 1)`` of the squeezed thermal state."""
    return r.omega * math.sinh(r.xi) ** 2 * (2 * r.n_th() + 1)


def squeezing_work(r):
    """Reversible single-reservoir cycle work ``omega xi sinh(2xi) (2 n_th + 1)``."""
    return r.omega * r.xi * math.sinh(2 * r.xi) * (2 * r.n_th() + 1)


def squeezing_asymmetry(r):
    return r.omega * r.xi * math.cosh(2 * r.xi) * (2 * r.n_th() + 1)


def collision_kappa(m, theta_c):
    """Fraction of the deviation from equilibrium left after ``m`` collisions."""
    return math.cos(theta_c) ** (2 * m)


# quench


@dataclass(frozen=True)
class QuenchResult:
    omega_star: float
    basis: SymplecticOp
    W_quench: float
    A_quench: float
    residual: float

    @property
    def frame(self):
        return ModeFrame(self.omega_star, self.basis.mat)


def _check_protocol_state(state):
    if state.n_modes != 1:
        raise DomainError("protocols act on a single system mode")
    if np.max(np.abs(state.means)) > 1e-12:
        raise DomainError("protocols require a zero-mean state")


def quench_to_equilibrium(state, r, frame=None):
    """Sudden change to the Hamiltonian frame in which ``state`` is the equilibrium state.

    The new mode is found by undoing the reservoir squeezing, taking the
    Williamson form ``nu * S S^T`` of the result and squeezing back; its
    frequency is ``ln(1 + 1/(nu - 1/2))/beta0``. Constant offsets of
    ``-ln(rho)`` are not carried (the frame keeps ``omega b^dag b``).
    """
    _check_protocol_state(state)
    frame = frame or ModeFrame(r.omega)
    sq = squeeze_op(r.xi).mat
    unsq = squeeze_op(-r.xi).mat
    nu, sg = single_mode_williamson(unsq @ state.cov @ unsq.T)
    if nu - 0.5 < 1e-9:
        raise DomainError("state is (nearly) pure: omega_* diverges")
    omega_star = math.log1p(1.0 / (nu - 0.5)) / r.beta0
    basis = SymplecticOp(sq @ np.linalg.inv(sg) @ unsq)
    new = ModeFrame(omega_star, basis.mat)
    residual = relative_entropy_to_gge(state, r, frame=new)
    if abs(residual) > QUENCH_TOL:
        raise InvariantError(f"quenched state is off equilibrium by D = {residual:.3e}")
    return QuenchResult(
        omega_star=omega_star,
        basis=basis,
        W_quench=new.energy(state) - frame.energy(state),
        A_quench=new.asymmetry(state) - frame.asymmetry(state),
        residual=residual,
    )


# quasi-static driving


def _schedule(n, schedule):
    k = np.arange(n + 1) / n
    if schedule == "uniform":
        return k
    if schedule == "cosine":
        return 0.5 * (1.0 - np.cos(np.pi * k))
    raise DomainError(f"unknown schedule {schedule!r}; expected one of {SCHEDULES}")


def _expm_traceless(gen, t):
    # gen @ gen = -det(gen) * I for a traceless 2x2 matrix
    delta = -np.linalg.det(gen)
    if delta > 1e-300:
        s = math.sqrt(delta)
        c, f = np.cosh(s * t), np.sinh(s * t) / s
    elif delta < -1e-300:
        s = math.sqrt(-delta)
        c, f = np.cos(s * t), np.sin(s * t) / s
    else:
        c, f = np.ones_like(t), t
    return c[:, None, None] * np.eye(2) + f[:, None, None] * gen


def frame_path(start, end, n, schedule="uniform"):
    """``n``-step path of frames from ``start`` to ``end``.

    Bases follow the one-parameter subgroup ``exp(t L) @ start.basis`` with
    ``exp(L) = end.basis @ start.basis^-1``; frequencies are interpolated linearly.
    Returns ``(omegas, bases)`` with ``n + 1`` entries.
    """
    if n < 1:
        raise DomainError("a frame path needs at least one step")
    rel = end.basis @ np.linalg.inv(start.basis)
    if np.allclose(rel, np.eye(2), rtol=0, atol=1e-15):
        gen = np.zeros((2, 2))
    else:
        gen = logm(rel)
        if np.iscomplexobj(gen):
            if np.max(np.abs(gen.imag)) > 1e-10:
                raise DomainError("frames are not connected by a real one-parameter path")
            gen = gen.real
        gen = gen - 0.5 * np.trace(gen) * np.eye(2)
    t = _schedule(n, schedule)
    bases = np.einsum("nij,jk->nik", _expm_traceless(gen, t), start.basis)
    bases[-1] = end.basis
    omegas = start.omega + t * (end.omega - start.omega)
    omegas[-1] = end.omega
    return omegas, bases


def polygon_path(frames, n, schedule="uniform"):
    """Concatenate :func:`frame_path` legs through ``frames``, ``n`` steps per leg."""
    omegas, bases = [np.array([frames[0].omega])], [frames[0].basis[None]]
    for a, b in zip(frames[:-1], frames[1:]):
        w, t = frame_path(a, b, n, schedule)
        omegas.append(w[1:])
        bases.append(t[1:])
    return np.concatenate(omegas), np.concatenate(bases)


@dataclass
class QuasiStaticResult:
    """Outcome of a discretized quasi-static leg.

    ``W`` and ``Asym`` are the amounts extracted by the driver; ``sigma`` holds
    the entropy production ``dS_n - beta q_n`` of each re-equilibration, with
    ``q_n = dE_n - mu dA_n`` the heat into the system.
    """

    covs: np.ndarray
    omega: float
    ledger: ThermoLedger
    W: float
    Asym: float
    sigma: np.ndarray
    log_z_change: float

    @property
    def final_state(self):
        return self._state(self.covs[-1])

    def states(self):
        return [self._state(c) for c in self.covs]

    def _state(self, c):
        return GaussianState(np.zeros(2), [[c[0], c[1]], [c[1], c[2]]], [self.omega])


def quasi_static(state, r, omegas, bases, kappa=0.0, step0=1):
    """Drive ``state`` through the frame sequence, re-equilibrating after each step.

    ``kappa = 0`` replaces the state by the instantaneous equilibrium state;
    ``0 < kappa < 1`` leaves that fraction of the deviation, as ``m`` collisions
    at angle ``theta_c`` do with ``kappa = cos(theta_c)^(2m)``.
    """
    _check_protocol_state(state)
    if not 0.0 <= kappa < 1.0:
        raise DomainError(f"kappa must lie in [0, 1), got {kappa}")
    c = state.cov
    rows, traj = kernels.quasi_static_sweep(
        omegas, bases, c[0, 0], c[0, 1], c[1, 1], r.beta0, r.xi, kappa
    )
    beta, mu = r.beta, r.mu
    w, a, de, da, ds = rows.T
    sigma = ds - beta * (de - mu * da)
    ledger = ThermoLedger()
    for k in range(rows.shape[0]):
        step = step0 + k
        ledger.append(LedgerRow(step, "drive", w[k], 0.0, a[k], 0.0, w[k], a[k], 0.0, 0.0, 0.0, 0.0))
        w_sq = mu * da[k]
        ledger.append(
            LedgerRow(step, "gibbs", de[k], -de[k], da[k], -da[k], 0.0, 0.0, w_sq, de[k] - w_sq, ds[k], sigma[k])
        )
    return QuasiStaticResult(
        covs=traj,
        omega=float(state.freqs[0]),
        ledger=ledger,
        W=-float(np.sum(w)),
        Asym=-float(np.sum(a)),
        sigma=sigma,
        log_z_change=r.ln_z(omegas[-1]) - r.ln_z(omegas[0]),
    )


def quasi_static_unsqueeze(r, n, schedule="uniform", kappa=0.0):
    """Unsqueeze the Hamiltonian ``omega b_l^dag b_l`` from ``l = xi`` to ``l = 0``.

    Starts from the thermal state at ``beta0``, which is the equilibrium state of
    the fully squeezed frame.
    """
    if n < 2:
        raise DomainError(f"need at least 2 steps, got {n}")
    start = ModeFrame(r.omega, squeeze_op(r.xi).mat)
    omegas, bases = frame_path(start, ModeFrame(r.omega), n, schedule)
    return quasi_static(make_thermal(r.n_th(), r.omega), r, omegas, bases, kappa)


# reversible transformation


@dataclass
class TransformResult:
    final_state: GaussianState
    W_ext: float
    A_ext: float
    ledger: ThermoLedger
    quench: QuenchResult
    quasi_static: QuasiStaticResult
    W_final_quench: float = 0.0
    A_final_quench: float = 0.0

    @property
    def sigma_total(self):
        return float(np.sum(self.quasi_static.sigma))


def _quench_row(step, w, a):
    return LedgerRow(step, "quench", w, 0.0, a, 0.0, w, a, 0.0, 0.0, 0.0, 0.0)


def reversible_transform(state, r, n, target=None, waypoints=(), schedule="uniform", kappa=0.0):
    """Quench into equilibrium, then drive quasi-statically back to the bare Hamiltonian.

    With ``target`` the quasi-static leg ends in the frame where ``target`` is the
    equilibrium state and a final quench restores the bare Hamiltonian. Extra
    ``waypoints`` frames are visited in between, ``n`` steps per leg.
    """
    if n < 2:
        raise DomainError(f"need at least 2 steps, got {n}")
    bare = ModeFrame(r.omega)
    q = quench_to_equilibrium(state, r, bare)
    end = bare if target is None else quench_to_equilibrium(target, r, bare).frame
    omegas, bases = polygon_path([q.frame, *waypoints, end], n, schedule)
    qs = quasi_static(state, r, omegas, bases, kappa)
    ledger = ThermoLedger([_quench_row(0, q.W_quench, q.A_quench)])
    ledger.extend(qs.ledger)
    final = qs.final_state
    w_c = a_c = 0.0
    if target is not None:
        w_c = bare.energy(final) - end.energy(final)
        a_c = bare.asymmetry(final) - end.asymmetry(final)
        ledger.append(_quench_row(len(omegas), w_c, a_c))
    return TransformResult(
        final_state=final,
        W_ext=qs.W - q.W_quench - w_c,
        A_ext=qs.Asym - q.A_quench - a_c,
        ledger=ledger,
        quench=q,
        quasi_static=qs,
        W_final_quench=-w_c,
        A_final_quench=-a_c,
    )


# cycles


@dataclass
class CycleReport:
    """Totals of a two-stroke single-reservoir cycle (amounts delivered to the driver)."""

    W1: float
    A1: float
    W2_quench: float
    A2_quench: float
    W2_qs: float
    A2_qs: float
    W_ext: float
    A_ext: float
    W_sq: float
    ergotropy: float
    mu: float
    sigma_total: float
    stroke2: str
    n_steps: int
    residuals: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.W_ext > self.W_sq + BOUND_TOL:
            raise InvariantError(
                f"extracted work {self.W_ext!r} exceeds the squeezing work {self.W_sq!r}"
            )
        self.residuals = {
            "bound_gap": self.W_sq - self.W_ext,
            "reversibility": self.W_ext - self.mu * self.A_ext,
            "sq_bookkeeping": self.W_sq - self.mu * self.A_ext,
            **self.residuals,
        }

    @property
    def W2(self):
        return self.W2_quench + self.W2_qs

    @property
    def A2(self):
        return self.A2_quench + self.A2_qs

    def to_dict(self):
        d = asdict(self)
        d["W2"] = self.W2
        d["A2"] = self.A2
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def run_cycle(r, u1, n, stroke2="reversible", waypoints=(), schedule="uniform", kappa=0.0, relaxation=None):
    """Detach and apply ``u1`` to the equilibrium state, then return to equilibrium.

    ``stroke2="reversible"`` uses :func:`reversible_transform`;
    ``stroke2="relaxation"`` lets the system relax by collisions with no driving.
    Returns ``(report, ledger)``.
    """
    if u1.n_modes != 1:
        raise DomainError(f"U1 must act on the single system mode, got {u1.n_modes} modes")
    bare = ModeFrame(r.omega)
    eq = equilibrium_state(r)
    rho, row1 = drive_step(eq, u1, bare, bare, step=0)
    ledger = ThermoLedger([replace(row1, type="unitary")])
    w2q = a2q = w2s = a2s = 0.0
    if stroke2 == "reversible":
        tr = reversible_transform(rho, r, n, waypoints=waypoints, schedule=schedule, kappa=kappa)
        ledger.extend(tr.ledger)
        w2q, a2q = -tr.quench.W_quench, -tr.quench.A_quench
        w2s, a2s = tr.quasi_static.W, tr.quasi_static.Asym
    elif stroke2 == "relaxation":
        cfg = relaxation or CollisionConfig(0.1, r, 2000)
        ledger.extend(run_relaxation(rho, cfg).ledger)
    else:
        raise DomainError(f"unknown second stroke {stroke2!r}")
    tot = ledger.totals()
    report = CycleReport(
        W1=-row1.W,
        A1=-row1.Asym,
        W2_quench=w2q,
        A2_quench=a2q,
        W2_qs=w2s,
        A2_qs=a2s,
        W_ext=-tot["W"],
        A_ext=-tot["Asym"],
        W_sq=tot["W_sq"],
        ergotropy=ergotropy_of_equilibrium(r),
        mu=r.mu,
        sigma_total=tot["Sigma"],
        stroke2=stroke2,
        n_steps=n,
    )
    return report, ledger


def unsqueezer(r):
    """``S^dag(xi)``, which maps the equilibrium state to the thermal state."""
    return squeeze_op(-r.xi)


def random_gaussian_unitary(rng, max_squeeze=1.0):
    """Rotation, squeeze, rotation with random parameters."""
    phi1, phi2 = rng.uniform(0, 2 * np.pi, size=2)
    s = rng.uniform(-max_squeeze, max_squeeze)
    return rotation_op(phi1) @ squeeze_op(s) @ rotation_op(phi2)


def squeeze_loop(r, lam, omega_ratio):
    """Waypoints of a rectangular loop in (squeeze, frequency) starting at the bare frame.

    Squeeze the Hamiltonian to ``lam`` at ``omega``, raise the frequency to
    ``omega_ratio * omega``, unsqueeze, and (implicitly) lower the frequency back.
    """
    w2 = r.omega * omega_ratio
    m = squeeze_op(lam).mat
    return [ModeFrame(r.omega, m), ModeFrame(w2, m), ModeFrame(w2)]


def squeeze_loop_work(r, lam, omega_ratio):
    """Reversible work delivered by one turn of :func:`squeeze_loop`."""

    def g(w):
        return w / math.tanh(0.5 * r.beta0 * w)

    return lam * math.sinh(2 * r.xi) * (g(r.omega * omega_ratio) - g(r.omega))


# ergotropy vs squeezing work


def ergotropy_scan(beta0_omega, xi_grid):
    """Ergotropy and reversible squeezing work in units of ``omega coth(beta0 omega/2)``."""
    if not beta0_omega > 0:
        raise DomainError("beta0*omega must be > 0")
    xs = xi_star(beta0_omega)
    rows = []
    for xi in map(float, xi_grid):
        if xi < 0:
            raise DomainError(f"xi must be >= 0, got {xi}")
        ratio = 2.0 if xi == 0 else 2 * xi / math.tanh(xi)
        rows.append(
            {
                "xi": xi,
                "ergotropy": math.sinh(xi) ** 2,
                "W_sq": xi * math.sinh(2 * xi),
                "ratio": ratio,
                "xi_star_flag": int(xi > xs),
            }
        )
    return rows


def scan_csv(rows, fh=None):
    out = io.StringIO() if fh is None else fh
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    for row in rows:
        writer.writerow([repr(row[c]) if isinstance(row[c], float) else row[c] for c in SCAN_COLUMNS])
    return out.getvalue() if fh is None else None

"""
Invariant suites: each compares a Gaussian-level result with an independent
reference (Fock-space oracle, exact bookkeeping identity or closed form) and
reports the measured residual next to its tolerance.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import fock
from .collisions import CollisionConfig, NonResonantError, interact_step, run_relaxation
from .gaussian import (
    GaussianState,
    apply,
    make_thermal,
    rotation_op,
    squeeze_op,
    vacuum,
)
from .protocols import (
    InvariantError,
    random_gaussian_unitary,
    run_cycle,
    unsqueezer,
)
from .reservoir import ReservoirSpec, equilibrium_state

GGE_XI = (0.0, 0.25, 0.5, 0.75, 1.0)
GGE_BETA_OMEGA = (0.5, 1.0, 2.0)
FLOW_THETAS = (0.01, 0.05, 0.1)


@dataclass(frozen=True)
class Check:
    """``passed`` is ``residual <= tolerance`` unless the check is a lower bound."""

    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self):
        return asdict(self)


def _upper(name, residual, tol, detail=""):
    residual = float(residual)
    return Check(name, residual, tol, bool(residual <= tol), detail)


def gge_equivalence(d=60, tol=1e-8, xi_grid=GGE_XI, b0w_grid=GGE_BETA_OMEGA):
    """Largest trace distance between squeezed-thermal and GGE density blocks."""
    worst = 0.0
    where = ""
    for b0w in b0w_grid:
        for xi in xi_grid:
            a = fock.squeezed_thermal_density(b0w, xi, 1.0, d)
            b = fock.gge_density(b0w, xi, 1.0, d)
            dim = max(a.dim, b.dim)
            if a.dim != dim:
                a = fock.squeezed_thermal_density(b0w, xi, 1.0, dim, pad=False)
            if b.dim != dim:
                b = fock.gge_density(b0w, xi, 1.0, dim, pad=False)
            dist = fock.trace_norm(a.truncate(d), b.truncate(d))
            if dist >= worst:
                worst, where = dist, f"beta0*omega={b0w}, xi={xi}, working dim={dim}"
    return _upper("gge_equivalence", worst, tol, where)


def _fock_system_state(beta_s, xi_s, d, tail_tol=1e-10):
    return fock.squeezed_thermal_density(beta_s, xi_s, 1.0, d, pad=False, tail_tol=tail_tol)


def _gauss_system_state(beta_s, xi_s):
    n = 1.0 / math.expm1(beta_s)
    return apply(squeeze_op(xi_s), make_thermal(n, 1.0))


def entropy_flow(r=None, thetas=FLOW_THETAS, d=40, tol=1e-7, system=(1.5, -0.3)):
    """Compare ``beta(dE_R - mu dA_R)`` from one Gaussian collision with ``-Tr[d rho_R ln rho_R]``.

    The Fock side evolves the joint state with the exact number-conserving
    beam-splitter unitary; ``system = (beta_s*omega, xi_s)`` fixes the incoming
    system state (squeezed thermal).
    """
    r = r or ReservoirSpec(2.0, 0.25)
    rho_s = _fock_system_state(*system, d)
    rho_r = fock.gge_density(r.beta0, r.xi, 1.0, d, pad=False, tail_tol=1e-10)
    ln_r = fock.log_density(rho_r)
    joint = fock.kron(rho_s, rho_r)
    gs = _gauss_system_state(*system)
    worst, where = 0.0, ""
    for theta in thetas:
        out = fock.reduce(fock.evolve(fock.beam_splitter_unitary(theta, d), joint), 1)
        oracle = -float(np.trace((out.matrix - rho_r.matrix) @ ln_r))
        _, row = interact_step(gs, CollisionConfig(theta, r))
        gauss = r.beta * (row.dE_R - r.mu * row.dA_R)
        err = abs(gauss - oracle)
        if err >= worst:
            worst, where = err, f"theta_c={theta}, flow={float(gauss)!r}"
    return _upper("entropy_flow", worst, tol, where)


def first_order_entropy(d=60, theta=0.1, eps0=1e-2, eps_min=1e-4, band=(0.2, 0.3)):
    """Second-order scaling of the first-order entropy formula.

    ``rho`` is a thermal reservoir mode at ``beta0 = 1``; the perturbation is
    the change a weak collision with a squeezed system mode makes, normalized
    to unit trace norm. The residual is the largest distance of
    ``e(eps/2)/e(eps)`` from the middle of ``band``.
    """
    rho_r = fock.thermal_density(1.0, 1.0, d, pad=False)
    rho_s = _fock_system_state(1.5, 0.4, d)
    u = fock.beam_splitter_unitary(theta, d)
    out = fock.reduce(fock.evolve(u, fock.kron(rho_s, rho_r)), 1)
    drho = out.matrix - rho_r.matrix
    drho = drho - np.trace(drho) * np.eye(d) / d
    drho /= np.sum(np.abs(np.linalg.eigvalsh(drho)))
    eps = []
    e = eps0
    while e >= eps_min * (1 - 1e-12):
        eps.append(e)
        e *= 0.5
    eps.append(e)
    table = fock.verify_first_order_entropy(rho_r, drho, eps)
    ratios = [table[k + 1][1] / table[k][1] for k in range(len(table) - 1)]
    mid = 0.5 * (band[0] + band[1])
    dev = max(abs(q - mid) for q in ratios)
    detail = "ratios=" + ",".join(f"{q:.4f}" for q in ratios)
    return Check("first_order_entropy", dev, 0.5 * (band[1] - band[0]), bool(dev <= 0.5 * (band[1] - band[0])), detail)


def _random_state(rng, omega=1.0):
    n = rng.uniform(0.0, 3.0)
    s = apply(squeeze_op(rng.uniform(-1.5, 1.5)), make_thermal(n, omega))
    s = apply(rotation_op(rng.uniform(0, 2 * np.pi)), s)
    return GaussianState(rng.normal(0.0, 1.0, size=2), s.cov, [omega])


def _random_reservoir(rng):
    return ReservoirSpec(rng.uniform(0.2, 5.0), rng.uniform(0.0, 1.5))


def conservation(samples=200, seed=0, tol=1e-10, detuned_floor=1e-3):
    """Per-collision charge conservation at resonance and its failure off resonance.

    Returns two checks: the resonant residual (upper bound) and the smallest
    detuned residual (must exceed ``detuned_floor``).
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        r = _random_reservoir(rng)
        _, row = interact_step(_random_state(rng), CollisionConfig(rng.uniform(1e-3, np.pi / 2), r))
        worst = max(worst, abs(row.dE_S + row.dE_R), abs(row.dA_S + row.dA_R))
    r = ReservoirSpec(1.0, 0.5)
    detuned = _random_state(np.random.default_rng(seed + 1), omega=1.5)
    try:
        interact_step(detuned, CollisionConfig(0.3, r))
        raised = False
    except NonResonantError:
        raised = True
    _, row = interact_step(detuned, CollisionConfig(0.3, r), allow_detuned=True)
    gap = max(abs(row.dE_S + row.dE_R), abs(row.dA_S + row.dA_R))
    return [
        _upper("conservation_resonant", worst, tol, f"{samples} random collisions"),
        Check(
            "conservation_detuned",
            gap,
            detuned_floor,
            bool(raised and gap > detuned_floor),
            f"NonResonantError raised={raised}; residual must exceed the tolerance",
        ),
    ]


def second_law(samples=10000, seed=0, tol=1e-12):
    """Entropy production of single collisions over random (state, theta_c, xi, beta0).

    Returns the most negative Sigma (as ``-min``, must stay below ``tol``) and
    the largest |Sigma| at the fixed point.
    """
    rng = np.random.default_rng(seed)
    lowest = math.inf
    fixed = 0.0
    for k in range(samples):
        r = _random_reservoir(rng)
        cfg = CollisionConfig(rng.uniform(1e-3, np.pi / 2), r)
        _, row = interact_step(_random_state(rng), cfg)
        lowest = min(lowest, row.Sigma)
        if k % 100 == 0:
            _, row = interact_step(equilibrium_state(r), cfg)
            fixed = max(fixed, abs(row.Sigma))
    return [
        _upper("second_law", max(0.0, -lowest), tol, f"min Sigma={float(lowest)!r} over {samples} collisions"),
        _upper("second_law_fixed_point", fixed, tol),
    ]


def relaxation(r=None, theta_c=0.1, steps=2000, tol=1e-8):
    r = r or ReservoirSpec(1.0, 0.5)
    res = run_relaxation(vacuum(r.omega), CollisionConfig(theta_c, r, steps))
    dist = float(np.max(np.abs(res.final.cov - equilibrium_state(r).cov)))
    return _upper("relaxation_fixed_point", dist, tol, f"{steps} collisions at theta_c={theta_c}")


def work_bound(r=None, n=1000, seed=0, samples=5, tol=1e-9):
    """``W_ext <= W_sq`` for identity, unsqueezer and random ``U1``."""
    r = r or ReservoirSpec(1.0, 0.5)
    rng = np.random.default_rng(seed)
    family = [unsqueezer(r), squeeze_op(0.0)] + [random_gaussian_unitary(rng) for _ in range(samples)]
    worst = -math.inf
    for u in family:
        for stroke2 in ("reversible", "relaxation"):
            try:
                rep, _ = run_cycle(r, u, n, stroke2=stroke2)
            except InvariantError:
                return Check("work_bound", math.inf, tol, False, "cycle raised the bound violation")
            worst = max(worst, rep.W_ext - rep.W_sq)
    return _upper("work_bound", max(0.0, worst), tol, f"max W_ext - W_sq = {float(worst)!r}")


def run_all(cfg):
    """All suites for a :class:`~squeezebath.config.ScenarioConfig`."""
    o = cfg.oracle
    r = cfg.reservoir_spec
    checks = [
        gge_equivalence(d=o.dim, tol=o.tolerance),
        entropy_flow(d=o.flow_dim),
        first_order_entropy(d=o.dim),
        *conservation(seed=o.seed),
        *second_law(samples=o.samples, seed=o.seed),
        relaxation(r, cfg.collision.theta_c, cfg.collision.steps),
        work_bound(r, seed=o.seed),
    ]
    return checks

"""
Command-line front end.

    squeezebath equilibrium --config scenario.yaml
    squeezebath relax --out runs/
    squeezebath cycle --config scenario.yaml --seed 3
    squeezebath scan --format json
    squeezebath verify

Exit codes: 0 success, 1 configuration error, 2 invariant failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import tempfile

import numpy as np

from . import config as cfgmod
from . import protocols, verify
from .fock import TruncationError
from .collisions import run_relaxation, trajectory_csv
from .gaussian import DomainError, asymmetry, energy, entropy, squeeze_op, vacuum
from .reservoir import equilibrium_state, omega_equilibrium, xi_star

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INVARIANT = 2
EXIT_IO = 3

log = logging.getLogger("squeezebath")


class InvariantFailure(RuntimeError):
    pass


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_pairs(d):
    lines = ["key,value"] + [f"{k},{_fmt(v)}" for k, v in sorted(d.items())]
    return "\n".join(lines) + "\n"


def _fmt(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def _out(cfg, name):
    return os.path.join(cfg.output.directory, name)


def cmd_equilibrium(cfg):
    r = cfg.reservoir_spec
    eq = equilibrium_state(r)
    report = {
        "beta0": r.beta0,
        "xi": r.xi,
        "omega": r.omega,
        "beta": float(r.beta),
        "mu": r.mu,
        "n_th": r.n_th(),
        "energy": energy(eq),
        "asymmetry": asymmetry(eq),
        "entropy": entropy(eq),
        "ln_z": float(r.ln_z()),
        "grand_potential": float(omega_equilibrium(r)),
        "xi_star": xi_star(r.beta0 * r.omega),
    }
    print(_json(report), end="")
    if cfg.output.format == "json":
        write_atomic(_out(cfg, "equilibrium.json"), _json(report))
    else:
        write_atomic(_out(cfg, "equilibrium.csv"), _csv_pairs(report))
    return report


def cmd_relax(cfg):
    r = cfg.reservoir_spec
    res = run_relaxation(vacuum(r.omega), cfg.collision_config)
    summary = {
        "steps": cfg.collision.steps,
        "theta_c": cfg.collision.theta_c,
        "final_distance": float(res.distances[-1]),
        "final_cov": res.final.cov.tolist(),
        "totals": res.ledger.totals(),
    }
    if cfg.output.format == "json":
        summary["distances"] = res.distances.tolist()
        write_atomic(_out(cfg, "relax.json"), _json(summary))
    else:
        write_atomic(_out(cfg, "relax_trajectory.csv"), trajectory_csv(res))
        write_atomic(_out(cfg, "relax_ledger.csv"), res.ledger.to_csv())
    print(f"relaxation: {summary['steps']} collisions, final distance {summary['final_distance']:.3e}")
    return summary


def _u1(cfg, r):
    p = cfg.protocol
    if p.u1 == "unsqueeze":
        return protocols.unsqueezer(r), ()
    if p.u1 == "random":
        return protocols.random_gaussian_unitary(np.random.default_rng(cfg.oracle.seed)), ()
    ident = squeeze_op(0.0)
    if p.u1 == "loop":
        return ident, protocols.squeeze_loop(r, p.loop_squeeze, p.loop_omega_ratio)
    return ident, ()


def cmd_cycle(cfg):
    r = cfg.reservoir_spec
    p = cfg.protocol
    u1, waypoints = _u1(cfg, r)
    kappa = protocols.collision_kappa(p.gibbs_collisions, cfg.collision.theta_c) if p.gibbs_collisions else 0.0
    try:
        report, ledger = protocols.run_cycle(
            r,
            u1,
            p.steps,
            stroke2=p.stroke2,
            waypoints=waypoints,
            schedule=p.schedule,
            kappa=kappa,
            relaxation=cfg.collision_config,
        )
    except protocols.InvariantError as exc:
        raise InvariantFailure(str(exc)) from exc
    write_atomic(_out(cfg, "cycle_report.json"), report.to_json() + "\n")
    write_atomic(_out(cfg, "cycle_ledger.csv"), ledger.to_csv())
    print(
        f"cycle: W_ext={report.W_ext:.6g} W_sq={report.W_sq:.6g} "
        f"ergotropy={report.ergotropy:.6g} sigma={report.sigma_total:.3e}"
    )
    return report


def cmd_scan(cfg):
    s = cfg.scan
    rows = protocols.ergotropy_scan(s.beta0_omega, s.grid())
    if cfg.output.units == "omega":
        # absolute values for omega = 1: multiply by coth(beta0 omega / 2)
        unit = 1.0 / math.tanh(0.5 * s.beta0_omega)
        rows = [dict(row, ergotropy=row["ergotropy"] * unit, W_sq=row["W_sq"] * unit) for row in rows]
    if cfg.output.format == "json":
        payload = {"beta0_omega": s.beta0_omega, "units": cfg.output.units, "xi_star": xi_star(s.beta0_omega), "rows": rows}
        write_atomic(_out(cfg, "scan.json"), _json(payload))
    else:
        write_atomic(_out(cfg, "scan.csv"), protocols.scan_csv(rows))
    print(f"scan: {len(rows)} points, xi_star={xi_star(s.beta0_omega):.4f}")
    return rows


def cmd_verify(cfg):
    checks = verify.run_all(cfg)
    ok = all(c.passed for c in checks)
    summary = {"passed": ok, "checks": [c.to_dict() for c in checks]}
    write_atomic(_out(cfg, "verify.json"), _json(summary))
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name}: residual={c.residual:.3e} tolerance={c.tolerance:.1e} {c.detail}")
    if not ok:
        failed = ", ".join(c.name for c in checks if not c.passed)
        raise InvariantFailure(f"failed invariants: {failed}")
    return summary


COMMANDS = {
    "equilibrium": cmd_equilibrium,
    "relax": cmd_relax,
    "cycle": cmd_cycle,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="squeezebath",
        description="Thermodynamics of a bosonic mode coupled to a squeezed thermal reservoir",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="YAML scenario file (defaults are used when omitted)")
    parser.add_argument("--out", help="output directory (overrides output.directory)")
    parser.add_argument("--seed", type=int, help="seed for sampled suites and random U1")
    parser.add_argument("--format", choices=cfgmod.FORMAT_CHOICES, help="artifact format")
    return parser


def _load(args):
    cfg = cfgmod.load(args.config) if args.config else cfgmod.ScenarioConfig().validate()
    if args.out is not None:
        cfg.output.directory = args.out
    if args.seed is not None:
        cfg.oracle.seed = args.seed
    if args.format is not None:
        cfg.output.format = args.format
    return cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _load(args)
    except cfgmod.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    try:
        COMMANDS[args.command](cfg)
    except InvariantFailure as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationError as exc:
        print(f"config error: oracle dimension too small ({exc})", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

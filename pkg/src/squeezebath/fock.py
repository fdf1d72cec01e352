"""
Brute-force reference in a truncated number basis.

Everything here is built from ladder-operator matrices and Hermitian
eigendecompositions, without touching the phase-space formulas, so it can be
used to check them. Single-mode constructors accept a requested dimension ``d``
and, when ``pad`` is set, grow the working dimension until the probability on
the top levels is below ``tail_tol``; :meth:`FockOperator.truncate` recovers the
``d x d`` block.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

log = logging.getLogger(__name__)

DEFAULT_DIM = 60
TAIL_LEVELS = 5
MAX_DIM = 2000


class TruncationError(RuntimeError):
    """Raised when the truncated space holds too little of the state."""

    def __init__(self, tail_mass, dim):
        super().__init__(f"truncation tail mass {tail_mass:.3e} on top levels at dimension {dim}")
        self.tail_mass = tail_mass
        self.dim = dim


class NotHermitianError(ValueError):
    pass


class NegativeStateError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Matrix of an operator in the number basis of one or two modes."""

    matrix: np.ndarray
    modes: int = 1

    @property
    def dim(self):
        """Per-mode truncation dimension."""
        n = self.matrix.shape[0]
        return n if self.modes == 1 else math.isqrt(n)

    def tail_mass(self, levels=TAIL_LEVELS):
        """Population on the top ``levels`` number states (of every mode)."""
        diag = np.real(np.diag(self.matrix))
        if self.modes == 1:
            return float(np.sum(diag[-levels:]))
        d = self.dim
        occ = diag.reshape(d, d)
        return float(np.sum(occ[-levels:, :]) + np.sum(occ[:-levels, -levels:]))

    def truncate(self, d):
        if self.modes != 1:
            raise ValueError("truncate is defined for single-mode operators")
        return FockOperator(self.matrix[:d, :d])

    def trace(self):
        return complex(np.trace(self.matrix)).real

    def __sub__(self, other):
        return FockOperator(self.matrix - other.matrix, self.modes)


def annihilation(d):
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1)


def number(d):
    return np.diag(np.arange(d, dtype=float))


def quadratures(d):
    a = annihilation(d)
    x = (a + a.T) / np.sqrt(2)
    p = 1j * (a.T - a) / np.sqrt(2)
    return x, p


def hamiltonian(omega, d):
    return omega * number(d)


def asymmetry_operator(omega, d):
    """``-(omega/2)(a^dag^2 + a^2)``."""
    a = annihilation(d)
    return -0.5 * omega * (a.T @ a.T + a @ a)


def _check_hermitian(m, tol=1e-10):
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.conj().T)) > tol * scale:
        raise NotHermitianError("operator is not Hermitian")


def _eigh(rho):
    m = rho.matrix if isinstance(rho, FockOperator) else np.asarray(rho)
    _check_hermitian(m)
    return np.linalg.eigh(0.5 * (m + m.conj().T))


def _spectrum(rho):
    w, v = _eigh(rho)
    if w[0] < -1e-12:
        raise NegativeStateError(f"density operator has eigenvalue {w[0]:.3e}")
    if w[0] < 0:
        log.warning("clipping negative eigenvalue %.3e to zero", w[0])
        w = np.clip(w, 0.0, None)
        w = w / w.sum()
    return w, v


def _from_exponent(generator):
    """Normalized ``exp(-generator)`` by eigendecomposition."""
    w, v = np.linalg.eigh(generator)
    e = np.exp(-(w - w.min()))
    rho = (v * e) @ v.conj().T
    return rho / np.trace(rho).real


def _grow(build, d, pad, tail_tol):
    dim = d
    while True:
        rho = build(dim)
        tail = rho.tail_mass()
        if tail < tail_tol:
            return rho
        if not pad or dim >= MAX_DIM:
            raise TruncationError(tail, dim)
        dim = min(MAX_DIM, int(math.ceil(dim * 1.5)))


def _start_dim(d, beta0_omega, xi, tail_tol):
    # geometric tail of the squeezed thermal number distribution
    var = (0.5 / math.tanh(0.5 * beta0_omega)) * math.exp(2 * abs(xi))
    ratio = (var - 0.5) / (var + 0.5)
    if ratio <= 0:
        return d
    guess = int(math.log(tail_tol) / math.log(ratio)) + 40
    return max(d, min(guess, MAX_DIM))


def thermal_density(beta0, omega, d=DEFAULT_DIM, *, pad=True, tail_tol=1e-12):
    def build(dim):
        p = np.exp(-beta0 * omega * np.arange(dim))
        return FockOperator(np.diag(p / p.sum()))

    return _grow(build, _start_dim(d, beta0 * omega, 0.0, tail_tol) if pad else d, pad, tail_tol)


def squeeze_unitary(xi, d=DEFAULT_DIM):
    """``exp((xi/2)(a^2 - a^dag^2))`` in the truncated space."""
    a = annihilation(d)
    return FockOperator(expm(0.5 * xi * (a @ a - a.T @ a.T)))


def squeezed_thermal_density(beta0, xi, omega, d=DEFAULT_DIM, *, pad=True, tail_tol=1e-12):
    """Squeezer applied to a thermal state: ``S rho_th S^dag``."""

    def build(dim):
        p = np.exp(-beta0 * omega * np.arange(dim))
        s = squeeze_unitary(xi, dim).matrix
        rho = (s * (p / p.sum())) @ s.T
        return FockOperator(0.5 * (rho + rho.T))

    return _grow(build, _start_dim(d, beta0 * omega, xi, tail_tol) if pad else d, pad, tail_tol)


def gge_density(beta0, xi, omega, d=DEFAULT_DIM, *, pad=True, tail_tol=1e-12):
    """``exp(-beta(H - mu A))/Z`` with ``beta = beta0 cosh 2xi`` and ``mu = tanh 2xi``."""
    beta = beta0 * math.cosh(2 * xi)
    mu = math.tanh(2 * xi)

    def build(dim):
        gen = beta * (hamiltonian(omega, dim) - mu * asymmetry_operator(omega, dim))
        return FockOperator(_from_exponent(gen))

    return _grow(build, _start_dim(d, beta0 * omega, xi, tail_tol) if pad else d, pad, tail_tol)


def trace_norm(a, b):
    m = (a.matrix if isinstance(a, FockOperator) else a) - (
        b.matrix if isinstance(b, FockOperator) else b
    )
    return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (m + m.conj().T)))))


def entropy_exact(rho):
    w, _ = _spectrum(rho)
    w = w[w > 0]
    return float(-np.sum(w * np.log(w)))


def log_density(rho, floor=1e-300):
    """Matrix logarithm of a full-rank density operator."""
    w, v = _spectrum(rho)
    return (v * np.log(np.maximum(w, floor))) @ v.conj().T


def relative_entropy_exact(rho, sigma, support_tol=1e-15):
    """``Tr[rho (ln rho - ln sigma)]``.

    Directions where ``sigma`` is below ``support_tol`` times its largest
    eigenvalue are dropped; the weight ``rho`` puts there must be below 1e-10.
    """
    ws, vs = _spectrum(sigma)
    r = rho.matrix if isinstance(rho, FockOperator) else rho
    weights = np.real(np.einsum("ik,ij,jk->k", vs.conj(), r, vs))
    keep = ws > support_tol * ws.max()
    lost = float(np.sum(weights[~keep]))
    if lost > 1e-10:
        raise ValueError(f"rho has weight {lost:.3e} outside the support of sigma")
    cross = float(np.sum(weights[keep] * np.log(ws[keep])))
    return -entropy_exact(rho) - cross


def expectation(rho, op):
    m = rho.matrix if isinstance(rho, FockOperator) else rho
    return float(np.real(np.trace(m @ op)))


def moments(rho):
    """Means ``(x, p)`` and symmetrized covariance of a single-mode density operator."""
    d = rho.dim
    x, p = quadratures(d)
    mx = expectation(rho, x)
    mp = expectation(rho, p)
    xx = expectation(rho, x @ x) - mx * mx
    pp = expectation(rho, p @ p) - mp * mp
    xp = 0.5 * expectation(rho, x @ p + p @ x) - mx * mp
    return np.array([mx, mp]), np.array([[xx, xp], [xp, pp]])


# two-mode pieces


def kron(a, b):
    return FockOperator(np.kron(a.matrix, b.matrix), modes=2)


def beam_splitter_unitary(theta, d=DEFAULT_DIM):
    """``exp(theta (a^dag b - a b^dag))`` on two modes of dimension ``d``.

    Same mixing convention as the phase-space beam splitter: the Heisenberg
    image of ``a`` is ``cos(theta) a + sin(theta) b``. The generator preserves
    the total number, so the exponential is taken block by block.
    """
    u = np.zeros((d * d, d * d))
    for total in range(2 * d - 1):
        na = np.arange(max(0, total - d + 1), min(total, d - 1) + 1)
        idx = na * d + (total - na)
        k = na.size
        gen = np.zeros((k, k))
        for i in range(k - 1):
            # <na+1, nb-1| a^dag b |na, nb>
            amp = math.sqrt((na[i] + 1) * (total - na[i]))
            gen[i + 1, i] = amp
            gen[i, i + 1] = -amp
        u[np.ix_(idx, idx)] = expm(theta * gen)
    return FockOperator(u, modes=2)


def evolve(u, rho):
    m = u.matrix @ rho.matrix @ u.matrix.conj().T
    return FockOperator(0.5 * (m + m.conj().T), modes=rho.modes)


def reduce(rho2, keep):
    """Partial trace of a two-mode operator; ``keep`` is 0 or 1."""
    d = rho2.dim
    t = rho2.matrix.reshape(d, d, d, d)
    m = np.einsum("ijkj->ik", t) if keep == 0 else np.einsum("jijk->ik", t)
    return FockOperator(m)


def verify_first_order_entropy(rho, drho, eps_list):
    """Error of the first-order entropy change for each ``eps``.

    Returns a list of ``(eps, e)`` with
    ``e = |S(rho + eps*drho) - S(rho) + eps*Tr[drho ln rho]|``.
    """
    r = rho.matrix if isinstance(rho, FockOperator) else rho
    dr = drho.matrix if isinstance(drho, FockOperator) else drho
    _check_hermitian(dr)
    if abs(np.trace(dr)) > 1e-10:
        raise ValueError("perturbation must be traceless")
    s0 = entropy_exact(r)
    first = float(np.real(np.trace(dr @ log_density(r))))
    table = []
    for eps in eps_list:
        s1 = entropy_exact(r + eps * dr)
        table.append((float(eps), abs(s1 - s0 + eps * first)))
    return table

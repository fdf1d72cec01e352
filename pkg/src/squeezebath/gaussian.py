"""
Gaussian states of bosonic modes and their symplectic evolution.

Quadratures are dimensionless, ``x = (a + a^dag)/sqrt(2)`` and
``p = i(a^dag - a)/sqrt(2)``, so the vacuum covariance is ``I/2``. Phase-space
vectors are ordered ``(x1, p1, x2, p2, ...)``. Units: hbar = k_B = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SYMMETRY_TOL = 1e-12
UNCERTAINTY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-10

_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


class DomainError(ValueError):
    """Raised for arguments outside the domain of an operation."""


class InvalidStateError(ValueError):
    """Raised when a covariance matrix violates the uncertainty principle."""


def symplectic_form(n_modes):
    """Return the 2M x 2M standard symplectic form for ``(x1, p1, ...)`` ordering."""
    return np.kron(np.eye(n_modes), _J2)


def _frozen(arr):
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


def _block(mode):
    return slice(2 * mode, 2 * mode + 2)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First and second moments of an M-mode Gaussian state.

    Parameters
    ----------
    means : array_like, shape (2M,)
        Quadrature means.
    cov : array_like, shape (2M, 2M)
        Symmetrized covariance matrix.
    freqs : array_like, shape (M,)
        Positive mode frequencies.
    """

    means: np.ndarray
    cov: np.ndarray
    freqs: np.ndarray
    _nu: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        means = _frozen(self.means).reshape(-1)
        cov = _frozen(self.cov)
        freqs = _frozen(np.atleast_1d(self.freqs))
        m = freqs.size
        if means.shape != (2 * m,) or cov.shape != (2 * m, 2 * m):
            raise DomainError(
                f"shape mismatch: {m} modes need means (2M,) and cov (2M, 2M), "
                f"got {means.shape} and {cov.shape}"
            )
        if np.any(freqs <= 0):
            raise DomainError("mode frequencies must be positive")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * scale:
            raise InvalidStateError("covariance matrix is not symmetric")
        nu = _symplectic_spectrum(cov)
        if nu[0] < 0.5 - UNCERTAINTY_TOL * scale:
            raise InvalidStateError(
                f"uncertainty principle violated: smallest symplectic eigenvalue {nu[0]!r} < 1/2"
            )
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "_nu", _frozen(nu))

    @property
    def n_modes(self):
        return self.freqs.size

    def mode_block(self, mode):
        """Return ``(means, cov)`` of one mode."""
        _check_mode(self, mode)
        sl = _block(mode)
        return self.means[sl], self.cov[sl, sl]

    def allclose(self, other, atol=1e-12):
        return (
            self.n_modes == other.n_modes
            and np.allclose(self.means, other.means, rtol=0, atol=atol)
            and np.allclose(self.cov, other.cov, rtol=0, atol=atol)
            and np.allclose(self.freqs, other.freqs, rtol=0, atol=atol)
        )


def _symplectic_spectrum(cov):
    m = cov.shape[0] // 2
    if m == 1:
        det = cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0]
        return np.array([np.sqrt(max(det, 0.0))])
    ev = np.linalg.eigvals(symplectic_form(m) @ cov)
    return np.sort(np.abs(ev.imag))[::2]


def _check_mode(s, mode):
    if not 0 <= mode < s.n_modes:
        raise DomainError(f"mode index {mode} out of range for {s.n_modes}-mode state")


@dataclass(frozen=True, eq=False)
class SymplecticOp:
    """Linear phase-space map; validated against the symplectic form on construction."""

    mat: np.ndarray

    def __post_init__(self):
        mat = _frozen(self.mat)
        n = mat.shape[0]
        if mat.ndim != 2 or mat.shape != (n, n) or n % 2:
            raise DomainError(f"symplectic matrix must be 2M x 2M, got {mat.shape}")
        omega = symplectic_form(n // 2)
        scale = max(1.0, float(np.max(np.abs(mat))) ** 2)
        if np.max(np.abs(mat @ omega @ mat.T - omega)) > SYMPLECTIC_TOL * scale:
            raise DomainError("matrix does not preserve the symplectic form")
        object.__setattr__(self, "mat", mat)

    @property
    def n_modes(self):
        return self.mat.shape[0] // 2

    def __matmul__(self, other):
        return SymplecticOp(self.mat @ other.mat)

    def inverse(self):
        omega = symplectic_form(self.n_modes)
        return SymplecticOp(-omega @ self.mat.T @ omega)

    @classmethod
    def identity(cls, n_modes=1):
        return cls(np.eye(2 * n_modes))


def _embed(block, modes, n_modes):
    if n_modes < 1 or any(not 0 <= k < n_modes for k in modes):
        raise DomainError(f"mode indices {modes} out of range for {n_modes} modes")
    mat = np.eye(2 * n_modes)
    idx = np.concatenate([[2 * k, 2 * k + 1] for k in modes])
    mat[np.ix_(idx, idx)] = block
    return SymplecticOp(mat)


def squeeze_op(xi, mode=0, n_modes=1):
    """Single-mode squeezer with phase 0: x scaled by exp(-xi), p by exp(xi)."""
    if not np.isfinite(xi):
        raise DomainError("squeezing parameter must be finite")
    return _embed(np.diag([np.exp(-xi), np.exp(xi)]), [mode], n_modes)


def rotation_op(phi, mode=0, n_modes=1):
    """Phase rotation ``a -> a exp(-i phi)`` of one mode."""
    c, s = np.cos(phi), np.sin(phi)
    return _embed(np.array([[c, s], [-s, c]]), [mode], n_modes)


def beam_splitter_op(theta, modes=(0, 1), n_modes=2):
    """Energy- and asymmetry-conserving mixer of two modes.

    Acts identically on both quadratures: ``x_i' = cos(theta) x_i + sin(theta) x_j``
    and ``x_j' = -sin(theta) x_i + cos(theta) x_j``.
    """
    i, j = modes
    if i == j:
        raise DomainError("beam splitter needs two distinct modes")
    c, s = np.cos(theta), np.sin(theta)
    block = np.kron(np.array([[c, s], [-s, c]]), np.eye(2))
    return _embed(block, [i, j], n_modes)


def make_thermal(n_th, omega):
    """Single-mode thermal state with mean occupation ``n_th``."""
    if not n_th >= 0:
        raise DomainError(f"mean occupation must be >= 0, got {n_th}")
    if not omega > 0:
        raise DomainError(f"frequency must be > 0, got {omega}")
    return GaussianState(np.zeros(2), (n_th + 0.5) * np.eye(2), [omega])


def vacuum(omega=1.0, n_modes=1):
    return GaussianState(np.zeros(2 * n_modes), 0.5 * np.eye(2 * n_modes), [omega] * n_modes)


def bose_occupation(beta_omega):
    """Mean occupation ``1/(exp(beta*omega) - 1)``."""
    return 1.0 / np.expm1(beta_omega)


def apply(op, s):
    if op.n_modes != s.n_modes:
        raise DomainError(f"op acts on {op.n_modes} modes, state has {s.n_modes}")
    m = op.mat
    return GaussianState(m @ s.means, m @ s.cov @ m.T, s.freqs)


def tensor(a, b):
    m_a = 2 * a.n_modes
    cov = np.zeros((m_a + 2 * b.n_modes,) * 2)
    cov[:m_a, :m_a] = a.cov
    cov[m_a:, m_a:] = b.cov
    return GaussianState(
        np.concatenate([a.means, b.means]), cov, np.concatenate([a.freqs, b.freqs])
    )


def partial_trace(s, keep):
    """Reduced state on the modes listed in ``keep`` (in the given order)."""
    keep = list(keep)
    if not keep:
        raise DomainError("keep-set must not be empty")
    for k in keep:
        _check_mode(s, k)
    idx = np.concatenate([[2 * k, 2 * k + 1] for k in keep])
    return GaussianState(s.means[idx], s.cov[np.ix_(idx, idx)], s.freqs[keep])


def symplectic_eigenvalues(s):
    return s._nu.copy()


def _entropy_terms(nu):
    nu = np.maximum(np.asarray(nu, dtype=float), 0.5)
    plus = nu + 0.5
    minus = nu - 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        lm = np.where(minus > 0, minus * np.log(np.where(minus > 0, minus, 1.0)), 0.0)
    return plus * np.log(plus) - lm


def entropy(s):
    """Von Neumann entropy from the symplectic spectrum."""
    return float(np.sum(_entropy_terms(s._nu)))


def energy(s, mode=0):
    """Mean of ``omega a^dag a`` for one mode (zero-point excluded)."""
    (mx, mp), c = s.mode_block(mode)
    return float(s.freqs[mode] * (0.5 * (c[0, 0] + c[1, 1]) + 0.5 * (mx * mx + mp * mp) - 0.5))


def asymmetry(s, mode=0):
    """Mean of ``(omega/2)(p^2 - x^2)``, including the displacement terms."""
    (mx, mp), c = s.mode_block(mode)
    return float(0.5 * s.freqs[mode] * (c[1, 1] + mp * mp - c[0, 0] - mx * mx))


@dataclass(frozen=True, eq=False)
class ModeFrame:
    """Hamiltonian ``omega b^dag b`` of a mode ``b`` with quadratures ``basis @ (x, p)``.

    The asymmetry operator attached to the frame is ``(omega/2)(p_b^2 - x_b^2)``.
    The bare frame (identity basis) gives the undriven mode Hamiltonian.
    """

    omega: float
    basis: np.ndarray = field(default_factory=lambda: np.eye(2))

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"frame frequency must be > 0, got {self.omega}")
        basis = SymplecticOp(self.basis).mat
        if basis.shape != (2, 2):
            raise DomainError("frame basis must be a single-mode symplectic matrix")
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "basis", basis)

    def _moments(self, s, mode):
        m, c = s.mode_block(mode)
        t = self.basis
        return t @ m, t @ c @ t.T

    def energy(self, s, mode=0):
        (mx, mp), c = self._moments(s, mode)
        return float(self.omega * (0.5 * (c[0, 0] + c[1, 1]) + 0.5 * (mx * mx + mp * mp) - 0.5))

    def asymmetry(self, s, mode=0):
        (mx, mp), c = self._moments(s, mode)
        return float(0.5 * self.omega * (c[1, 1] + mp * mp - c[0, 0] - mx * mx))


def single_mode_williamson(cov):
    """Williamson form of a single-mode covariance.

    Returns ``(nu, s)`` with ``cov = nu * s @ s.T``; ``s`` is the symmetric positive
    square root of ``cov/nu``, so ``s`` is the identity for a symmetric state.
    """
    cov = np.asarray(cov, dtype=float)
    nu = float(np.sqrt(cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0]))
    a = cov / nu
    s = (a + np.eye(2)) / np.sqrt(np.trace(a) + 2.0)
    return nu, s


def relative_entropy_to_gge(s, r, frame=None, mode=0):
    """Relative entropy ``D(s || eq)`` to the equilibrium state of reservoir ``r``.

    ``r`` supplies ``beta``, ``mu``, ``omega`` and ``ln_z(omega)``. With ``frame``
    the equilibrium is taken for the frame's Hamiltonian and asymmetry.
    """
    if frame is None:
        if abs(s.freqs[mode] - r.omega) > 1e-12 * max(1.0, r.omega):
            raise DomainError(
                f"mode frequency {s.freqs[mode]} is not resonant with reservoir {r.omega}"
            )
        frame = ModeFrame(r.omega)
    red = partial_trace(s, [mode]) if s.n_modes > 1 else s
    return float(
        -entropy(red)
        + r.beta * (frame.energy(s, mode) - r.mu * frame.asymmetry(s, mode))
        + r.ln_z(frame.omega)
    )

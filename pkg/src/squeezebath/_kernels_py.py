"""Pure-Python versions of the single-mode inner loops (fallback for ``_kernels``)."""

import math

import numpy as np


def _entropy(det):
    nu = math.sqrt(det) if det > 0.25 else 0.5
    out = (nu + 0.5) * math.log(nu + 0.5)
    if nu > 0.5:
        out -= (nu - 0.5) * math.log(nu - 0.5)
    return out


def collide_sweep(sxx, sxp, spp, mx, mp, rxx, rxp, rpp, theta, steps, omega_s, omega_r):
    """Repeated partial swaps of one system mode with fresh reservoir modes.

    Returns ``(traj, rows)``: ``traj[k] = (sxx, sxp, spp, mx, mp)`` after ``k``
    collisions and ``rows[k] = (dE_S, dE_R, dA_S, dA_R, dS_S)`` for collision ``k+1``.
    """
    c = math.cos(theta)
    s = math.sin(theta)
    c2 = c * c
    s2 = s * s
    traj = np.empty((steps + 1, 5))
    rows = np.empty((steps, 5))
    traj[0] = (sxx, sxp, spp, mx, mp)
    e_r0 = 0.5 * (rxx + rpp) - 0.5
    a_r0 = 0.5 * (rpp - rxx)
    for k in range(steps):
        nxx = c2 * sxx + s2 * rxx
        nxp = c2 * sxp + s2 * rxp
        npp = c2 * spp + s2 * rpp
        nmx = c * mx
        nmp = c * mp
        oxx = s2 * sxx + c2 * rxx
        opp = s2 * spp + c2 * rpp
        omx = -s * mx
        omp = -s * mp
        e_old = 0.5 * (sxx + spp) + 0.5 * (mx * mx + mp * mp) - 0.5
        e_new = 0.5 * (nxx + npp) + 0.5 * (nmx * nmx + nmp * nmp) - 0.5
        a_old = 0.5 * (spp + mp * mp - sxx - mx * mx)
        a_new = 0.5 * (npp + nmp * nmp - nxx - nmx * nmx)
        e_out = 0.5 * (oxx + opp) + 0.5 * (omx * omx + omp * omp) - 0.5
        a_out = 0.5 * (opp + omp * omp - oxx - omx * omx)
        ds = _entropy(nxx * npp - nxp * nxp) - _entropy(sxx * spp - sxp * sxp)
        rows[k, 0] = omega_s * (e_new - e_old)
        rows[k, 1] = omega_r * (e_out - e_r0)
        rows[k, 2] = omega_s * (a_new - a_old)
        rows[k, 3] = omega_r * (a_out - a_r0)
        rows[k, 4] = ds
        sxx, sxp, spp, mx, mp = nxx, nxp, npp, nmx, nmp
        traj[k + 1, 0] = sxx
        traj[k + 1, 1] = sxp
        traj[k + 1, 2] = spp
        traj[k + 1, 3] = mx
        traj[k + 1, 4] = mp
    return traj, rows


def _frame_moments(t00, t01, t10, t11, sxx, sxp, spp):
    # T sigma T^T, only the diagonal is needed
    cxx = t00 * t00 * sxx + 2.0 * t00 * t01 * sxp + t01 * t01 * spp
    cpp = t10 * t10 * sxx + 2.0 * t10 * t11 * sxp + t11 * t11 * spp
    return cxx, cpp


def quasi_static_sweep(omegas, bases, sxx, sxp, spp, beta0, xi, kappa):
    """Alternate sudden frame changes with partial re-equilibration.

    ``omegas[n]`` and ``bases[n]`` describe the Hamiltonian frame after step
    ``n``; ``bases[0]`` is the starting frame. Each step quenches the frame
    ``n-1 -> n`` at fixed state, then sets the covariance to
    ``kappa * cov + (1 - kappa) * cov_eq(n)``. Returns ``(rows, traj)`` with
    ``traj[n] = (sxx, sxp, spp)`` after step ``n`` and
    ``rows[n-1] = (W, Asym, dE, dA, dS)`` for the work and asymmetry injected
    by the quench and the energy/asymmetry/entropy change of the relaxation.
    """
    omegas = np.asarray(omegas, dtype=float).tolist()
    bases = np.asarray(bases, dtype=float).tolist()
    n_steps = len(omegas) - 1
    rows = np.empty((n_steps, 5))
    traj = np.empty((n_steps + 1, 3))
    traj[0] = (sxx, sxp, spp)
    e2 = math.exp(-2.0 * xi)
    e2i = math.exp(2.0 * xi)
    w_prev = omegas[0]
    (p00, p01), (p10, p11) = bases[0]
    for n in range(1, n_steps + 1):
        w = omegas[n]
        (t00, t01), (t10, t11) = bases[n]
        oxx, opp = _frame_moments(p00, p01, p10, p11, sxx, sxp, spp)
        cxx, cpp = _frame_moments(t00, t01, t10, t11, sxx, sxp, spp)
        e_before = w_prev * (0.5 * (oxx + opp) - 0.5)
        a_before = 0.5 * w_prev * (opp - oxx)
        e_mid = w * (0.5 * (cxx + cpp) - 0.5)
        a_mid = 0.5 * w * (cpp - cxx)
        # equilibrium covariance T^-1 D T^-T, det T = 1
        g = 0.5 / math.tanh(0.5 * beta0 * w)
        dxx = g * e2
        dpp = g * e2i
        qxx = t11 * t11 * dxx + t01 * t01 * dpp
        qxp = -t11 * t10 * dxx - t01 * t00 * dpp
        qpp = t10 * t10 * dxx + t00 * t00 * dpp
        nxx = kappa * sxx + (1.0 - kappa) * qxx
        nxp = kappa * sxp + (1.0 - kappa) * qxp
        npp = kappa * spp + (1.0 - kappa) * qpp
        fxx, fpp = _frame_moments(t00, t01, t10, t11, nxx, nxp, npp)
        e_after = w * (0.5 * (fxx + fpp) - 0.5)
        a_after = 0.5 * w * (fpp - fxx)
        rows[n - 1, 0] = e_mid - e_before
        rows[n - 1, 1] = a_mid - a_before
        rows[n - 1, 2] = e_after - e_mid
        rows[n - 1, 3] = a_after - a_mid
        rows[n - 1, 4] = _entropy(nxx * npp - nxp * nxp) - _entropy(sxx * spp - sxp * sxp)
        sxx, sxp, spp = nxx, nxp, npp
        traj[n] = (sxx, sxp, spp)
        w_prev = w
        p00, p01, p10, p11 = t00, t01, t10, t11
    return rows, traj

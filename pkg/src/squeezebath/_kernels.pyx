# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled single-mode inner loops. Same signatures and semantics as ``_kernels_py``."""

import numpy as np
from libc.math cimport cos, sin, sqrt, log, exp, tanh


cdef inline double _entropy(double det) nogil:
    cdef double nu = sqrt(det) if det > 0.25 else 0.5
    cdef double out = (nu + 0.5) * log(nu + 0.5)
    if nu > 0.5:
        out -= (nu - 0.5) * log(nu - 0.5)
    return out


def collide_sweep(double sxx, double sxp, double spp, double mx, double mp,
                  double rxx, double rxp, double rpp, double theta, Py_ssize_t steps,
                  double omega_s, double omega_r):
    cdef double c = cos(theta)
    cdef double s = sin(theta)
    cdef double c2 = c * c
    cdef double s2 = s * s
    traj_arr = np.empty((steps + 1, 5))
    rows_arr = np.empty((steps, 5))
    cdef double[:, ::1] traj = traj_arr
    cdef double[:, ::1] rows = rows_arr
    cdef double e_r0 = 0.5 * (rxx + rpp) - 0.5
    cdef double a_r0 = 0.5 * (rpp - rxx)
    cdef double nxx, nxp, npp, nmx, nmp, oxx, opp, omx, omp
    cdef double e_old, e_new, a_old, a_new, e_out, a_out
    cdef Py_ssize_t k
    traj[0, 0] = sxx
    traj[0, 1] = sxp
    traj[0, 2] = spp
    traj[0, 3] = mx
    traj[0, 4] = mp
    with nogil:
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
            rows[k, 0] = omega_s * (e_new - e_old)
            rows[k, 1] = omega_r * (e_out - e_r0)
            rows[k, 2] = omega_s * (a_new - a_old)
            rows[k, 3] = omega_r * (a_out - a_r0)
            rows[k, 4] = _entropy(nxx * npp - nxp * nxp) - _entropy(sxx * spp - sxp * sxp)
            sxx = nxx
            sxp = nxp
            spp = npp
            mx = nmx
            mp = nmp
            traj[k + 1, 0] = sxx
            traj[k + 1, 1] = sxp
            traj[k + 1, 2] = spp
            traj[k + 1, 3] = mx
            traj[k + 1, 4] = mp
    return traj_arr, rows_arr


def quasi_static_sweep(omegas_in, bases_in, double sxx, double sxp, double spp,
                       double beta0, double xi, double kappa):
    cdef double[::1] omegas = np.ascontiguousarray(omegas_in, dtype=float)
    cdef double[:, :, ::1] bases = np.ascontiguousarray(bases_in, dtype=float)
    cdef Py_ssize_t n_steps = omegas.shape[0] - 1
    rows_arr = np.empty((n_steps, 5))
    cdef double[:, ::1] rows = rows_arr
    traj_arr = np.empty((n_steps + 1, 3))
    cdef double[:, ::1] traj = traj_arr
    cdef double e2 = exp(-2.0 * xi)
    cdef double e2i = exp(2.0 * xi)
    cdef double w_prev = omegas[0]
    cdef double p00 = bases[0, 0, 0], p01 = bases[0, 0, 1]
    cdef double p10 = bases[0, 1, 0], p11 = bases[0, 1, 1]
    cdef double t00, t01, t10, t11, w, g, dxx, dpp, qxx, qxp, qpp
    cdef double oxx, opp, cxx, cpp, fxx, fpp, nxx, nxp, npp
    cdef double e_before, a_before, e_mid, a_mid, e_after, a_after
    cdef Py_ssize_t n
    traj[0, 0] = sxx
    traj[0, 1] = sxp
    traj[0, 2] = spp
    with nogil:
        for n in range(1, n_steps + 1):
            w = omegas[n]
            t00 = bases[n, 0, 0]
            t01 = bases[n, 0, 1]
            t10 = bases[n, 1, 0]
            t11 = bases[n, 1, 1]
            oxx = p00 * p00 * sxx + 2.0 * p00 * p01 * sxp + p01 * p01 * spp
            opp = p10 * p10 * sxx + 2.0 * p10 * p11 * sxp + p11 * p11 * spp
            cxx = t00 * t00 * sxx + 2.0 * t00 * t01 * sxp + t01 * t01 * spp
            cpp = t10 * t10 * sxx + 2.0 * t10 * t11 * sxp + t11 * t11 * spp
            e_before = w_prev * (0.5 * (oxx + opp) - 0.5)
            a_before = 0.5 * w_prev * (opp - oxx)
            e_mid = w * (0.5 * (cxx + cpp) - 0.5)
            a_mid = 0.5 * w * (cpp - cxx)
            g = 0.5 / tanh(0.5 * beta0 * w)
            dxx = g * e2
            dpp = g * e2i
            qxx = t11 * t11 * dxx + t01 * t01 * dpp
            qxp = -t11 * t10 * dxx - t01 * t00 * dpp
            qpp = t10 * t10 * dxx + t00 * t00 * dpp
            nxx = kappa * sxx + (1.0 - kappa) * qxx
            nxp = kappa * sxp + (1.0 - kappa) * qxp
            npp = kappa * spp + (1.0 - kappa) * qpp
            fxx = t00 * t00 * nxx + 2.0 * t00 * t01 * nxp + t01 * t01 * npp
            fpp = t10 * t10 * nxx + 2.0 * t10 * t11 * nxp + t11 * t11 * npp
            e_after = w * (0.5 * (fxx + fpp) - 0.5)
            a_after = 0.5 * w * (fpp - fxx)
            rows[n - 1, 0] = e_mid - e_before
            rows[n - 1, 1] = a_mid - a_before
            rows[n - 1, 2] = e_after - e_mid
            rows[n - 1, 3] = a_after - a_mid
            rows[n - 1, 4] = _entropy(nxx * npp - nxp * nxp) - _entropy(sxx * spp - sxp * sxp)
            sxx = nxx
            sxp = nxp
            spp = npp
            traj[n, 0] = sxx
            traj[n, 1] = sxp
            traj[n, 2] = spp
            w_prev = w
            p00 = t00
            p01 = t01
            p10 = t10
            p11 = t11
    return rows_arr, traj_arr

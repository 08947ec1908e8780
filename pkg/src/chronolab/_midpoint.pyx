# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implicit-midpoint stepping for the built-in one-dof systems.

Keep in sync with `_midpoint_py`: same signature, arithmetic and iteration
order, so the two backends agree to rounding.
"""

from libc.math cimport fabs, isfinite

import numpy as np

HARMONIC = 0
FREE_PARTICLE = 1
QUARTIC = 2

BACKEND = "compiled"


def run_midpoint(int kind, double omega, double[::1] z0, Py_ssize_t nsteps,
                 double dt, bint extended, double tol, int max_iter):
    """Integrate a built-in system for `nsteps` implicit-midpoint steps.

    Returns (trajectory, fail_step, fail_kind) where trajectory is a
    (nsteps+1, dim) float array, fail_step is -1 on success and fail_kind
    is 0 (ok), 1 (non-finite state) or 2 (fixed-point iteration stalled).
    """
    cdef Py_ssize_t dim = 4 if extended else 2
    out = np.empty((nsteps + 1, dim))
    cdef double[:, ::1] traj = out
    cdef double q = z0[0]
    cdef double p = z0[1]
    cdef double T = z0[2] if extended else 0.0
    cdef double S = z0[3] if extended else 0.0
    cdef double w2 = omega * omega
    cdef double qa, pa, qm, pm, fq, fp, qn, pn, delta
    cdef Py_ssize_t step
    cdef int it
    cdef bint converged

    traj[0, 0] = q
    traj[0, 1] = p
    if extended:
        traj[0, 2] = T
        traj[0, 3] = S
    for step in range(nsteps):
        qa = q
        pa = p
        converged = False
        for it in range(max_iter):
            qm = 0.5 * (q + qa)
            pm = 0.5 * (p + pa)
            if kind == HARMONIC:
                fq = pm
                fp = -w2 * qm
            elif kind == FREE_PARTICLE:
                fq = pm
                fp = 0.0
            else:
                fq = pm
                fp = -qm * qm * qm
            qn = q + dt * fq
            pn = p + dt * fp
            if not (isfinite(qn) and isfinite(pn)):
                return out, step, 1
            delta = max(fabs(qn - qa), fabs(pn - pa))
            qa = qn
            pa = pn
            if delta <= tol:
                converged = True
                break
        if not converged:
            return out, step, 2
        q = qa
        p = pa
        if extended:
            # dT/dtheta = dH_ex/dS = 1 and dS/dtheta = -dH_ex/dT = 0 for
            # autonomous inner systems, so these channels step exactly.
            T += dt
        traj[step + 1, 0] = q
        traj[step + 1, 1] = p
        if extended:
            traj[step + 1, 2] = T
            traj[step + 1, 3] = S
    return out, -1, 0

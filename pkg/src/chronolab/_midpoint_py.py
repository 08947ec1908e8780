"""Pure-Python implicit-midpoint stepping for the built-in one-dof systems.

Twin of the compiled `_midpoint` extension: same call signature, same
arithmetic, same iteration order, so both backends produce matching
trajectories.  Selected at import time by `chronolab.classical` when the
extension is unavailable or CHRONOLAB_PURE_PYTHON is set.
"""

import math

import numpy as np

HARMONIC = 0
FREE_PARTICLE = 1
QUARTIC = 2

BACKEND = "python"


def run_midpoint(kind, omega, z0, nsteps, dt, extended, tol, max_iter):
    """Integrate a built-in system for `nsteps` implicit-midpoint steps.

    Returns (trajectory, fail_step, fail_kind) where trajectory is a
    (nsteps+1, dim) float array, fail_step is -1 on success and fail_kind
    is 0 (ok), 1 (non-finite state) or 2 (fixed-point iteration stalled).
    """
    dim = 4 if extended else 2
    traj = np.empty((nsteps + 1, dim))
    q = float(z0[0])
    p = float(z0[1])
    T = float(z0[2]) if extended else 0.0
    S = float(z0[3]) if extended else 0.0
    w2 = omega * omega
    traj[0, 0] = q
    traj[0, 1] = p
    if extended:
        traj[0, 2] = T
        traj[0, 3] = S
    for step in range(nsteps):
        qa = q
        pa = p
        converged = False
        for _ in range(max_iter):
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
            if not (math.isfinite(qn) and math.isfinite(pn)):
                return traj, step, 1
            delta = max(abs(qn - qa), abs(pn - pa))
            qa = qn
            pa = pn
            if delta <= tol:
                converged = True
                break
        if not converged:
            return traj, step, 2
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
    return traj, -1, 0

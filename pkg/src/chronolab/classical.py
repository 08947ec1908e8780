"""Classical side: canonical states, the time-extended system and its flow.

A Hamiltonian system on R^2n is extended by a canonical pair (T, S); fixing
the extended energy H + S to zero on the initial data makes the extended
flow in the evolution parameter theta reproduce the original flow in t,
with T advancing at unit rate and S frozen at minus the energy.  Both flows
are integrated with the same implicit-midpoint rule so the equivalence can
be checked trajectory against trajectory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DivergenceError, InvalidInputError, NumericalFailureError

__all__ = [
    "PhaseState",
    "ExtendedPhaseState",
    "HamiltonianSystem",
    "ExtendedSystem",
    "Trajectory",
    "EquivalenceReport",
    "harmonic_oscillator",
    "free_particle",
    "quartic_oscillator",
    "extend_state",
    "eval_extended_hamiltonian",
    "poisson_bracket",
    "coordinate",
    "integrate_original",
    "integrate_extended",
    "check_equivalence",
    "kernel_backend",
]

# Fixed-point iteration defaults for the implicit midpoint rule.
MIDPOINT_TOL = 1e-13
MIDPOINT_MAX_ITER = 50

_GRADIENT_PROBE_SEED = 172
_GRADIENT_PROBE_POINTS = 4
_GRADIENT_PROBE_STEP = 1e-5
_GRADIENT_PROBE_RTOL = 1e-6


def _load_kernels():
    if not os.environ.get("CHRONOLAB_PURE_PYTHON"):
        try:
            from . import _midpoint as kernels

            return kernels
        except ImportError:
            pass
    from . import _midpoint_py as kernels

    return kernels


_KERNELS = _load_kernels()


def kernel_backend() -> str:
    """Name of the stepping backend in use: 'compiled' or 'python'."""
    return _KERNELS.BACKEND


def _as_finite_vector(x, name):
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size < 1:
        raise InvalidInputError(f"{name} must be a 1-d vector with at least one entry")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PhaseState:
    """Point (q, p) of the original 2n-dimensional phase space."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = _as_finite_vector(self.q, "q")
        p = _as_finite_vector(self.p, "p")
        if q.size != p.size:
            raise InvalidInputError(
                f"q and p must have equal length, got {q.size} and {p.size}"
            )
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.q.size


@dataclass(frozen=True)
class ExtendedPhaseState:
    """Point (q, p, T, S) of the extended phase space; T is the time coordinate."""

    base: PhaseState
    T: float
    S: float

    def __post_init__(self):
        T = float(self.T)
        S = float(self.S)
        if not (np.isfinite(T) and np.isfinite(S)):
            raise InvalidInputError("T and S must be finite")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "S", S)

    @property
    def n(self) -> int:
        return self.base.n


@dataclass(frozen=True)
class HamiltonianSystem:
    """Autonomous system: energy H(q, p) and its gradient, plus a label.

    The gradient is probe-checked against central differences of the energy
    at construction; a mismatch raises InvalidInputError.  `kernel_kind` and
    `kernel_param` mark built-in systems that may run on the compiled
    stepping kernels.
    """

    n: int
    energy: Callable[[np.ndarray, np.ndarray], float]
    gradient: Callable[[np.ndarray, np.ndarray], tuple]
    label: str
    kernel_kind: int | None = None
    kernel_param: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError("dimension n must be >= 1")
        self._probe_gradient()

    def _probe_gradient(self):
        rng = np.random.default_rng(_GRADIENT_PROBE_SEED)
        h = _GRADIENT_PROBE_STEP
        for _ in range(_GRADIENT_PROBE_POINTS):
            q = rng.normal(size=self.n)
            p = rng.normal(size=self.n)
            gq, gp = self.gradient(q, p)
            gq = np.asarray(gq, dtype=float)
            gp = np.asarray(gp, dtype=float)
            for i in range(self.n):
                for arr, grad in ((q, gq), (p, gp)):
                    shift = np.zeros(self.n)
                    shift[i] = h
                    if arr is q:
                        fd = (self.energy(q + shift, p) - self.energy(q - shift, p)) / (2 * h)
                    else:
                        fd = (self.energy(q, p + shift) - self.energy(q, p - shift)) / (2 * h)
                    if abs(fd - grad[i]) > _GRADIENT_PROBE_RTOL * max(1.0, abs(fd)):
                        raise InvalidInputError(
                            f"gradient of '{self.label}' disagrees with finite "
                            f"differences (coordinate {i}: {grad[i]} vs {fd})"
                        )

    def extended(self) -> "ExtendedSystem":
        return ExtendedSystem(self)


@dataclass(frozen=True)
class ExtendedSystem:
    """Extended Hamiltonian H_ex(q, p, T, S) = H(q, p) + S (unit scaling)."""

    inner: HamiltonianSystem

    def energy(self, y: ExtendedPhaseState) -> float:
        if y.n != self.inner.n:
            raise InvalidInputError(
                f"state dimension {y.n} does not match system dimension {self.inner.n}"
            )
        return float(self.inner.energy(y.base.q, y.base.p)) + y.S


def harmonic_oscillator(omega: float = 1.0) -> HamiltonianSystem:
    """H = p^2/2 + omega^2 q^2 / 2."""
    omega = float(omega)
    if not (omega > 0 and np.isfinite(omega)):
        raise InvalidInputError("omega must be positive and finite")
    w2 = omega * omega

    def energy(q, p):
        return 0.5 * float(p[0]) ** 2 + 0.5 * w2 * float(q[0]) ** 2

    def gradient(q, p):
        return np.array([w2 * q[0]]), np.array([p[0]])

    return HamiltonianSystem(1, energy, gradient, f"harmonic(omega={omega})",
                             kernel_kind=_KERNELS.HARMONIC, kernel_param=omega)


def free_particle() -> HamiltonianSystem:
    """H = p^2/2."""

    def energy(q, p):
        return 0.5 * float(p[0]) ** 2

    def gradient(q, p):
        return np.array([0.0]), np.array([p[0]])

    return HamiltonianSystem(1, energy, gradient, "free-particle",
                             kernel_kind=_KERNELS.FREE_PARTICLE)


def quartic_oscillator() -> HamiltonianSystem:
    """H = p^2/2 + q^4/4, the nonlinear stressor without a closed-form flow."""

    def energy(q, p):
        return 0.5 * float(p[0]) ** 2 + 0.25 * float(q[0]) ** 4

    def gradient(q, p):
        return np.array([q[0] ** 3]), np.array([p[0]])

    return HamiltonianSystem(1, energy, gradient, "quartic",
                             kernel_kind=_KERNELS.QUARTIC)


def extend_state(system: HamiltonianSystem, x: PhaseState, t0: float) -> ExtendedPhaseState:
    """Lift (q, p) onto the constraint surface: T = t0 and S = -H(q, p)."""
    if x.n != system.n:
        raise InvalidInputError(
            f"state dimension {x.n} does not match system dimension {system.n}"
        )
    return ExtendedPhaseState(base=x, T=float(t0), S=-float(system.energy(x.q, x.p)))


def eval_extended_hamiltonian(ext: ExtendedSystem, y: ExtendedPhaseState) -> float:
    """Value of H_ex = H(q, p) + S at an extended point."""
    return ext.energy(y)


def coordinate(name: str, index: int = 0):
    """Coordinate function on the extended phase space, for bracket evaluation.

    `name` is one of 'q', 'p', 'T', 'S'; `index` selects the component for
    'q' and 'p'.
    """
    if name == "q":
        return lambda y: float(y.base.q[index])
    if name == "p":
        return lambda y: float(y.base.p[index])
    if name == "T":
        return lambda y: y.T
    if name == "S":
        return lambda y: y.S
    raise InvalidInputError(f"unknown coordinate {name!r}")


def _flatten(y: ExtendedPhaseState) -> np.ndarray:
    return np.concatenate([y.base.q, y.base.p, [y.T], [y.S]])


def _unflatten(vec: np.ndarray, n: int) -> ExtendedPhaseState:
    return ExtendedPhaseState(
        base=PhaseState(q=vec[:n], p=vec[n:2 * n]), T=vec[2 * n], S=vec[2 * n + 1]
    )


def _numeric_gradient(fun, y: ExtendedPhaseState, rel_step: float) -> np.ndarray:
    n = y.n
    x = _flatten(y)
    grad = np.empty(x.size)
    for i in range(x.size):
        h = rel_step * max(1.0, abs(x[i]))
        plus = x.copy()
        minus = x.copy()
        plus[i] += h
        minus[i] -= h
        grad[i] = (fun(_unflatten(plus, n)) - fun(_unflatten(minus, n))) / (2 * h)
    if not np.all(np.isfinite(grad)):
        raise NumericalFailureError("non-finite derivative in bracket evaluation")
    return grad


def poisson_bracket(f, g, y: ExtendedPhaseState, rel_step: float = 1e-5) -> float:
    """{f, g} at y over all n+1 canonical pairs, including (T, S).

    Partial derivatives are central differences with step
    rel_step * max(1, |coordinate|).
    """
    n = y.n
    df = _numeric_gradient(f, y, rel_step)
    dg = _numeric_gradient(g, y, rel_step)
    # layout: [q_1..q_n, p_1..p_n, T, S]; T plays q_{n+1}, S plays p_{n+1}
    dfq = np.concatenate([df[:n], [df[2 * n]]])
    dfp = np.concatenate([df[n:2 * n], [df[2 * n + 1]]])
    dgq = np.concatenate([dg[:n], [dg[2 * n]]])
    dgp = np.concatenate([dg[n:2 * n], [dg[2 * n + 1]]])
    return float(np.dot(dfq, dgp) - np.dot(dfp, dgq))


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled trajectory; extended runs carry the (T, S) channels."""

    params: np.ndarray
    qs: np.ndarray
    ps: np.ndarray
    Ts: np.ndarray | None = None
    Ss: np.ndarray | None = None
    integrator: str = "implicit-midpoint"
    step: float = 0.0

    def __post_init__(self):
        params = np.asarray(self.params, dtype=float)
        if params.ndim != 1 or params.size < 2:
            raise InvalidInputError("parameter grid must hold at least two points")
        diffs = np.diff(params)
        if np.any(diffs <= 0):
            raise InvalidInputError("parameter grid must be strictly increasing")
        h = diffs[0]
        if np.max(np.abs(diffs - h)) > 1e-12 * max(1.0, abs(h)):
            raise InvalidInputError("parameter grid must be uniform to 1e-12")
        for name in ("qs", "ps", "Ts", "Ss"):
            arr = getattr(self, name)
            if arr is None:
                continue
            arr = np.asarray(arr, dtype=float)
            if arr.shape[0] != params.size:
                raise InvalidInputError(f"{name} count does not match the grid")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        params = params.copy()
        params.setflags(write=False)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "step", float(h))

    @property
    def extended(self) -> bool:
        return self.Ts is not None

    @property
    def n(self) -> int:
        return self.qs.shape[1]

    def state(self, k: int):
        base = PhaseState(q=self.qs[k], p=self.ps[k])
        if self.extended:
            return ExtendedPhaseState(base=base, T=self.Ts[k], S=self.Ss[k])
        return base

    def to_csv(self, path):
        """Write `param,q1..qn,p1..pn[,T,S]` rows at full double precision."""
        n = self.n
        header = ["param"] + [f"q{i+1}" for i in range(n)] + [f"p{i+1}" for i in range(n)]
        cols = [self.params, *self.qs.T, *self.ps.T]
        if self.extended:
            header += ["T", "S"]
            cols += [self.Ts, self.Ss]
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(header) + "\n")
            for row in zip(*cols):
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")

    @classmethod
    def from_csv(cls, path, integrator="implicit-midpoint"):
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip().split(",")
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        if header[0] != "param":
            raise InvalidInputError(f"unrecognized trajectory header in {path}")
        extended = header[-2:] == ["T", "S"]
        n = (len(header) - 1 - (2 if extended else 0)) // 2
        return cls(
            params=data[:, 0],
            qs=data[:, 1:1 + n],
            ps=data[:, 1 + n:1 + 2 * n],
            Ts=data[:, -2] if extended else None,
            Ss=data[:, -1] if extended else None,
            integrator=integrator,
        )


def _step_count(t_end: float, dt: float) -> int:
    """Number of uniform steps covering [0, t_end]: the nearest whole count.

    The final grid point lands within dt/2 of t_end; callers that need an
    exact endpoint should pick commensurate (t_end, dt).
    """
    if not (dt > 0 and np.isfinite(dt)):
        raise InvalidInputError("dt must be positive and finite")
    if not (t_end > 0 and np.isfinite(t_end)):
        raise InvalidInputError("t_end must be positive and finite")
    nsteps = int(round(t_end / dt))
    if nsteps < 1:
        raise InvalidInputError("t_end must be at least half a step dt")
    return nsteps


def _raise_on_failure(fail_step, fail_kind):
    if fail_kind == 1:
        raise DivergenceError(f"non-finite state at step {fail_step}", step=fail_step)
    if fail_kind == 2:
        raise NumericalFailureError(
            f"implicit-midpoint iteration stalled at step {fail_step} "
            f"(max {MIDPOINT_MAX_ITER} iterations)"
        )


def _midpoint_generic(system, z0, nsteps, dt, extended, tol, max_iter):
    """Vector-valued twin of the built-in kernels for arbitrary systems."""
    n = system.n
    dim = 2 * n + (2 if extended else 0)
    traj = np.empty((nsteps + 1, dim))
    z = np.asarray(z0[: 2 * n], dtype=float).copy()
    T = float(z0[2 * n]) if extended else 0.0
    S = float(z0[2 * n + 1]) if extended else 0.0
    traj[0, : 2 * n] = z
    if extended:
        traj[0, 2 * n] = T
        traj[0, 2 * n + 1] = S

    def vector_field(w):
        gq, gp = system.gradient(w[:n], w[n:])
        return np.concatenate([np.asarray(gp, dtype=float), -np.asarray(gq, dtype=float)])

    for step in range(nsteps):
        za = z.copy()
        converged = False
        for _ in range(max_iter):
            zn = z + dt * vector_field(0.5 * (z + za))
            if not np.all(np.isfinite(zn)):
                return traj, step, 1
            delta = np.max(np.abs(zn - za))
            za = zn
            if delta <= tol:
                converged = True
                break
        if not converged:
            return traj, step, 2
        z = za
        if extended:
            T += dt
        traj[step + 1, : 2 * n] = z
        if extended:
            traj[step + 1, 2 * n] = T
            traj[step + 1, 2 * n + 1] = S
    return traj, -1, 0


def _run(system, z0, nsteps, dt, extended, tol, max_iter):
    if system.kernel_kind is not None and system.n == 1:
        data, fail_step, fail_kind = _KERNELS.run_midpoint(
            system.kernel_kind, system.kernel_param, np.asarray(z0, dtype=float),
            nsteps, dt, extended, tol, max_iter,
        )
    else:
        data, fail_step, fail_kind = _midpoint_generic(
            system, z0, nsteps, dt, extended, tol, max_iter
        )
    _raise_on_failure(fail_step, fail_kind)
    return data


def integrate_original(system: HamiltonianSystem, x0: PhaseState, t_end: float,
                       dt: float, tol: float = MIDPOINT_TOL,
                       max_iter: int = MIDPOINT_MAX_ITER) -> Trajectory:
    """Flow of Hamilton's equations from t = 0 to t_end with step dt."""
    if x0.n != system.n:
        raise InvalidInputError("initial state dimension does not match the system")
    nsteps = _step_count(t_end, dt)
    z0 = np.concatenate([x0.q, x0.p])
    data = _run(system, z0, nsteps, dt, False, tol, max_iter)
    n = system.n
    return Trajectory(
        params=dt * np.arange(nsteps + 1),
        qs=data[:, :n],
        ps=data[:, n:2 * n],
        step=dt,
    )


def integrate_extended(ext: ExtendedSystem, y0: ExtendedPhaseState, theta_end: float,
                       dtheta: float, tol: float = MIDPOINT_TOL,
                       max_iter: int = MIDPOINT_MAX_ITER) -> Trajectory:
    """Flow of the extended canonical equations in the parameter theta."""
    system = ext.inner
    if y0.n != system.n:
        raise InvalidInputError("initial state dimension does not match the system")
    nsteps = _step_count(theta_end, dtheta)
    z0 = np.concatenate([y0.base.q, y0.base.p, [y0.T], [y0.S]])
    data = _run(system, z0, nsteps, dtheta, True, tol, max_iter)
    n = system.n
    return Trajectory(
        params=dtheta * np.arange(nsteps + 1),
        qs=data[:, :n],
        ps=data[:, n:2 * n],
        Ts=data[:, 2 * n],
        Ss=data[:, 2 * n + 1],
        step=dtheta,
    )


@dataclass(frozen=True)
class EquivalenceReport:
    """How far an extended trajectory is from reproducing the original one.

    max_state_deviation  largest (q, p) 2-norm gap over the grid
    max_time_mismatch    largest |T(theta_k) - t_k|
    max_slope_residual   largest |T(theta_k) - T(0) - theta_k|
    max_constraint_residual  largest |H + S| = |H_ex| along the extended run
    offset               T(0) - t(0); nonzero values flag misaligned initial data
    """

    max_state_deviation: float
    max_time_mismatch: float
    max_slope_residual: float
    max_constraint_residual: float
    offset: float

    @property
    def offset_flagged(self) -> bool:
        return abs(self.offset) > 1e-12

    def as_dict(self) -> dict:
        return {
            "max_state_deviation": self.max_state_deviation,
            "max_time_mismatch": self.max_time_mismatch,
            "max_slope_residual": self.max_slope_residual,
            "max_constraint_residual": self.max_constraint_residual,
            "offset": self.offset,
            "offset_flagged": self.offset_flagged,
        }


def check_equivalence(orig: Trajectory, ext: Trajectory,
                      system: HamiltonianSystem) -> EquivalenceReport:
    """Compare an original-flow trajectory with an extended-flow one.

    Both trajectories must share the parameter grid (same length and step);
    `system` supplies the energy for the constraint channel.
    """
    if ext.Ts is None or ext.Ss is None:
        raise InvalidInputError("second trajectory must carry the (T, S) channels")
    if orig.Ts is not None:
        raise InvalidInputError("first trajectory must be an original-flow run")
    if orig.params.size != ext.params.size:
        raise InvalidInputError("parameter grids differ in length")
    if abs(orig.step - ext.step) > 1e-12 * max(1.0, abs(orig.step)):
        raise InvalidInputError("parameter grids differ in step size")
    if orig.n != ext.n:
        raise InvalidInputError("trajectories have different phase-space dimension")

    dev = np.sqrt(
        np.sum((orig.qs - ext.qs) ** 2, axis=1) + np.sum((orig.ps - ext.ps) ** 2, axis=1)
    )
    energies = np.array([system.energy(ext.qs[k], ext.ps[k]) for k in range(ext.params.size)])
    slope_residual = ext.Ts - ext.Ts[0] - ext.params
    return EquivalenceReport(
        max_state_deviation=float(np.max(dev)),
        max_time_mismatch=float(np.max(np.abs(ext.Ts - orig.params))),
        max_slope_residual=float(np.max(np.abs(slope_residual))),
        max_constraint_residual=float(np.max(np.abs(ext.Ss + energies))),
        offset=float(ext.Ts[0] - orig.params[0]),
    )

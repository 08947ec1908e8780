"""Time observable restricted to the physical subspace, audited as a POVM.

The constraint slaves each matched system level to one clock frequency, so
the physical subspace is carried isomorphically on its clock-sector image:
the span of the matched plane waves.  Restricting the clock-bin projectors
|T_m><T_m| to that image gives the measurement effects

    E_m[a, b] = conj(W[m, a]) W[m, b],     W[m, a] = <T_m | clock part of a>

which are positive, sum to the identity, and are neither idempotent nor
mutually orthogonal whenever d < M: the reading of each bin overlaps its
neighbours.  The d = M control case degenerates to orthogonal projectors.

Conditioning on a bin recovers the system state at that clock reading, and
successive bins are related by exp(-i sigma H_s deltaT), so the frozen
extended state carries ordinary Schroedinger evolution in its correlations.

The construction needs the matched frequencies to be distinct (a repeated
frequency makes the clock-sector image non-injective); building a POVM on
such a subspace raises InvalidInputError.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constraint import PhysicalState, PhysicalSubspace
from .errors import InvalidInputError, NoPhysicalStatesError, NumericalFailureError
from .quantum import ClockSpace, ExtendedSpace, clock_marginal, evolve_extended

__all__ = [
    "TimePOVM",
    "EventOperator",
    "PMViolationReport",
    "CovarianceReport",
    "build_time_povm",
    "projective_clock_povm",
    "pm_violation_report",
    "gram_of_restricted_time_states",
    "time_distribution",
    "conditional_state",
    "event_probability",
    "covariance_report",
    "restricted_time_operator",
    "clock_sector_frame",
]

EFFECT_MIN_EIG = -1e-12
COMPLETENESS_TOL = 1e-10
FRAME_TOL = 1e-10


@dataclass(frozen=True)
class TimePOVM:
    """Family of M positive effects on the d-dimensional physical sector.

    `frame` is the (M, d) clock-sector image matrix W with orthonormal
    columns; effects[m] = W[m]^dag W[m] row by row.
    """

    effects: np.ndarray  # (M, d, d)
    frame: np.ndarray    # (M, d)
    times: np.ndarray
    deltaT: float
    sigma: int

    def __post_init__(self):
        for name in ("effects", "frame", "times"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def M(self) -> int:
        return self.effects.shape[0]

    @property
    def d(self) -> int:
        return self.effects.shape[1]

    def completeness_residual(self) -> float:
        total = self.effects.sum(axis=0)
        return float(np.max(np.abs(total - np.eye(self.d))))

    def min_effect_eigenvalue(self) -> float:
        return float(min(np.linalg.eigvalsh(e).min() for e in self.effects))


def clock_sector_frame(sub: PhysicalSubspace) -> np.ndarray:
    """Clock-sector image W (M, d) of the physical basis.

    Each basis column is expressed in the energy (x) grid basis and the
    energy index is contracted away; for the product basis the column a is
    exactly the matched plane wave of pair a.
    """
    if sub.d == 0:
        raise NoPhysicalStatesError("the physical subspace is empty")
    sys_s = sub.space.system
    M = sub.space.clock.M
    block = sub.basis.reshape(sys_s.n_levels, M, sub.d)
    in_energy_basis = np.einsum("ji,jma->ima", sys_s.vectors.conj(), block)
    return in_energy_basis.sum(axis=0)


def _frame_povm(W: np.ndarray, clock: ClockSpace) -> TimePOVM:
    gram = W.conj().T @ W
    defect = float(np.max(np.abs(gram - np.eye(W.shape[1]))))
    if defect > FRAME_TOL:
        raise InvalidInputError(
            "clock-sector image is not orthonormal "
            f"(deviation {defect:.3e}); matched frequencies must be distinct"
        )
    effects = np.einsum("ma,mb->mab", W.conj(), W)
    povm = TimePOVM(effects=effects, frame=W, times=clock.times,
                    deltaT=clock.deltaT, sigma=clock.sigma)
    if povm.completeness_residual() > COMPLETENESS_TOL:
        raise NumericalFailureError("effects do not resolve the identity")
    if povm.min_effect_eigenvalue() < EFFECT_MIN_EIG:
        raise NumericalFailureError("an effect has a negative eigenvalue")
    # The first moment of the effects and the compressed time operator are
    # the same contraction; guard the identity once at build time.
    first_moment = np.einsum("m,mab->ab", povm.times, effects)
    compressed = W.conj().T @ (povm.times[:, None] * W)
    if np.max(np.abs(first_moment - compressed)) > 1e-10 * max(1.0, np.max(np.abs(compressed))):
        raise NumericalFailureError("first-moment consistency check failed")
    return povm


def build_time_povm(sub: PhysicalSubspace, clock: ClockSpace | None = None) -> TimePOVM:
    """Time POVM of a physical subspace: clock-bin projectors on its image."""
    clock = sub.space.clock if clock is None else clock
    return _frame_povm(clock_sector_frame(sub), clock)


def projective_clock_povm(clock: ClockSpace) -> TimePOVM:
    """Control case d = M: the unrestricted clock, whose effects are the
    orthogonal bin projectors (an honest PM)."""
    return _frame_povm(np.eye(clock.M, dtype=complex), clock)


@dataclass(frozen=True)
class PMViolationReport:
    """How far the effects are from a projector measure.

    Both defects vanish for a PM; both are strictly positive when d < M.
    """

    orthogonality_defect: float
    idempotency_defect: float
    worst_pair: tuple

    def as_dict(self) -> dict:
        return {
            "orthogonality_defect": self.orthogonality_defect,
            "idempotency_defect": self.idempotency_defect,
            "worst_pair": list(self.worst_pair),
        }


def _spectral_norm(X: np.ndarray) -> float:
    return float(np.linalg.svd(X, compute_uv=False)[0])


def pm_violation_report(povm: TimePOVM) -> PMViolationReport:
    """max_{m != m'} ||E_m E_m'|| and max_m ||E_m^2 - E_m|| (spectral norms)."""
    effects = povm.effects
    M = povm.M
    orth = 0.0
    worst = (0, 0)
    for m in range(M):
        for mp in range(m + 1, M):
            val = _spectral_norm(effects[m] @ effects[mp])
            if val > orth:
                orth = val
                worst = (m, mp)
    idem = max(_spectral_norm(e @ e - e) for e in effects)
    return PMViolationReport(orthogonality_defect=orth, idempotency_defect=idem,
                             worst_pair=worst)


def gram_of_restricted_time_states(sub: PhysicalSubspace,
                                   clock: ClockSpace | None = None) -> np.ndarray:
    """Gram matrix G[m, m'] = <T_m| P |T_m'> of the clock-sector projection P.

    Contraction convention (fixed): P projects onto the clock-sector image
    of the basis, P = W W^dag with W from `clock_sector_frame`.  G is
    positive semidefinite; it is diagonal only in the d = M control case,
    and for d = 1 every entry has the same modulus 1/M.
    """
    W = clock_sector_frame(sub)
    return W @ W.conj().T


def _coeffs_of(state) -> np.ndarray:
    if isinstance(state, PhysicalState):
        return state.coeffs
    c = np.asarray(state, dtype=complex)
    norm = np.linalg.norm(c)
    if norm == 0 or not np.isfinite(norm):
        raise InvalidInputError("coefficient vector must be nonzero and finite")
    return c / norm


def time_distribution(povm: TimePOVM, state) -> np.ndarray:
    """Born probabilities p_m = c^dag E_m c of the clock readings."""
    c = _coeffs_of(state)
    if c.size != povm.d:
        raise InvalidInputError(f"need {povm.d} coefficients, got {c.size}")
    return np.einsum("a,mab,b->m", c.conj(), povm.effects, c).real


def conditional_state(sub: PhysicalSubspace, phys: PhysicalState, m: int) -> np.ndarray:
    """System state conditioned on the clock reading T_m, normalized.

    For a physical state sum_a c_a |E_a> (x) |w_a| the conditional at bin m
    is proportional to sum_a c_a e^{-i sigma E_a (T_m - T0)} |E_a>, so one
    bin step applies exp(-i sigma H_s deltaT).
    """
    M = sub.space.clock.M
    if not 0 <= m < M:
        raise InvalidInputError(f"bin index {m} outside the grid")
    block = phys.vector.reshape(sub.space.system.n_levels, M)
    vec = block[:, m]
    norm = np.linalg.norm(vec)
    if norm < 1e-12:
        raise NumericalFailureError(f"conditional state at bin {m} has zero weight")
    return vec / norm


@dataclass(frozen=True)
class EventOperator:
    """Joint event: system inside a projector's range during a set of bins."""

    projector: np.ndarray
    window: tuple

    def __post_init__(self):
        proj = np.asarray(self.projector, dtype=complex)
        if proj.ndim != 2 or proj.shape[0] != proj.shape[1]:
            raise InvalidInputError("projector must be square")
        if np.max(np.abs(proj - proj.conj().T)) > 1e-10:
            raise InvalidInputError("projector must be Hermitian")
        if np.max(np.abs(proj @ proj - proj)) > 1e-10:
            raise InvalidInputError("projector must be idempotent to 1e-10")
        window = tuple(sorted(int(m) for m in set(self.window)))
        if any(m < 0 for m in window):
            raise InvalidInputError("bin indices must be non-negative")
        proj.setflags(write=False)
        object.__setattr__(self, "projector", proj)
        object.__setattr__(self, "window", window)


def event_probability(event: EventOperator, sub: PhysicalSubspace,
                      phys: PhysicalState) -> float:
    """<psi| (P_V (x) sum_{m in window} |T_m><T_m|) |psi>."""
    space = sub.space
    if event.projector.shape[0] != space.system.n_levels:
        raise InvalidInputError("projector dimension does not match the system")
    if event.window and event.window[-1] >= space.clock.M:
        raise InvalidInputError("window contains bins outside the grid")
    block = phys.vector.reshape(space.system.n_levels, space.clock.M)
    windowed = block[:, list(event.window)]
    return float(np.einsum("im,ij,jm->", windowed.conj(), event.projector, windowed).real)


@dataclass(frozen=True)
class CovarianceReport:
    """Clock-marginal response to extended evolution by theta.

    For a generic state the marginal cyclically shifts by sigma * j bins
    (j = theta / deltaT); for a physical state it does not move.  Both
    deviations are reported so either behaviour can be asserted.
    """

    theta: float
    bins: int
    interpolated: bool
    shift_deviation: float
    stationary_deviation: float
    sigma: int

    def as_dict(self) -> dict:
        return {
            "theta": self.theta,
            "bins": self.bins,
            "interpolated": self.interpolated,
            "shift_deviation": self.shift_deviation,
            "stationary_deviation": self.stationary_deviation,
            "sigma": self.sigma,
        }


def covariance_report(ext: ExtendedSpace, psi, theta: float) -> CovarianceReport:
    """Compare the evolved clock marginal with the cyclic shift of the original.

    theta is expected to be an integer multiple of deltaT (the shift is then
    bin-exact); otherwise the report is computed at the nearest bin count and
    flagged as interpolated.
    """
    ratio = theta / ext.clock.deltaT
    bins = int(round(ratio))
    interpolated = abs(ratio - bins) > 1e-9
    theta_used = bins * ext.clock.deltaT
    before = clock_marginal(psi, ext.clock.M)
    after = clock_marginal(evolve_extended(ext, psi, theta_used), ext.clock.M)
    shifted = np.roll(before, ext.sigma * bins)
    return CovarianceReport(
        theta=float(theta),
        bins=bins,
        interpolated=interpolated,
        shift_deviation=float(np.max(np.abs(after - shifted))),
        stationary_deviation=float(np.max(np.abs(after - before))),
        sigma=ext.sigma,
    )


def restricted_time_operator(povm: TimePOVM) -> np.ndarray:
    """First moment sum_m T_m E_m: the time operator on the physical sector."""
    return np.einsum("m,mab->ab", povm.times, povm.effects)

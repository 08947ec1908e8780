import math

import numpy as np
import pytest

from chronolab import (
    DivergenceError,
    HamiltonianSystem,
    InvalidInputError,
    NumericalFailureError,
    PhaseState,
    Trajectory,
    extend_state,
    free_particle,
    harmonic_oscillator,
    integrate_extended,
    integrate_original,
    quartic_oscillator,
)
from chronolab import classical


def closed_form_harmonic(t, q0=1.0, p0=0.0, omega=1.0):
    q = q0 * math.cos(omega * t) + (p0 / omega) * math.sin(omega * t)
    p = p0 * math.cos(omega * t) - q0 * omega * math.sin(omega * t)
    return q, p


def final_error(dt):
    system = harmonic_oscillator()
    traj = integrate_original(system, PhaseState(q=[1.0], p=[0.0]), 2 * math.pi, dt)
    qe, pe = closed_form_harmonic(traj.params[-1])
    return math.hypot(traj.qs[-1, 0] - qe, traj.ps[-1, 0] - pe)


def test_harmonic_period_accuracy():
    # One period at dt=1e-3 returns to (1, 0) within 1e-5.
    system = harmonic_oscillator()
    traj = integrate_original(system, PhaseState(q=[1.0], p=[0.0]), 2 * math.pi, 1e-3)
    assert abs(traj.qs[-1, 0] - closed_form_harmonic(traj.params[-1])[0]) < 1e-5
    assert abs(traj.ps[-1, 0] - closed_form_harmonic(traj.params[-1])[1]) < 1e-5


def test_free_particle_exact_drift():
    traj = integrate_original(free_particle(), PhaseState(q=[0.0], p=[1.0]), 1.0, 1e-3)
    assert abs(traj.qs[-1, 0] - 1.0) < 1e-10
    assert traj.ps[-1, 0] == 1.0


def test_second_order_convergence():
    errors = [final_error(dt) for dt in (1e-3, 5e-4, 2.5e-4)]
    for coarse, fine in zip(errors, errors[1:]):
        assert 3.5 < coarse / fine < 4.5


def test_energy_conservation_quartic():
    system = quartic_oscillator()
    traj = integrate_original(system, PhaseState(q=[1.0], p=[0.0]), 2 * math.pi, 1e-3)
    energies = [system.energy(traj.qs[k], traj.ps[k]) for k in range(0, len(traj.params), 500)]
    drift = max(abs(e - energies[0]) for e in energies)
    assert drift < 100 * 1e-6  # bounded by C * dt^2


def test_extended_channels_are_exact():
    system = harmonic_oscillator()
    y0 = extend_state(system, PhaseState(q=[1.0], p=[0.0]), 0.0)
    traj = integrate_extended(system.extended(), y0, 2 * math.pi, 1e-3)
    assert np.max(np.abs(traj.Ts - traj.Ts[0] - traj.params)) < 1e-10
    assert np.max(np.abs(traj.Ss - traj.Ss[0])) < 1e-10
    # constraint conserved along the flow
    h_ex = [system.energy(traj.qs[k], traj.ps[k]) + traj.Ss[k]
            for k in range(len(traj.params))]
    assert max(abs(v) for v in h_ex) < 1e-8


def test_generic_path_matches_kernel_path():
    # The same physics through the generic callable route: a harmonic system
    # without a kernel code must land on the same trajectory.
    def energy(q, p):
        return 0.5 * float(p[0]) ** 2 + 0.5 * float(q[0]) ** 2

    def gradient(q, p):
        return np.array([q[0]]), np.array([p[0]])

    generic = HamiltonianSystem(1, energy, gradient, "harmonic-generic")
    builtin = harmonic_oscillator()
    x0 = PhaseState(q=[0.3], p=[-1.1])
    a = integrate_original(builtin, x0, 1.0, 1e-3)
    b = integrate_original(generic, x0, 1.0, 1e-3)
    assert np.max(np.abs(a.qs - b.qs)) < 1e-13
    assert np.max(np.abs(a.ps - b.ps)) < 1e-13


def test_python_backend_matches_active_backend():
    from chronolab import _midpoint_py

    kernels = classical._KERNELS
    z0 = np.array([1.0, 0.0])
    for kind in (kernels.HARMONIC, kernels.FREE_PARTICLE, kernels.QUARTIC):
        a, fa, ka = kernels.run_midpoint(kind, 1.0, z0, 1000, 1e-3, False, 1e-13, 50)
        b, fb, kb = _midpoint_py.run_midpoint(kind, 1.0, z0, 1000, 1e-3, False, 1e-13, 50)
        assert (fa, ka) == (fb, kb) == (-1, 0)
        assert np.max(np.abs(a - b)) < 1e-13
    z0e = np.array([1.0, 0.0, 2.0, -0.5])
    a, _, _ = kernels.run_midpoint(kernels.QUARTIC, 0.0, z0e, 500, 1e-3, True, 1e-13, 50)
    b, _, _ = _midpoint_py.run_midpoint(kernels.QUARTIC, 0.0, z0e, 500, 1e-3, True, 1e-13, 50)
    assert np.max(np.abs(a - b)) < 1e-13


def test_divergence_reports_step_index():
    def energy(q, p):
        return 1e4 * (float(q[0]) ** 2 + float(p[0]) ** 2) ** 2

    def gradient(q, p):
        r = 4e4 * (q[0] ** 2 + p[0] ** 2)
        return np.array([r * q[0]]), np.array([r * p[0]])

    system = HamiltonianSystem(1, energy, gradient, "explosive")
    with np.errstate(over="ignore"), pytest.raises(DivergenceError) as info:
        integrate_original(system, PhaseState(q=[1.0], p=[1.0]), 10.0, 1.0)
    assert info.value.step >= 0


def test_stalled_iteration_raises_numerical_failure():
    # dt * omega / 2 > 1 makes the fixed-point map non-contractive.
    system = harmonic_oscillator(100.0)
    with pytest.raises(NumericalFailureError):
        integrate_original(system, PhaseState(q=[1.0], p=[0.0]), 1.0, 0.1)


def test_step_count_validation():
    system = harmonic_oscillator()
    x0 = PhaseState(q=[1.0], p=[0.0])
    with pytest.raises(InvalidInputError):
        integrate_original(system, x0, -1.0, 1e-3)
    with pytest.raises(InvalidInputError):
        integrate_original(system, x0, 1.0, 0.0)
    with pytest.raises(InvalidInputError):
        integrate_original(system, x0, 1e-4, 1e-3)  # less than half a step


def test_trajectory_grid_validation():
    with pytest.raises(InvalidInputError):
        Trajectory(params=np.array([0.0, 1.0, 1.5]), qs=np.zeros((3, 1)),
                   ps=np.zeros((3, 1)))
    with pytest.raises(InvalidInputError):
        Trajectory(params=np.array([0.0, 1.0]), qs=np.zeros((3, 1)),
                   ps=np.zeros((3, 1)))
    with pytest.raises(InvalidInputError):
        Trajectory(params=np.array([1.0, 0.5]), qs=np.zeros((2, 1)),
                   ps=np.zeros((2, 1)))


def test_trajectory_csv_roundtrip(tmp_path):
    system = harmonic_oscillator()
    y0 = extend_state(system, PhaseState(q=[1.0], p=[0.0]), 0.0)
    traj = integrate_extended(system.extended(), y0, 0.5, 1e-2)
    path = tmp_path / "traj.csv"
    traj.to_csv(path)
    header = path.read_text().splitlines()[0]
    assert header == "param,q1,p1,T,S"
    back = Trajectory.from_csv(path)
    assert np.array_equal(back.params, traj.params)
    assert np.array_equal(back.qs, traj.qs)
    assert np.array_equal(back.Ts, traj.Ts)
    assert np.array_equal(back.Ss, traj.Ss)


def test_trajectory_row_count(tmp_path):
    traj = integrate_original(free_particle(), PhaseState(q=[0.0], p=[1.0]), 1.0, 1e-3)
    path = tmp_path / "t.csv"
    traj.to_csv(path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 1001 + 1  # inclusive endpoints plus header


def test_kernel_backend_name():
    assert classical.kernel_backend() in ("compiled", "python")

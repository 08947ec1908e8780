"""Acceptance suite: one test per release criterion, at pinned tolerances.

Each test prints a single PASS/FAIL line (visible with `pytest -s` or in the
captured output of a failing run) in addition to its assertion.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

import chronolab as cl
from chronolab.constraint import constraint_residual, physical_clock_marginal
from chronolab.quantum import fidelity, unit


def report(number, name, ok, detail=""):
    mark = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"[{mark}] acceptance {number:02d} {name}{suffix}")
    assert ok, f"acceptance {number:02d} {name} failed{suffix}"


def qubit_pipeline(sigma=1):
    clock = cl.build_clock(64, 0.25, sigma=sigma)
    system = cl.build_system_space(np.diag([0.0, 8 * clock.freq_step]))
    ext = cl.build_extended(system, clock)
    sub = cl.solve_constraint_spectral(ext)
    return clock, system, ext, sub


def test_acceptance_01_classical_equivalence():
    start = time.perf_counter()
    system = cl.harmonic_oscillator()
    x0 = cl.PhaseState(q=[1.0], p=[0.0])
    orig = cl.integrate_original(system, x0, 2 * math.pi, 1e-3)
    ext = cl.integrate_extended(system.extended(),
                                cl.extend_state(system, x0, 0.0), 2 * math.pi, 1e-3)
    rep = cl.check_equivalence(orig, ext, system)
    elapsed = time.perf_counter() - start
    ok = (rep.max_state_deviation < 1e-9
          and rep.max_time_mismatch < 1e-10
          and rep.max_slope_residual < 1e-10
          and rep.max_constraint_residual < 1e-10
          and rep.max_constraint_residual < 1e-8
          and elapsed < 1.0)
    report(1, "classical equivalence", ok,
           f"dev={rep.max_state_deviation:.2e} t={elapsed:.2f}s")


def test_acceptance_02_bracket_table():
    start = time.perf_counter()
    rng = np.random.default_rng(202)
    f_T, f_S = cl.coordinate("T"), cl.coordinate("S")
    f_q, f_p = cl.coordinate("q"), cl.coordinate("p")
    table = ((f_T, f_S, 1.0), (f_T, f_q, 0.0), (f_T, f_p, 0.0),
             (f_S, f_q, 0.0), (f_S, f_p, 0.0))
    worst = 0.0
    for system in (cl.harmonic_oscillator(), cl.free_particle(), cl.quartic_oscillator()):
        for _ in range(100):
            point = cl.ExtendedPhaseState(
                base=cl.PhaseState(q=rng.normal(size=1), p=rng.normal(size=1)),
                T=rng.normal(), S=rng.normal())
            for f, g, expected in table:
                worst = max(worst, abs(cl.poisson_bracket(f, g, point) - expected))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-6 and elapsed < 1.0
    report(2, "poisson bracket table", ok, f"worst={worst:.2e} t={elapsed:.2f}s")


def test_acceptance_03_convergence_order():
    system = cl.harmonic_oscillator()
    x0 = cl.PhaseState(q=[1.0], p=[0.0])
    errors = []
    for dt in (1e-3, 5e-4, 2.5e-4, 1.25e-4):
        traj = cl.integrate_original(system, x0, 2 * math.pi, dt)
        t = traj.params[-1]
        errors.append(math.hypot(traj.qs[-1, 0] - math.cos(t),
                                 traj.ps[-1, 0] + math.sin(t)))
    ratios = [a / b for a, b in zip(errors, errors[1:])]
    ok = all(3.5 <= r <= 4.5 for r in ratios)
    report(3, "second-order convergence", ok,
           "ratios=" + ",".join(f"{r:.3f}" for r in ratios))


def test_acceptance_04_commutator_convergence():
    start = time.perf_counter()
    width = 1.4
    values = []
    for M in (64, 128, 256, 512):
        clock = cl.build_clock(M, 0.1)
        values.append(cl.commutator_residual(
            clock, cl.gaussian_clock_state(clock, width=width)))
    ratios = [a / b for a, b in zip(values, values[1:])]
    elapsed = time.perf_counter() - start
    ok = all(r >= 10.0 for r in ratios) and elapsed < 10.0
    report(4, "commutator residual convergence", ok,
           "ratios=" + ",".join(f"{r:.1f}" for r in ratios) + f" t={elapsed:.2f}s")


def test_acceptance_05_evolution_factorization():
    rng = np.random.default_rng(205)
    clock = cl.build_clock(32, 0.25)
    raw = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    system = cl.build_system_space(0.5 * (raw + raw.conj().T))
    ext = cl.build_extended(system, clock)
    worst = 1.0
    for _ in range(50):
        psi_s = unit(rng.normal(size=4) + 1j * rng.normal(size=4))
        psi_T = unit(rng.normal(size=32) + 1j * rng.normal(size=32))
        psi = cl.separable_state(psi_s, psi_T)
        for theta in rng.uniform(-10, 10, size=10):
            joint = cl.evolve_extended(ext, psi, theta, method="dense")
            s_out, t_out = cl.evolve_factored(system, clock, psi_s, psi_T, theta)
            worst = min(worst, fidelity(joint, cl.separable_state(s_out, t_out)))
    ok = worst > 1 - 1e-11
    report(5, "evolution factorization", ok, f"min fidelity={worst:.12f}")


def test_acceptance_06_uncertainty_product():
    rng = np.random.default_rng(206)
    clock = cl.build_clock(256, 0.1)
    system = cl.build_system_space(np.diag([0.0, 1.0]))
    ext = cl.build_extended(system, clock)
    packet = cl.gaussian_clock_state(clock, width=1.0)
    product = cl.uncertainty_product(
        ext, cl.separable_state(system.eigenstate(0), packet)).product
    ok = 0.5 - 1e-3 <= product <= 0.6

    span = clock.M * clock.deltaT
    low = 1.0
    for _ in range(100):
        width = rng.uniform(6 * clock.deltaT, span / 10)
        center = clock.T0 + span / 2 + rng.uniform(-span / 8, span / 8)
        boost = rng.uniform(-np.pi / (3 * clock.deltaT), np.pi / (3 * clock.deltaT))
        state = cl.separable_state(
            unit(rng.normal(size=2) + 1j * rng.normal(size=2)),
            cl.gaussian_clock_state(clock, center=center, width=width, momentum=boost))
        low = min(low, cl.uncertainty_product(ext, state).product)
    ok = ok and low >= 0.5 - 1e-3
    report(6, "uncertainty product", ok,
           f"gaussian={product:.6f} random min={low:.6f}")


def snapped_oscillator_pipeline():
    clock = cl.build_clock(64, 0.25)
    ladder = cl.build_system_space(np.diag(np.arange(8) + 0.5))
    system, _ = cl.snap_energies(ladder, clock)
    ext = cl.build_extended(system, clock)
    return clock, system, ext


def test_acceptance_07_constraint_cross_method():
    ok = True
    details = []
    for label, (ext, expected_d) in {
        "qubit": (qubit_pipeline()[2], 2),
        "oscillator": (snapped_oscillator_pipeline()[2], 8),
    }.items():
        spectral = cl.solve_constraint_spectral(ext)
        kernel = cl.solve_constraint_kernel(ext)
        angles = cl.principal_angles(spectral.basis, kernel.basis)
        scale = float(np.linalg.norm(ext.hamiltonian, np.inf))
        worst_res = max(
            max(constraint_residual(ext, spectral.basis[:, a]) for a in range(spectral.d)),
            max(constraint_residual(ext, kernel.basis[:, a]) for a in range(kernel.d)),
        )
        case_ok = (spectral.d == kernel.d == expected_d
                   and float(np.max(angles)) < 1e-8
                   and worst_res < 1e-9 * scale)
        ok = ok and case_ok
        details.append(f"{label}: d={spectral.d} angle={np.max(angles):.1e}")
    report(7, "constraint cross-method agreement", ok, "; ".join(details))


def test_acceptance_08_physical_state_structure():
    rng = np.random.default_rng(208)
    ok = True
    for sigma in (1, -1):
        clock, system, ext, sub = qubit_pipeline(sigma=sigma)
        state = cl.make_physical_state(sub, rng.normal(size=2) + 1j * rng.normal(size=2))
        stat = cl.stationarity_check(ext, state, (0.1, 1.0, 10.0))
        marg = physical_clock_marginal(state)
        s_full = np.kron(np.eye(2), clock.S_op)
        restricted = sub.basis.conj().T @ s_full @ sub.basis
        expected = np.diag([-sigma * p.energy for p in sub.pairs])
        ok = ok and (stat.min_fidelity > 1 - 1e-10
                     and float(np.max(np.abs(marg - 1 / clock.M))) < 1e-10
                     and float(np.max(np.abs(restricted - expected))) < 1e-9)
    report(8, "physical state structure", ok)


def test_acceptance_09_povm_axioms():
    clock_p, _, _, sub_p = qubit_pipeline(1)
    clock_m, _, _, sub_m = qubit_pipeline(-1)
    _, _, ext_osc = snapped_oscillator_pipeline()
    measures = [
        cl.build_time_povm(sub_p),
        cl.build_time_povm(sub_m),
        cl.build_time_povm(cl.solve_constraint_spectral(ext_osc)),
        cl.projective_clock_povm(clock_p),
    ]
    min_eig = min(m.min_effect_eigenvalue() for m in measures)
    completeness = max(m.completeness_residual() for m in measures)
    ok = min_eig >= -1e-12 and completeness < 1e-10
    report(9, "povm axioms", ok,
           f"min eig={min_eig:.1e} completeness={completeness:.1e}")


def test_acceptance_10_povm_is_not_a_projector_measure():
    clock, _, _, sub = qubit_pipeline()
    violation = cl.pm_violation_report(cl.build_time_povm(sub))
    M = clock.M
    ks = np.array([p.k for p in sub.pairs])
    closed_form = max(
        (2.0 / M ** 2) * abs(np.sum(np.exp(2j * np.pi * ks * delta / M)))
        for delta in range(1, M)
    )
    control = cl.pm_violation_report(cl.projective_clock_povm(clock))
    ok = (violation.orthogonality_defect >= closed_form - 1e-10
          and violation.orthogonality_defect > 1e-6
          and violation.idempotency_defect > 1e-6
          and control.orthogonality_defect < 1e-12
          and control.idempotency_defect < 1e-12)
    report(10, "povm differs from projector measure", ok,
           f"orth={violation.orthogonality_defect:.3e} "
           f"idem={violation.idempotency_defect:.3e} closed={closed_form:.3e}")


def test_acceptance_11_conditional_dynamics():
    rng = np.random.default_rng(211)
    ok = True
    for sigma in (1, -1):
        clock, system, ext, sub = qubit_pipeline(sigma=sigma)
        step_u = np.diag(np.exp(-1j * sigma * system.energies * clock.deltaT))
        worst = 1.0
        for _ in range(20):
            state = cl.make_physical_state(
                sub, rng.normal(size=2) + 1j * rng.normal(size=2))
            for m in range(clock.M):
                nxt = cl.conditional_state(sub, state, (m + 1) % clock.M)
                prop = step_u @ cl.conditional_state(sub, state, m)
                worst = min(worst, fidelity(nxt, prop))
        ok = ok and worst > 1 - 1e-10

    clock, _, _, sub = qubit_pipeline()
    povm = cl.build_time_povm(sub)
    p = cl.time_distribution(povm, np.array([1.0, 1.0]) / np.sqrt(2))
    gap = sub.pairs[1].s_value - sub.pairs[0].s_value
    fringe = (1 + np.cos(gap * (clock.times - clock.T0))) / clock.M
    ok = ok and float(np.max(np.abs(p - fringe))) < 1e-9
    report(11, "conditional dynamics and fringe", ok)


def test_acceptance_12_covariance():
    rng = np.random.default_rng(212)
    clock, system, ext, sub = qubit_pipeline()
    generic = cl.separable_state(
        unit(rng.normal(size=2) + 1j * rng.normal(size=2)),
        cl.gaussian_clock_state(clock))
    rep = cl.covariance_report(ext, generic, 5 * clock.deltaT)
    physical = cl.make_physical_state(sub, rng.normal(size=2) + 1j * rng.normal(size=2))
    rep_phys = cl.covariance_report(ext, physical.vector, 5 * clock.deltaT)
    ok = rep.shift_deviation < 1e-8 and rep_phys.stationary_deviation < 1e-10
    report(12, "covariance under evolution", ok,
           f"shift={rep.shift_deviation:.1e} frozen={rep_phys.stationary_deviation:.1e}")


def test_acceptance_13_sign_equivalence():
    rng = np.random.default_rng(213)
    _, _, _, sub_p = qubit_pipeline(1)
    _, _, _, sub_m = qubit_pipeline(-1)
    povm_p = cl.build_time_povm(sub_p)
    povm_m = cl.build_time_povm(sub_m)
    conj_dev = float(np.max(np.abs(povm_m.effects - povm_p.effects.conj())))
    dist_dev = 0.0
    for _ in range(20):
        c = rng.normal(size=2)
        c = c / np.linalg.norm(c)
        dist_dev = max(dist_dev, float(np.max(np.abs(
            cl.time_distribution(povm_p, c) - cl.time_distribution(povm_m, c)))))
    ok = conj_dev < 1e-12 and dist_dev < 1e-10
    report(13, "sign-convention equivalence", ok,
           f"conjugation={conj_dev:.1e} distributions={dist_dev:.1e}")


def test_acceptance_14_end_to_end_cli(tmp_path):
    start = time.perf_counter()
    result = subprocess.run(
        [sys.executable, "-m", "chronolab", "all", "--out", str(tmp_path)],
        capture_output=True, text=True, timeout=120)
    elapsed = time.perf_counter() - start
    ok = result.returncode == 0 and elapsed < 60.0
    report(14, "end-to-end scenario run", ok,
           f"exit={result.returncode} t={elapsed:.1f}s")

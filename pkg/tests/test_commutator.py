import numpy as np
import pytest

from chronolab import InvalidInputError, build_clock, commutator_residual, gaussian_clock_state


def independent_residual(M, deltaT, phi):
    # explicit loop-built operators, independent of the package path
    times = np.arange(M) * deltaT
    S = np.zeros((M, M), dtype=complex)
    for a in range(M):
        for b in range(M):
            acc = 0.0
            for k in range(-M // 2, M // 2):
                acc += (2 * np.pi * k / (M * deltaT)) * np.exp(2j * np.pi * k * (a - b) / M)
            S[a, b] = acc / M
    r = times * (S @ phi) - S @ (times * phi) - 1j * phi
    return np.linalg.norm(r)


def test_interior_gaussian_is_spectrally_accurate():
    # M = 64, dT = 0.1: a width-0.35 packet sits 9 widths from the boundary
    # and its bandwidth is far below Nyquist, so the residual is tiny.
    clock = build_clock(64, 0.1)
    phi = gaussian_clock_state(clock, width=3.5 * clock.deltaT)
    assert commutator_residual(clock, phi) < 1e-6


def test_wider_grid_reaches_deeper():
    clock = build_clock(128, 0.1)
    phi = gaussian_clock_state(clock, width=128 * 0.1 / 20)
    assert commutator_residual(clock, phi) < 1e-8


def test_residual_matches_independent_construction():
    clock = build_clock(16, 0.5)
    phi = gaussian_clock_state(clock, width=3 * clock.deltaT)
    mine = commutator_residual(clock, phi)
    ref = independent_residual(16, 0.5, phi)
    assert mine == pytest.approx(ref, abs=1e-12)


def test_edge_state_breaks_the_commutator():
    # A basis vector at the grid edge sees the periodic wrap head-on.
    clock = build_clock(8, 1.0)
    edge = np.zeros(8, dtype=complex)
    edge[0] = 1.0
    value = commutator_residual(clock, edge)
    assert value > 1.0 / clock.deltaT
    assert value == pytest.approx(8.637053543135647, abs=1e-9)


def test_dc_state_residual_frozen_value():
    # S kills the uniform vector, but S(T phi) picks up the sawtooth jump;
    # the residual is O(1), frozen from the independent 8x8 computation.
    clock = build_clock(8, 1.0)
    dc = np.ones(8, dtype=complex) / np.sqrt(8)
    value = commutator_residual(clock, dc)
    assert value == pytest.approx(independent_residual(8, 1.0, dc), abs=1e-12)
    assert value == pytest.approx(3.360497508147789, abs=1e-9)
    assert value > 1.0


def test_doubling_m_shrinks_residual_tenfold():
    width = 1.4
    previous = None
    for M in (64, 128, 256, 512):
        clock = build_clock(M, 0.1)
        value = commutator_residual(clock, gaussian_clock_state(clock, width=width))
        if previous is not None:
            assert previous / value >= 10.0
        previous = value


def test_input_validation():
    clock = build_clock(8, 1.0)
    with pytest.raises(InvalidInputError):
        commutator_residual(clock, np.ones(8))  # not normalized
    with pytest.raises(InvalidInputError):
        commutator_residual(clock, np.ones(4) / 2.0)

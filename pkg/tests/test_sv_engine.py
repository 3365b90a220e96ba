import math

import numpy as np
import pytest

from decoq.circuits import Circuit, Op, build_grover, build_qft
from decoq.dm_engine import run_channels
from decoq.noisegates import NoiseParams
from decoq.qcore import basis_state, fidelity_overlap
from decoq.sv_engine import (
    MAX_SV_QUBITS,
    CounterRNG,
    RunConfig,
    average_state,
    run_ideal,
    run_monte_carlo,
    run_noisy_sample,
    sample_states,
    worker_count,
)

from conftest import random_state


def test_run_ideal_examples():
    np.testing.assert_array_equal(run_ideal(Circuit(2, ()), basis_state(2, 2)), basis_state(2, 2))
    hh = Circuit(1, (Op("h", (0,)), Op("h", (0,))))
    np.testing.assert_allclose(run_ideal(hh, basis_state(1)), basis_state(1), atol=1e-15)
    np.testing.assert_allclose(run_ideal(build_qft(3), basis_state(3)), np.full(8, 8**-0.5), atol=1e-15)


def test_normals_look_standard():
    x = CounterRNG(1).normals(np.arange(2000), 100).ravel()
    se = 1 / math.sqrt(x.size)
    assert abs(x.mean()) < 5 * se
    assert abs(x.var() - 1) < 5 * math.sqrt(2) * se
    assert abs(np.mean(x**4) - 3) < 0.1


def test_counter_rng_is_stateless():
    rng = CounterRNG(7)
    a = rng.normals(np.arange(4), 6)
    b = rng.normals(np.arange(4), 6)
    np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(rng.normals(np.array([2]), 3, start=3), a[2:3, 3:])
    assert not np.array_equal(CounterRNG(8).normals(np.arange(4), 6), a)
    s = rng.stream(1)
    np.testing.assert_array_equal([s.next_normal() for _ in range(6)], a[1])


def test_zero_noise_is_ideal_bitwise():
    c = build_grover(4, 5, 2)
    psi = basis_state(4)
    ideal = run_ideal(c, psi)
    np.testing.assert_array_equal(run_noisy_sample(c, psi, NoiseParams(0), CounterRNG(3).stream(0)), ideal)
    for row in sample_states(c, psi, NoiseParams(0), seed=3, runs=5):
        np.testing.assert_array_equal(row, ideal)


def test_single_sample_matches_batch():
    c = build_qft(4)
    psi = random_state(4, np.random.default_rng(2))
    batch = sample_states(c, psi, NoiseParams(0.1), seed=9, runs=6)
    for k in range(6):
        one = run_noisy_sample(c, psi, NoiseParams(0.1), CounterRNG(9).stream(k))
        np.testing.assert_allclose(one, batch[k], atol=1e-14)


def test_results_independent_of_workers_and_chunking():
    c = build_grover(5, 17, 2)
    psi = basis_state(5)
    ref = sample_states(c, psi, NoiseParams(0.05), seed=42, runs=37, workers=1, chunk=37)
    for workers, chunk in ((4, 5), (3, 1), (2, 64)):
        out = sample_states(c, psi, NoiseParams(0.05), seed=42, runs=37, workers=workers, chunk=chunk)
        assert np.array_equal(out, ref)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("DECOQ_THREADS", "3")
    assert worker_count() == 3
    assert worker_count(2) == 2
    monkeypatch.setenv("DECOQ_THREADS", "0")
    assert worker_count() >= 1


def test_samples_stay_normalized():
    c = build_qft(5)
    states = sample_states(c, random_state(5, np.random.default_rng(4)), NoiseParams(0.3), seed=1, runs=50)
    np.testing.assert_allclose(np.linalg.norm(states, axis=1), 1, atol=1e-12)


def test_run_monte_carlo_records():
    c = build_grover(3, 6, 2)
    psi = basis_state(3)
    target = run_ideal(c, psi)
    samples = run_monte_carlo(c, psi, target, RunConfig(seed=5, runs=4, noise=NoiseParams(0)))
    assert [s.run_index for s in samples] == [0, 1, 2, 3]
    for s in samples:
        assert s.fidelity == pytest.approx(1, abs=1e-12)
        assert s.error == pytest.approx(0, abs=1e-12)


def test_average_state():
    states = np.array([basis_state(1, 0), basis_state(1, 1)])
    np.testing.assert_allclose(average_state(states), np.eye(2) / 2)
    plus = np.array([[1, 1]]) / math.sqrt(2)
    np.testing.assert_allclose(average_state(plus), np.full((2, 2), 0.5), atol=1e-15)


def test_grover_mean_success_matches_channel_average():
    n, marked, e, runs = 5, 3, 0.01, 2000
    c = build_grover(n, marked)
    psi = basis_state(n)
    states = sample_states(c, psi, NoiseParams(e), seed=11, runs=runs)
    p = np.abs(states[:, marked]) ** 2
    _, traj = run_channels(c, psi, NoiseParams(e), target=basis_state(n, marked))
    assert abs(p.mean() - traj.fidelities[-1]) < 4 * p.std() / math.sqrt(runs)


def test_mean_state_converges_to_channel_output():
    c = build_qft(3)
    psi = random_state(3, np.random.default_rng(8))
    rho_mc = average_state(sample_states(c, psi, NoiseParams(0.2), seed=2, runs=20000))
    rho, _ = run_channels(c, psi, NoiseParams(0.2))
    assert np.abs(rho_mc - rho).max() < 0.02
    assert fidelity_overlap(rho_mc, psi) == pytest.approx(fidelity_overlap(rho, psi), abs=0.01)


def test_rejects_relaxation_and_oversize():
    c = Circuit(1, (Op("relax", (0,), params=(1.0, 1.0, 0.1)),))
    with pytest.raises(ValueError, match="relax"):
        run_ideal(c, basis_state(1))
    with pytest.raises(ValueError, match="qubits"):
        big = MAX_SV_QUBITS + 1
        run_ideal(Circuit(big, ()), np.broadcast_to(np.zeros(1, complex), (2**big,)))

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decoq.circuits import Circuit, Op, build_qft, build_three_qubit_phase_code
from decoq.cj_engine import (
    MAX_CHOI_QUBITS,
    choi_fidelity,
    choi_from_kraus,
    choi_of_circuit,
    effective_channel,
    effective_choi,
    kraus_from_choi,
    max_entangled,
    relaxation_schedule,
)
from decoq.dm_engine import run_channels
from decoq.noisegates import NoiseParams, RelaxationParams
from decoq.qcore import apply_kraus, check_choi, partial_trace

from conftest import random_density, random_kraus


def apply_via_choi(choi, rho):
    """Channel action recovered from a relative state: d Tr_ref[J (I (x) rho^T)]."""
    d = rho.shape[0]
    return d * partial_trace(choi @ np.kron(np.eye(d), rho.T), (d, d), keep=(0,))


def test_max_entangled():
    np.testing.assert_allclose(max_entangled(2), np.array([1, 0, 0, 1]) / math.sqrt(2))
    assert np.linalg.norm(max_entangled(8)) == pytest.approx(1)
    with pytest.raises(ValueError):
        max_entangled(3)


def test_identity_and_z_examples():
    ident = choi_of_circuit(Circuit(1, ()))
    np.testing.assert_allclose(ident, np.array([[1, 0, 0, 1], [0] * 4, [0] * 4, [1, 0, 0, 1]]) / 2, atol=1e-15)
    z = choi_of_circuit(Circuit(1, (Op("z", (0,)),)))
    v = np.array([1, 0, 0, -1]) / math.sqrt(2)
    np.testing.assert_allclose(z, np.outer(v, v), atol=1e-15)


def test_unitary_circuit_is_pure():
    j = choi_of_circuit(build_qft(3))
    assert np.trace(j @ j).real == pytest.approx(1, abs=1e-12)
    assert choi_fidelity(j, j) == pytest.approx(1, abs=1e-12)


def test_noisy_choi_is_valid_state():
    j = choi_of_circuit(build_qft(2), NoiseParams(0.2), RelaxationParams(3, 2, 0.1))
    check_choi(j)
    assert np.trace(j @ j).real < 1


def test_phase_flip_fidelity():
    for p in (0.0, 0.1, 0.3):
        t2 = math.inf if p == 0 else -1 / math.log1p(-2 * p)
        ideal = choi_of_circuit(Circuit(1, ()))
        noisy = choi_of_circuit(Circuit(1, (Op("slot", (0,)),)), relaxation=RelaxationParams(math.inf, t2, 1))
        assert choi_fidelity(ideal, noisy) == pytest.approx(math.sqrt(1 - p), abs=1e-12)


def test_relaxation_schedule():
    c = Circuit(1, (Op("slot", (0,)),))
    assert relaxation_schedule(c, RelaxationParams(1, 1, 0)) is c
    t2 = -1 / math.log(0.5)
    rc = relaxation_schedule(c, RelaxationParams(math.inf, t2, 1))
    assert [op.gate for op in rc.ops] == ["relax"]
    j = choi_of_circuit(rc)
    assert j[0, 3].real == pytest.approx(0.25, abs=1e-12)
    qft = build_qft(3)
    assert relaxation_schedule(qft, RelaxationParams(3, 2, 0.1), "gate").count("relax") == 3 * len(qft)
    layered = relaxation_schedule(qft, RelaxationParams(3, 2, 0.1))
    assert layered.count("relax") % 3 == 0 and layered.count("relax") < 3 * len(qft)
    with pytest.raises(ValueError, match="placement"):
        relaxation_schedule(qft, RelaxationParams(3, 2, 0.1), "everywhere")


def test_choi_kraus_round_trip(rng):
    for d, k in ((2, 1), (2, 3), (4, 2)):
        ops = random_kraus(d, k, rng)
        j = choi_from_kraus(ops)
        rec = kraus_from_choi(j)
        assert len(rec) <= k
        np.testing.assert_allclose(choi_from_kraus(rec), j, atol=1e-12)
        rho = random_density(int(math.log2(d)), rng)
        np.testing.assert_allclose(apply_kraus(rho, rec, list(range(int(math.log2(d))))),
                                   sum(e @ rho @ e.conj().T for e in ops), atol=1e-12)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), k=st.integers(1, 4))
def test_choi_of_random_channel_properties(seed, k):
    rng = np.random.default_rng(seed)
    j = choi_from_kraus(random_kraus(4, k, rng))
    check_choi(j)
    np.testing.assert_allclose(partial_trace(j, (4, 4), keep=(1,)), np.eye(4) / 4, atol=1e-12)


def test_circuit_choi_matches_density_engine(rng):
    c = build_qft(2)
    noise = NoiseParams(0.15)
    j = choi_of_circuit(c, noise)
    for _ in range(5):
        rho = random_density(2, rng)
        out, _ = run_channels(c, rho, noise, target=np.eye(4)[0])
        np.testing.assert_allclose(apply_via_choi(j, rho), out, atol=1e-12)


def test_composition_is_associative(rng):
    a, b, c = (random_kraus(2, 2, rng) for _ in range(3))

    def compose(f, g):
        return [x @ y for x in f for y in g]

    lhs = choi_from_kraus(compose(compose(a, b), c))
    rhs = choi_from_kraus(compose(a, compose(b, c)))
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_effective_channel_of_code(rng):
    c = build_three_qubit_phase_code()
    images = effective_channel(c)
    np.testing.assert_allclose(images[0, 1], [[0, 1], [0, 0]], atol=1e-12)
    np.testing.assert_allclose(effective_choi(c), choi_of_circuit(Circuit(1, ())), atol=1e-12)


def test_choi_fidelity_requires_pure_reference():
    with pytest.raises(ValueError, match="pure"):
        choi_fidelity(np.eye(4) / 4, np.eye(4) / 4)
    with pytest.raises(ValueError, match="qubits"):
        choi_of_circuit(Circuit(MAX_CHOI_QUBITS + 1, ()))

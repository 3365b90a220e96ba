import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from decoq.analytics import (
    grover_ideal_prob,
    grover_success_estimate,
    hadamard_keep_prob,
    improved_cphase_channel,
    improved_cphase_channel_by_rotation,
    p_from_t2,
    phase_noise_svd,
    qft_fidelity_bound,
    qft_fidelity_bound_improved,
    t2_from_p,
    three_qubit_code_fmin,
)
from decoq.noisegates import NoiseParams, cphase_noise_channel
from decoq.qcore import superoperator

E_VALUES = [0.01, 0.05, 0.1, 0.3]


def test_frozen_values():
    assert hadamard_keep_prob(0.1) ** 6 == pytest.approx(0.9420471006178566, abs=1e-15)
    assert grover_success_estimate(2, 0, 0.1) == pytest.approx(hadamard_keep_prob(0.1) ** 2 / 4, abs=1e-15)
    assert three_qubit_code_fmin(0.1) == pytest.approx(0.985900603509299, abs=1e-15)
    assert t2_from_p(0.25, 1) == pytest.approx(1.4426950408889634, abs=1e-15)
    assert grover_ideal_prob(2, 1) == pytest.approx(1, abs=1e-15)


def test_f_against_literal_formula_and_numeric_svd():
    r = phase_noise_svd(0.1)
    assert r.f == pytest.approx(0.02492182978756368243, abs=1e-17)
    literal = (math.sqrt(1 + 3 * r.p) - r.p - 1) / math.sqrt(r.p * (1 - r.p))
    assert r.f == pytest.approx(literal, rel=1e-12)  # literal form cancels to ~1e-13
    u, s, _ = np.linalg.svd(r.matrix)
    np.testing.assert_allclose(s, [r.s1, r.s2], atol=1e-12)
    # left singular vectors agree with u up to column signs
    np.testing.assert_allclose(np.abs(u), np.abs(r.u), atol=1e-12)


def test_f_small_e_is_stable():
    r = phase_noise_svd(1e-6)
    # f ~ e/4 as e -> 0; the unrationalized difference would lose every digit here
    assert r.f == pytest.approx(0.25e-6, rel=1e-6)
    assert phase_noise_svd(0).f == 0


@pytest.mark.parametrize("e", E_VALUES)
def test_singular_values_and_rotation(e):
    r = phase_noise_svd(e)
    assert r.s1**2 + r.s2**2 == pytest.approx(4, abs=1e-12)
    np.testing.assert_allclose(r.u @ r.u.conj().T, np.eye(2), atol=1e-15)


@pytest.mark.parametrize("e", E_VALUES)
def test_improved_channel_is_same_channel(e):
    closed = improved_cphase_channel(e)
    rotated = improved_cphase_channel_by_rotation(e)
    for a, b in zip(closed.ops, rotated.ops):
        np.testing.assert_allclose(a, b, atol=1e-14)
    np.testing.assert_allclose(superoperator(closed), superoperator(cphase_noise_channel(NoiseParams(e))), atol=1e-12)
    # the re-mixed dominant operator carries more weight than the original one
    assert abs(closed.ops[0][3, 3]) > abs(cphase_noise_channel(NoiseParams(e)).ops[0][3, 3])


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("e", [0.005, 0.01, 0.02])
def test_improved_bound_is_tighter_but_below_one(n, e):
    assert qft_fidelity_bound(n, e) < qft_fidelity_bound_improved(n, e) < 1


def test_grover_estimate_zero_noise():
    for n in (3, 5, 8):
        for j in range(4):
            assert grover_success_estimate(n, j, 0) == grover_ideal_prob(n, j)


def test_fmin_endpoints():
    assert three_qubit_code_fmin(0) == 1
    assert three_qubit_code_fmin(1) == 0
    assert three_qubit_code_fmin(0.5) == pytest.approx(math.sqrt(0.5))


def test_t2_asymptotics_and_validation():
    p, t = 1e-6, 0.7
    assert t2_from_p(p, t) == pytest.approx(t / (2 * p), rel=1e-3)
    assert t2_from_p(0, 1) == math.inf
    for bad in (-0.1, 0.5, 0.7):
        with pytest.raises(ValueError):
            t2_from_p(bad, 1)
    with pytest.raises(ValueError):
        p_from_t2(0, 1)


@given(p=st.floats(0, 0.499), t=st.floats(1e-3, 1e3))
def test_t2_round_trip(p, t):
    assert p_from_t2(t2_from_p(p, t), t) == pytest.approx(p, rel=1e-9, abs=1e-15)


@given(e1=st.floats(1e-4, 1), e2=st.floats(1e-4, 1), n=st.integers(2, 10), j=st.integers(0, 5))
def test_grover_estimate_decreases_with_noise(e1, e2, n, j):
    lo, hi = sorted((e1, e2))
    assert grover_success_estimate(n, j, hi) <= grover_success_estimate(n, j, lo)
    assert hadamard_keep_prob(lo) < 1

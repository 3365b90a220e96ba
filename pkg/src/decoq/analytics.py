"""Closed-form fidelity estimates.

Covers the Grover success estimate, the two QFT lower bounds, the SVD
re-mixing of the controlled-phase Kraus pair, the three-qubit code
fidelity floor and the phase-flip probability / T2 conversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .noisegates import NoiseParams, cphase_noise_channel, rotate_kraus
from .qcore import KrausChannel

__all__ = [
    "SvdRotation",
    "hadamard_keep_prob",
    "grover_ideal_prob",
    "grover_success_estimate",
    "qft_fidelity_bound",
    "phase_noise_svd",
    "improved_cphase_channel",
    "improved_cphase_channel_by_rotation",
    "qft_fidelity_bound_improved",
    "three_qubit_code_fmin",
    "t2_from_p",
    "p_from_t2",
]


def hadamard_keep_prob(e: float) -> float:
    """Weight of the identity Kraus term of the Hadamard noise channel."""
    return 0.5 * (1 + math.exp(-2 * e * e))


def grover_ideal_prob(n: int, j: int) -> float:
    return math.sin((2 * j + 1) * math.asin(2 ** (-n / 2))) ** 2


def grover_success_estimate(n: int, j: int, e: float) -> float:
    """Noisy success probability after ``j`` iterations on ``n`` qubits.

    Every Hadamard (``n`` for the preparation, ``2n`` per iteration)
    contributes a factor ``(1 + exp(-2 e^2)) / 2``.
    """
    return hadamard_keep_prob(e) ** (n + 2 * n * j) * grover_ideal_prob(n, j)


def qft_fidelity_bound(n: int, e: float) -> float:
    p_h = hadamard_keep_prob(e)
    p_r = math.exp(-e * e)
    return p_h**n * p_r ** (n * (n - 1) / 8)


@dataclass(frozen=True)
class SvdRotation:
    """SVD of the 2x4 matrix stacking the controlled-phase Kraus diagonals.

    ``s1``, ``s2`` are its singular values and ``u`` the left singular
    vectors, ``u = [[1, -f], [f, 1]] / sqrt(1 + f^2)``. The dominant
    Kraus operator is obtained by mixing with ``u.conj().T``.
    """

    p: float
    a: float
    b: float
    s1: float
    s2: float
    f: float
    u: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[1, 1, 1, self.a], [0, 0, 0, self.b]])


def phase_noise_svd(e: float) -> SvdRotation:
    p = math.exp(-e * e)
    a = math.sqrt(p)
    b = math.sqrt(-math.expm1(-e * e))
    root = math.sqrt(1 + 3 * p)
    s1 = math.sqrt(2 + root)
    s2 = math.sqrt(max(2 - root, 0.0))
    if b == 0:
        f = 0.0
    else:
        # root - p - 1 cancels badly for small e; use the rationalized form
        # (root^2 - (p+1)^2) / (root + p + 1) = p(1-p) / (root + p + 1)
        f = a * b / (root + p + 1)
    norm = math.sqrt(1 + f * f)
    u = np.array([[1, -f], [f, 1]]) / norm
    return SvdRotation(p=p, a=a, b=b, s1=s1, s2=s2, f=f, u=u)


def improved_cphase_channel(e: float) -> KrausChannel:
    """Controlled-phase noise re-mixed so the first operator dominates.

    Same channel as :func:`~decoq.noisegates.cphase_noise_channel`.
    """
    r = phase_noise_svd(e)
    norm = math.sqrt(1 + r.f**2)
    e1 = np.diag([1, 1, 1, r.a + r.f * r.b]) / norm
    e2 = np.diag([-r.f, -r.f, -r.f, -r.f * r.a + r.b]) / norm
    return KrausChannel("cphase_noise_improved", (e1, e2))


def improved_cphase_channel_by_rotation(e: float) -> KrausChannel:
    """Same operators as :func:`improved_cphase_channel`, via ``rotate_kraus``."""
    r = phase_noise_svd(e)
    return rotate_kraus(cphase_noise_channel(NoiseParams(e)), r.u.conj().T)


def qft_fidelity_bound_improved(n: int, e: float) -> float:
    r = phase_noise_svd(e)
    p_r = (r.a + r.f * r.b) ** 2 / (1 + r.f**2) ** 4
    return hadamard_keep_prob(e) ** n * p_r ** (n * (n - 1) / 8)


def three_qubit_code_fmin(p: float) -> float:
    """Square-root fidelity floor ``sqrt(1 - 3p^2 + 2p^3)``."""
    return math.sqrt(max(1 - 3 * p * p + 2 * p**3, 0.0))


def t2_from_p(p: float, t: float) -> float:
    """Phase relaxation time giving flip probability ``p`` after time ``t``."""
    if not 0 <= p < 0.5:
        raise ValueError(f"phase-flip probability must lie in [0, 0.5), got {p}")
    if p == 0:
        return math.inf
    return -t / math.log1p(-2 * p)


def p_from_t2(t2: float, t: float) -> float:
    if not t2 > 0:
        raise ValueError(f"T2 must be positive, got {t2}")
    return -0.5 * math.expm1(-t / t2)

"""Gate library and noise models.

Two views of the same gate noise are provided. The stochastic samplers
(``v_noise``, ``noisy_hadamard_sample``, ``noisy_cphase_sample``) turn one
standard-normal draw into a unitary for Monte Carlo runs. The channel
constructors give the Kraus form of the average over those draws, which is
what the density-matrix and Choi engines use.

Randomness never originates here: callers pass the normal variate in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcore import KrausChannel, UnitaryGate

__all__ = [
    "NoiseParams",
    "RelaxationParams",
    "hadamard",
    "cphase",
    "standard_gates",
    "v_noise",
    "noisy_hadamard_sample",
    "noisy_cphase_sample",
    "hadamard_noise_channel",
    "cphase_noise_channel",
    "phase_relaxation_channel",
    "amplitude_relaxation_channel",
    "rotate_kraus",
]

_I2 = np.eye(2, dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)
# V_noise = cos(x) I + sin(x) J
_J = np.array([[0, 1], [-1, 0]], dtype=complex)


@dataclass(frozen=True)
class NoiseParams:
    """Gate error rate ``e`` scaling the Gaussian perturbation."""

    e: float = 0.0

    def __post_init__(self):
        if not self.e >= 0:
            raise ValueError(f"error rate must be >= 0, got {self.e}")


@dataclass(frozen=True)
class RelaxationParams:
    """Relaxation times and the duration over which they act.

    ``t1`` or ``t2`` may be ``math.inf`` to switch that process off.
    """

    t1: float
    t2: float
    t: float

    def __post_init__(self):
        if not self.t1 > 0 or not self.t2 > 0:
            raise ValueError(f"t1 and t2 must be positive, got {self.t1}, {self.t2}")
        if not self.t >= 0:
            raise ValueError(f"duration must be >= 0, got {self.t}")

    @property
    def gamma(self) -> float:
        """Amplitude-damping probability ``1 - exp(-t/T1)``."""
        return -math.expm1(-self.t / self.t1)

    @property
    def p(self) -> float:
        """Phase-flip probability ``(1 - exp(-t/T2)) / 2``."""
        return -0.5 * math.expm1(-self.t / self.t2)


def hadamard() -> UnitaryGate:
    return UnitaryGate("h", np.array([[1, 1], [1, -1]]) / np.sqrt(2))


def cphase(theta: float) -> UnitaryGate:
    """Controlled phase shift ``diag(1, 1, 1, exp(-i theta))``."""
    return UnitaryGate("cphase", np.diag([1, 1, 1, np.exp(-1j * theta)]))


def standard_gates() -> dict[str, UnitaryGate]:
    """Pauli, CNOT, SWAP and Toffoli gates keyed by lower-case name."""
    x = np.array([[0, 1], [1, 0]])
    y = np.array([[0, -1j], [1j, 0]])
    cnot = np.eye(4)[[0, 1, 3, 2]]
    swap = np.eye(4)[[0, 2, 1, 3]]
    toffoli = np.eye(8)[[0, 1, 2, 3, 4, 5, 7, 6]]
    return {
        "x": UnitaryGate("x", x),
        "y": UnitaryGate("y", y),
        "z": UnitaryGate("z", _Z),
        "cnot": UnitaryGate("cnot", cnot),
        "swap": UnitaryGate("swap", swap),
        "toffoli": UnitaryGate("toffoli", toffoli),
    }


def v_noise(params: NoiseParams, xi: float) -> UnitaryGate:
    """Real rotation by angle ``e * xi``."""
    a = params.e * xi
    return UnitaryGate("v_noise", math.cos(a) * _I2 + math.sin(a) * _J)


def noisy_hadamard_sample(params: NoiseParams, xi: float) -> UnitaryGate:
    """``H @ V_noise``: the draw acts before the ideal Hadamard."""
    return UnitaryGate("h_noisy", hadamard().matrix @ v_noise(params, xi).matrix)


def noisy_cphase_sample(theta: float, params: NoiseParams, xi: float) -> UnitaryGate:
    """Controlled phase with the angle shifted to ``theta + e * xi``."""
    return UnitaryGate("cphase_noisy", np.diag([1, 1, 1, np.exp(-1j * (theta + params.e * xi))]))


def hadamard_noise_channel(params: NoiseParams) -> KrausChannel:
    """Average of ``V rho V^dagger`` over ``xi ~ N(0, 1)``.

    Kraus operators ``sqrt(l1) I`` and ``sqrt(l2) J`` with
    ``l1 = (1 + exp(-2 e^2)) / 2`` and ``l2 = 1 - l1``.
    """
    decay = math.exp(-2 * params.e**2)
    l1 = 0.5 * (1 + decay)
    l2 = -0.5 * math.expm1(-2 * params.e**2)
    return KrausChannel("hadamard_noise", (math.sqrt(l1) * _I2, math.sqrt(l2) * _J))


def cphase_noise_channel(params: NoiseParams) -> KrausChannel:
    """Average over the random phase on ``|11>``, with ``P = exp(-e^2)``."""
    p = math.exp(-params.e**2)
    e1 = np.diag([1, 1, 1, math.sqrt(p)])
    e2 = np.diag([0, 0, 0, math.sqrt(-math.expm1(-params.e**2))])
    return KrausChannel("cphase_noise", (e1, e2))


def phase_relaxation_channel(params: RelaxationParams) -> KrausChannel:
    """Phase flip with probability ``p = (1 - exp(-t/T2)) / 2``."""
    p = params.p
    return KrausChannel("phase_relaxation", (math.sqrt(1 - p) * _I2, math.sqrt(p) * _Z))


def amplitude_relaxation_channel(params: RelaxationParams) -> KrausChannel:
    """Amplitude damping with ``gamma = 1 - exp(-t/T1)``."""
    g = params.gamma
    e0 = np.array([[1, 0], [0, math.sqrt(1 - g)]])
    e1 = np.array([[0, math.sqrt(g)], [0, 0]])
    return KrausChannel("amplitude_relaxation", (e0, e1))


def rotate_kraus(channel: KrausChannel, u: np.ndarray) -> KrausChannel:
    """Mix Kraus operators as ``B_i = sum_j u[i, j] E_j``.

    The resulting list describes the same channel for any unitary ``u``.

    Raises:
        ValueError: if ``u`` is not a ``k x k`` unitary, ``k = len(channel)``.
    """
    u = np.asarray(u, dtype=complex)
    k = len(channel.ops)
    if u.shape != (k, k):
        raise ValueError(f"mixing matrix must be {k}x{k}, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(k))) > 1e-10:
        raise ValueError("mixing matrix is not unitary")
    stacked = np.stack(channel.ops)
    mixed = np.einsum("ij,jab->iab", u, stacked)
    return KrausChannel(channel.name + "_rotated", tuple(mixed))

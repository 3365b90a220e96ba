"""Density-matrix simulation with Kraus noise and fixed-rank truncation.

Each noise-eligible Hadamard is followed by the averaged rotation channel
and each noise-eligible controlled phase by its dephasing channel on
``|11>``. After every op the state may be cut down to its ``rank`` largest
spectral components. Left unnormalized, the truncated state keeps the
discarded weight out of the fidelity, which is the useful mode for the
Grover estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .circuits import Circuit, Op, gate_matrix, mcz_mask
from .noisegates import (
    NoiseParams,
    RelaxationParams,
    amplitude_relaxation_channel,
    cphase_noise_channel,
    hadamard_noise_channel,
    phase_relaxation_channel,
)
from .qcore import TOL, KrausChannel, _apply_dm, fidelity_overlap, hermitian_eig, num_qubits

__all__ = [
    "MAX_DM_QUBITS",
    "DegenerateTruncationError",
    "RankConfig",
    "StepRecord",
    "Trajectory",
    "truncate_rank",
    "apply_op_dm",
    "run_channels",
    "rank_error_scan",
]

MAX_DM_QUBITS = 11


class DegenerateTruncationError(ValueError):
    """Truncation discarded the whole trace."""


@dataclass(frozen=True)
class RankConfig:
    """``rank=None`` keeps the full matrix."""

    rank: int | None = None
    normalize: bool = False

    def __post_init__(self):
        if self.rank is not None and self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")


@dataclass(frozen=True)
class StepRecord:
    step: int
    label: str
    tag: str
    fidelity: float
    trace: float


@dataclass
class Trajectory:
    records: list[StepRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def fidelities(self) -> np.ndarray:
        return np.array([r.fidelity for r in self.records])

    @property
    def traces(self) -> np.ndarray:
        return np.array([r.trace for r in self.records])

    def last_with_tag(self, tag: str) -> StepRecord:
        """Record of the final op carrying ``tag``."""
        for r in reversed(self.records):
            if r.tag == tag:
                return r
        raise KeyError(tag)


def truncate_rank(rho: np.ndarray, config: RankConfig) -> np.ndarray:
    """Keep the ``config.rank`` largest eigencomponents of ``rho``.

    Negative eigenvalues are clamped to zero. If nothing above
    ``TOL.clamp`` would be discarded the input is returned as is (only
    rescaled when normalizing).

    Raises:
        DegenerateTruncationError: if the kept part has zero trace.
    """
    if config.rank is None or config.rank >= rho.shape[0]:
        out = rho
    else:
        w, v = hermitian_eig(rho)
        if np.all(w[config.rank :] <= TOL.clamp):
            out = rho
        else:
            w = np.clip(w[: config.rank], 0.0, None)
            vk = v[:, : config.rank]
            out = (vk * w) @ vk.conj().T
    if config.normalize:
        tr = np.trace(out).real
        if tr <= 0:
            raise DegenerateTruncationError("truncation left a zero-trace matrix")
        out = out / tr
    elif out is not rho and np.trace(out).real <= 0:
        raise DegenerateTruncationError("truncation left a zero-trace matrix")
    return out


@lru_cache(maxsize=64)
def _gate_noise_channel(gate: str, e: float) -> KrausChannel:
    if gate == "h":
        return hadamard_noise_channel(NoiseParams(e))
    return cphase_noise_channel(NoiseParams(e))


@lru_cache(maxsize=64)
def _relax_channels(t1: float, t2: float, t: float) -> tuple[KrausChannel, ...]:
    params = RelaxationParams(t1, t2, t)
    out = []
    if params.gamma > 0:
        out.append(amplitude_relaxation_channel(params))
    if params.p > 0:
        out.append(phase_relaxation_channel(params))
    return tuple(out)


def _kraus(rho: np.ndarray, channel: KrausChannel, targets: tuple[int, ...], n: int) -> np.ndarray:
    out = _apply_dm(rho, channel.ops[0], targets, n)
    for op in channel.ops[1:]:
        out += _apply_dm(rho, op, targets, n)
    return out


def apply_op_dm(rho: np.ndarray, op: Op, n: int, noise: NoiseParams) -> np.ndarray:
    """Apply one circuit op, with its noise channel, to an ``n``-qubit ``rho``.

    ``n`` may exceed the circuit width; the op then acts on the leading
    qubits, which is how the Choi engine drives the output subsystem.
    """
    if op.gate == "slot":
        return rho
    if op.gate == "mcz":
        s = np.where(mcz_mask(op.targets, n), -1.0, 1.0)
        return rho * s[:, None] * s[None, :]
    if op.gate == "relax":
        for ch in _relax_channels(*op.params):
            rho = _kraus(rho, ch, op.targets, n)
        return rho
    rho = _apply_dm(rho, gate_matrix(op), op.targets, n)
    if op.noisy and op.gate in ("h", "cphase") and noise.e > 0:
        rho = _kraus(rho, _gate_noise_channel(op.gate, noise.e), op.targets, n)
    return rho


def run_channels(
    circuit: Circuit,
    initial: np.ndarray,
    noise: NoiseParams,
    config: RankConfig = RankConfig(),
    target: np.ndarray | None = None,
) -> tuple[np.ndarray, Trajectory]:
    """Run ``circuit`` on a density matrix, truncating after every op.

    Args:
        circuit: Circuit to run; ``relax`` ops are honoured.
        initial: Initial density matrix, or a state vector to be turned
            into its projector.
        noise: Gate error rate for noise-eligible ops.
        config: Truncation rank and normalization.
        target: Pure state for the per-step overlap. Defaults to the
            ideal output of the circuit on a pure ``initial``; required
            otherwise.

    Returns:
        Final density matrix and the per-step trajectory. Step 0 is the
        initial state.
    """
    rho = np.asarray(initial, dtype=complex)
    if rho.ndim == 1:
        if target is None:
            from .sv_engine import run_ideal

            target = run_ideal(circuit, rho)
        rho = np.outer(rho, rho.conj())
    elif target is None:
        raise ValueError("target state required for a mixed initial state")
    n = num_qubits(rho.shape[0])
    if n != circuit.n_qubits:
        raise ValueError(f"circuit has {circuit.n_qubits} qubits, state has {n}")
    if n > MAX_DM_QUBITS:
        raise ValueError(f"{n} qubits exceeds the density-matrix cap of {MAX_DM_QUBITS}")
    target = np.asarray(target, dtype=complex)
    if target.shape != (2**n,):
        raise ValueError(f"target has shape {target.shape}, expected ({2**n},)")

    traj = Trajectory([StepRecord(0, "init", "", fidelity_overlap(rho, target), float(np.trace(rho).real))])
    for i, op in enumerate(circuit.ops, start=1):
        rho = apply_op_dm(rho, op, n, noise)
        rho = truncate_rank(rho, config)
        traj.records.append(
            StepRecord(i, op.gate, op.tag, fidelity_overlap(rho, target), float(np.trace(rho).real))
        )
    return rho, traj


def rank_error_scan(
    circuit: Circuit,
    noise: NoiseParams,
    ranks: Sequence[int],
    target: np.ndarray | None = None,
    initial: np.ndarray | None = None,
) -> list[tuple[int, float]]:
    """``|F_rank - F_full|`` at the final step for unnormalized truncated runs."""
    if initial is None:
        initial = np.zeros(2**circuit.n_qubits, dtype=complex)
        initial[0] = 1.0
    if target is None:
        from .sv_engine import run_ideal

        target = run_ideal(circuit, np.asarray(initial, dtype=complex))
    _, full = run_channels(circuit, initial, noise, RankConfig(), target)
    f_full = full.records[-1].fidelity
    out = []
    for r in ranks:
        _, traj = run_channels(circuit, initial, noise, RankConfig(int(r), False), target)
        out.append((int(r), abs(traj.records[-1].fidelity - f_full)))
    return out

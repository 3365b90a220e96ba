"""Choi-Jamiolkowski relative states of circuits.

The relative state of an ``n``-qubit circuit is obtained by preparing
``sum_i |i>|i> / sqrt(d)`` on ``2n`` qubits and running the circuit, with
all its noise, on the first ``n`` of them. The first subsystem is the
channel output and the second the untouched reference; both are
row-major with the output most significant.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .circuits import Circuit, Op, layers
from .dm_engine import apply_op_dm
from .noisegates import NoiseParams, RelaxationParams
from .qcore import KrausChannel, hermitian_eig, num_qubits, partial_trace, root_fidelity

__all__ = [
    "MAX_CHOI_QUBITS",
    "max_entangled",
    "relaxation_schedule",
    "choi_of_circuit",
    "choi_from_kraus",
    "kraus_from_choi",
    "effective_channel",
    "effective_choi",
    "choi_fidelity",
]

MAX_CHOI_QUBITS = 6


def max_entangled(d: int) -> np.ndarray:
    """``sum_i |i>|i> / sqrt(d)`` as a vector of length ``d**2``."""
    num_qubits(d)
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * (d + 1)] = 1 / math.sqrt(d)
    return psi


def _relax_ops(qubits: Sequence[int], params: RelaxationParams, tag: str) -> list[Op]:
    return [Op("relax", (q,), (params.t1, params.t2, params.t), noisy=False, tag=tag) for q in qubits]


def relaxation_schedule(circuit: Circuit, params: RelaxationParams, where: str = "auto") -> Circuit:
    """Insert relaxation of duration ``params.t`` on every qubit.

    Args:
        circuit: Circuit to decorate.
        params: Relaxation times and the duration of one relaxation slot.
        where: ``"slot"`` replaces each ``slot`` marker; ``"layer"`` relaxes
            after every ASAP gate layer; ``"gate"`` after every gate.
            ``"auto"`` picks ``"slot"`` when the circuit has markers and
            ``"layer"`` otherwise.
    """
    if where == "auto":
        where = "slot" if circuit.count("slot") else "layer"
    if where not in ("slot", "layer", "gate"):
        raise ValueError(f"unknown relaxation placement {where!r}")
    if params.t == 0:
        return circuit
    qubits = range(circuit.n_qubits)
    if where == "slot":
        ops: list[Op] = []
        for op in circuit.ops:
            ops.extend(_relax_ops(qubits, params, "relax") if op.gate == "slot" else [op])
        return circuit.with_ops(ops)
    if where == "gate":
        ops = []
        for op in circuit.ops:
            ops.append(op)
            if op.gate != "slot":
                ops.extend(_relax_ops(qubits, params, op.tag))
        return circuit.with_ops(ops)
    ops = []
    for layer in layers(circuit):
        ops.extend(circuit.ops[i] for i in layer)
        ops.extend(_relax_ops(qubits, params, "relax"))
    return circuit.with_ops(ops)


def _decorate(circuit: Circuit, relaxation: RelaxationParams | None, where: str) -> Circuit:
    return circuit if relaxation is None else relaxation_schedule(circuit, relaxation, where)


def choi_of_circuit(
    circuit: Circuit,
    noise: NoiseParams = NoiseParams(),
    relaxation: RelaxationParams | None = None,
    where: str = "auto",
) -> np.ndarray:
    """Relative state of ``circuit`` with gate noise and optional relaxation.

    Raises:
        ValueError: if the circuit is wider than ``MAX_CHOI_QUBITS``.
    """
    n = circuit.n_qubits
    if n > MAX_CHOI_QUBITS:
        raise ValueError(f"{n} qubits exceeds the Choi-state cap of {MAX_CHOI_QUBITS}")
    circuit = _decorate(circuit, relaxation, where)
    phi = max_entangled(2**n)
    rho = np.outer(phi, phi.conj())
    for op in circuit.ops:
        rho = apply_op_dm(rho, op, 2 * n, noise)
    return rho


def choi_from_kraus(ops: KrausChannel | Sequence[np.ndarray]) -> np.ndarray:
    ops = ops.ops if isinstance(ops, KrausChannel) else ops
    d = ops[0].shape[0]
    vecs = np.stack([np.asarray(k).reshape(-1) for k in ops])
    return vecs.T @ vecs.conj() / d


def kraus_from_choi(choi: np.ndarray, cutoff: float = 1e-12) -> KrausChannel:
    """Kraus operators ``sqrt(d mu_k) reshape(v_k)`` from the eigenpairs."""
    d = int(round(math.sqrt(choi.shape[0])))
    w, v = hermitian_eig(choi)
    keep = w > cutoff
    ops = [math.sqrt(d * mu) * v[:, k].reshape(d, d) for k, mu in zip(np.flatnonzero(keep), w[keep])]
    return KrausChannel("from_choi", tuple(ops))


def effective_channel(
    circuit: Circuit,
    data_qubit: int = 0,
    noise: NoiseParams = NoiseParams(),
    relaxation: RelaxationParams | None = None,
    where: str = "auto",
) -> np.ndarray:
    """Single-qubit channel seen by ``data_qubit`` with ancillas in ``|0>``.

    Returns:
        Array ``out[i, j]`` holding the 2x2 image of ``|i><j|`` after the
        ancillas are traced out.
    """
    n = circuit.n_qubits
    circuit = _decorate(circuit, relaxation, where)
    dims = (2,) * n
    out = np.zeros((2, 2, 2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            ket = np.zeros(2**n, dtype=complex)
            bra = np.zeros(2**n, dtype=complex)
            ket[i << (n - 1 - data_qubit)] = 1
            bra[j << (n - 1 - data_qubit)] = 1
            rho = np.outer(ket, bra)
            for op in circuit.ops:
                rho = apply_op_dm(rho, op, n, noise)
            out[i, j] = partial_trace(rho, dims, keep=(data_qubit,))
    return out


def effective_choi(circuit: Circuit, data_qubit: int = 0, **kwargs) -> np.ndarray:
    """Relative state of the data qubit's effective channel (4x4)."""
    images = effective_channel(circuit, data_qubit, **kwargs)
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2))
            unit[i, j] = 1
            choi += np.kron(images[i, j], unit) / 2
    return choi


def choi_fidelity(ideal: np.ndarray, noisy: np.ndarray, purity_tol: float = 1e-8) -> float:
    """Square-root fidelity of ``noisy`` against the pure ``ideal`` state.

    Raises:
        ValueError: if ``ideal`` is not rank one within ``purity_tol``.
    """
    if ideal.shape != noisy.shape:
        raise ValueError(f"shape mismatch {ideal.shape} vs {noisy.shape}")
    w, v = hermitian_eig(ideal)
    if abs(w[0] - 1) > purity_tol or (len(w) > 1 and abs(w[1]) > purity_tol):
        raise ValueError("ideal reference Choi state is not pure")
    return min(root_fidelity(noisy, v[:, 0]), 1.0)

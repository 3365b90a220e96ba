"""Circuit container and builders for the benchmark circuits.

A :class:`Circuit` is an ordered tuple of :class:`Op` records. Besides the
ordinary gates it knows three structural op kinds:

``mcz``
    Multi-controlled Z over all of its targets (phase -1 on the all-ones
    pattern). Applied as a diagonal sign flip by every engine.
``slot``
    A no-op marker where relaxation or deliberate errors can be inserted.
``relax``
    Amplitude then phase relaxation on one qubit; ``params`` is
    ``(t1, t2, t)``. Only the density-matrix and Choi engines accept it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .noisegates import cphase, hadamard, standard_gates
from .qcore import UnitaryGate

__all__ = [
    "Op",
    "Circuit",
    "GATE_ARITY",
    "gate_matrix",
    "mcz_mask",
    "layers",
    "fill_slots",
    "build_grover",
    "optimal_iterations",
    "build_qft",
    "build_three_qubit_phase_code",
    "build_shor_code",
]

# None: any number of targets
GATE_ARITY = {
    "h": 1,
    "x": 1,
    "y": 1,
    "z": 1,
    "cnot": 2,
    "swap": 2,
    "toffoli": 3,
    "cphase": 2,
    "mcz": None,
    "slot": None,
    "relax": 1,
    "unitary": None,
}

_STANDARD = standard_gates()


@dataclass(frozen=True)
class Op:
    """One circuit operation.

    ``noisy`` marks the op as eligible for gate noise; engines only perturb
    ``h`` and ``cphase`` ops that carry it. ``matrix`` is used by the
    ``unitary`` gate id only.
    """

    gate: str
    targets: tuple[int, ...]
    params: tuple[float, ...] = ()
    noisy: bool = True
    tag: str = ""
    matrix: np.ndarray | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    ops: tuple[Op, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"circuit needs at least one qubit, got {self.n_qubits}")
        ops = tuple(self.ops)
        for op in ops:
            if op.gate not in GATE_ARITY:
                raise ValueError(f"unknown gate id {op.gate!r}")
            arity = GATE_ARITY[op.gate]
            if arity is not None and len(op.targets) != arity:
                raise ValueError(f"{op.gate} takes {arity} targets, got {op.targets}")
            if len(set(op.targets)) != len(op.targets):
                raise ValueError(f"duplicate targets in {op}")
            for t in op.targets:
                if not 0 <= t < self.n_qubits:
                    raise ValueError(f"target {t} out of range in {op}")
            if op.gate == "cphase" and len(op.params) != 1:
                raise ValueError("cphase needs exactly one angle")
            if op.gate == "relax" and len(op.params) != 3:
                raise ValueError("relax needs (t1, t2, t)")
            if op.gate == "unitary":
                if op.matrix is None or op.matrix.shape != (2 ** len(op.targets),) * 2:
                    raise ValueError("unitary op needs a matrix matching its targets")
        object.__setattr__(self, "ops", ops)

    def __len__(self):
        return len(self.ops)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise ValueError("cannot join circuits of different width")
        return Circuit(self.n_qubits, self.ops + other.ops)

    def count(self, gate: str) -> int:
        return sum(op.gate == gate for op in self.ops)

    def with_ops(self, ops: Iterable[Op]) -> "Circuit":
        return Circuit(self.n_qubits, tuple(ops))


def gate_matrix(op: Op) -> np.ndarray:
    """Ideal unitary of a gate op (not defined for mcz, slot or relax)."""
    if op.gate == "h":
        return hadamard().matrix
    if op.gate == "cphase":
        return cphase(op.params[0]).matrix
    if op.gate == "unitary":
        return UnitaryGate("unitary", op.matrix).matrix
    if op.gate in _STANDARD:
        return _STANDARD[op.gate].matrix
    raise ValueError(f"{op.gate!r} has no gate matrix")


def mcz_mask(targets: Sequence[int], n: int) -> np.ndarray:
    """Boolean mask of basis indices whose ``targets`` bits are all 1."""
    idx = np.arange(2**n)
    mask = np.ones(2**n, dtype=bool)
    for t in targets:
        mask &= ((idx >> (n - 1 - t)) & 1).astype(bool)
    return mask


def layers(circuit: Circuit) -> list[list[int]]:
    """Group op indices into ASAP layers of qubit-disjoint ops.

    ``slot`` ops are skipped; ``relax`` ops never appear in builder output.
    """
    free_at = [0] * circuit.n_qubits
    out: list[list[int]] = []
    for i, op in enumerate(circuit.ops):
        if op.gate == "slot":
            continue
        level = max((free_at[t] for t in op.targets), default=0)
        if level == len(out):
            out.append([])
        out[level].append(i)
        for t in op.targets:
            free_at[t] = level + 1
    return out


def fill_slots(circuit: Circuit, ops: Sequence[Op]) -> Circuit:
    """Replace every ``slot`` marker by ``ops``."""
    new: list[Op] = []
    for op in circuit.ops:
        if op.gate == "slot":
            new.extend(ops)
        else:
            new.append(op)
    return circuit.with_ops(new)


def optimal_iterations(n: int) -> int:
    return int(round(math.pi / (4 * math.asin(2 ** (-n / 2))) - 0.5))


def _phase_flip_about(pattern: int, n: int, tag: str) -> list[Op]:
    # X-conjugated multi-controlled Z selects the basis state `pattern`
    flips = [q for q in range(n) if not (pattern >> (n - 1 - q)) & 1]
    xs = [Op("x", (q,), noisy=False, tag=tag) for q in flips]
    return xs + [Op("mcz", tuple(range(n)), noisy=False, tag=tag)] + xs


def build_grover(n: int, marked: int, iterations: int | str = "optimal") -> Circuit:
    """Grover search for one marked basis state.

    Layout: a Hadamard on every qubit, then ``iterations`` rounds of
    (oracle, H on all, phase flip about ``|0...0>``, H on all). Hadamards
    total ``n + 2 n j``. Ops are tagged ``"prep"`` and ``"iter<j>"``.
    """
    if not 0 <= marked < 2**n:
        raise ValueError(f"marked state {marked} out of range for {n} qubits")
    j = optimal_iterations(n) if iterations == "optimal" else int(iterations)
    if j < 0:
        raise ValueError(f"iterations must be >= 0, got {j}")
    ops = [Op("h", (q,), tag="prep") for q in range(n)]
    for it in range(1, j + 1):
        tag = f"iter{it}"
        ops += _phase_flip_about(marked, n, tag)
        ops += [Op("h", (q,), tag=tag) for q in range(n)]
        ops += _phase_flip_about(0, n, tag)
        ops += [Op("h", (q,), tag=tag) for q in range(n)]
    return Circuit(n, tuple(ops))


def build_qft(n: int) -> Circuit:
    """QFT from H and controlled-phase gates, without the final swaps.

    With the ``exp(-i theta)`` phase convention the circuit maps ``|x>`` to
    ``sum_k exp(-2 pi i x k / 2**n) |rev(k)> / 2**(n/2)`` where ``rev``
    reverses the bit order.
    """
    ops = []
    for k in range(n):
        ops.append(Op("h", (k,), tag=f"q{k}"))
        for m in range(k + 1, n):
            ops.append(Op("cphase", (m, k), (math.pi / 2 ** (m - k),), tag=f"q{k}"))
    return Circuit(n, tuple(ops))


def _payload_ops(payload: UnitaryGate | None) -> list[Op]:
    if payload is None:
        return []
    if payload.arity != 1:
        raise ValueError(f"payload must act on one qubit, got arity {payload.arity}")
    return [Op("unitary", (0,), noisy=False, tag="payload", matrix=payload.matrix)]


def build_three_qubit_phase_code(payload: UnitaryGate | None = None) -> Circuit:
    """Phase-flip repetition code on qubits (0 data, 1, 2 ancillas).

    Ancillas must start in ``|0>``. The optional payload acts on the data
    qubit right before encoding. Correction is a coherent Toffoli majority
    vote; the syndrome is left on the ancillas.
    """
    ops = _payload_ops(payload)
    ops += [Op("cnot", (0, 1), tag="encode"), Op("cnot", (0, 2), tag="encode")]
    ops += [Op("h", (q,), tag="encode") for q in range(3)]
    ops.append(Op("slot", (0, 1, 2), tag="slot"))
    ops += [Op("h", (q,), tag="decode") for q in range(3)]
    ops += [Op("cnot", (0, 1), tag="decode"), Op("cnot", (0, 2), tag="decode")]
    ops.append(Op("toffoli", (1, 2, 0), tag="decode"))
    return Circuit(3, tuple(ops))


def build_shor_code(payload: UnitaryGate | None = None) -> Circuit:
    """Nine-qubit Shor code, data on qubit 0, blocks (0,1,2), (3,4,5), (6,7,8)."""
    blocks = (0, 3, 6)
    ops = _payload_ops(payload)
    ops += [Op("cnot", (0, 3), tag="encode"), Op("cnot", (0, 6), tag="encode")]
    ops += [Op("h", (b,), tag="encode") for b in blocks]
    for b in blocks:
        ops += [Op("cnot", (b, b + 1), tag="encode"), Op("cnot", (b, b + 2), tag="encode")]
    ops.append(Op("slot", tuple(range(9)), tag="slot"))
    for b in blocks:
        ops += [Op("cnot", (b, b + 1), tag="decode"), Op("cnot", (b, b + 2), tag="decode")]
        ops.append(Op("toffoli", (b + 1, b + 2, b), tag="decode"))
    ops += [Op("h", (b,), tag="decode") for b in blocks]
    ops += [Op("cnot", (0, 3), tag="decode"), Op("cnot", (0, 6), tag="decode")]
    ops.append(Op("toffoli", (3, 6, 0), tag="decode"))
    return Circuit(9, tuple(ops))


def with_noise_flag(circuit: Circuit, noisy: bool) -> Circuit:
    return circuit.with_ops(replace(op, noisy=noisy) for op in circuit.ops)

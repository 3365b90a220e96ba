"""Core linear algebra for pure and mixed qubit states.

States are plain numpy arrays: a state vector is a complex array of length
``2**n`` and a density matrix a ``(2**n, 2**n)`` complex array. Qubit 0 is
the most significant bit of the basis index, so ``|q0 q1 ... q_{n-1}>``
corresponds to the integer ``q0 * 2**(n-1) + ... + q_{n-1}``.

Gates are applied by reshaping the state into a rank-``n`` tensor and
contracting the target axes; the full ``2**n x 2**n`` operator is never
formed. Density matrices are handled as vectors over ``2n`` qubits (row
indices first, column indices second), so a unitary ``U`` acting on
targets ``t`` becomes ``U`` on ``t`` and ``conj(U)`` on ``t + n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "Tolerances",
    "TOL",
    "UnitaryGate",
    "KrausChannel",
    "num_qubits",
    "basis_state",
    "apply_matrix",
    "apply_gate_sv",
    "vectorize_dm",
    "devectorize_dm",
    "apply_unitary_dm",
    "apply_kraus",
    "hermitian_eig",
    "fidelity_overlap",
    "root_fidelity",
    "partial_trace",
    "trace_distance",
    "superoperator",
    "embed",
    "check_density_matrix",
    "check_choi",
]


@dataclass
class Tolerances:
    """Numerical tolerances shared by all modules.

    Mutate the module-level ``TOL`` instance to override a default.
    """

    unitary: float = 1e-10
    completeness: float = 1e-10
    hermitian: float = 1e-10
    psd: float = 1e-10
    trace: float = 1e-10
    clamp: float = 1e-9
    imag_residue: float = 1e-12
    partial_trace_identity: float = 1e-8


TOL = Tolerances()


def num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or (1 << n) != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def basis_state(n_qubits: int, index: int = 0) -> np.ndarray:
    if not 0 <= index < 2**n_qubits:
        raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
    psi = np.zeros(2**n_qubits, dtype=complex)
    psi[index] = 1.0
    return psi


@dataclass(frozen=True)
class UnitaryGate:
    """A named unitary acting on ``arity`` qubits."""

    name: str
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"gate {self.name!r}: matrix must be square, got {m.shape}")
        num_qubits(m.shape[0])
        err = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if err > TOL.unitary:
            raise ValueError(f"gate {self.name!r} is not unitary (max deviation {err:.3g})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return num_qubits(self.matrix.shape[0])


@dataclass(frozen=True)
class KrausChannel:
    """A quantum operation given by its Kraus operators.

    Construction fails if ``sum_i E_i^dagger E_i`` deviates from the
    identity by more than ``TOL.completeness``.
    """

    name: str
    ops: tuple = field(repr=False)

    def __post_init__(self):
        ops = tuple(np.asarray(op, dtype=complex) for op in self.ops)
        if not ops:
            raise ValueError(f"channel {self.name!r} has no Kraus operators")
        dim = ops[0].shape[0]
        num_qubits(dim)
        for op in ops:
            if op.shape != (dim, dim):
                raise ValueError(f"channel {self.name!r}: inconsistent operator shapes")
            op.setflags(write=False)
        gram = sum(op.conj().T @ op for op in ops)
        err = np.max(np.abs(gram - np.eye(dim)))
        if err > TOL.completeness:
            raise ValueError(
                f"channel {self.name!r} violates completeness (max deviation {err:.3g})"
            )
        object.__setattr__(self, "ops", ops)

    @property
    def arity(self) -> int:
        return num_qubits(self.ops[0].shape[0])

    def __len__(self):
        return len(self.ops)


def _check_targets(targets: Sequence[int], n_qubits: int, arity: int) -> tuple[int, ...]:
    targets = tuple(int(t) for t in targets)
    if len(targets) != arity:
        raise ValueError(f"gate of arity {arity} given {len(targets)} targets")
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate targets {targets}")
    for t in targets:
        if not 0 <= t < n_qubits:
            raise ValueError(f"target {t} out of range for {n_qubits} qubits")
    return targets


def apply_matrix(psi: np.ndarray, matrix: np.ndarray, targets: Sequence[int], n_qubits: int) -> np.ndarray:
    """Apply ``matrix`` to the ``targets`` axes of a batch of states.

    Args:
        psi: Array of shape ``(..., 2**n_qubits)``; leading axes are batch axes.
        matrix: Either ``(2**k, 2**k)`` shared by the whole batch, or
            ``(B, 2**k, 2**k)`` with one matrix per state (``psi`` then has
            shape ``(B, 2**n_qubits)``).
        targets: ``k`` distinct qubit indices. The first target is the most
            significant bit of the gate's own index.
        n_qubits: Number of qubits the last axis of ``psi`` spans.

    Returns:
        New array with the same shape as ``psi``.
    """
    k = len(targets)
    batch = psi.shape[:-1]
    tensor = psi.reshape(batch + (2,) * n_qubits)
    nb = len(batch)
    axes = [nb + t for t in targets]
    moved = np.moveaxis(tensor, axes, range(tensor.ndim - k, tensor.ndim))
    shape = moved.shape
    flat = moved.reshape(shape[:-k] + (2**k,))
    if matrix.ndim == 2:
        out = flat @ matrix.T
    else:
        flat = flat.reshape(matrix.shape[0], -1, 2**k)
        out = np.einsum("bij,brj->bri", matrix, flat)
    out = np.moveaxis(out.reshape(shape), range(tensor.ndim - k, tensor.ndim), axes)
    return np.ascontiguousarray(out).reshape(psi.shape)


def apply_gate_sv(state: np.ndarray, gate: UnitaryGate | np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Return ``U|psi>`` with ``U`` acting on ``targets``."""
    state = np.asarray(state, dtype=complex)
    n = num_qubits(state.shape[-1])
    m = gate.matrix if isinstance(gate, UnitaryGate) else np.asarray(gate, dtype=complex)
    targets = _check_targets(targets, n, num_qubits(m.shape[0]))
    return apply_matrix(state, m, targets, n)


def vectorize_dm(rho: np.ndarray) -> np.ndarray:
    """Row-major flattening ``sum rho_ij |i>|j>``."""
    return np.asarray(rho).reshape(-1)


def devectorize_dm(vec: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(vec.shape[-1])))
    if d * d != vec.shape[-1]:
        raise ValueError(f"length {vec.shape[-1]} is not a perfect square")
    return np.asarray(vec).reshape(d, d)


def _apply_dm(rho: np.ndarray, matrix: np.ndarray, targets: tuple[int, ...], n: int) -> np.ndarray:
    # (U on rows) x (conj U on columns) of the 2n-qubit vectorized state.
    vec = apply_matrix(rho.reshape(-1), matrix, targets, 2 * n)
    vec = apply_matrix(vec, matrix.conj(), tuple(t + n for t in targets), 2 * n)
    return vec.reshape(rho.shape)


def apply_unitary_dm(rho: np.ndarray, gate: UnitaryGate | np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Return ``U rho U^dagger`` computed on the vectorized state."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho.shape[0])
    m = gate.matrix if isinstance(gate, UnitaryGate) else np.asarray(gate, dtype=complex)
    targets = _check_targets(targets, n, num_qubits(m.shape[0]))
    return _apply_dm(rho, m, targets, n)


def apply_kraus(rho: np.ndarray, channel: KrausChannel, targets: Sequence[int]) -> np.ndarray:
    """Return ``sum_i E_i rho E_i^dagger`` with each ``E_i`` on ``targets``."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho.shape[0])
    targets = _check_targets(targets, n, channel.arity)
    out = np.zeros_like(rho)
    for op in channel.ops:
        out += _apply_dm(rho, op, targets, n)
    return out


def hermitian_eig(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns:
        ``(eigenvalues, eigenvectors)`` with eigenvalues in descending order
        and eigenvectors as columns. Ties keep the ascending order produced
        by LAPACK, so the result is deterministic.

    Raises:
        ValueError: if ``rho`` is not Hermitian within ``TOL.hermitian``.
    """
    rho = np.asarray(rho, dtype=complex)
    err = np.max(np.abs(rho - rho.conj().T)) if rho.size else 0.0
    if err > TOL.hermitian:
        raise ValueError(f"matrix is not Hermitian (max deviation {err:.3g})")
    w, v = np.linalg.eigh(rho)
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def fidelity_overlap(rho: np.ndarray, psi: np.ndarray) -> float:
    """``<psi|rho|psi>``; sub-normalized ``rho`` is used as is."""
    rho = np.asarray(rho)
    psi = np.asarray(psi)
    if rho.shape != (psi.shape[0], psi.shape[0]):
        raise ValueError(f"dimension mismatch: rho {rho.shape}, psi {psi.shape}")
    val = np.vdot(psi, rho @ psi)
    return float(val.real)


def root_fidelity(rho: np.ndarray, psi: np.ndarray) -> float:
    """Square-root fidelity ``sqrt(<psi|rho|psi>)``."""
    return float(np.sqrt(max(fidelity_overlap(rho, psi), 0.0)))


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Args:
        rho: Density matrix over the tensor product of ``dims``.
        dims: Subsystem dimensions, first factor most significant.
        keep: Indices into ``dims`` of the subsystems to keep, in order.
    """
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    rho = np.asarray(rho)
    if rho.shape != (total, total):
        raise ValueError(f"split {dims} inconsistent with matrix shape {rho.shape}")
    keep = tuple(keep)
    if len(set(keep)) != len(keep) or any(not 0 <= k < len(dims) for k in keep):
        raise ValueError(f"invalid subsystem selection {keep} for {len(dims)} subsystems")
    m = len(dims)
    tensor = rho.reshape(dims + dims)
    traced = [i for i in range(m) if i not in keep]
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    row = list(letters[:m])
    col = list(letters[m : 2 * m])
    for i in traced:
        col[i] = row[i]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    res = np.einsum("".join(row) + "".join(col) + "->" + out, tensor)
    d = int(np.prod([dims[i] for i in keep]))
    return res.reshape(d, d)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the trace norm of ``a - b`` (both Hermitian)."""
    w = np.linalg.eigvalsh(np.asarray(a) - np.asarray(b))
    return float(0.5 * np.sum(np.abs(w)))


def superoperator(channel: KrausChannel | Sequence[np.ndarray]) -> np.ndarray:
    """Row-major superoperator ``sum_i E_i (x) conj(E_i)``."""
    ops = channel.ops if isinstance(channel, KrausChannel) else channel
    return sum(np.kron(op, op.conj()) for op in ops)


def embed(matrix: np.ndarray, targets: Sequence[int], n_qubits: int) -> np.ndarray:
    """Dense ``2**n x 2**n`` embedding of a gate. For tests and oracles only."""
    dim = 2**n_qubits
    cols = apply_matrix(np.eye(dim, dtype=complex), np.asarray(matrix, dtype=complex), targets, n_qubits)
    # each row of the identity is a basis state, so rows hold U|i>
    return cols.T


def check_density_matrix(rho: np.ndarray, normalized: bool = True) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, PSD and has a valid trace."""
    rho = np.asarray(rho)
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > TOL.hermitian:
        raise ValueError(f"not Hermitian (max deviation {herm:.3g})")
    wmin = np.linalg.eigvalsh(rho)[0]
    if wmin < -TOL.psd:
        raise ValueError(f"not positive semidefinite (min eigenvalue {wmin:.3g})")
    tr = np.trace(rho).real
    if normalized and abs(tr - 1) > TOL.trace:
        raise ValueError(f"trace {tr!r} differs from 1")
    if not normalized and not 0 < tr <= 1 + TOL.trace:
        raise ValueError(f"trace {tr!r} outside (0, 1]")


def check_choi(choi: np.ndarray, trace_preserving: bool = True) -> None:
    """Validate a Choi state with the output subsystem first."""
    check_density_matrix(choi)
    d = int(round(np.sqrt(choi.shape[0])))
    if trace_preserving:
        ref = partial_trace(choi, (d, d), keep=(1,))
        err = np.max(np.abs(ref - np.eye(d) / d))
        if err > TOL.partial_trace_identity:
            raise ValueError(f"reference marginal differs from I/d by {err:.3g}")

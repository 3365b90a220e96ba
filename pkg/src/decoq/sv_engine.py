"""State-vector simulation with Monte Carlo gate noise.

Every noise-eligible Hadamard or controlled-phase op draws its own
standard-normal variate and is replaced by the corresponding stochastic
unitary. Draws come from a counter-based generator: the ``i``-th draw of
run ``k`` is a pure function of ``(seed, k, i)``. Runs can therefore be
batched, split across threads, or executed one at a time with identical
results.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, Op, gate_matrix, mcz_mask
from .noisegates import NoiseParams
from .qcore import apply_matrix, num_qubits

__all__ = [
    "MAX_SV_QUBITS",
    "CounterRNG",
    "RunStream",
    "RunConfig",
    "FidelitySample",
    "run_ideal",
    "run_noisy_sample",
    "sample_states",
    "run_monte_carlo",
    "average_state",
    "worker_count",
]

MAX_SV_QUBITS = 22

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    x = x + _GOLDEN
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


class CounterRNG:
    """Seeded counter-based normal generator with per-run substreams.

    Uniforms are splitmix64 hashes of ``(seed, run, counter)``; each normal
    consumes two of them through the Box-Muller cosine branch.
    """

    def __init__(self, seed: int = 0):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        with np.errstate(over="ignore"):
            self._key = _splitmix64(np.uint64(self.seed))

    def _uniform(self, runs: np.ndarray, counters: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore"):
            h = _splitmix64(self._key ^ runs.astype(np.uint64))
            h = _splitmix64(h ^ counters.astype(np.uint64))
        return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53

    def normals(self, runs, n_draws: int, start: int = 0) -> np.ndarray:
        """Draws ``start .. start+n_draws-1`` of each run, shape ``(len(runs), n_draws)``."""
        runs = np.asarray(runs, dtype=np.uint64).reshape(-1, 1)
        c = np.arange(start, start + n_draws, dtype=np.uint64).reshape(1, -1)
        u1 = self._uniform(runs, 2 * c)
        u2 = self._uniform(runs, 2 * c + np.uint64(1))
        return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)

    def stream(self, run: int) -> "RunStream":
        return RunStream(self, run)


@dataclass
class RunStream:
    """Sequential view of one run's substream."""

    rng: CounterRNG
    run: int
    counter: int = 0

    def next_normal(self) -> float:
        xi = self.rng.normals([self.run], 1, start=self.counter)[0, 0]
        self.counter += 1
        return float(xi)


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    runs: int = 1
    noise: NoiseParams = field(default_factory=NoiseParams)

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")


@dataclass(frozen=True)
class FidelitySample:
    run_index: int
    fidelity: float

    @property
    def error(self) -> float:
        return 1.0 - self.fidelity


def worker_count(workers: int | None = None) -> int:
    """Resolve a worker count; ``None`` reads ``DECOQ_THREADS`` (0 = auto)."""
    if workers is None:
        workers = int(os.environ.get("DECOQ_THREADS", "1") or 1)
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def _check(circuit: Circuit, state: np.ndarray) -> int:
    n = num_qubits(state.shape[-1])
    if n != circuit.n_qubits:
        raise ValueError(f"circuit has {circuit.n_qubits} qubits, state has {n}")
    if n > MAX_SV_QUBITS:
        raise ValueError(f"{n} qubits exceeds the state-vector cap of {MAX_SV_QUBITS}")
    for op in circuit.ops:
        if op.gate == "relax":
            raise ValueError("relaxation channels need the density-matrix engine")
    return n


def _is_noisy(op: Op) -> bool:
    return op.noisy and op.gate in ("h", "cphase")


def _apply_ideal(psi: np.ndarray, op: Op, n: int) -> np.ndarray:
    if op.gate == "slot":
        return psi
    if op.gate == "mcz":
        out = psi.copy()
        out[..., mcz_mask(op.targets, n)] *= -1
        return out
    return apply_matrix(psi, gate_matrix(op), op.targets, n)


def _noisy_matrices(op: Op, e: float, xi: np.ndarray) -> np.ndarray:
    """Per-run sampled unitaries for a batch of draws ``xi``."""
    a = e * xi
    if op.gate == "h":
        c, s = np.cos(a), np.sin(a)
        v = np.empty((len(xi), 2, 2), dtype=complex)
        v[:, 0, 0] = c
        v[:, 0, 1] = s
        v[:, 1, 0] = -s
        v[:, 1, 1] = c
        return gate_matrix(op) @ v
    m = np.zeros((len(xi), 4, 4), dtype=complex)
    m[:, 0, 0] = m[:, 1, 1] = m[:, 2, 2] = 1
    m[:, 3, 3] = np.exp(-1j * (op.params[0] + a))
    return m


def run_ideal(circuit: Circuit, initial: np.ndarray) -> np.ndarray:
    """Apply every op of ``circuit`` to ``initial`` without noise."""
    psi = np.asarray(initial, dtype=complex)
    n = _check(circuit, psi)
    for op in circuit.ops:
        psi = _apply_ideal(psi, op, n)
    return psi


def _run_batch(circuit: Circuit, initial: np.ndarray, e: float, xi: np.ndarray) -> np.ndarray:
    n = circuit.n_qubits
    if e == 0:
        # every sampled unitary is the ideal gate; keep results bitwise equal
        ideal = run_ideal(circuit, initial)
        return np.broadcast_to(ideal, (xi.shape[0], ideal.shape[0])).copy()
    psi = np.broadcast_to(initial, (xi.shape[0], initial.shape[0])).copy()
    k = 0
    for op in circuit.ops:
        if _is_noisy(op):
            psi = apply_matrix(psi, _noisy_matrices(op, e, xi[:, k]), op.targets, n)
            k += 1
        else:
            psi = _apply_ideal(psi, op, n)
    return psi


def run_noisy_sample(circuit: Circuit, initial: np.ndarray, noise: NoiseParams, rng_stream: RunStream) -> np.ndarray:
    """One Monte Carlo run drawing from ``rng_stream`` in op order."""
    initial = np.asarray(initial, dtype=complex)
    _check(circuit, initial)
    n_draws = sum(_is_noisy(op) for op in circuit.ops)
    xi = np.array([[rng_stream.next_normal() for _ in range(n_draws)]]).reshape(1, n_draws)
    return _run_batch(circuit, initial, noise.e, xi)[0]


def sample_states(
    circuit: Circuit,
    initial: np.ndarray,
    noise: NoiseParams,
    seed: int,
    runs: int,
    workers: int | None = None,
    chunk: int = 8192,
) -> np.ndarray:
    """Final states of ``runs`` noisy runs, shape ``(runs, 2**n)``.

    Row ``k`` depends only on ``(seed, k)``, never on ``workers`` or
    ``chunk``.
    """
    initial = np.asarray(initial, dtype=complex)
    n = _check(circuit, initial)
    n_draws = sum(_is_noisy(op) for op in circuit.ops)
    rng = CounterRNG(seed)
    chunk = max(1, min(chunk, max(1, (1 << 24) >> n)))
    starts = list(range(0, runs, chunk))

    def work(start: int) -> np.ndarray:
        idx = np.arange(start, min(start + chunk, runs))
        return _run_batch(circuit, initial, noise.e, rng.normals(idx, n_draws))

    nw = min(worker_count(workers), len(starts))
    if nw <= 1:
        parts = [work(s) for s in starts]
    else:
        with ThreadPoolExecutor(nw) as pool:
            parts = list(pool.map(work, starts))
    return np.concatenate(parts, axis=0)


def run_monte_carlo(
    circuit: Circuit,
    initial: np.ndarray,
    target: np.ndarray,
    config: RunConfig,
    workers: int | None = None,
) -> list[FidelitySample]:
    """Fidelity ``|<target|psi_k>|^2`` of each noisy run, ordered by run index."""
    states = sample_states(circuit, initial, config.noise, config.seed, config.runs, workers)
    fid = np.abs(states @ np.asarray(target, dtype=complex).conj()) ** 2
    return [FidelitySample(k, float(f)) for k, f in enumerate(fid)]


def average_state(states: np.ndarray) -> np.ndarray:
    """``(1/N) sum_k |psi_k><psi_k|`` for states stacked along axis 0."""
    states = np.asarray(states, dtype=complex)
    if states.ndim == 1:
        states = states[None, :]
    if states.shape[0] == 0:
        raise ValueError("no samples to average")
    return states.T @ states.conj() / states.shape[0]

"""Grover search with noisy Hadamards.

Runs the density-matrix engine at full rank and at rank one, and prints
both next to the closed-form estimate (each Hadamard multiplies the
success probability by its keep probability).
"""

from decoq.analytics import grover_ideal_prob, grover_success_estimate
from decoq.circuits import build_grover
from decoq.dm_engine import RankConfig, run_channels
from decoq.noisegates import NoiseParams
from decoq.qcore import basis_state

n, marked, e = 6, 42, 0.02
circuit = build_grover(n, marked)
target = basis_state(n, marked)
noise = NoiseParams(e)

_, full = run_channels(circuit, basis_state(n), noise, RankConfig(), target)
_, rank1 = run_channels(circuit, basis_state(n), noise, RankConfig(1), target)

print(f"{n} qubits, marked item {marked}, e = {e}")
print(f"{'j':>3} {'ideal':>10} {'full rank':>10} {'rank 1':>10} {'estimate':>10}")
for j in range(circuit.count("mcz") // 2 + 1):
    tag = "prep" if j == 0 else f"iter{j}"
    print(
        f"{j:>3} {grover_ideal_prob(n, j):10.6f} {full.last_with_tag(tag).fidelity:10.6f}"
        f" {rank1.last_with_tag(tag).fidelity:10.6f} {grover_success_estimate(n, j, e):10.6f}"
    )

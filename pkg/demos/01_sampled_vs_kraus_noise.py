"""Stochastic Hadamard errors: sampling versus the averaged channel.

A noisy Hadamard is H followed by a small random rotation whose angle is
e times a standard normal draw. Averaging many such rotations gives a
two-operator Kraus channel. This script checks the two pictures agree.
"""

import numpy as np

from decoq.noisegates import NoiseParams, hadamard_noise_channel, v_noise
from decoq.qcore import apply_kraus, trace_distance
from decoq.sv_engine import CounterRNG

e = 0.1
rho = np.array([[0.8, 0.3 - 0.1j], [0.3 + 0.1j, 0.2]])

# Sampled picture: average V rho V^dagger over 20k draws.
draws = CounterRNG(seed=1).normals(np.arange(20_000), 1)[:, 0]
sampled = np.zeros((2, 2), complex)
for xi in draws:
    v = v_noise(NoiseParams(e), xi).matrix
    sampled += v @ rho @ v.conj().T
sampled /= len(draws)

# Channel picture: identity and an X/Z-mixing operator with fixed weights.
channel = hadamard_noise_channel(NoiseParams(e))
exact = apply_kraus(rho, channel, [0])

print("channel output:\n", np.round(exact, 5))
print("sampled output:\n", np.round(sampled, 5))
print(f"trace distance: {trace_distance(sampled, exact):.2e}")
for k, op in enumerate(channel.ops):
    print(f"weight of Kraus operator {k}: {np.trace(op.conj().T @ op).real / 2:.6f}")

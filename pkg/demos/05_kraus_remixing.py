"""Unitary freedom of Kraus operators.

Mixing a Kraus set with any unitary leaves the channel unchanged. For the
controlled-phase noise the SVD of the stacked diagonals picks the mixing
that concentrates weight in one operator.
"""

import numpy as np

from decoq.analytics import improved_cphase_channel, phase_noise_svd
from decoq.noisegates import NoiseParams, cphase_noise_channel
from decoq.qcore import superoperator

for e in (0.05, 0.1, 0.3):
    r = phase_noise_svd(e)
    plain = cphase_noise_channel(NoiseParams(e))
    mixed = improved_cphase_channel(e)
    diff = np.max(np.abs(superoperator(plain) - superoperator(mixed)))
    print(
        f"e={e:4.2f}  f={r.f:.6f}  |E1[3,3]|^2: {abs(plain.ops[0][3, 3]) ** 2:.6f} -> "
        f"{abs(mixed.ops[0][3, 3]) ** 2:.6f}  superoperator diff {diff:.1e}"
    )

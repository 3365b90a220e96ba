"""How much rank does a noisy density matrix really need?

After every gate the state is cut to its r largest eigencomponents. The
final success-probability error against the untruncated run shrinks as r
grows and vanishes once r covers the spectrum that noise has populated.
"""

from decoq.circuits import build_grover
from decoq.dm_engine import rank_error_scan
from decoq.noisegates import NoiseParams
from decoq.qcore import basis_state

n, marked = 6, 13
table = rank_error_scan(build_grover(n, marked), NoiseParams(0.01), [1, 2, 4, 8, 16, 32], target=basis_state(n, marked))
for rank, err in table:
    print(f"rank {rank:>3}: |error| = {err:.3e}")

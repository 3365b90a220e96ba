"""QFT fidelity versus two analytical lower bounds.

The direct bound treats the controlled-phase noise operator as is; the
improved bound first re-mixes the Kraus pair so one operator carries
almost all the weight, which tightens the estimate.
"""

from decoq.analytics import qft_fidelity_bound, qft_fidelity_bound_improved
from decoq.circuits import build_qft
from decoq.dm_engine import run_channels
from decoq.noisegates import NoiseParams
from decoq.qcore import basis_state, fidelity_overlap
from decoq.sv_engine import run_ideal

print(f"{'n':>2} {'e':>6} {'simulated':>10} {'direct':>10} {'improved':>10}")
for n in (3, 4, 5, 6):
    circuit = build_qft(n)
    target = run_ideal(circuit, basis_state(n))
    for e in (0.01, 0.05):
        rho, _ = run_channels(circuit, basis_state(n), NoiseParams(e))
        print(
            f"{n:>2} {e:6.3f} {fidelity_overlap(rho, target):10.6f}"
            f" {qft_fidelity_bound(n, e):10.6f} {qft_fidelity_bound_improved(n, e):10.6f}"
        )

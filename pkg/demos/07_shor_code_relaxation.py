"""Nine-qubit Shor code under amplitude and phase relaxation.

Ancillas start in |0> and are traced out, giving a single-qubit channel
for the protected data qubit. Its Choi fidelity is compared with an
unprotected qubit that idles for the same time.
"""

from decoq.circuits import Circuit, Op, build_shor_code
from decoq.cj_engine import choi_fidelity, choi_of_circuit, effective_choi
from decoq.noisegates import RelaxationParams

ideal = choi_of_circuit(Circuit(1, ()))
shor = build_shor_code()
bare = Circuit(1, (Op("slot", (0,)),))
for t in (0.02, 0.05, 0.1, 0.2):
    relax = RelaxationParams(3.0, 2.0, t)
    f_shor = choi_fidelity(ideal, effective_choi(shor, relaxation=relax))
    f_bare = choi_fidelity(ideal, choi_of_circuit(bare, relaxation=relax))
    print(f"t={t:4.2f}  bare {f_bare:.6f}  shor {f_shor:.6f}")

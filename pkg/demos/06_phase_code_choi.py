"""Three-qubit phase-flip code seen through its Choi state.

Each qubit dephases with flip probability p while stored. The code
corrects any single flip, so the square-root fidelity of the effective
data-qubit channel falls off only at second order in p.
"""

import math

from decoq.analytics import t2_from_p, three_qubit_code_fmin
from decoq.circuits import Circuit, Op, build_three_qubit_phase_code
from decoq.cj_engine import choi_fidelity, choi_of_circuit, effective_choi
from decoq.noisegates import RelaxationParams

ideal = choi_of_circuit(Circuit(1, ()))
bare = Circuit(1, (Op("slot", (0,)),))
code = build_three_qubit_phase_code()
print(f"{'p':>5} {'bare':>9} {'coded':>9} {'closed form':>12}")
for p in (0.01, 0.05, 0.1, 0.2, 0.3):
    relax = RelaxationParams(math.inf, t2_from_p(p, 1.0), 1.0)
    f_bare = choi_fidelity(ideal, choi_of_circuit(bare, relaxation=relax))
    f_code = choi_fidelity(ideal, effective_choi(code, relaxation=relax))
    print(f"{p:5.2f} {f_bare:9.6f} {f_code:9.6f} {three_qubit_code_fmin(p):12.6f}")

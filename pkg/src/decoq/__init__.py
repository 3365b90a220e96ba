"""Noisy quantum circuit simulation at three levels.

``sv_engine``
    State vectors with Monte Carlo gate noise.
``dm_engine``
    Density matrices with Kraus channels and fixed-rank truncation.
``cj_engine``
    Choi-Jamiolkowski relative states of whole circuits.

``analytics`` holds the closed-form fidelity estimates the engines are
checked against, and ``circuits`` the benchmark circuit builders.
"""

from . import analytics, circuits, cj_engine, dm_engine, noisegates, qcore, sv_engine
from .circuits import Circuit, Op
from .noisegates import NoiseParams, RelaxationParams
from .qcore import KrausChannel, UnitaryGate

__version__ = "0.1.0"

__all__ = [
    "analytics",
    "circuits",
    "cj_engine",
    "dm_engine",
    "noisegates",
    "qcore",
    "sv_engine",
    "Circuit",
    "Op",
    "NoiseParams",
    "RelaxationParams",
    "KrausChannel",
    "UnitaryGate",
]

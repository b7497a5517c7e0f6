"""Count basis-changing gates and study what they buy.

Modules
-------
state
    Dense statevector simulator, gate classification, distances, layer counts.
entropy
    Shannon entropy, smoothed-entropy lower bound, entropy traces.
stateprep
    Approximate state generation with truncated rotation angles.
knuth_yao
    Discrete distribution generating trees (fair-coin baseline).
grover
    Oracle model, standard and hybrid search, adversary bookkeeping.
kernels
    Compiled inner loops with a numpy fallback.
"""

from .kernels import BACKEND
from .state import (
    Circuit,
    Gate,
    GateKind,
    Statevector,
    apply_gate,
    count_basis_changing,
    count_layers,
    is_basis_changing,
    l2_distance,
    measurement_distribution,
    run_circuit,
    trace_distance_pure,
)

__version__ = "0.1.0"

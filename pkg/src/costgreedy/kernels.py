"""Backend selection for the enumeration kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over. ``COSTGREEDY_PURE=1`` forces the fallback.
"""

import os

from . import _pykernels as pure

BACKEND = "python"
_impl = pure

if os.environ.get("COSTGREEDY_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _compiled
    except ImportError:
        _compiled = None
    else:
        _impl = _compiled
        BACKEND = "cython"
else:
    _compiled = None

compiled = _compiled

cs_submodular_witness = _impl.cs_submodular_witness
submodular_witness = _impl.submodular_witness
monotone_witness = _impl.monotone_witness
cost_axiom_witness = _impl.cost_axiom_witness
optimal_values = _impl.optimal_values

__all__ = [
    "BACKEND",
    "compiled",
    "pure",
    "cs_submodular_witness",
    "submodular_witness",
    "monotone_witness",
    "cost_axiom_witness",
    "optimal_values",
]

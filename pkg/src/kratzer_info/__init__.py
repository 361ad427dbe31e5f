"""Information-theoretic measures for diatomic molecules in the generalized
Kratzer potential v(r) = x/r + y/r**2 + z.
"""

from .infomeasures import MeasureSet, measure_set
from .kratzer import BoundState, QuantumState, build_state, state_for
from .molparams import MoleculeSpec, PotentialForm, PotentialParams, bundled_molecules, to_atomic_units
from .pspace import MomentumDensity, momentum_density_grid

__version__ = "0.1.0"

__all__ = [
    "BoundState",
    "MeasureSet",
    "MoleculeSpec",
    "MomentumDensity",
    "PotentialForm",
    "PotentialParams",
    "QuantumState",
    "build_state",
    "bundled_molecules",
    "measure_set",
    "momentum_density_grid",
    "state_for",
    "to_atomic_units",
]

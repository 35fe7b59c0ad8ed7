"""Exact capacities of the Ising spin-star dephasing channel."""
from .capacities import (
    CapacityPoint,
    appendix_cross_check,
    capacity_point,
    chi_eigenvalues,
    classical_capacity,
    entanglement_assisted_classical,
    entanglement_assisted_quantum,
    entanglement_cost,
    limited_entanglement_capacity,
    quantum_capacity,
    theta_from_budget,
)
from .ensembles import (
    EnsembleConfig,
    EnsembleResult,
    ensemble_average,
    equal_coupling_coherence,
    recurrence_period,
    sample_random_model,
)
from .model import (
    CoherenceFactor,
    KrausSet,
    ModelSpec,
    apply_channel,
    coherence_factor,
    coherence_factor_bruteforce,
    joint_state,
    kraus_set,
    partition_function,
)
from .numerics import HermitianOperator, Spectrum, binary_entropy, eigenvalues_hermitian, von_neumann_entropy

__version__ = "0.1.0"

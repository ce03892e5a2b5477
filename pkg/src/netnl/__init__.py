"""Channel certification for detectable nonlocality in linear and star quantum networks."""
from .bloch import BlochState, DensityOperator, OrderedSingulars, from_bloch, ordered_singulars, to_bloch
from .channels import (PauliDampingChannel, QubitChannelAffine, RandomUnitaryChannel, dephasing,
                       depolarizing, nu_to_affine, ru_to_affine, s_factors)
from .config import DEFAULT, Tolerances
from .network import NetworkScenario, Topology, UsagePattern, bound_fnn3, bound_linear, bound_star

__version__ = "0.1.0"

__all__ = [
    "BlochState", "DensityOperator", "OrderedSingulars", "from_bloch", "ordered_singulars", "to_bloch",
    "PauliDampingChannel", "QubitChannelAffine", "RandomUnitaryChannel", "dephasing", "depolarizing",
    "nu_to_affine", "ru_to_affine", "s_factors", "DEFAULT", "Tolerances", "NetworkScenario", "Topology",
    "UsagePattern", "bound_fnn3", "bound_linear", "bound_star",
]

"""Entanglement harvesting with quantum-controlled switching of
Unruh-DeWitt detector pairs.

A library plus CLI that computes the joint state of two switched
detectors coupled to the massless scalar vacuum, where a control qubit
places the switching times in superposition, and evaluates the harvested
entanglement and mutual information for each way of treating the control.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DomainError,
    NonConvergence,
    NotAState,
    OrderingViolated,
    UDWError,
    UVDivergent,
    ZeroProbability,
)

__all__ = [
    "__version__",
    "UDWError",
    "ConfigError",
    "NonConvergence",
    "UVDivergent",
    "OrderingViolated",
    "ZeroProbability",
    "NotAState",
    "DomainError",
]

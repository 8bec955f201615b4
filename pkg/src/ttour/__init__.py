"""Exact desk-scale T-tour approximation with per-instance certificates.

Pipeline: solve the LP relaxation, decompose x* into spanning trees, run
Best-of-Many-Christofides and its lonely-edge-deletion variant, keep the
cheaper tour, and check every bound of the 11/7 analysis exactly.
"""

from .graph import Cut, Edge, Instance, InstanceError, Partition
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "Cut", "Edge", "Instance", "InstanceError", "Partition", "__version__"]

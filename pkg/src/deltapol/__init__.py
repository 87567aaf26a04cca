"""Dynamic electric polarizability of a particle bound by a 1D attractive delta well.

Three independent routes are provided: closed forms (:mod:`deltapol.closedform`),
momentum-space Green's-function quadrature (:mod:`deltapol.greensfn`) and a
sum-over-states oracle on a discretized box (:mod:`deltapol.response`).
Units are hbar = m = q = 1 throughout.
"""

from deltapol.errors import (
    DeltaPolError,
    DiscretizationError,
    DomainError,
    EstimationError,
    InvalidModelError,
    PoleError,
    QuadratureError,
)
from deltapol.model import (
    BoundState,
    BranchKinematics,
    ModelParams,
    Region,
    Sign,
    bound_state,
    branch_kinematics,
    psi0_eval,
)

__version__ = "0.1.0"

__all__ = [
    "BoundState",
    "BranchKinematics",
    "DeltaPolError",
    "DiscretizationError",
    "DomainError",
    "EstimationError",
    "InvalidModelError",
    "ModelParams",
    "PoleError",
    "QuadratureError",
    "Region",
    "Sign",
    "bound_state",
    "branch_kinematics",
    "psi0_eval",
]

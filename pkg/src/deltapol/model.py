"""Physical model: delta-well parameters, the bound state, and branch momenta.

Units are fixed to hbar = m = q = 1, so the decay constant of the bound state
equals the well strength and the binding energy is ``B = g**2 / 2``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from deltapol.errors import DomainError, InvalidModelError


class Region(enum.Enum):
    BELOW_THRESHOLD = "below"
    ABOVE_THRESHOLD = "above"
    NEGATIVE = "negative"


class Sign(enum.Enum):
    """Which term of the response function: alpha(+omega) or alpha(-omega)."""

    PLUS = "+"
    MINUS = "-"


@dataclass(frozen=True)
class ModelParams:
    g: float = 1.0
    mass: float = field(default=1.0, init=False)
    hbar: float = field(default=1.0, init=False)
    charge: float = field(default=1.0, init=False)

    def __post_init__(self):
        if not (math.isfinite(self.g) and self.g > 0.0):
            raise InvalidModelError(f"well strength g must be positive and finite, got {self.g!r}")


@dataclass(frozen=True)
class BoundState:
    """Ground state of H0 = -d^2/(2 dx^2) - g delta(x)."""

    k0: float
    E0: float
    B: float

    @classmethod
    def from_g(cls, g: float) -> "BoundState":
        return bound_state(ModelParams(g))


@dataclass(frozen=True)
class BranchKinematics:
    """Momentum entering the closed forms for one (omega, sign) pair.

    Exactly one of ``k``, ``Lambda``, ``kprime`` is set, matching ``region``.
    """

    region: Region
    k: float | None = None
    Lambda: float | None = None
    kprime: float | None = None

    @property
    def momentum(self) -> float:
        if self.region is Region.BELOW_THRESHOLD:
            return self.k
        if self.region is Region.ABOVE_THRESHOLD:
            return self.Lambda
        return self.kprime


def bound_state(params: ModelParams) -> BoundState:
    if params.g <= 0.0:
        raise InvalidModelError(f"well strength g must be positive, got {params.g!r}")
    k0 = params.mass * params.g / params.hbar**2
    E0 = -(params.hbar**2) * k0**2 / (2.0 * params.mass)
    return BoundState(k0=k0, E0=E0, B=-E0)


def psi0_eval(state: BoundState, position):
    """sqrt(k0) * exp(-k0 |x|); accepts scalars or numpy arrays."""
    value = math.sqrt(state.k0) * np.exp(-state.k0 * np.abs(position))
    if np.ndim(value) == 0:
        return float(value)
    return value


def branch_kinematics(state: BoundState, omega: float, sign: Sign = Sign.PLUS) -> BranchKinematics:
    if not math.isfinite(omega) or omega < 0.0:
        raise DomainError(f"omega must be finite and >= 0 (use Sign.MINUS for -omega), got {omega!r}")
    B = state.B
    if sign is Sign.MINUS:
        return BranchKinematics(Region.NEGATIVE, kprime=math.sqrt(2.0 * (B + omega)))
    if omega <= B:
        # omega == B lands here with k = 0.
        return BranchKinematics(Region.BELOW_THRESHOLD, k=math.sqrt(2.0 * (B - omega)))
    return BranchKinematics(Region.ABOVE_THRESHOLD, Lambda=math.sqrt(2.0 * (omega - B)))

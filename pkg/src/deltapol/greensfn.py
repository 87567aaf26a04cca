"""Momentum-space resolvent route to alpha(+-omega).

The dipole strength |<psi0|x|k>|^2 is integrated against the free resolvent;
the Dyson correction from the delta well drops out by parity, which is
checked explicitly rather than assumed. Above threshold the pole on the real
k axis is handled by symmetric excision (principal value) plus the analytic
half-residue for the imaginary part.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import integrate, optimize

from deltapol.errors import DomainError, PoleError, QuadratureError
from deltapol.model import BoundState, Sign, branch_kinematics

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    k_cutoff_factor: float = 50.0
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.k_cutoff_factor <= 10.0:
            raise ValueError("momentum cutoff must exceed 10 k0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    def k_cutoff(self, state: BoundState) -> float:
        return self.k_cutoff_factor * state.k0


@dataclass(frozen=True)
class ResolventEnergy:
    """Real energy E at which G(E) = 1/(E + i0 - H) is evaluated.

    ``Omega`` is the same number under its appendix name omega + omega_0.
    """

    E: float

    @property
    def Omega(self) -> float:
        return self.E

    @classmethod
    def from_frequency(cls, state: BoundState, omega: float, sign: Sign = Sign.PLUS) -> "ResolventEnergy":
        return cls(state.E0 + omega if sign is Sign.PLUS else state.E0 - omega)


@dataclass(frozen=True)
class I1Params:
    x0: float
    a: complex

    def __post_init__(self):
        if not self.x0 > 0:
            raise DomainError(f"x0 must be positive, got {self.x0!r}")
        if complex(self.a).real < 0:
            raise DomainError(f"Re a must be >= 0, got {self.a!r}")
        if complex(self.a) == -self.x0:
            raise DomainError("a = -x0 is excluded")


def _quad(f, lo, hi, cfg: QuadratureConfig, points=None):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(
                f, lo, hi, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
                limit=cfg.max_subdivisions, points=points,
            )
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature on [{lo:g}, {hi:g}] did not converge: {exc}") from exc
    return val, err


# ---------------------------------------------------------------------------
# Matrix elements and free resolvent
# ---------------------------------------------------------------------------

def dipole_momentum_element(state: BoundState, k: float) -> complex:
    """<psi0|x|k> with |k> = exp(ikx)/sqrt(2 pi): i d/dk of the Lorentzian transform."""
    k0 = state.k0
    return 1j * 4.0 * k0**1.5 * k / (_SQRT_2PI * (k0 * k0 + k * k) ** 2)


def dipole_strength(state: BoundState, k):
    """|<psi0|x|k>|^2 = (8 k0^3 / pi) k^2 / (k0^2 + k^2)^4; works on arrays."""
    k0 = state.k0
    return 8.0 * k0**3 / math.pi * k * k / (k0 * k0 + k * k) ** 4


def g0_diag(state: BoundState, energy: ResolventEnergy) -> complex:
    """<x=0|G0(E + i0)|x=0>, the momentum integral of 1/(2 pi (E - k^2/2))."""
    E = energy.E
    if E == 0.0:
        raise PoleError("G0(0, 0; E) has a branch point at E = 0")
    if E < 0.0:
        return complex(-1.0 / math.sqrt(-2.0 * E), 0.0)
    return complex(0.0, -1.0 / math.sqrt(2.0 * E))


def g0_diag_quadrature(state: BoundState, energy: ResolventEnergy, cfg: QuadratureConfig | None = None) -> complex:
    """g0_diag by explicit momentum quadrature, with the exact tail beyond the cutoff."""
    cfg = cfg or QuadratureConfig()
    E = energy.E
    if E == 0.0:
        raise PoleError("G0(0, 0; E) has a branch point at E = 0")
    q = math.sqrt(2.0 * abs(E))
    if E < 0.0:
        tail = lambda cut: (2.0 / q) * (0.5 * math.pi - math.atan(cut / q))  # noqa: E731
    else:
        tail = lambda cut: math.log((cut + q) / (cut - q)) / q  # noqa: E731
    pv, res = _resolvent_integral(state, lambda k: 1.0, -E, cfg, tail)
    # 1/(2 pi) per unit k, two half-lines, 1/(E - k^2/2) = -1/(k^2/2 - E)
    return complex(-pv / math.pi, -res)


def dyson_denominator(state: BoundState, energy: ResolventEnergy) -> complex:
    """1 + g G0(0, 0; E); vanishes at the bound-state energy."""
    return 1.0 + state.k0 * g0_diag(state, energy)


def locate_dyson_pole(state: BoundState, xtol: float = 1e-13) -> float:
    """Bisect for the real zero of the Dyson denominator on E < 0."""
    f = lambda E: dyson_denominator(state, ResolventEnergy(E)).real  # noqa: E731
    lo, hi = -10.0 * state.k0**2, -1e-6 * state.k0**2
    return optimize.bisect(f, lo, hi, xtol=xtol, maxiter=400)


# ---------------------------------------------------------------------------
# Resolvent integrals over k
# ---------------------------------------------------------------------------

def _power_tail(coeff: float):
    """Tail beyond the cutoff for an integrand ~ coeff * k^-8."""
    return lambda cut: coeff / (7.0 * cut**7)


def _resolvent_integral(state: BoundState, weight, shift: float, cfg: QuadratureConfig, tail=None):
    """Integral over k >= 0 of weight(k) / (k^2/2 + shift), including the real-axis pole.

    ``weight`` must be smooth; ``tail(cut)`` supplies the part beyond the
    momentum cutoff (omitted when None). Returns the principal value (real)
    and, for shift < 0, the coefficient of +i pi from the pole at
    k = sqrt(-2 shift) (retarded, E + i0).
    """
    tail = tail or (lambda cut: 0.0)
    cut = cfg.k_cutoff(state)
    if shift >= 0.0:
        val, _ = _quad(lambda k: weight(k) / (0.5 * k * k + shift), 0.0, cut, cfg, points=[state.k0])
        return val + tail(cut), 0.0

    lam = math.sqrt(-2.0 * shift)
    cut = max(cut, 2.0 * lam + cfg.k_cutoff(state))
    # weight / (k^2/2 - lam^2/2) = h(k) / (k - lam), h(k) = 2 weight(k) / (k + lam)
    h = lambda k: 2.0 * weight(k) / (k + lam)  # noqa: E731
    # symmetric excision: PV on [0, 2 lam] folded onto t in (0, lam]
    near, _ = _quad(lambda t: (h(lam + t) - h(lam - t)) / t, 0.0, lam, cfg)
    far_points = [state.k0] if state.k0 > 2.0 * lam else None
    far, _ = _quad(lambda k: h(k) / (k - lam), 2.0 * lam, cut, cfg, points=far_points)
    residue = h(lam)
    return near + far + tail(cut), residue


def resolvent_dipole_integral(state: BoundState, energy: ResolventEnergy, cfg: QuadratureConfig | None = None) -> complex:
    """<psi0|x G0(E + i0) x|psi0> = integral of |<psi0|x|k>|^2 / (E - k^2/2) over all k."""
    cfg = cfg or QuadratureConfig()
    E = energy.E
    w = lambda k: dipole_strength(state, k)  # noqa: E731
    pv, res = _resolvent_integral(state, w, -E, cfg, _power_tail(16.0 * state.k0**3 / math.pi))
    # both half-lines contribute equally; 1/(E - k^2/2) = -1/(k^2/2 - E)
    return complex(-2.0 * pv, -2.0 * math.pi * res)


def dyson_correction_numerator(state: BoundState, energy: ResolventEnergy, cfg: QuadratureConfig | None = None) -> complex:
    """<psi0|x G0(E) |x=0>, integrated separately over k < 0 and k > 0.

    The integrand is odd in k, so the two halves must cancel.
    """
    cfg = cfg or QuadratureConfig()
    E = energy.E
    k0 = state.k0
    amp = 4.0 * k0**1.5 / (2.0 * math.pi)  # <psi0|x|k><k|0> = i amp k/(k0^2+k^2)^2

    halves = []
    for sgn in (1.0, -1.0):
        w = lambda q, s=sgn: s * amp * q / (k0 * k0 + q * q) ** 2  # noqa: E731
        # no tail: the cutoff error is identical on both halves and cancels
        pv, res = _resolvent_integral(state, w, -E, cfg)
        halves.append(complex(-pv, -math.pi * res))
    return 1j * (halves[0] + halves[1])


def dyson_dipole_element(state: BoundState, energy: ResolventEnergy, cfg: QuadratureConfig | None = None) -> complex:
    """<psi0|x G(E) x|psi0> from the exact Dyson closure for the delta well."""
    cfg = cfg or QuadratureConfig()
    denom = dyson_denominator(state, energy)
    if abs(denom) < 1e-14:
        raise PoleError(f"E = {energy.E} sits on the bound-state pole of G")
    free = resolvent_dipole_integral(state, energy, cfg)
    num = dyson_correction_numerator(state, energy, cfg)
    # <0|G0 x|psi0> = -<psi0|x G0|0>: the purely imaginary amplitude is
    # conjugated, the resolvent denominator is not.
    return free - state.k0 * num * (-num) / denom


def alpha_from_g0(state: BoundState, omega: float, sign: Sign = Sign.PLUS, cfg: QuadratureConfig | None = None) -> complex:
    """alpha(+-omega) = integral of |<psi0|x|k>|^2 / (omega_k0 -+ omega - i0) dk."""
    cfg = cfg or QuadratureConfig()
    branch_kinematics(state, omega, sign)  # domain check
    energy = ResolventEnergy.from_frequency(state, omega, sign)
    # alpha = -<psi0|x G x|psi0>; the Dyson correction vanishes by parity
    return -resolvent_dipole_integral(state, energy, cfg)


# ---------------------------------------------------------------------------
# Appendix-style integrals
# ---------------------------------------------------------------------------

def base_integral(x0: float, a: complex) -> complex:
    """Integral over the real line of x^2 / ((x^2 + x0^2)(x^2 + a^2)) = pi / (x0 + a)."""
    return math.pi / (x0 + a)


def base_integral_quadrature(x0: float, a: complex, cfg: QuadratureConfig | None = None) -> complex:
    cfg = cfg or QuadratureConfig()
    a2 = complex(a) ** 2
    f = lambda x: x * x / ((x * x + x0 * x0) * (x * x + a2))  # noqa: E731
    return _complex_half_line(f, cfg)


def _complex_half_line(f, cfg: QuadratureConfig) -> complex:
    re, _ = _quad(lambda x: f(x).real, 0.0, math.inf, cfg)
    im, _ = _quad(lambda x: f(x).imag, 0.0, math.inf, cfg)
    return 2.0 * complex(re, im)


def i1_parametric(x0: float, a: complex) -> complex:
    """Three applications of (-1/(2n x0)) d/dx0 to pi/(x0 + a), done by hand.

    With s = x0 + a:
      n=1: pi / (2 x0 s^2)
      n=2: pi/8  [1/(x0^3 s^2) + 2/(x0^2 s^3)]
      n=3: pi/16 [1/(x0^5 s^2) + 2/(x0^4 s^3) + 2/(x0^3 s^4)]
    """
    s = x0 + a
    return math.pi / 16.0 * (1.0 / (x0**5 * s**2) + 2.0 / (x0**4 * s**3) + 2.0 / (x0**3 * s**4))


def integral_I1(p: I1Params, cfg: QuadratureConfig | None = None) -> tuple[complex, complex]:
    """I1 = integral of x^2 / ((x^2 + x0^2)^4 (x^2 + a^2)); returns (direct, parametric).

    Real ``a`` gives real floats.
    """
    cfg = cfg or QuadratureConfig()
    x0 = p.x0
    a2 = complex(p.a) ** 2
    direct = _complex_half_line(lambda x: x * x / ((x * x + x0 * x0) ** 4 * (x * x + a2)), cfg)
    via = i1_parametric(x0, complex(p.a))
    if isinstance(p.a, (int, float)):
        return direct.real, via.real
    return direct, via


def i2_value(omega_total: float) -> complex:
    """Integral over k' of 1/(2 pi (Omega - k'^2/2)) with Omega + i0; -i/sqrt(2 Omega) for Omega > 0."""
    return g0_diag(None, ResolventEnergy(omega_total))

"""Closed-form polarizabilities, the literature formulas they are compared to,
and small-omega series estimation.

Sign convention: alpha(0) > 0, Im alpha(+omega) >= 0 above threshold
(retarded prescription).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy import integrate, optimize

from deltapol.errors import DomainError, EstimationError, QuadratureError
from deltapol.model import BoundState, Region, Sign, branch_kinematics


@dataclass(frozen=True)
class PolarizabilityPoint:
    x: float
    alpha_plus: complex
    alpha_minus: float
    total: complex
    scaled_total: complex

    @property
    def scale(self) -> float:
        """4 B^2, recovered from the stored totals."""
        return (self.scaled_total / self.total).real if self.total != 0 else float("nan")


@dataclass(frozen=True)
class SeriesCoefficients:
    """total(omega) ~ c0 + c1 omega + c2 omega^2 near omega = 0."""

    c0: float
    c1: float
    c2: float
    normalized_c2: float
    diagnostics: dict = field(default_factory=dict, compare=False, repr=False)


def _checked(value):
    if isinstance(value, complex):
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise ArithmeticError(f"non-finite polarizability {value!r}")
    elif not math.isfinite(value):
        raise ArithmeticError(f"non-finite polarizability {value!r}")
    return value


def _three_term(k0: float, s):
    """1/(k0^2 s^2) + 2/(k0 s^3) + 2/s^4 with s = k0 + momentum."""
    return 1.0 / (k0 * k0 * s * s) + 2.0 / (k0 * s**3) + 2.0 / s**4


def _require_unit_well(state: BoundState | None):
    if state is not None and state.k0 != 1.0:
        raise DomainError(f"literature comparison formulas are defined only for k0 = 1, got k0 = {state.k0}")


# ---------------------------------------------------------------------------
# Closed forms of this model
# ---------------------------------------------------------------------------

def alpha_plus_below(state: BoundState, omega: float) -> float:
    if not (0.0 <= omega <= state.B):
        raise DomainError(f"alpha_plus_below needs 0 <= omega <= B = {state.B}, got {omega!r}")
    k = branch_kinematics(state, omega, Sign.PLUS).k
    return _checked(_three_term(state.k0, state.k0 + k))


def alpha_plus_above(state: BoundState, omega: float) -> complex:
    """Above the photoionization threshold.

    The third real term uses (k0^2 + Lambda^2)^3 in its denominator; the
    alternative reading k^2 + Lambda^2 vanishes identically.
    """
    if not omega > state.B:
        raise DomainError(f"alpha_plus_above needs omega > B = {state.B}, got {omega!r}")
    k0 = state.k0
    lam = branch_kinematics(state, omega, Sign.PLUS).Lambda
    d = k0 * k0 + lam * lam
    re = -1.0 / (k0 * k0 * d) - 2.0 / d**2 - 8.0 * k0**2 / d**3 + 16.0 * k0**4 / d**4
    im = 16.0 * lam * k0**3 / d**4
    return _checked(complex(re, im))


def alpha_minus(state: BoundState, omega: float) -> float:
    if not (math.isfinite(omega) and omega >= 0.0):
        raise DomainError(f"alpha_minus needs omega >= 0, got {omega!r}")
    kp = branch_kinematics(state, omega, Sign.MINUS).kprime
    return _checked(_three_term(state.k0, state.k0 + kp))


def alpha_plus(state: BoundState, omega: float) -> complex:
    """alpha(+omega) on either side of threshold; omega == B uses the Below form."""
    if branch_kinematics(state, omega, Sign.PLUS).region is Region.BELOW_THRESHOLD:
        return complex(alpha_plus_below(state, omega), 0.0)
    return alpha_plus_above(state, omega)


def alpha_total(state: BoundState, omega: float) -> PolarizabilityPoint:
    ap = alpha_plus(state, omega)
    am = alpha_minus(state, omega)
    total = ap + am
    scale = 4.0 * state.B**2
    return PolarizabilityPoint(
        x=omega / state.B,
        alpha_plus=ap,
        alpha_minus=am,
        total=total,
        scaled_total=scale * total,
    )


def _even_pair(state: BoundState, w: float) -> float:
    # alpha(w) + alpha(-w) continued to signed w in (-B, B); even by construction.
    k0, B = state.k0, state.B
    return _three_term(k0, k0 + math.sqrt(2.0 * (B - w))) + _three_term(k0, k0 + math.sqrt(2.0 * (B + w)))


# ---------------------------------------------------------------------------
# Literature formulas (k0 = 1, B = 1/2 only)
# ---------------------------------------------------------------------------

_SERIES_SWITCH = 0.1


def _ref8_below_series(omega: float) -> float:
    # Binomial expansion of sqrt(1 + 2w) + sqrt(1 - 2w); the w^0 and w^2 terms
    # cancel against 2 - w^2, leaving -2 sum_{m>=2} C(1/2, 2m) 4^m w^(2m-4).
    coeff = 1.0  # C(1/2, n)
    total = 0.0
    w2 = omega * omega
    for n in range(1, 200):
        coeff *= (0.5 - n + 1) / n
        if n % 2 or n < 4:
            continue
        m = n // 2
        term = -2.0 * coeff * 4.0**m * w2 ** (m - 2)
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def _ref8_below_even(omega: float) -> float:
    if abs(omega) < _SERIES_SWITCH:
        return _ref8_below_series(omega)
    w = omega
    return (2.0 - w * w - math.sqrt(1.0 + 2.0 * w) - math.sqrt(1.0 - 2.0 * w)) / w**4


def ref8_alpha_r_below(omega: float) -> float:
    """(2 - w^2 - sqrt(1+2w) - sqrt(1-2w)) / w^4 for 0 <= w < 1/2.

    Small |w| is evaluated through the binomial series of the square roots,
    which removes both the 0/0 at w = 0 and the cancellation near it.
    """
    if not (0.0 <= omega < 0.5):
        raise DomainError(f"ref8_alpha_r_below needs 0 <= omega < 0.5, got {omega!r}")
    return _ref8_below_even(omega)


def ref8_alpha_r_above(omega: float) -> float:
    if not omega > 0.5:
        raise DomainError(f"ref8_alpha_r_above needs omega > 0.5, got {omega!r}")
    w = omega
    return (2.0 - w * w - math.sqrt(2.0 * w + 1.0)) / w**4


def regrouped_re_above(omega: float) -> float:
    """Re alpha(+w) + alpha(-w) above threshold in the regrouped k0 = 1 form.

    The leading numerator constant is 2; with it the rational part equals
    1/w^4 - 1/w^3 - 1/(2w^2) - 1/(2w), i.e. Re alpha(+w) at k0 = 1.
    """
    if not omega > 0.5:
        raise DomainError(f"regrouped_re_above needs omega > 0.5, got {omega!r}")
    w = omega
    rational = (2.0 - 2.0 * w - w * w - w**3) / (2.0 * w**4)
    return rational + _three_term(1.0, 1.0 + math.sqrt(1.0 + 2.0 * w))


def im_alpha_compact(omega: float) -> float:
    """sqrt(2w - 1) / w^4, the k0 = 1 absorption profile."""
    if not omega > 0.5:
        raise DomainError(f"im_alpha_compact needs omega > 0.5, got {omega!r}")
    return math.sqrt(2.0 * omega - 1.0) / omega**4


# ---------------------------------------------------------------------------
# Derived quantities
# ---------------------------------------------------------------------------

SERIES_STEPS = (1e-2, 5e-3, 2.5e-3)


def small_omega_series(
    state: BoundState,
    evaluator: str = "alpha_total",
    steps=SERIES_STEPS,
    tol: float = 1e-6,
) -> SeriesCoefficients:
    """Estimate c0, c1, c2 of an even response function at omega = 0.

    Central differences on the three ``steps`` (halving, in units of 2B so the
    default schedule is 1e-2, 5e-3, 2.5e-3 at k0 = 1), then two levels of
    Richardson extrapolation in h^2. ``tol`` bounds the last Richardson change
    of c2 (2B)^2 / c0. ``evaluator`` is ``"alpha_total"`` for this model's pair
    or ``"ref8"`` for the literature formula (k0 = 1 only).
    """
    if evaluator == "alpha_total":
        f = lambda w: _even_pair(state, w)  # noqa: E731
    elif evaluator == "ref8":
        _require_unit_well(state)
        f = _ref8_below_even
    else:
        raise ValueError(f"unknown evaluator {evaluator!r}")

    steps = tuple(2.0 * state.B * h for h in steps)
    if len(steps) != 3 or max(steps) >= state.B:
        raise ValueError(f"need three steps smaller than B = {state.B}, got {steps}")
    for a, b in zip(steps, steps[1:]):
        if not math.isclose(a, 2.0 * b):
            raise ValueError("Richardson schedule requires each step to halve the previous one")

    f0 = f(0.0)
    first, second = [], []
    for h in steps:
        fp, fm = f(h), f(-h)
        first.append((fp - fm) / (2.0 * h))
        second.append((fp - 2.0 * f0 + fm) / (h * h))

    def richardson(col):
        lvl1 = [(4.0 * col[i + 1] - col[i]) / 3.0 for i in range(2)]
        lvl2 = (16.0 * lvl1[1] - lvl1[0]) / 15.0
        return lvl1, lvl2

    d1_lvl1, d1 = richardson(first)
    d2_lvl1, d2 = richardson(second)
    c2 = 0.5 * d2
    change = abs(0.5 * d2_lvl1[1] - c2) * (2.0 * state.B) ** 2 / abs(f0)
    diagnostics = {
        "steps": steps,
        "second_derivative_raw": second,
        "second_derivative_level1": d2_lvl1,
        "c2_last_change_normalized": change,
        "tolerance": tol,
    }
    if not (math.isfinite(c2) and change < tol):
        raise EstimationError(
            f"c2 extrapolation did not settle: last change {change:.3e} >= tol {tol:.1e}",
            diagnostics,
        )
    return SeriesCoefficients(c0=f0, c1=d1, c2=c2, normalized_c2=c2 / f0, diagnostics=diagnostics)


def threshold_gap(state: BoundState, eps: float) -> float:
    """|alpha_plus_below(B - eps) - Re alpha_plus_above(B + eps)|."""
    below = alpha_plus_below(state, state.B - eps)
    above = alpha_plus_above(state, state.B + eps).real
    return abs(below - above)


def locate_im_peak(state: BoundState, xatol: float = 1e-10) -> tuple[float, float]:
    """(omega, Im alpha) at the maximum of the absorption profile."""
    B = state.B
    res = optimize.minimize_scalar(
        lambda w: -alpha_plus_above(state, w).imag,
        bounds=(B * (1.0 + 1e-9), 4.0 * B),
        method="bounded",
        options={"xatol": xatol},
    )
    return float(res.x), float(-res.fun)


def f_sum_rule(state: BoundState, cutoff_factor: float = 50.0, rel_tol: float = 1e-12) -> float:
    """Integral of omega * Im alpha(omega) from B to infinity.

    Integrated over Lambda (omega = B + Lambda^2/2) up to a cutoff, plus the
    first three terms of the large-Lambda expansion beyond it.
    """
    k0, B = state.k0, state.B
    cut = cutoff_factor * k0

    def integrand(lam):
        d = k0 * k0 + lam * lam
        return (B + 0.5 * lam * lam) * 16.0 * k0**3 * lam * lam / d**4

    body, err = integrate.quad(integrand, 0.0, cut, epsabs=0.0, epsrel=rel_tol, limit=500, points=[k0])
    if err > 1e-9 * abs(body):
        raise QuadratureError(f"f-sum quadrature error estimate {err:.2e} too large")
    # (B + L^2/2) 16 k0^3 L^2 / (k0^2 + L^2)^4 with B = k0^2/2, expanded in 1/L
    tail = 16.0 * k0**3 * (
        1.0 / (6.0 * cut**3) - 0.3 * k0**2 / cut**5 + (3.0 / 7.0) * k0**4 / cut**7
    )
    return body + tail

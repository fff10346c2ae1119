"""Deterministic structure of the second-order linear recursion.

The driven sequence is

    xi_k = a*xi_{k-1} + b*xi_{k-2} + theta_k,   xi_0 = xi_{-1} = 0,

and everything this module computes comes from the noise-free weights

    u_n = a*u_{n-1} + b*u_{n-2},   u_0 = 1, u_{-1} = 0,

their cumulative sums U(j) = sum_{m=0}^{j} u_m, and the companion matrix
C = [[a, b], [1, 0]].  The column identity C^s M = [[u_s, 0], [u_{s-1}, 0]]
with M = [[1, 0], [0, 0]] ties matrix powers back to the scalar recursion,
and the characteristic roots of z^2 - a*z - b govern growth and stability.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateSpectrum,
    HorizonOverflow,
    InvalidParameters,
    NonFiniteInput,
    UnstableCoefficients,
)
from .summation import CompensatedSum

# Strict slack on the stability inequalities; points this close to the
# boundary are treated as outside the region.
STABILITY_SLACK = 1e-12

# |a^2 + 4b| at or below this (relative to max(1, a^2)) counts as a
# repeated root.
REPEATED_ROOT_TOL = 1e-10

# A simple-root formula cannot be trusted once the roots are this close.
ROOT_SEPARATION_TOL = 1e-10

# Tolerated imaginary leakage when a real weight is assembled from a
# complex-conjugate root pair.
IMAG_RESIDUE_TOL = 1e-9


class Stability(enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"


@dataclass(frozen=True)
class ARCoefficients:
    """Coefficient pair (a, b) with its stability classification.

    Stable means -1 < b < 1 - |a| with slack STABILITY_SLACK on both
    strict inequalities, which is equivalent to both characteristic
    roots lying strictly inside the unit circle.
    """

    a: float
    b: float
    stability: Stability = field(init=False)

    def __post_init__(self):
        a = float(self.a)
        b = float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise NonFiniteInput(f"coefficients must be finite, got a={a}, b={b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        stable = (b > -1.0 + STABILITY_SLACK) and (b < 1.0 - abs(a) - STABILITY_SLACK)
        object.__setattr__(self, "stability", Stability.STABLE if stable else Stability.UNSTABLE)


def classify_stability(coeffs: ARCoefficients) -> Stability:
    """Classification of (a, b) against -1 < b < 1 - |a|."""
    return coeffs.stability


@dataclass(frozen=True)
class CompanionSpectrum:
    """Roots of z^2 - a*z - b and derived growth data.

    rho is the spectral radius max(|lambda1|, |lambda2|); mu is the
    maximal root multiplicity (2 exactly when the discriminant a^2 + 4b
    vanishes to tolerance).  For a negative discriminant the roots form
    a conjugate pair and rho = sqrt(-b).
    """

    lambda1: complex
    lambda2: complex
    rho: float
    mu: int
    discriminant: float


def companion_spectrum(coeffs: ARCoefficients) -> CompanionSpectrum:
    """Solve z^2 - a*z - b = 0 and report (lambda1, lambda2, rho, mu).

    lambda1 carries the + branch of (a +/- sqrt(a^2 + 4b)) / 2, so for a
    conjugate pair it has positive imaginary part.
    """
    a, b = coeffs.a, coeffs.b
    disc = a * a + 4.0 * b
    mu = 2 if abs(disc) <= REPEATED_ROOT_TOL * max(1.0, a * a) else 1
    if disc < 0.0:
        half_im = math.sqrt(-disc) / 2.0
        lam1 = complex(a / 2.0, half_im)
        lam2 = complex(a / 2.0, -half_im)
        rho = math.sqrt(-b)
    else:
        root = math.sqrt(disc)
        lam1 = complex((a + root) / 2.0, 0.0)
        lam2 = complex((a - root) / 2.0, 0.0)
        rho = max(abs(lam1.real), abs(lam2.real))
    return CompanionSpectrum(lambda1=lam1, lambda2=lam2, rho=rho, mu=mu, discriminant=disc)


def _readonly(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class WeightTable:
    """Weights u_0..u_horizon and their running sums U(0)..U(horizon).

    Arrays are read-only; a table is safe to share between workers.
    """

    coeffs: ARCoefficients
    horizon: int
    u: np.ndarray
    cum: np.ndarray


def weight_sequence(coeffs: ARCoefficients, horizon: int) -> WeightTable:
    """Tabulate u_n = a*u_{n-1} + b*u_{n-2} and U(n) for n = 0..horizon.

    The running sums use compensated accumulation so that U(j) carries
    no visible drift even over 1e4+ terms.  Raises HorizonOverflow as
    soon as a weight leaves double range (possible only for unstable
    coefficients).
    """
    horizon = int(horizon)
    if horizon < 0:
        raise InvalidParameters(f"horizon must be >= 0, got {horizon}")
    a, b = coeffs.a, coeffs.b
    u = [1.0]
    prev2, prev1 = 0.0, 1.0  # u_{-1}, u_0
    cum_acc = CompensatedSum(1.0)
    cum = [cum_acc.total]
    for n in range(1, horizon + 1):
        here = a * prev1 + b * prev2
        if not math.isfinite(here):
            raise HorizonOverflow(f"weight u_{n} overflowed for a={a}, b={b}")
        u.append(here)
        cum_acc.add(here)
        cum.append(cum_acc.total)
        prev2, prev1 = prev1, here
    return WeightTable(coeffs=coeffs, horizon=horizon, u=_readonly(u), cum=_readonly(cum))


def weight_closed_form(spectrum: CompanionSpectrum, s: int) -> float:
    """Evaluate u_s from the characteristic roots.

    Simple roots:   u_s = (lambda1^{s+1} - lambda2^{s+1}) / (lambda1 - lambda2)
    Repeated root:  u_s = (s + 1) * (a/2)^s

    The simple-root branch runs in complex arithmetic; the imaginary
    part must cancel to within IMAG_RESIDUE_TOL * (1 + |u_s|) and only
    the real part is returned.
    """
    s = int(s)
    if s < 0:
        raise InvalidParameters(f"s must be >= 0, got {s}")
    if spectrum.mu == 2:
        mid = (spectrum.lambda1 + spectrum.lambda2).real / 2.0
        try:
            return float(s + 1) * mid ** s
        except OverflowError as exc:
            raise HorizonOverflow(f"closed-form weight u_{s} overflowed") from exc
    sep = spectrum.lambda1 - spectrum.lambda2
    if abs(sep) < ROOT_SEPARATION_TOL:
        raise DegenerateSpectrum(
            f"roots separated by {abs(sep):.3e} but not flagged as repeated"
        )
    try:
        value = (spectrum.lambda1 ** (s + 1) - spectrum.lambda2 ** (s + 1)) / sep
    except OverflowError as exc:
        raise HorizonOverflow(f"closed-form weight u_{s} overflowed") from exc
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise HorizonOverflow(f"closed-form weight u_{s} overflowed")
    if abs(value.imag) > IMAG_RESIDUE_TOL * (1.0 + abs(value.real)):
        raise FloatingPointError(
            f"imaginary residue {value.imag:.3e} too large in closed-form weight u_{s}"
        )
    return value.real


def companion_power_column(coeffs: ARCoefficients, s: int) -> tuple:
    """First column of C^s M by repeated 2x2 multiplication.

    Returns (u_s, u_{s-1}) without using the scalar recursion, which
    makes it an independent witness for the weight table.
    """
    s = int(s)
    if s < 1:
        raise InvalidParameters(f"s must be >= 1, got {s}")
    a, b = coeffs.a, coeffs.b
    # P = M, then P <- C @ P, s times.
    p00, p01, p10, p11 = 1.0, 0.0, 0.0, 0.0
    for _ in range(s):
        q00 = a * p00 + b * p10
        q01 = a * p01 + b * p11
        q10, q11 = p00, p01
        p00, p01, p10, p11 = q00, q01, q10, q11
    if not (math.isfinite(p00) and math.isfinite(p10)):
        raise HorizonOverflow(f"matrix power overflowed at s={s} for a={a}, b={b}")
    return p00, p10


@dataclass(frozen=True)
class BoundReport:
    """Empirical envelope constants for a stable coefficient pair.

    koval_ratio_min/max bracket R(s) = ||C^s M||_F / (rho^s * s^(mu-1))
    over 1 <= s <= horizon; a two-sided envelope of that shape exists
    for every Frobenius companion matrix, so the extrema should settle
    to a bounded band.  L_star = max_j |U(j)| and cum_limit is the
    geometric-series limit 1 / (1 - a - b) of U(j).
    """

    L_star: float
    cum_limit: float
    koval_ratio_min: float
    koval_ratio_max: float
    horizon_used: int


def bound_report(coeffs: ARCoefficients, horizon: int) -> BoundReport:
    """Scan the weight table for envelope constants.

    Requires stable coefficients and horizon >= 50.  The Frobenius norm
    is evaluated with hypot to survive squared underflow; once either
    the norm or rho^s * s^(mu-1) underflows to zero the scan stops,
    since ratios past that point carry no information.  For the
    nilpotent pair a = b = 0 (rho = 0) no ratio is defined and the
    extrema are NaN.
    """
    if coeffs.stability is not Stability.STABLE:
        raise UnstableCoefficients(
            f"bound report needs -1 < b < 1 - |a|, got a={coeffs.a}, b={coeffs.b}"
        )
    horizon = int(horizon)
    if horizon < 50:
        raise InvalidParameters(f"horizon must be >= 50, got {horizon}")
    table = weight_sequence(coeffs, horizon)
    spectrum = companion_spectrum(coeffs)
    L_star = float(np.max(np.abs(table.cum)))
    cum_limit = 1.0 / (1.0 - coeffs.a - coeffs.b)

    ratio_min = math.inf
    ratio_max = -math.inf
    seen = False
    rho_pow = 1.0
    u = table.u
    for s in range(1, horizon + 1):
        rho_pow *= spectrum.rho
        denom = rho_pow * (float(s) if spectrum.mu == 2 else 1.0)
        norm = math.hypot(u[s], u[s - 1])
        if denom == 0.0 or norm == 0.0:
            if denom == 0.0:
                break  # rho^s underflowed; nothing measurable further out
            continue  # nilpotent zeros contribute no ratio
        ratio = norm / denom
        seen = True
        ratio_min = min(ratio_min, ratio)
        ratio_max = max(ratio_max, ratio)
    if not seen:
        ratio_min = ratio_max = math.nan
    return BoundReport(
        L_star=L_star,
        cum_limit=cum_limit,
        koval_ratio_min=ratio_min,
        koval_ratio_max=ratio_max,
        horizon_used=horizon,
    )

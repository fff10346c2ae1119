"""Path simulation and the weighted-sum representation of S_n.

Two routes to the same partial sum:

  direct:    xi_k = a*xi_{k-1} + b*xi_{k-2} + theta_k,  S_n = sum_k xi_k
  weighted:  S_n = sum_{k=1}^{n} U(n-k) * theta_k

with U the cumulative weights from the recurrence module.  Agreement of
the two routes on the same noise vector is the main self-check of the
whole pipeline; representation_residual quantifies it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientHorizon, InvalidParameters, NonFiniteInput
from .recurrence import ARCoefficients, WeightTable, weight_sequence
from .summation import CompensatedSum


@dataclass(frozen=True)
class Path:
    """One realized trajectory: innovations, states, and their sum."""

    coeffs: ARCoefficients
    n: int
    theta: np.ndarray
    xi: np.ndarray
    s_n: float


def _as_theta(theta) -> np.ndarray:
    arr = np.asarray(theta, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidParameters("theta must be a non-empty 1-d array")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("theta contains NaN or infinity")
    return arr


def simulate_path(coeffs: ARCoefficients, theta) -> Path:
    """Run the recursion from rest (xi_0 = xi_{-1} = 0) over theta.

    Works for any finite coefficients, stable or not; n is just
    len(theta).  S_n accumulates with compensation.
    """
    arr = _as_theta(theta)
    a, b = coeffs.a, coeffs.b
    xi = np.empty(arr.size)
    prev2, prev1 = 0.0, 0.0
    acc = CompensatedSum()
    for k in range(arr.size):
        here = a * prev1 + b * prev2 + arr[k]
        xi[k] = here
        acc.add(here)
        prev2, prev1 = prev1, here
    arr.setflags(write=False)
    xi.setflags(write=False)
    return Path(coeffs=coeffs, n=arr.size, theta=arr, xi=xi, s_n=acc.total)


def weighted_sum(coeffs: ARCoefficients, theta, weights: WeightTable | None = None) -> float:
    """S_n via sum_{k=1}^{n} U(n-k) * theta_k, compensated.

    A caller-supplied WeightTable must cover horizon >= n - 1; without
    one, a fresh table for exactly this n is built.
    """
    arr = _as_theta(theta)
    n = arr.size
    if weights is None:
        weights = weight_sequence(coeffs, n - 1)
    else:
        if weights.coeffs != coeffs:
            raise InvalidParameters("weight table was built for different coefficients")
        if weights.horizon < n - 1:
            raise InsufficientHorizon(
                f"weight table horizon {weights.horizon} < n - 1 = {n - 1}"
            )
    cum = weights.cum
    acc = CompensatedSum()
    for k in range(n):
        acc.add(cum[n - 1 - k] * arr[k])
    return acc.total


def representation_residual(coeffs: ARCoefficients, theta) -> float:
    """|direct - weighted| / max(1, |direct|) on one noise vector."""
    direct = simulate_path(coeffs, theta).s_n
    other = weighted_sum(coeffs, theta)
    return abs(direct - other) / max(1.0, abs(direct))


def prefix_sums(path: Path) -> np.ndarray:
    """S_1..S_n along the path, each with compensated accumulation."""
    acc = CompensatedSum()
    out = np.empty(path.n)
    for k in range(path.n):
        acc.add(path.xi[k])
        out[k] = acc.total
    out.setflags(write=False)
    return out


def weighted_prefix_sums(coeffs: ARCoefficients, theta, weights: WeightTable | None = None) -> np.ndarray:
    """All of S_1..S_n at once through the weighted route.

    S_m = sum_{k<=m} U(m-k) theta_k is the m-th coefficient of the
    product of the theta and U series, so one discrete convolution
    yields every prefix; this is the vectorized twin of weighted_sum
    for whole-path residual sweeps.
    """
    arr = _as_theta(theta)
    n = arr.size
    if weights is None:
        weights = weight_sequence(coeffs, n - 1)
    elif weights.horizon < n - 1:
        raise InsufficientHorizon(
            f"weight table horizon {weights.horizon} < n - 1 = {n - 1}"
        )
    out = np.convolve(arr, weights.cum[:n])[:n]
    out.setflags(write=False)
    return out

"""Monte Carlo estimation of the weighted tail series.

The object of interest is

    sum_{n >= 1} n^(r/p - 2) * P{ |S_n| / n^(1/p) > eps },  0 < p < 2, r >= p,

whose convergence for every eps > 0 is the complete-convergence property
of the normalized partial sums.  Each tail probability is estimated by
independent replication blocks routed through the weighted-sum
representation, with a 95% Wilson interval attached, and the partial
sums over a finite n-grid are reported together with a stabilization
verdict.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyGrid,
    InfiniteMoment,
    InvalidParameters,
    UnstableCoefficients,
)
from .noise import NoiseSpec, StreamKey, absolute_moment, sample_block
from .recurrence import ARCoefficients, Stability, WeightTable, weight_sequence
from .summation import CompensatedSum

# Two-sided 95% normal quantile used by every Wilson interval here.
Z95 = 1.959963984540054

# Replicates drawn per stream block.  Fixed: block boundaries are part
# of the deterministic sampling layout, so changing this constant
# changes every estimate.
BLOCK_REPLICATES = 4096

# A dyadic block is {n : 2^k <= n < 2^(k+1)}.  The verdict looks at the
# grid points falling in the highest occupied block.
STABILIZED_TAIL_SHARE = 1e-3
FLOOR_FRACTION_LIMIT = 0.25


@dataclass(frozen=True)
class SeriesParams:
    """Exponents and threshold of the series: 0 < p < 2, r >= p, eps > 0."""

    p: float
    r: float
    epsilon: float

    def __post_init__(self):
        p = float(self.p)
        r = float(self.r)
        eps = float(self.epsilon)
        if not (math.isfinite(p) and 0.0 < p < 2.0):
            raise InvalidParameters(f"p must satisfy 0 < p < 2, got {p}")
        if not (math.isfinite(r) and r >= p):
            raise InvalidParameters(f"r must satisfy r >= p, got r={r}, p={p}")
        if not (math.isfinite(eps) and eps > 0.0):
            raise InvalidParameters(f"epsilon must be > 0, got {eps}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "epsilon", eps)

    @property
    def exponent(self) -> float:
        """Weight exponent r/p - 2 of the series terms."""
        return self.r / self.p - 2.0


@dataclass(frozen=True)
class TailEstimate:
    """One Monte Carlo tail probability with its Wilson interval."""

    n: int
    replications: int
    p_hat: float
    ci_low: float
    ci_high: float
    at_floor: bool  # zero exceedances observed; p_hat sits on the MC floor


class Verdict(enum.Enum):
    STABILIZED = "Stabilized"
    FLOOR_LIMITED = "FloorLimited"
    GROWING = "Growing"


@dataclass(frozen=True)
class SeriesEstimate:
    """Per-point estimates and running sums over an n-grid."""

    params: SeriesParams
    grid: tuple
    tails: tuple
    terms: tuple
    partial_sums: tuple
    partial_sum_ci_high: tuple
    verdict: Verdict


def default_grid(n_max: int) -> list:
    """Evaluation grid policy: all of 1..n_max up to 128, dyadic beyond.

    Above 128 only powers of two are kept; the per-point cost grows
    linearly in n, so a full grid out there buys little and costs much.
    """
    n_max = int(n_max)
    if n_max < 1:
        raise EmptyGrid(f"n_max must be >= 1, got {n_max}")
    grid = list(range(1, min(n_max, 128) + 1))
    power = 256
    while power <= n_max:
        grid.append(power)
        power *= 2
    return grid


def wilson_interval(successes: int, total: int, z: float = Z95) -> tuple:
    """95% two-sided Wilson score interval, well-defined at 0 and total."""
    if total <= 0:
        raise InvalidParameters(f"total must be >= 1, got {total}")
    if not 0 <= successes <= total:
        raise InvalidParameters("successes must lie in [0, total]")
    p_hat = successes / total
    denom = 1.0 + z * z / total
    center = (p_hat + z * z / (2.0 * total)) / denom
    spread = z * math.sqrt((p_hat * (1.0 - p_hat) + z * z / (4.0 * total)) / total) / denom
    # the endpoints are exact at the degenerate counts; do not let sqrt
    # rounding leak a ~1e-19 residue into them
    low = 0.0 if successes == 0 else max(0.0, center - spread)
    high = 1.0 if successes == total else min(1.0, center + spread)
    return low, high


def _require_stable(coeffs: ARCoefficients):
    if coeffs.stability is not Stability.STABLE:
        raise UnstableCoefficients(
            f"estimation needs -1 < b < 1 - |a|, got a={coeffs.a}, b={coeffs.b}"
        )


def _count_exceedances(
    coeffs: ARCoefficients,
    spec: NoiseSpec,
    threshold: float,
    n: int,
    replications: int,
    key: StreamKey,
    weights: WeightTable,
) -> int:
    """Exceedance count over all replication blocks for one n.

    Each block draws BLOCK_REPLICATES paths worth of noise under its
    own (purpose, n, block) key and evaluates |S_n| through the
    weighted representation; counting is order-insensitive, so the
    result does not depend on block scheduling.
    """
    rev_cum = weights.cum[n - 1 :: -1]  # U(n-1), ..., U(0)
    count = 0
    done = 0
    block = 0
    while done < replications:
        take = min(BLOCK_REPLICATES, replications - done)
        block_key = StreamKey(key.master_seed, key.purpose, n=n, block=block)
        theta = sample_block(spec, take * n, block_key).reshape(take, n)
        sums = np.einsum("ij,j->i", theta, rev_cum)
        count += int(np.count_nonzero(np.abs(sums) > threshold))
        done += take
        block += 1
    return count


def tail_probability(
    coeffs: ARCoefficients,
    spec: NoiseSpec,
    params: SeriesParams,
    n: int,
    replications: int,
    stream_key: StreamKey,
    weights: WeightTable | None = None,
) -> TailEstimate:
    """Estimate P{ |S_n| > eps * n^(1/p) } by simple Monte Carlo.

    Uses the weighted-sum route with a weight table covering n - 1
    (building one on the spot if none is supplied).  at_floor flags a
    zero count: the point estimate is then 0 but the Wilson upper bound
    stays positive.
    """
    _require_stable(coeffs)
    n = int(n)
    if n < 1:
        raise InvalidParameters(f"n must be >= 1, got {n}")
    replications = int(replications)
    if replications < 100:
        raise InvalidParameters(f"replications must be >= 100, got {replications}")
    if weights is None:
        weights = weight_sequence(coeffs, n - 1)
    elif weights.horizon < n - 1:
        raise InvalidParameters(f"weight table horizon {weights.horizon} < {n - 1}")
    threshold = params.epsilon * float(n) ** (1.0 / params.p)
    count = _count_exceedances(coeffs, spec, threshold, n, replications, stream_key, weights)
    low, high = wilson_interval(count, replications)
    return TailEstimate(
        n=n,
        replications=replications,
        p_hat=count / replications,
        ci_low=low,
        ci_high=high,
        at_floor=(count == 0),
    )


def _dyadic_block_starts(grid) -> list:
    """Index where each dyadic block [2^k, 2^(k+1)) begins in the grid."""
    starts = []
    last_block = None
    for i, n in enumerate(grid):
        k = int(n).bit_length() - 1  # floor(log2 n)
        if k != last_block:
            starts.append(i)
            last_block = k
    return starts


def _verdict(grid, terms, ci_terms, at_floor_flags, partial_sums, ci_totals) -> Verdict:
    """Stabilization taxonomy over the evaluated grid.

    Stabilized: the point-estimate sum is identically zero, or the grid
    points in the last dyadic block contribute at most
    STABILIZED_TAIL_SHARE of the CI-upper sum.  Otherwise FloorLimited
    when at least FLOOR_FRACTION_LIMIT of the terms sit on the MC
    floor; otherwise Growing (the running sum is still accumulating
    mass that neither criterion explains away).
    """
    if partial_sums[-1] == 0.0:
        return Verdict.STABILIZED
    starts = _dyadic_block_starts(grid)
    tail_ci = math.fsum(ci_terms[starts[-1] :])
    if tail_ci <= STABILIZED_TAIL_SHARE * ci_totals[-1]:
        return Verdict.STABILIZED
    floor_fraction = sum(at_floor_flags) / len(at_floor_flags)
    if floor_fraction >= FLOOR_FRACTION_LIMIT:
        return Verdict.FLOOR_LIMITED
    return Verdict.GROWING


def partial_series(
    coeffs: ARCoefficients,
    spec: NoiseSpec,
    params: SeriesParams,
    grid,
    replications: int,
    master_seed: int,
) -> SeriesEstimate:
    """Evaluate terms n^(r/p-2) * p_hat_n over the grid and judge them.

    The grid must be strictly increasing positive integers.  One weight
    table serves every n; each n gets its own stream keys, so inserting
    or removing grid points never perturbs the others.
    """
    grid = [int(n) for n in grid]
    if not grid:
        raise EmptyGrid("n-grid is empty")
    if grid[0] < 1 or any(m >= n for m, n in zip(grid, grid[1:])):
        raise InvalidParameters("grid must be strictly increasing and >= 1")
    _require_stable(coeffs)
    weights = weight_sequence(coeffs, grid[-1] - 1)
    exponent = params.exponent

    tails = []
    terms = []
    ci_terms = []
    flags = []
    for n in grid:
        est = tail_probability(
            coeffs, spec, params, n, replications,
            StreamKey(master_seed, "tail", n=n), weights=weights,
        )
        scale = float(n) ** exponent
        tails.append(est)
        terms.append(scale * est.p_hat)
        ci_terms.append(scale * est.ci_high)
        flags.append(est.at_floor)

    sums_acc = CompensatedSum()
    ci_acc = CompensatedSum()
    partial_sums = []
    ci_totals = []
    for t, c in zip(terms, ci_terms):
        sums_acc.add(t)
        ci_acc.add(c)
        partial_sums.append(sums_acc.total)
        ci_totals.append(ci_acc.total)

    verdict = _verdict(grid, terms, ci_terms, flags, partial_sums, ci_totals)
    return SeriesEstimate(
        params=params,
        grid=tuple(grid),
        tails=tuple(tails),
        terms=tuple(terms),
        partial_sums=tuple(partial_sums),
        partial_sum_ci_high=tuple(ci_totals),
        verdict=verdict,
    )


@dataclass(frozen=True)
class MomentGrowthReport:
    """Least-squares slope of log E|S_n|^r against log n.

    bound = max(1, r/2) is the growth exponent that E|S_n|^r of a
    stable recursion with E|theta|^r < inf cannot exceed (up to a
    constant); slope materially above it signals a defect.
    """

    r: float
    n_grid: tuple
    estimates: tuple
    slope: float
    intercept: float
    bound: float
    replications: int


def moment_growth_check(
    coeffs: ARCoefficients,
    spec: NoiseSpec,
    r: float,
    n_grid,
    replications: int,
    master_seed: int,
) -> MomentGrowthReport:
    """Monte Carlo E|S_n|^r over a grid and its log-log slope.

    Requires the analytic E|theta|^r to be finite (InfiniteMoment
    otherwise) and at least 4 grid points for a meaningful fit.  Block
    sums are combined in fixed order, so the estimates are exactly
    reproducible for a given master seed.
    """
    _require_stable(coeffs)
    r = float(r)
    if not absolute_moment(spec, r).is_finite:
        raise InfiniteMoment(f"E|theta|^{r} diverges for {spec.family}")
    n_grid = [int(n) for n in n_grid]
    if len(n_grid) < 4:
        raise InvalidParameters("n_grid needs >= 4 points for a slope fit")
    if n_grid[0] < 1 or any(m >= n for m, n in zip(n_grid, n_grid[1:])):
        raise InvalidParameters("n_grid must be strictly increasing and >= 1")
    replications = int(replications)
    if replications < 100:
        raise InvalidParameters(f"replications must be >= 100, got {replications}")

    weights = weight_sequence(coeffs, n_grid[-1] - 1)
    estimates = []
    for n in n_grid:
        rev_cum = weights.cum[n - 1 :: -1]
        acc = CompensatedSum()
        done = 0
        block = 0
        while done < replications:
            take = min(BLOCK_REPLICATES, replications - done)
            key = StreamKey(master_seed, "moment", n=n, block=block)
            theta = sample_block(spec, take * n, key).reshape(take, n)
            sums = np.einsum("ij,j->i", theta, rev_cum)
            acc.add(float(np.sum(np.abs(sums) ** r)))
            done += take
            block += 1
        estimates.append(acc.total / replications)

    slope, intercept = np.polyfit(np.log(np.asarray(n_grid, dtype=float)), np.log(estimates), 1)
    return MomentGrowthReport(
        r=r,
        n_grid=tuple(n_grid),
        estimates=tuple(estimates),
        slope=float(slope),
        intercept=float(intercept),
        bound=max(1.0, r / 2.0),
        replications=replications,
    )

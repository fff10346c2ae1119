import math

import numpy as np
import pytest
from scipy.integrate import quad

from ar2lab import (
    InvalidOrder,
    InvalidParameters,
    NoiseSpec,
    StreamKey,
    absolute_moment,
    generator_for,
    sample_block,
)


# --- quadrature oracle -------------------------------------------------------

def _density(spec):
    """Independent density definitions for the continuous families."""
    if spec.family == "normal":
        return lambda x: math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi), -np.inf, np.inf
    if spec.family == "uniform":
        (c,) = spec.params
        return lambda x: 1.0 / (2 * c), -c, c
    if spec.family == "student_t":
        (nu,) = spec.params
        coef = math.gamma((nu + 1) / 2) / (math.sqrt(nu * math.pi) * math.gamma(nu / 2))
        return lambda x: coef * (1 + x * x / nu) ** (-(nu + 1) / 2), -np.inf, np.inf
    if spec.family == "pareto":
        alpha, x_min = spec.params
        half = alpha * x_min ** alpha / 2.0
        return lambda x: half * abs(x) ** (-alpha - 1) if abs(x) >= x_min else 0.0, -np.inf, np.inf
    raise AssertionError(spec.family)


def oracle_moment(spec, r):
    if spec.family == "rademacher":
        return 1.0
    if spec.family == "pareto":
        # integrate the magnitude directly: the split at +-x_min trips quad
        alpha, x_min = spec.params
        value, err = quad(lambda x: alpha * x_min ** alpha * x ** (r - alpha - 1), x_min, np.inf)
        return value
    density, lo, hi = _density(spec)
    value, err = quad(lambda x: abs(x) ** r * density(x), lo, hi, limit=200)
    return value


MOMENT_CASES = [
    (NoiseSpec.standard_normal(), 1.0),
    (NoiseSpec.standard_normal(), 2.0),
    (NoiseSpec.standard_normal(), 4.0),
    (NoiseSpec.standard_normal(), 1.7),
    (NoiseSpec.uniform(1.0), 2.0),
    (NoiseSpec.uniform(2.0), 2.0),
    (NoiseSpec.uniform(0.5), 3.3),
    (NoiseSpec.student_t(5.0), 2.0),
    (NoiseSpec.student_t(3.0), 2.0),
    (NoiseSpec.student_t(4.5), 1.25),
    (NoiseSpec.symmetric_pareto(2.5, 1.0), 1.0),
    (NoiseSpec.symmetric_pareto(3.0, 1.3), 2.0),
    (NoiseSpec.rademacher(), 1.0),
    (NoiseSpec.rademacher(), 3.7),
]


@pytest.mark.parametrize("spec,r", MOMENT_CASES, ids=str)
def test_absolute_moment_matches_quadrature(spec, r):
    value = absolute_moment(spec, r)
    assert value.is_finite
    assert value.value == pytest.approx(oracle_moment(spec, r), rel=1e-8)


def test_absolute_moment_closed_values():
    assert absolute_moment(NoiseSpec.standard_normal(), 1).value == pytest.approx(math.sqrt(2 / math.pi))
    assert absolute_moment(NoiseSpec.standard_normal(), 2).value == pytest.approx(1.0)
    assert absolute_moment(NoiseSpec.standard_normal(), 4).value == pytest.approx(3.0)
    assert absolute_moment(NoiseSpec.rademacher(), 0.5).value == 1.0
    assert absolute_moment(NoiseSpec.uniform(2.0), 2).value == pytest.approx(4.0 / 3.0)
    # Student t: E T^2 = nu / (nu - 2)
    assert absolute_moment(NoiseSpec.student_t(5), 2).value == pytest.approx(5.0 / 3.0)
    assert absolute_moment(NoiseSpec.symmetric_pareto(2.5, 1.0), 1).value == pytest.approx(5.0 / 3.0)


def test_absolute_moment_divergence():
    assert not absolute_moment(NoiseSpec.student_t(3.0), 3.0).is_finite
    assert not absolute_moment(NoiseSpec.student_t(3.0), 4.0).is_finite
    assert not absolute_moment(NoiseSpec.symmetric_pareto(2.0, 1.0), 2.0).is_finite
    assert not absolute_moment(NoiseSpec.symmetric_pareto(1.5, 2.0), 1.8).is_finite
    assert absolute_moment(NoiseSpec.student_t(3.0), 2.99).is_finite


def test_absolute_moment_rejects_bad_order():
    with pytest.raises(InvalidOrder):
        absolute_moment(NoiseSpec.standard_normal(), 0.0)
    with pytest.raises(InvalidOrder):
        absolute_moment(NoiseSpec.standard_normal(), -1.0)


# --- spec validation ---------------------------------------------------------

def test_spec_validation():
    with pytest.raises(InvalidParameters):
        NoiseSpec("cauchy")
    with pytest.raises(InvalidParameters):
        NoiseSpec.uniform(0.0)
    with pytest.raises(InvalidParameters):
        NoiseSpec.uniform(-1.0)
    with pytest.raises(InvalidParameters):
        NoiseSpec.student_t(0.0)
    with pytest.raises(InvalidParameters):
        NoiseSpec.symmetric_pareto(0.0, 1.0)
    with pytest.raises(InvalidParameters):
        NoiseSpec.symmetric_pareto(1.0, 0.0)
    with pytest.raises(InvalidParameters):
        NoiseSpec("normal", (1.0,))
    with pytest.raises(InvalidParameters):
        NoiseSpec("pareto", (2.0,))
    with pytest.raises(InvalidParameters):
        NoiseSpec("uniform", (math.nan,))


def test_stream_key_validation():
    with pytest.raises(InvalidParameters):
        StreamKey(-1, "x")
    with pytest.raises(InvalidParameters):
        StreamKey(2 ** 64, "x")
    with pytest.raises(InvalidParameters):
        StreamKey(1, "x", n=-1)
    key = StreamKey(2 ** 64 - 1, "x", n=3, block=9)
    assert key.master_seed == 2 ** 64 - 1


# --- sampling ----------------------------------------------------------------

ALL_SPECS = [
    NoiseSpec.standard_normal(),
    NoiseSpec.rademacher(),
    NoiseSpec.uniform(1.5),
    NoiseSpec.student_t(5.0),
    NoiseSpec.symmetric_pareto(3.0, 1.0),
]


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family)
def test_sampling_is_key_deterministic(spec):
    key = StreamKey(123456789, "test", n=17, block=4)
    one = sample_block(spec, 1001, key)
    two = sample_block(spec, 1001, key)
    assert np.array_equal(one, two)


def test_different_key_fields_change_the_stream():
    base = StreamKey(7, "tail", n=8, block=0)
    ref = sample_block(NoiseSpec.standard_normal(), 64, base)
    for other in [
        StreamKey(8, "tail", n=8, block=0),
        StreamKey(7, "moment", n=8, block=0),
        StreamKey(7, "tail", n=9, block=0),
        StreamKey(7, "tail", n=8, block=1),
    ]:
        assert not np.array_equal(ref, sample_block(NoiseSpec.standard_normal(), 64, other))


def test_generator_for_is_reproducible():
    key = StreamKey(42, "anything", n=1, block=2)
    assert np.array_equal(generator_for(key).random(16), generator_for(key).random(16))


def test_sample_count_edges():
    key = StreamKey(5, "edge")
    assert sample_block(NoiseSpec.standard_normal(), 0, key).size == 0
    assert sample_block(NoiseSpec.standard_normal(), 7, key).size == 7  # odd count
    with pytest.raises(InvalidParameters):
        sample_block(NoiseSpec.standard_normal(), -1, key)


def test_support_constraints():
    key = StreamKey(11, "support")
    rad = sample_block(NoiseSpec.rademacher(), 10000, key)
    assert set(np.unique(rad)) == {-1.0, 1.0}
    uni = sample_block(NoiseSpec.uniform(0.75), 10000, key)
    assert np.all(np.abs(uni) < 0.75)
    par = sample_block(NoiseSpec.symmetric_pareto(2.0, 1.5), 10000, key)
    assert np.all(np.abs(par) >= 1.5)
    assert np.all(np.isfinite(sample_block(NoiseSpec.student_t(1.0), 100000, key)))


@pytest.mark.parametrize(
    "spec",
    [
        NoiseSpec.standard_normal(),
        NoiseSpec.rademacher(),
        NoiseSpec.uniform(1.5),
        NoiseSpec.student_t(5.0),
        NoiseSpec.symmetric_pareto(3.0, 1.0),
    ],
    ids=lambda s: s.family,
)
def test_symmetry_of_sample_mean(spec):
    # families above all have a finite mean (= 0)
    x = sample_block(spec, 1_000_000, StreamKey(2024, "symmetry"))
    se = x.std(ddof=1) / math.sqrt(x.size)
    assert abs(x.mean()) <= 4.0 * se


MOMENT_AGREEMENT = [
    (NoiseSpec.standard_normal(), 1.0),
    (NoiseSpec.standard_normal(), 2.0),
    (NoiseSpec.standard_normal(), 4.0),
    (NoiseSpec.rademacher(), 2.0),
    (NoiseSpec.uniform(1.5), 3.0),
    (NoiseSpec.student_t(5.0), 2.0),
    (NoiseSpec.symmetric_pareto(3.0, 1.0), 1.0),
]


@pytest.mark.parametrize("spec,r", MOMENT_AGREEMENT, ids=str)
def test_sample_moments_match_analytic(spec, r):
    # parameter choices keep |theta|^r with finite variance, so the
    # sample standard error is a meaningful yardstick
    x = np.abs(sample_block(spec, 1_000_000, StreamKey(77, "moments"))) ** r
    se = x.std(ddof=1) / math.sqrt(x.size)
    want = absolute_moment(spec, r).value
    assert abs(x.mean() - want) <= 5.0 * max(se, 1e-12)


def test_rademacher_mean_window():
    x = sample_block(NoiseSpec.rademacher(), 1_000_000, StreamKey(1, "window"))
    assert -0.004 <= x.mean() <= 0.004


def test_normal_second_moment_window():
    x = sample_block(NoiseSpec.standard_normal(), 1_000_000, StreamKey(1, "window"))
    assert 0.995 <= np.mean(x * x) <= 1.005

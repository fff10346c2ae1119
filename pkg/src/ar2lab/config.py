"""Line-oriented experiment configs.

Format: one `key = value` per line, `#` starts a comment, blank lines
ignored.  Recognized keys:

    a, b            recursion coefficients (must be stable)
    p, r, epsilon   series exponents and threshold
    noise.family    normal | rademacher | uniform | student_t | pareto
    noise.param1    half_width (uniform), dof (student_t), alpha (pareto)
    noise.param2    x_min (pareto)
    grid_max        largest n evaluated            [default 128]
    replications    Monte Carlo replications per n [default 100000]
    seed            64-bit unsigned master seed    [default 1]
    output          prefix for result files        [default "results"]

Unknown or duplicate keys are parse errors; values that break a
documented invariant are validation errors naming the condition.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParameters, NonFiniteInput, ParseError, ValidationError
from .estimate import SeriesParams
from .noise import NoiseFamily, NoiseSpec
from .recurrence import ARCoefficients, Stability

_DEFAULTS = {"grid_max": 128, "replications": 100000, "seed": 1, "output": "results"}

_REQUIRED = ("a", "b", "p", "r", "epsilon", "noise.family")

_KEYS = _REQUIRED + ("noise.param1", "noise.param2", "grid_max", "replications", "seed", "output")

# How many parameters each family consumes from noise.param1/param2.
_PARAM_COUNT = {
    NoiseFamily.STANDARD_NORMAL: 0,
    NoiseFamily.RADEMACHER: 0,
    NoiseFamily.UNIFORM: 1,
    NoiseFamily.STUDENT_T: 1,
    NoiseFamily.SYMMETRIC_PARETO: 2,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated inputs for one full series run."""

    coeffs: ARCoefficients
    noise: NoiseSpec
    params: SeriesParams
    grid_max: int
    replications: int
    master_seed: int
    output_path: str


def _parse_float(key: str, raw: str, line: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"key {key!r} needs a number, got {raw!r}", line) from None


def _parse_int(key: str, raw: str, line: int) -> int:
    try:
        return int(raw, 10)
    except ValueError:
        raise ParseError(f"key {key!r} needs an integer, got {raw!r}", line) from None


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse and validate config text; see the module docstring."""
    raw: dict = {}
    lines: dict = {}
    for lineno, full_line in enumerate(text.splitlines(), start=1):
        line = full_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {full_line.strip()!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KEYS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in raw:
            raise ParseError(f"duplicate key {key!r} (first set on line {lines[key]})", lineno)
        if not value:
            raise ParseError(f"key {key!r} has no value", lineno)
        raw[key] = value
        lines[key] = lineno

    for key in _REQUIRED:
        if key not in raw:
            raise ValidationError(f"missing required key {key!r}")

    a = _parse_float("a", raw["a"], lines["a"])
    b = _parse_float("b", raw["b"], lines["b"])
    p = _parse_float("p", raw["p"], lines["p"])
    r = _parse_float("r", raw["r"], lines["r"])
    epsilon = _parse_float("epsilon", raw["epsilon"], lines["epsilon"])
    grid_max = _parse_int("grid_max", raw["grid_max"], lines["grid_max"]) if "grid_max" in raw else _DEFAULTS["grid_max"]
    replications = (
        _parse_int("replications", raw["replications"], lines["replications"])
        if "replications" in raw
        else _DEFAULTS["replications"]
    )
    seed = _parse_int("seed", raw["seed"], lines["seed"]) if "seed" in raw else _DEFAULTS["seed"]
    output = raw.get("output", _DEFAULTS["output"])

    family = raw["noise.family"]
    if family not in _PARAM_COUNT:
        raise ValidationError(
            f"noise.family must be one of {sorted(_PARAM_COUNT)}, got {family!r}"
        )
    want = _PARAM_COUNT[family]
    given = [
        _parse_float(key, raw[key], lines[key])
        for key in ("noise.param1", "noise.param2")
        if key in raw
    ]
    if len(given) != want:
        raise ValidationError(
            f"noise.family {family!r} takes exactly {want} parameter(s), got {len(given)}"
        )

    try:
        coeffs = ARCoefficients(a, b)
        noise = NoiseSpec(family, tuple(given))
        params = SeriesParams(p=p, r=r, epsilon=epsilon)
    except (InvalidParameters, NonFiniteInput) as exc:
        raise ValidationError(str(exc)) from None

    if coeffs.stability is not Stability.STABLE:
        raise ValidationError(
            f"coefficients must satisfy -1 < b < 1 - |a|, got a={coeffs.a}, b={coeffs.b}"
        )
    if grid_max < 1:
        raise ValidationError(f"grid_max must be >= 1, got {grid_max}")
    if replications < 100:
        raise ValidationError(f"replications must be >= 100, got {replications}")
    if not 0 <= seed <= 2 ** 64 - 1:
        raise ValidationError(f"seed must fit in 64 unsigned bits, got {seed}")
    if not output:
        raise ValidationError("output must be a non-empty path prefix")

    return ExperimentConfig(
        coeffs=coeffs,
        noise=noise,
        params=params,
        grid_max=grid_max,
        replications=replications,
        master_seed=seed,
        output_path=output,
    )


def parse_config(path) -> ExperimentConfig:
    """Read a config file (UTF-8) and parse it."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def render_config(config: ExperimentConfig) -> str:
    """Write a config back out; parse_config_text inverts this exactly."""
    fmt = lambda x: format(x, ".17g")
    out = [
        f"a = {fmt(config.coeffs.a)}",
        f"b = {fmt(config.coeffs.b)}",
        f"p = {fmt(config.params.p)}",
        f"r = {fmt(config.params.r)}",
        f"epsilon = {fmt(config.params.epsilon)}",
        f"noise.family = {config.noise.family}",
    ]
    for i, value in enumerate(config.noise.params, start=1):
        out.append(f"noise.param{i} = {fmt(value)}")
    out.append(f"grid_max = {config.grid_max}")
    out.append(f"replications = {config.replications}")
    out.append(f"seed = {config.master_seed}")
    out.append(f"output = {config.output_path}")
    return "\n".join(out) + "\n"

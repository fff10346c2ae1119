"""Command-line front end.

    ar2lab spectrum  --config cfg   roots, radius, envelope constants
    ar2lab weights   --config cfg   weight table as CSV on stdout
    ar2lab simulate  --config cfg   sample paths -> <output>.paths.csv
    ar2lab series    --config cfg   full pipeline -> CSVs + summary
    ar2lab verify    --config cfg   internal consistency checks

Exit codes for `series`: 0 the partial sums stabilized, 2 the Monte
Carlo floor got in the way, 3 the sums kept growing, 1 any error.
All emitted files are deterministic for a fixed config and seed.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import estimate as est
from .config import ExperimentConfig, parse_config
from .errors import LabError
from .noise import NoiseSpec, StreamKey, absolute_moment, sample_block
from .recurrence import (
    ARCoefficients,
    bound_report,
    companion_power_column,
    companion_spectrum,
    weight_closed_form,
    weight_sequence,
)
from .simulate import representation_residual, simulate_path, weighted_sum

SELF_CHECK_PATHS = 10
RESIDUAL_TOL = 1e-9
MOMENT_GRID = (8, 16, 32, 64, 128, 256, 512, 1024)

_EXIT_CODE = {
    est.Verdict.STABILIZED: 0,
    est.Verdict.FLOOR_LIMITED: 2,
    est.Verdict.GROWING: 3,
}


def _f(x) -> str:
    """Render a float with 17 significant digits (round-trip safe)."""
    return format(float(x), ".17g")


def emit_series_csv(series: est.SeriesEstimate, path) -> None:
    """Write one row per grid point; schema is fixed and documented."""
    rows = ["n,p_hat,ci_low,ci_high,term,partial_sum,partial_sum_ci_high,at_floor"]
    for i, tail in enumerate(series.tails):
        rows.append(
            ",".join(
                [
                    str(tail.n),
                    _f(tail.p_hat),
                    _f(tail.ci_low),
                    _f(tail.ci_high),
                    _f(series.terms[i]),
                    _f(series.partial_sums[i]),
                    _f(series.partial_sum_ci_high[i]),
                    "true" if tail.at_floor else "false",
                ]
            )
        )
    _write_text(path, "\n".join(rows) + "\n")


def emit_spectrum_csv(config: ExperimentConfig, spectrum, report, path) -> None:
    header = (
        "a,b,stability,lambda1_re,lambda1_im,lambda2_re,lambda2_im,"
        "rho,mu,discriminant,L_star,cum_limit,koval_ratio_min,koval_ratio_max,horizon_used"
    )
    row = ",".join(
        [
            _f(config.coeffs.a),
            _f(config.coeffs.b),
            config.coeffs.stability.value,
            _f(spectrum.lambda1.real),
            _f(spectrum.lambda1.imag),
            _f(spectrum.lambda2.real),
            _f(spectrum.lambda2.imag),
            _f(spectrum.rho),
            str(spectrum.mu),
            _f(spectrum.discriminant),
            _f(report.L_star),
            _f(report.cum_limit),
            _f(report.koval_ratio_min),
            _f(report.koval_ratio_max),
            str(report.horizon_used),
        ]
    )
    _write_text(path, header + "\n" + row + "\n")


def _write_text(path, text: str) -> None:
    # LF endings and UTF-8 regardless of platform.
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _self_check(config: ExperimentConfig) -> float:
    """Max dual-representation residual over probe paths."""
    worst = 0.0
    n = config.grid_max
    for i in range(SELF_CHECK_PATHS):
        theta = sample_block(config.noise, n, StreamKey(config.master_seed, "probe", n=n, block=i))
        worst = max(worst, representation_residual(config.coeffs, theta))
    return worst


def _bound_horizon(grid_max: int) -> int:
    return max(200, min(int(grid_max), 10000))


def run(config: ExperimentConfig) -> int:
    """Full pipeline; returns the process exit code.

    Order: stability gate, spectrum + envelope report, representation
    self-check, tail series over the default grid, moment-growth check
    (skipped when E|theta|^r diverges), then CSVs and a text summary.
    """
    # parse_config already rejects unstable pairs; re-check for
    # programmatic callers.
    if config.coeffs.stability.value != "Stable":
        raise LabError(
            f"coefficients must satisfy -1 < b < 1 - |a|, got a={config.coeffs.a}, b={config.coeffs.b}"
        )
    spectrum = companion_spectrum(config.coeffs)
    report = bound_report(config.coeffs, _bound_horizon(config.grid_max))
    emit_spectrum_csv(config, spectrum, report, config.output_path + ".spectrum.csv")

    residual = _self_check(config)
    if not residual <= RESIDUAL_TOL:
        raise LabError(
            f"representation self-check failed: residual {residual:.3e} > {RESIDUAL_TOL:.0e}"
        )

    series = est.partial_series(
        config.coeffs,
        config.noise,
        config.params,
        est.default_grid(config.grid_max),
        config.replications,
        config.master_seed,
    )
    emit_series_csv(series, config.output_path + ".series.csv")

    moment = None
    if absolute_moment(config.noise, config.params.r).is_finite:
        moment = est.moment_growth_check(
            config.coeffs,
            config.noise,
            config.params.r,
            MOMENT_GRID,
            config.replications,
            config.master_seed,
        )

    _write_text(config.output_path + ".summary.txt", _summary_text(config, spectrum, report, residual, series, moment))
    return _EXIT_CODE[series.verdict]


def _summary_text(config, spectrum, report, residual, series, moment) -> str:
    lines = [
        "series run summary",
        f"coefficients: a = {_f(config.coeffs.a)}, b = {_f(config.coeffs.b)} ({config.coeffs.stability.value})",
        f"series: p = {_f(config.params.p)}, r = {_f(config.params.r)}, epsilon = {_f(config.params.epsilon)}",
        "noise: "
        + config.noise.family
        + ("" if not config.noise.params else " (" + ", ".join(_f(p) for p in config.noise.params) + ")"),
        f"replications per n: {config.replications}",
        f"master seed: {config.master_seed}",
        f"spectral radius rho = {_f(spectrum.rho)}, multiplicity mu = {spectrum.mu}",
        f"cumulative weight bound L_star = {_f(report.L_star)}, limit {_f(report.cum_limit)}",
        f"envelope ratio range [{_f(report.koval_ratio_min)}, {_f(report.koval_ratio_max)}]"
        f" over s <= {report.horizon_used}",
        f"representation residual (max over {SELF_CHECK_PATHS} probes): {_f(residual)}",
        f"grid: {len(series.grid)} points, n = {series.grid[0]}..{series.grid[-1]}",
        f"partial sum: {_f(series.partial_sums[-1])}",
        f"partial sum CI-upper: {_f(series.partial_sum_ci_high[-1])}",
        f"terms at Monte Carlo floor: {sum(t.at_floor for t in series.tails)} of {len(series.tails)}",
        f"verdict: {series.verdict.value}",
    ]
    if moment is None:
        lines.append(
            f"moment growth: skipped (E|theta|^{_f(config.params.r)} diverges)"
        )
    else:
        lines.append(
            f"moment growth: slope {_f(moment.slope)} vs bound {_f(moment.bound)}"
            f" over n = {moment.n_grid[0]}..{moment.n_grid[-1]}"
        )
    return "\n".join(lines) + "\n"


def _cmd_spectrum(config: ExperimentConfig) -> int:
    spectrum = companion_spectrum(config.coeffs)
    report = bound_report(config.coeffs, _bound_horizon(config.grid_max))
    print(f"a = {_f(config.coeffs.a)}")
    print(f"b = {_f(config.coeffs.b)}")
    print(f"stability = {config.coeffs.stability.value}")
    print(f"lambda1 = {spectrum.lambda1}")
    print(f"lambda2 = {spectrum.lambda2}")
    print(f"rho = {_f(spectrum.rho)}")
    print(f"mu = {spectrum.mu}")
    print(f"discriminant = {_f(spectrum.discriminant)}")
    print(f"L_star = {_f(report.L_star)}")
    print(f"cum_limit = {_f(report.cum_limit)}")
    print(f"koval_ratio_min = {_f(report.koval_ratio_min)}")
    print(f"koval_ratio_max = {_f(report.koval_ratio_max)}")
    print(f"horizon_used = {report.horizon_used}")
    return 0


def _cmd_weights(config: ExperimentConfig) -> int:
    table = weight_sequence(config.coeffs, config.grid_max)
    print("j,u,cum")
    for j in range(table.horizon + 1):
        print(f"{j},{_f(table.u[j])},{_f(table.cum[j])}")
    return 0


def _cmd_simulate(config: ExperimentConfig) -> int:
    n = config.grid_max
    rows = ["path,k,theta,xi"]
    for i in range(SELF_CHECK_PATHS):
        theta = sample_block(config.noise, n, StreamKey(config.master_seed, "path", n=n, block=i))
        path = simulate_path(config.coeffs, theta)
        for k in range(n):
            rows.append(f"{i},{k + 1},{_f(path.theta[k])},{_f(path.xi[k])}")
    out = config.output_path + ".paths.csv"
    _write_text(out, "\n".join(rows) + "\n")
    print(f"wrote {SELF_CHECK_PATHS} paths of length {n} to {out}")
    return 0


def _cmd_verify(config: ExperimentConfig) -> int:
    """Fast invariant battery; prints one line per check."""
    failures = 0

    def check(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        tag = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail else ""
        print(f"[{tag}] {name}{suffix}")
        if not ok:
            failures += 1

    coeffs = config.coeffs
    spectrum = companion_spectrum(coeffs)
    horizon = 400
    table = weight_sequence(coeffs, horizon)

    # roots solve z^2 - a z - b = 0
    lam_sum = spectrum.lambda1 + spectrum.lambda2
    lam_prod = spectrum.lambda1 * spectrum.lambda2
    check(
        "characteristic roots",
        abs(lam_sum - coeffs.a) <= 1e-12 * max(1.0, abs(coeffs.a))
        and abs(lam_prod + coeffs.b) <= 1e-12 * max(1.0, abs(coeffs.b)),
        f"sum={lam_sum}, prod={lam_prod}",
    )

    # closed form vs recurrence vs matrix power
    worst = 0.0
    for s in range(1, 201):
        ref = table.u[s]
        closed = weight_closed_form(spectrum, s)
        mat, mat_prev = companion_power_column(coeffs, s)
        scale = max(1.0, abs(ref))
        worst = max(worst, abs(closed - ref) / scale, abs(mat - ref) / scale,
                    abs(mat_prev - table.u[s - 1]) / max(1.0, abs(table.u[s - 1])))
    check("weight routes agree (s <= 200)", worst <= 1e-8, f"max rel err {worst:.2e}")

    # cumulative limit
    limit = 1.0 / (1.0 - coeffs.a - coeffs.b)
    gap = abs(table.cum[horizon] - limit)
    check("cumulative weights approach 1/(1-a-b)", gap <= 1e-6, f"gap {gap:.2e}")

    # dual representation on probe paths
    residual = _self_check(config)
    check("dual representation residual", residual <= RESIDUAL_TOL, f"max {residual:.2e}")

    # sampling determinism
    key = StreamKey(config.master_seed, "verify", n=64, block=0)
    one = sample_block(config.noise, 64, key)
    two = sample_block(config.noise, 64, key)
    check("sampling is key-deterministic", bool(np.array_equal(one, two)))

    # tail estimate determinism on a small case
    params = config.params
    t1 = est.tail_probability(coeffs, config.noise, params, 8, 500, StreamKey(config.master_seed, "tail", n=8))
    t2 = est.tail_probability(coeffs, config.noise, params, 8, 500, StreamKey(config.master_seed, "tail", n=8))
    check("tail estimate is reproducible", t1 == t2)

    print(f"{'all checks passed' if failures == 0 else f'{failures} check(s) failed'}")
    return 0 if failures == 0 else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ar2lab",
        description="Estimate weighted tail series for 2nd-order autoregressive partial sums.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("spectrum", "print roots, spectral radius, and envelope constants"),
        ("weights", "dump the weight table as CSV on stdout"),
        ("simulate", "write sample paths to <output>.paths.csv"),
        ("series", "run the full estimation pipeline"),
        ("verify", "run the internal consistency checks"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="path to the config file")
        cmd.add_argument("--seed", type=int, default=None, help="override the master seed")
        cmd.add_argument("--replications", type=int, default=None, help="override replications per n")
        cmd.add_argument("--out", default=None, help="override the output path prefix")
    return parser


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "weights": _cmd_weights,
    "simulate": _cmd_simulate,
    "series": run,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = parse_config(args.config)
        if args.seed is not None or args.replications is not None or args.out is not None:
            from dataclasses import replace

            config = replace(
                config,
                master_seed=config.master_seed if args.seed is None else args.seed,
                replications=config.replications if args.replications is None else args.replications,
                output_path=config.output_path if args.out is None else args.out,
            )
            if config.replications < 100:
                raise LabError(f"replications must be >= 100, got {config.replications}")
            if not 0 <= config.master_seed <= 2 ** 64 - 1:
                raise LabError(f"seed must fit in 64 unsigned bits, got {config.master_seed}")
        return _COMMANDS[args.command](config)
    except LabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

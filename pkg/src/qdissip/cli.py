"""Command-line interface.

Subcommands:
  run <config.json>        execute one scenario, write CSV/JSON output
  verify [--suite ...]     run the differential verification suite
  figure <fig-id> [--out]  emit plot-ready CSV plus a rendered PNG

Exit codes: 0 success, 1 verification failure, 2 config error,
3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from .coupling import (
    ConstantProfile,
    ExponentialProfile,
    LindbladMatchedProfile,
    thermalized_exponential,
)
from .numerics import TruncationError
from .oscillator import BathSpec, OscillatorScenario
from .plotting import FIGURE_IDS, figure_series, render_figure
from .twobath import TwoBathScenario
from .twolevel import (
    DephasingScenario,
    QubitBathSpec,
    TwoLevelState,
    evolved_trace_distance,
    markov_rate,
    reduced_qubit,
)
from .verify import run_suite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3


class ConfigError(ValueError):
    pass


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _format_csv(columns, rows):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(f"{float(v):.17g}" for v in row))
    return "\n".join(lines) + "\n"


def _format_json_series(columns, rows):
    return json.dumps(
        {"columns": list(columns), "rows": [[float(v) for v in row] for row in rows]},
        sort_keys=True,
        indent=2,
    ) + "\n"


def _write_series(columns, rows, output):
    fmt = output.get("format", "csv")
    path = output["path"]
    if fmt == "csv":
        _atomic_write(path, _format_csv(columns, rows))
    elif fmt == "json":
        _atomic_write(path, _format_json_series(columns, rows))
    else:
        raise ConfigError(f"unknown output format {fmt!r}")


def _require_keys(params, allowed, model):
    unknown = set(params) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown parameter(s) for model {model!r}: {sorted(unknown)}")


def _tau_grid(params):
    tau_max = float(params.get("tau_max", 5.0))
    tau_step = float(params.get("tau_step", 0.01))
    if tau_max <= 0 or tau_step <= 0:
        raise ConfigError("tau_max and tau_step must be > 0")
    n = int(round(tau_max / tau_step))
    return np.arange(0, n + 1) * tau_step


def _parse_beta(value):
    if value in ("inf", "infinity", None):
        return math.inf
    return float(value)


def _profile_from_params(params, gamma, default="thermalized_exponential",
                         mode="single"):
    kind = params.get("profile", default)
    if kind == "thermalized_exponential":
        return thermalized_exponential(gamma, mode=mode)
    if kind == "lindblad_matched":
        return LindbladMatchedProfile(gamma=gamma)
    if kind == "constant":
        return ConstantProfile(g0=float(params.get("g0", gamma)))
    raise ConfigError(f"unknown profile kind {kind!r}")


def _run_oscillator(params):
    allowed = {
        "gamma_over_omega0", "profile", "g0", "nbar_a", "nbar_b", "beta_omega",
        "alpha0_re", "alpha0_im", "tau_max", "tau_step",
    }
    _require_keys(params, allowed, "oscillator")
    omega0 = 1.0
    gamma = float(params.get("gamma_over_omega0", 0.2)) * omega0
    profile = _profile_from_params(params, gamma)
    if "beta_omega" in params:
        bath = BathSpec.from_beta(_parse_beta(params["beta_omega"]), omega0)
    else:
        bath = BathSpec.from_nbar(float(params.get("nbar_b", 0.0)), omega0)
    alpha0 = complex(float(params.get("alpha0_re", 2.0)), float(params.get("alpha0_im", 0.0)))
    scen = OscillatorScenario(
        omega0=omega0, profile=profile, bath=bath,
        nbar_a=float(params.get("nbar_a", 0.0)), alpha0=alpha0,
    )
    x0 = math.sqrt(2.0 / (scen.mass * omega0))
    columns = ["tau", "cos2G", "x_over_x0", "energy_over_omega0",
               "re_alpha", "im_alpha", "mean_occupation"]
    rows = []
    for tau in _tau_grid(params):
        t = tau / gamma
        f, _ = scen.fh(t)
        peak = scen.husimi_peak(t)
        rows.append((
            tau, abs(f) ** 2, scen.position(t) / x0, scen.energy(t) / omega0,
            peak.real, peak.imag, scen.mean_occupation(t),
        ))
    return columns, rows


def _run_twobath(params):
    allowed = {"gamma_over_omega", "beta1_omega", "beta2_omega",
               "initial_occupation", "tau_max", "tau_step"}
    _require_keys(params, allowed, "twobath")
    omega = 1.0
    gamma = float(params.get("gamma_over_omega", 0.2)) * omega
    scen = TwoBathScenario(
        omega=omega,
        profile=thermalized_exponential(gamma, mode="two_bath"),
        bath1=BathSpec.from_beta(_parse_beta(params.get("beta1_omega", 1.0)), omega),
        bath2=BathSpec.from_beta(_parse_beta(params.get("beta2_omega", 2.0)), omega),
        initial_occupation=float(params.get("initial_occupation", 0.0)),
    )
    columns = ["tau", "energy_over_omega"]
    rows = [(tau, scen.energy(tau / gamma) / omega) for tau in _tau_grid(params)]
    return columns, rows


def _parse_state(params, prefix=""):
    a = float(params.get(prefix + "a", 1.0))
    c = complex(float(params.get(prefix + "c_re", 0.0)),
                float(params.get(prefix + "c_im", 0.0)))
    return TwoLevelState(a=a, b=1.0 - a, c=c)


def _run_twolevel(params):
    allowed = {"gamma_over_omega0", "profile", "g0", "a", "c_re", "c_im",
               "p_e", "tau_max", "tau_step"}
    _require_keys(params, allowed, "twolevel")
    omega0 = 1.0
    gamma = float(params.get("gamma_over_omega0", 0.2)) * omega0
    profile = _profile_from_params(params, gamma)
    initial = _parse_state(params)
    bath = QubitBathSpec(p_e=float(params.get("p_e", 0.0)),
                         p_g=1.0 - float(params.get("p_e", 0.0)))
    columns = ["tau", "rho_ee", "coherence_abs"]
    rows = []
    for tau in _tau_grid(params):
        state = reduced_qubit(initial, bath, omega0, profile, tau / gamma)
        rows.append((tau, state.a, abs(state.c)))
    return columns, rows


def _run_dephasing(params):
    allowed = {"gamma_over_omega", "g0_over_omega", "beta_omega",
               "omega0_over_omega", "tau_max", "tau_step"}
    _require_keys(params, allowed, "dephasing")
    omega = 1.0
    gamma = float(params.get("gamma_over_omega", 0.2)) * omega
    scen = DephasingScenario(
        omega0=float(params.get("omega0_over_omega", 1.0)) * omega,
        omega=omega,
        profile=ExponentialProfile(g0=float(params.get("g0_over_omega", 1.0)) * omega,
                                   gamma=gamma),
        beta=_parse_beta(params.get("beta_omega", "inf")),
    )
    columns = ["tau", "coherence_norm2"]
    rows = [(tau, scen.coherence_factor(tau / gamma) ** 2) for tau in _tau_grid(params)]
    return columns, rows


def _run_markovianity(params):
    allowed = {"gamma_over_omega0", "profile", "g0", "p_e",
               "a", "c_re", "c_im", "a2", "c2_re", "c2_im",
               "tau_max", "tau_step"}
    _require_keys(params, allowed, "markovianity")
    omega0 = 1.0
    gamma = float(params.get("gamma_over_omega0", 0.2)) * omega0
    profile = _profile_from_params(params, gamma)
    s1 = _parse_state(params)
    s2 = TwoLevelState(
        a=float(params.get("a2", 0.0)), b=1.0 - float(params.get("a2", 0.0)),
        c=complex(float(params.get("c2_re", 0.0)), float(params.get("c2_im", 0.0))),
    )
    bath = QubitBathSpec(p_e=float(params.get("p_e", 0.0)),
                         p_g=1.0 - float(params.get("p_e", 0.0)))
    columns = ["tau", "trace_distance", "sigma_over_gamma"]
    rows = []
    for tau in _tau_grid(params):
        t = tau / gamma
        d = evolved_trace_distance(s1, s2, bath, omega0, profile, t)
        try:
            sig = markov_rate(s1, s2, bath, omega0, profile, t)
        except ValueError:
            sig = 0.0  # singular g at the origin for the Lindblad-matched kind
        rows.append((tau, d, sig / gamma))
    return columns, rows


_RUNNERS = {
    "oscillator": _run_oscillator,
    "twobath": _run_twobath,
    "twolevel": _run_twolevel,
    "dephasing": _run_dephasing,
    "markovianity": _run_markovianity,
}


def _cmd_run(args):
    try:
        with open(args.config) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    try:
        model = config.get("model")
        params = config.get("parameters", {})
        output = config.get("output")
        extra = set(config) - {"model", "parameters", "output"}
        if extra:
            raise ConfigError(f"unknown top-level key(s): {sorted(extra)}")
        if model == "verify":
            suite = params.get("suite", "default")
            report = run_suite(suite)
            if output:
                _atomic_write(output["path"],
                              json.dumps(report, sort_keys=True, indent=2) + "\n")
            return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED
        if model not in _RUNNERS:
            raise ConfigError(f"unknown model {model!r}")
        if not output or "path" not in output:
            raise ConfigError("output.path is required")
        columns, rows = _RUNNERS[model](params)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (TruncationError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_ERROR
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    try:
        _write_series(columns, rows, output)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    return EXIT_OK


def _cmd_verify(args):
    try:
        report = run_suite(args.suite)
    except TruncationError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_ERROR
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.report:
        _atomic_write(args.report, text)
    for rec in report["records"]:
        status = "PASS" if rec["passed"] else "FAIL"
        print(f"{status} {rec['scenario']} {rec['quantity']}"
              f" abs_err={rec['abs_err']:.3e} tol={rec['tolerance']:.1e}")
    print(f"{report['n_checks'] - report['n_failed']}/{report['n_checks']} checks passed")
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


def _cmd_figure(args):
    try:
        columns, rows = figure_series(args.figure_id)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, f"{args.figure_id}.csv")
    png_path = os.path.join(args.out, f"{args.figure_id}.png")
    _atomic_write(csv_path, _format_csv(columns, rows))
    render_figure(args.figure_id, columns, rows, png_path)
    print(f"wrote {csv_path} and {png_path}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qdissip",
        description="Open-system dynamics through time-dependent couplings,"
                    " with differential verification against brute-force backends.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario from a JSON config")
    p_run.add_argument("config", help="path to the scenario config (JSON)")
    p_run.set_defaults(func=_cmd_run)

    p_verify = sub.add_parser("verify", help="run the differential verification suite")
    p_verify.add_argument("--suite", choices=("default", "fast"), default="default")
    p_verify.add_argument("--report", help="write the JSON report to this path")
    p_verify.set_defaults(func=_cmd_verify)

    p_fig = sub.add_parser("figure", help="emit figure data (CSV) and a rendered PNG")
    p_fig.add_argument("figure_id", choices=FIGURE_IDS)
    p_fig.add_argument("--out", default=".", help="output directory")
    p_fig.set_defaults(func=_cmd_figure)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

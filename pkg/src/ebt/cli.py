"""Command line: analyze, simulate, sweep, and theorem verification.

Configs are single JSON objects; kind-specific fields sit at the top level
under the same names as the library types.  Exit codes: 0 success, 1
property violation (verify-theorems found a counterexample), 2 usage or
config error.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import os
import re
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import core, montecarlo, scenarios, verify
from .pointer import InvalidParameters, parse_distribution
from .rng import RandomStream
from .scenarios import UniformParameters

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2

ENV_SEED = "EBT_DEFAULT_SEED"

KINDS = ("abstract_trial", "envelope", "railroad", "willoughby", "coin_bag")
FORMATS = ("json", "csv", "text")

SWEEP_COLUMNS = ("param", "value", "p", "analytic_psp", "empirical_psp", "ci_low", "ci_high")


class ConfigError(Exception):
    """Invalid configuration; the message names the offending field."""


@dataclass
class SimulationSettings:
    n: int = 100_000
    seed: int | None = None
    partition_size: int = montecarlo.DEFAULT_PARTITION_SIZE


@dataclass
class OutputSettings:
    format: str = "text"
    path: str | None = None


@dataclass
class SweepSettings:
    param: str = ""
    values: list = field(default_factory=list)
    simulate: bool = False


@dataclass
class ExperimentConfig:
    kind: str
    params: dict
    simulation: SimulationSettings = field(default_factory=SimulationSettings)
    output: OutputSettings = field(default_factory=OutputSettings)
    sweep: SweepSettings | None = None

    def to_dict(self) -> dict:
        doc = {"kind": self.kind, **self.params, "simulation": asdict(self.simulation),
               "output": asdict(self.output)}
        if self.sweep is not None:
            doc["sweep"] = asdict(self.sweep)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        doc = dict(doc)
        kind = doc.pop("kind", None)
        if kind not in KINDS:
            raise ConfigError(f"kind: expected one of {KINDS}, got {kind!r}")
        simulation = _parse_simulation(doc.pop("simulation", {}))
        output = _parse_output(doc.pop("output", {}))
        sweep_doc = doc.pop("sweep", None)
        sweep = _parse_sweep(sweep_doc) if sweep_doc is not None else None
        return cls(kind=kind, params=doc, simulation=simulation, output=output, sweep=sweep)


def _expect_int(doc: dict, key: str, where: str, default, minimum=None, optional=False):
    value = doc.get(key, default)
    if value is None and optional:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}.{key}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where}.{key}: must be >= {minimum}, got {value}")
    return value


def _parse_simulation(doc) -> SimulationSettings:
    if not isinstance(doc, dict):
        raise ConfigError("simulation: expected an object")
    unknown = set(doc) - {"n", "seed", "partition_size"}
    if unknown:
        raise ConfigError(f"simulation: unknown fields {sorted(unknown)}")
    return SimulationSettings(
        n=_expect_int(doc, "n", "simulation", SimulationSettings.n, minimum=1),
        seed=_expect_int(doc, "seed", "simulation", None, minimum=0, optional=True),
        partition_size=_expect_int(
            doc, "partition_size", "simulation", SimulationSettings.partition_size, minimum=1
        ),
    )


def _parse_output(doc) -> OutputSettings:
    if not isinstance(doc, dict):
        raise ConfigError("output: expected an object")
    unknown = set(doc) - {"format", "path"}
    if unknown:
        raise ConfigError(f"output: unknown fields {sorted(unknown)}")
    fmt = doc.get("format", "text")
    if fmt not in FORMATS:
        raise ConfigError(f"output.format: expected one of {FORMATS}, got {fmt!r}")
    path = doc.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError(f"output.path: expected a string, got {path!r}")
    return OutputSettings(format=fmt, path=path)


def _parse_sweep(doc) -> SweepSettings:
    if not isinstance(doc, dict):
        raise ConfigError("sweep: expected an object")
    unknown = set(doc) - {"param", "values", "simulate"}
    if unknown:
        raise ConfigError(f"sweep: unknown fields {sorted(unknown)}")
    param = doc.get("param")
    if not isinstance(param, str) or not param:
        raise ConfigError(f"sweep.param: expected a non-empty string, got {param!r}")
    values = doc.get("values")
    if not isinstance(values, list) or not values:
        raise ConfigError("sweep.values: expected a non-empty list of numbers")
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"sweep.values[{i}]: expected a number, got {v!r}")
    simulate = doc.get("simulate", False)
    if not isinstance(simulate, bool):
        raise ConfigError(f"sweep.simulate: expected a boolean, got {simulate!r}")
    return SweepSettings(param=param, values=list(values), simulate=simulate)


def _parse_pointer(params: dict, where: str):
    text = params.get("pointer")
    if text is None:
        return {}
    if not isinstance(text, str):
        raise ConfigError(f"{where}.pointer: expected a spec string, got {text!r}")
    try:
        return {"pointer": parse_distribution(text)}
    except InvalidParameters as exc:
        raise ConfigError(f"{where}.pointer: {exc}") from None


def _parse_parameter_sampler(params: dict, where: str):
    text = params.get("parameter_sampler")
    if text is None:
        return {}
    if not isinstance(text, str):
        raise ConfigError(f"{where}.parameter_sampler: expected a spec string, got {text!r}")
    if text.startswith("uniform:"):
        try:
            low, high = (float(v) for v in text.removeprefix("uniform:").split(","))
            return {"parameter_sampler": UniformParameters(low, high)}
        except (ValueError, scenarios.InvalidScenario) as exc:
            raise ConfigError(f"{where}.parameter_sampler: {exc}") from None
    raise ConfigError(
        f"{where}.parameter_sampler: expected 'uniform:low,high', got {text!r}"
    )


_SCENARIO_FIELDS = {
    "envelope": ("small_amount", "large_amount", "pointer"),
    "railroad": ("s1_position", "s2_position", "r", "pointer"),
    "willoughby": ("west_station", "current_station", "east_station", "pointer"),
    "coin_bag": ("s1", "s2", "model", "parameter_sampler", "pointer"),
}

_SCENARIO_TYPES = {
    "envelope": scenarios.EnvelopeScenario,
    "railroad": scenarios.RailroadScenario,
    "willoughby": scenarios.WilloughbyScenario,
    "coin_bag": scenarios.CoinBagScenario,
}


def build_scenario(kind: str, params: dict):
    """Construct a scenario object from config fields, or raise ConfigError."""
    allowed = _SCENARIO_FIELDS[kind]
    unknown = set(params) - set(allowed)
    if unknown:
        raise ConfigError(f"{kind}: unknown fields {sorted(unknown)}")
    kwargs = {k: v for k, v in params.items() if k not in ("pointer", "parameter_sampler")}
    kwargs.update(_parse_pointer(params, kind))
    kwargs.update(_parse_parameter_sampler(params, kind))
    try:
        return _SCENARIO_TYPES[kind](**kwargs)
    except (scenarios.InvalidScenario, TypeError, ValueError) as exc:
        raise ConfigError(f"{kind}: {exc}") from None


def build_abstract(params: dict):
    """(TrialSpec, Strategy) from an abstract_trial config."""
    unknown = set(params) - {"outcomes", "y"}
    if unknown:
        raise ConfigError(f"abstract_trial: unknown fields {sorted(unknown)}")
    outcomes = params.get("outcomes")
    if not isinstance(outcomes, list):
        raise ConfigError("abstract_trial.outcomes: expected a list of [weight, success_prob] pairs")
    try:
        trial = core.validate_trial([tuple(pair) for pair in outcomes])
    except core.TrialValidationError as exc:
        raise ConfigError(f"abstract_trial: {exc}") from None
    y = params.get("y")
    if not isinstance(y, list):
        raise ConfigError("abstract_trial.y: expected a list of probabilities")
    try:
        strategy = core.Strategy(np.asarray(y, dtype=float))
    except (core.InvalidStrategy, ValueError) as exc:
        raise ConfigError(f"abstract_trial.y: {exc}") from None
    if strategy.n != trial.n:
        raise ConfigError(
            f"abstract_trial.y: {strategy.n} entries for {trial.n} outcomes"
        )
    return trial, strategy


def resolve_seed(cli_seed: int | None, config_seed: int | None) -> tuple[int, str]:
    """--seed, else config seed, else EBT_DEFAULT_SEED, else fresh OS entropy."""
    if cli_seed is not None:
        return cli_seed, "cli"
    if config_seed is not None:
        return config_seed, "config"
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"{ENV_SEED}: expected an integer, got {env!r}") from None
        if value < 0:
            raise ConfigError(f"{ENV_SEED}: seed must be non-negative, got {value}")
        return value, "env"
    return int(np.random.SeedSequence().entropy) % (2**63), "entropy"


# ---------------------------------------------------------------------------
# payload helpers
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        return format(value, ".15g")
    return str(value)


def _verdict_payload(v: montecarlo.TestVerdict) -> dict:
    return {
        "null_value": v.null_value,
        "alternative": v.alternative,
        "p_value": v.p_value,
        "reject_at": {format(alpha, "g"): flag for alpha, flag in v.reject_at.items()},
    }


def _result_payload(r: montecarlo.SimResult) -> dict:
    return asdict(r)


def compile_config(cfg: ExperimentConfig, seed: int):
    """(trial, strategy, context) for any kind; coin-bag realizations are seeded."""
    if cfg.kind == "abstract_trial":
        trial, strategy = build_abstract(cfg.params)
        return trial, strategy, {}
    scenario = build_scenario(cfg.kind, cfg.params)
    if cfg.kind == "coin_bag":
        realization = scenarios.realize_parameters(scenario, RandomStream(seed).substream(0))
        trial, strategy = scenarios.coin_bag_to_trial(scenario, realization)
        return trial, strategy, {
            "realization": {"coin1": realization[0], "coin2": realization[1]},
            "realization_seed": seed,
        }
    trial, strategy, _ = scenarios.scenario_to_trial(scenario)
    return trial, strategy, {}


def cmd_analyze(cfg: ExperimentConfig, seed: int) -> dict:
    trial, strategy, context = compile_config(cfg, seed)
    report = core.analyze(trial, strategy)
    best, best_psp = core.optimal_strategy(trial)
    return {
        "command": "analyze",
        "kind": cfg.kind,
        "seed": seed,
        "outcomes": trial.outcomes(),
        "y": [float(v) for v in core.Strategy.of(strategy).y],
        "p": report.p,
        "psp": report.psp,
        "edge": report.edge,
        "beats_chance": report.beats_chance,
        "premium_bound": report.premium_bound,
        "optimal_y": [float(v) for v in best.y],
        "max_psp": best_psp,
        **context,
    }


def cmd_simulate(cfg: ExperimentConfig, seed: int) -> dict:
    sim = cfg.simulation
    payload = {"command": "simulate", "kind": cfg.kind, "seed": seed}
    if cfg.kind == "abstract_trial":
        trial, strategy, _ = compile_config(cfg, seed)
        result = montecarlo.simulate_trial(
            trial, strategy, sim.n, seed, partition_size=sim.partition_size
        )
        p0 = core.success_probability(trial)
        payload["analytic_psp"] = core.analytic_psp(trial, strategy)
    elif cfg.kind == "coin_bag":
        scenario = build_scenario(cfg.kind, cfg.params)
        contrast = scenarios.coin_bag_contrast(
            scenario, sim.n, seed, partition_size=sim.partition_size
        )
        result = contrast.prediction
        p0 = 0.5
        payload["heads"] = contrast.heads
        payload["heads_frequency"] = contrast.heads_frequency
        payload["fairness_test"] = _verdict_payload(contrast.fairness_test)
    else:
        scenario = build_scenario(cfg.kind, cfg.params)
        result = scenarios.simulate_physical(
            scenario, sim.n, seed, partition_size=sim.partition_size
        )
        p0 = 0.5
        payload["analytic_psp"] = scenarios.analytic_scenario_psp(scenario)
    try:
        verdict = montecarlo.binomial_test_greater(result, p0)
    except montecarlo.InvalidNull as exc:
        raise ConfigError(f"simulate: cannot test against the chance level: {exc}") from None
    payload["result"] = _result_payload(result)
    payload["test"] = _verdict_payload(verdict)
    return payload


_PATH_PART = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)((?:\[\d+\])*)$")


def _set_param(doc: dict, path: str, value):
    """Assign into a nested config dict along 'field.sub[i]' style paths."""
    target = doc
    parts = path.split(".")
    for depth, part in enumerate(parts):
        match = _PATH_PART.match(part)
        if not match:
            raise ConfigError(f"sweep.param: cannot parse segment {part!r}")
        name, indices = match.group(1), re.findall(r"\[(\d+)\]", match.group(2))
        last = depth == len(parts) - 1
        try:
            if not indices:
                if last:
                    if name not in target:
                        raise KeyError(name)
                    target[name] = value
                else:
                    target = target[name]
                continue
            node = target[name]
            for idx in indices[:-1]:
                node = node[int(idx)]
            if last:
                node[int(indices[-1])] = value
            else:
                target = node[int(indices[-1])]
        except (KeyError, IndexError, TypeError):
            raise ConfigError(f"sweep.param: no field {path!r} in the config") from None


def cmd_sweep(cfg: ExperimentConfig, seed: int) -> dict:
    if cfg.sweep is None:
        raise ConfigError("sweep: missing sweep section in the config")
    base = cfg.to_dict()
    base.pop("sweep", None)
    rows = []
    for index, value in enumerate(cfg.sweep.values):
        doc = copy.deepcopy(base)
        try:
            _set_param(doc, cfg.sweep.param, value)
            swept = ExperimentConfig.from_dict(doc)
            trial, strategy, _ = compile_config(swept, seed)
        except ConfigError as exc:
            raise ConfigError(f"sweep value #{index} ({value!r}): {exc}") from None
        row = {
            "param": cfg.sweep.param,
            "value": value,
            "p": core.success_probability(trial),
            "analytic_psp": core.analytic_psp(trial, strategy),
            "empirical_psp": None,
            "ci_low": None,
            "ci_high": None,
        }
        if cfg.sweep.simulate:
            sim = swept.simulation
            if swept.kind == "abstract_trial":
                result = montecarlo.simulate_trial(
                    trial, strategy, sim.n, seed, partition_size=sim.partition_size
                )
            else:
                scenario = build_scenario(swept.kind, swept.params)
                result = scenarios.simulate_physical(
                    scenario, sim.n, seed, partition_size=sim.partition_size
                )
            row["empirical_psp"] = result.empirical_psp
            row["ci_low"] = result.ci_low
            row["ci_high"] = result.ci_high
        rows.append(row)
    return {"command": "sweep", "kind": cfg.kind, "seed": seed,
            "param": cfg.sweep.param, "rows": rows}


def cmd_verify_theorems(seed: int, instances: int) -> tuple[dict, int]:
    if instances < 1:
        raise ConfigError(f"instances: must be >= 1, got {instances}")
    reports = verify.run_all(seed, instances)
    payload = {
        "command": "verify-theorems",
        "seed": seed,
        "instances": instances,
        "suites": [
            {
                "name": r.name,
                "instances": r.instances,
                "violations": [str(c) for c in r.violations],
                "passed": r.passed,
            }
            for r in reports
        ],
        "all_passed": all(r.passed for r in reports),
    }
    return payload, EXIT_OK if payload["all_passed"] else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _flatten(prefix: str, value, row: dict):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, row)
    elif isinstance(value, (list, tuple)):
        row[prefix] = json.dumps(value)
    else:
        row[prefix] = _fmt(value)


def render_csv(payload: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if payload.get("command") == "sweep":
        writer.writerow(SWEEP_COLUMNS)
        for row in payload["rows"]:
            writer.writerow([_fmt(row[c]) for c in SWEEP_COLUMNS])
    else:
        row: dict = {}
        _flatten("", payload, row)
        writer.writerow(row.keys())
        writer.writerow(row.values())
    return buffer.getvalue()


def _railroad_text_table(cfg: ExperimentConfig) -> list[str]:
    sc = build_scenario("railroad", cfg.params)
    p, q = scenarios.railroad_tail_probs(sc)
    r = sc.r
    rows = [
        ("S1", "red", "east", 1.0 - p, 0.5 * r * (1.0 - p)),
        ("S1", "blue", "west", p, 0.5 * (1.0 - r) * p),
        ("S2", "red", "west", 1.0 - q, 0.5 * r * (1.0 - q)),
        ("S2", "blue", "east", q, 0.5 * (1.0 - r) * q),
    ]
    lines = ["station  spinner  direction  pointer-correct     combined"]
    for station, spinner, direction, correct, combined in rows:
        lines.append(
            f"{station:<8} {spinner:<8} {direction:<10} {_fmt(correct):<19} {_fmt(combined)}"
        )
    return lines


def _text_lines(prefix: str, value, lines: list[str]):
    if isinstance(value, dict):
        for k, v in value.items():
            _text_lines(f"{prefix}.{k}" if prefix else str(k), v, lines)
    elif isinstance(value, (list, tuple)) and value and isinstance(value[0], dict):
        for i, item in enumerate(value):
            _text_lines(f"{prefix}[{i}]", item, lines)
    elif isinstance(value, (list, tuple)):
        lines.append(f"{prefix:<28} {json.dumps(value)}")
    else:
        lines.append(f"{prefix:<28} {_fmt(value)}")


def render_text(payload: dict, cfg: ExperimentConfig | None = None) -> str:
    lines: list[str] = []
    if (
        cfg is not None
        and cfg.kind == "railroad"
        and payload.get("command") == "simulate"
    ):
        lines.extend(_railroad_text_table(cfg))
        lines.append("")
    if payload.get("command") == "sweep":
        lines.append("  ".join(SWEEP_COLUMNS))
        for row in payload["rows"]:
            lines.append("  ".join(_fmt(row[c]) for c in SWEEP_COLUMNS))
    else:
        _text_lines("", payload, lines)
    return "\n".join(lines) + "\n"


def render(payload: dict, fmt: str, cfg: ExperimentConfig | None = None) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        return render_csv(payload)
    return render_text(payload, cfg)


def emit(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _load_config(path: str | None) -> ExperimentConfig:
    if path is None:
        raise ConfigError("--config FILE is required for this command")
    try:
        with open(path, encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from None
    return ExperimentConfig.from_dict(doc)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ebt",
        description="Analyze and simulate pointer-predicted two-stage Bernoulli trials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("analyze", "closed-form report for a trial or scenario config"),
        ("simulate", "seeded simulation plus a better-than-null binomial test"),
        ("sweep", "closed-form (and optionally simulated) PSP across parameter values"),
        ("verify-theorems", "run the seeded theorem and identity fuzz suites"),
    ):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("--config", help="path to a JSON experiment config")
        cmd.add_argument("--seed", type=int, help="master seed (overrides the config)")
        cmd.add_argument("--out", help="write the report here instead of stdout")
        cmd.add_argument("--format", choices=FORMATS, help="output format (overrides the config)")
        if name == "verify-theorems":
            cmd.add_argument(
                "--instances", type=int, default=1000,
                help="instances per suite (default 1000)",
            )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify-theorems":
            seed, _ = resolve_seed(args.seed, None)
            payload, code = cmd_verify_theorems(seed, args.instances)
            fmt = args.format or "text"
            if fmt == "text":
                lines = []
                for suite in payload["suites"]:
                    status = "PASS" if suite["passed"] else "FAIL"
                    lines.append(
                        f"{suite['name']:<22} {suite['instances']:>6} instances  "
                        f"{len(suite['violations']):>3} violations  {status}"
                    )
                    lines.extend(f"  counterexample: {c}" for c in suite["violations"])
                lines.append(f"seed {seed}: "
                             + ("all suites passed" if payload["all_passed"] else "FAILURES found"))
                emit("\n".join(lines) + "\n", args.out)
            else:
                emit(render(payload, fmt), args.out)
            return code

        cfg = _load_config(args.config)
        if args.seed is not None and args.seed < 0:
            raise ConfigError(f"--seed: must be non-negative, got {args.seed}")
        seed, _ = resolve_seed(args.seed, cfg.simulation.seed)
        if args.command == "analyze":
            payload = cmd_analyze(cfg, seed)
        elif args.command == "simulate":
            payload = cmd_simulate(cfg, seed)
        else:
            payload = cmd_sweep(cfg, seed)
        fmt = args.format or cfg.output.format
        path = args.out or cfg.output.path
        emit(render(payload, fmt, cfg), path)
        return EXIT_OK
    except ConfigError as exc:
        print(f"ebt: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

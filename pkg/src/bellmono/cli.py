"""Command-line front end.

Commands: tensor, bell, monogamy, partition, curve, oracle.  Output is a
human-readable table on a terminal and JSON when redirected (override
with --format); floats are printed with 9 significant digits.  Exit
codes: 0 success, 1 bound-violation anomaly, 2 input error,
3 certification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import monogamy as mono
from .bell import OptBudget, SAMPLING_BUDGET, maximize_bell, lhv_bound_bruteforce
from .monogamy import check_state, greedy_clique_cover, named_scenario, required_terms
from .pauli import parse_label
from .qstate import correlation_components, haar_amplitudes, StateVector
from .scenarios import parse_state_spec, star_prediction, star_state, _parse_kv, _single

EXIT_OK = 0
EXIT_BOUND_ANOMALY = 1
EXIT_INPUT = 2
EXIT_CERTIFICATION = 3


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    grid_resolution: int = 24
    refinement_passes: int = 3
    samples: int = 1000
    tolerance: float = 1e-6
    output_format: str = "auto"

    def __post_init__(self):
        if self.grid_resolution < 2 or self.refinement_passes < 1 or self.samples < 1:
            raise ValueError("resolutions and sample counts must be positive")
        if not 0.0 < self.tolerance <= 1e-2:
            raise ValueError("tolerance must lie in (0, 1e-2]")

    def budget(self) -> OptBudget:
        return OptBudget(grid_resolution=self.grid_resolution,
                         refinement_passes=self.refinement_passes,
                         seed=self.seed)


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(data: dict, table_lines, cfg: RunConfig) -> None:
    fmt = cfg.output_format
    if fmt == "auto":
        fmt = "table" if sys.stdout.isatty() else "json"
    if fmt == "json":
        print(json.dumps(_round_floats(data)))
    else:
        for line in table_lines:
            print(line)


def _parse_scenario(spec: str):
    """(scenario, partition) from a CLI scenario spec."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind in ("triangle", "fourparty"):
        return named_scenario(kind)
    if kind in ("star", "tree"):
        params = _parse_kv(rest)
        return named_scenario(kind, M=int(_single(params, "M")))
    if kind == "edges":
        params = _parse_kv(rest)
        n = int(_single(params, "n"))
        exps = tuple(tuple(int(p) for p in group.split("-"))
                     for group in _single(params, "exps").split("+"))
        scenario = mono.OverlapScenario(n, exps)
        partition = greedy_clique_cover(required_terms(scenario))
        return scenario, partition
    raise ValueError(f"unknown scenario spec {spec!r}")


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip() != ""]


def cmd_tensor(args, cfg: RunConfig) -> int:
    state = parse_state_spec(args.state)
    sites = _int_list(args.sites) if args.sites else list(range(state.n_qubits))
    tensor = correlation_components(state, sites, args.axes)
    nonzero = tensor.nonzero(cfg.tolerance)
    data = {"n_qubits": state.n_qubits,
            "components": {k: v for k, v in nonzero.items()}}
    lines = [f"{k}  {_fmt(v)}" for k, v in nonzero.items()]
    lines.append(f"({len(nonzero)} components above {_fmt(cfg.tolerance)})")
    _emit(data, lines, cfg)
    return EXIT_OK


def cmd_bell(args, cfg: RunConfig) -> int:
    state = parse_state_spec(args.state)
    subset = _int_list(args.subset) if args.subset else list(range(state.n_qubits))
    report = maximize_bell(state, subset, args.functional, cfg.budget())
    data = report.to_dict()
    lines = [f"value           {_fmt(report.value)}",
             f"classical_bound {_fmt(report.classical_bound)}",
             f"violated        {report.violated}"]
    for i, row in enumerate(report.settings.angles):
        lines.append(f"party {subset[i]}: "
                     f"a1=(theta {_fmt(row[0][0])}, phi {_fmt(row[0][1])}) "
                     f"a2=(theta {_fmt(row[1][0])}, phi {_fmt(row[1][1])})")
    _emit(data, lines, cfg)
    return EXIT_OK


def cmd_monogamy(args, cfg: RunConfig) -> int:
    try:
        scenario, partition = _parse_scenario(args.scenario)
    except ValueError as exc:
        if "uncertif" in str(exc) or "cover" in str(exc) or "anticommute" in str(exc):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CERTIFICATION
        raise
    if args.sample is not None:
        return _monogamy_sample(scenario, partition, args.sample, cfg)
    if args.state is None:
        raise ValueError("monogamy needs a state spec or --sample N")
    state = parse_state_spec(args.state)
    report = check_state(scenario, state, partition, cfg.budget())
    data = report.to_dict()
    lines = [f"experiments     {list(scenario.experiments)}",
             f"values          {[float(_fmt(v)) for v in report.per_experiment_values]}",
             f"squared_sum     {_fmt(report.squared_sum)}",
             f"bound           {_fmt(report.bound)}",
             f"saturated       {report.saturated}"]
    _emit(data, lines, cfg)
    return EXIT_BOUND_ANOMALY if report.squared_sum > report.bound + cfg.tolerance else EXIT_OK


def _monogamy_sample(scenario, partition, n_samples, cfg: RunConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    budget = SAMPLING_BUDGET
    worst = -1.0
    worst_index = -1
    for i in range(n_samples):
        state = StateVector(scenario.n_parties,
                            haar_amplitudes(scenario.n_parties, rng))
        report = check_state(scenario, state, partition, budget)
        if report.squared_sum > worst:
            worst = report.squared_sum
            worst_index = i
    exceeded = worst > partition.bound + cfg.tolerance
    data = {"samples": n_samples, "bound": partition.bound,
            "max_squared_sum": worst, "max_sample_index": worst_index,
            "exceeded": exceeded}
    lines = [f"samples         {n_samples}",
             f"bound           {_fmt(partition.bound)}",
             f"max_squared_sum {_fmt(worst)} (sample {worst_index})",
             f"exceeded        {exceeded}"]
    _emit(data, lines, cfg)
    return EXIT_BOUND_ANOMALY if exceeded else EXIT_OK


def cmd_partition(args, cfg: RunConfig) -> int:
    if args.terms:
        with open(args.terms) as fh:
            labels = fh.read().split()
        if not labels:
            raise ValueError(f"no Pauli labels in {args.terms}")
        terms = [parse_label(t) for t in labels]
        try:
            partition = greedy_clique_cover(terms, method=args.method)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CERTIFICATION
    else:
        if not args.scenario:
            raise ValueError("partition needs a scenario spec or --terms FILE")
        try:
            _, partition = _parse_scenario(args.scenario)
        except ValueError as exc:
            if "cover" in str(exc) or "anticommute" in str(exc):
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_CERTIFICATION
            raise
    data = {"sets": [[e.label for e in s] for s in partition.sets],
            "bound": partition.bound, "certified": True}
    lines = partition.to_text().split("\n")
    lines.append(f"{len(partition.sets)} sets (bound {_fmt(partition.bound)}), certified")
    _emit(data, lines, cfg)
    return EXIT_OK


def cmd_curve(args, cfg: RunConfig) -> int:
    if args.M < 1:
        raise ValueError("M must be at least 1")
    if args.points < 2:
        raise ValueError("need at least 2 points")
    budget = cfg.budget()
    print("alpha,l2_ab_predicted,l2_ab_measured,l2_ac_predicted,l2_ac_measured")
    for alpha in np.linspace(0.0, math.pi / 2, args.points):
        pred_b, pred_c = star_prediction(args.M, alpha)
        state = star_state(args.M, alpha)
        sub_b = [0] + list(range(1, args.M + 1))
        sub_c = [0] + list(range(args.M + 1, 2 * args.M + 1))
        meas_b = maximize_bell(state, sub_b, "general", budget).value ** 2
        meas_c = maximize_bell(state, sub_c, "general", budget).value ** 2
        print(",".join(_fmt(x) for x in (alpha, pred_b, meas_b, pred_c, meas_c)))
    return EXIT_OK


_NAMED_INEQUALITIES = {
    "mermin": (3, {"112": 1.0, "121": 1.0, "211": 1.0, "222": -1.0}),
    "chsh": (2, {"11": 1.0, "12": 1.0, "21": 1.0, "22": -1.0}),
}


def cmd_oracle(args, cfg: RunConfig) -> int:
    if args.coeffs:
        with open(args.coeffs) as fh:
            spec = json.load(fh)
        try:
            n = int(spec["n"])
            coeffs = {str(k): float(v) for k, v in spec["coefficients"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed coefficients file: {exc}") from None
        name = args.coeffs
    else:
        if not args.inequality:
            raise ValueError("oracle needs an inequality name or --coeffs FILE")
        name = args.inequality
        if name not in _NAMED_INEQUALITIES:
            raise ValueError(f"unknown inequality {name!r}")
        n, coeffs = _NAMED_INEQUALITIES[name]
    bound = lhv_bound_bruteforce(coeffs, n)
    data = {"inequality": name, "n_parties": n, "lhv_bound": bound}
    lines = [f"inequality  {name}", f"parties     {n}", f"lhv_bound   {_fmt(bound)}"]
    if name == "chsh":
        normalized = lhv_bound_bruteforce({k: v / 2 for k, v in coeffs.items()}, n)
        data["normalized_bound"] = normalized
        lines.append(f"normalized  {_fmt(normalized)}")
    _emit(data, lines, cfg)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--grid-resolution", type=int, default=24)
    common.add_argument("--refinement-passes", type=int, default=3)
    common.add_argument("--tolerance", type=float, default=1e-6)
    common.add_argument("--format", choices=("auto", "json", "table"), default="auto")
    parser = argparse.ArgumentParser(
        prog="bellmono",
        description="Bell inequality quantum values and monogamy bounds.",
        epilog="State specs: ghz:n=3,phi=1.5708 | psimono:M=2,alpha=0.3 | "
               "tree:M=3,paths=0,1,2 | mermin:variant=two_triples | file:state.json. "
               "Scenario specs: triangle | fourparty | star:M=2 | tree:M=3 | "
               "edges:n=3,exps=0-1+0-2.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tensor", parents=[common],
                       help="nonzero correlation tensor components")
    p.add_argument("state")
    p.add_argument("--sites", default=None, help="comma-separated qubit indices")
    p.add_argument("--axes", default="xy", help="subset of xyz")
    p.set_defaults(fn=cmd_tensor)

    p = sub.add_parser("bell", parents=[common], help="maximize a Bell functional over settings")
    p.add_argument("state")
    p.add_argument("--subset", default=None, help="comma-separated qubit indices")
    p.add_argument("--functional", choices=("general", "mermin"), default="general")
    p.set_defaults(fn=cmd_bell)

    p = sub.add_parser("monogamy", parents=[common], help="check a state (or samples) against a bound")
    p.add_argument("scenario")
    p.add_argument("state", nargs="?", default=None)
    p.add_argument("--sample", type=int, default=None, metavar="N",
                   help="check N Haar-random states instead of one state spec")
    p.set_defaults(fn=cmd_monogamy)

    p = sub.add_parser("partition", parents=[common], help="anticommuting-set partition for a scenario")
    p.add_argument("scenario", nargs="?", default=None)
    p.add_argument("--terms", default=None, metavar="FILE",
                   help="file of Pauli labels to cover greedily")
    p.add_argument("--method", choices=("greedy", "exact"), default="greedy")
    p.set_defaults(fn=cmd_partition)

    p = sub.add_parser("curve", parents=[common], help="trade-off curve for the hub-group witness (CSV)")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--points", type=int, default=9)
    p.set_defaults(fn=cmd_curve)

    p = sub.add_parser("oracle", parents=[common], help="exact LHV bound by strategy enumeration")
    p.add_argument("inequality", nargs="?", default=None,
                   choices=(*_NAMED_INEQUALITIES, None))
    p.add_argument("--coeffs", default=None, metavar="FILE",
                   help='JSON {"n": N, "coefficients": {"112": 1.0, ...}}')
    p.set_defaults(fn=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig(seed=args.seed, grid_resolution=args.grid_resolution,
                        refinement_passes=args.refinement_passes,
                        tolerance=args.tolerance, output_format=args.format)
        return args.fn(args, cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RuntimeError as exc:
        print(f"anomaly: {exc}", file=sys.stderr)
        return EXIT_BOUND_ANOMALY


if __name__ == "__main__":
    sys.exit(main())

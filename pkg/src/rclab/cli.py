"""Command-line front end: checker suites, scans, brackets, and fits.

A run is described by a command name plus options, supplied as flags or as a
single JSON config file (flags override file fields). Grid outputs are CSV,
report streams are JSONL, single results are JSON; files are written
atomically and serialized canonically so identical runs are byte-identical.

Exit codes: 0 ok, 1 strict checker violation, 2 invalid config, 3 resource
cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ResourceLimitError
from . import exact, ineq, lattice, mc, sharpness
from .events import boundary_connection_event, connection_event, edge_open_event
from .exact import RCParams

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2
EXIT_RESOURCE = 3

THREADS_ENV = "RC_LAB_THREADS"


@dataclass(frozen=True)
class RunConfig:
    command: str
    options: dict


# ---------------------------------------------------------------------------
# option schema


def _parse_int(raw):
    return int(raw)


def _parse_float(raw):
    return float(raw)


def _parse_probability(raw):
    v = float(raw)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"must lie in [0, 1], got {v}")
    return v


def _parse_q(raw):
    v = float(raw)
    if v < 1.0:
        raise ValueError(f"must be >= 1 (cluster weights below 1 are unsupported), got {v}")
    return v


def _parse_coords(raw):
    if isinstance(raw, (list, tuple)):
        return tuple(int(c) for c in raw)
    return tuple(int(c) for c in str(raw).split(","))


def _parse_int_list(raw):
    if isinstance(raw, (list, tuple)):
        return [int(c) for c in raw]
    return [int(c) for c in str(raw).split(",")]


def _parse_p_grid(raw):
    if isinstance(raw, (list, tuple)):
        values = [float(v) for v in raw]
    else:
        parts = str(raw).split(":")
        if len(parts) != 3:
            raise ValueError("expected lo:hi:step")
        lo, hi, step = (float(x) for x in parts)
        if step <= 0 or hi < lo:
            raise ValueError("expected lo <= hi and step > 0")
        count = int(round((hi - lo) / step)) + 1
        values = [round(lo + i * step, 12) for i in range(count) if lo + i * step <= hi + 1e-12]
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"grid value {v} outside [0, 1]")
    return values


def _parse_str(raw):
    return str(raw)


def _parse_region_spec_str(raw):
    spec = str(raw)
    kind, _, rest = spec.partition(":")
    if spec == "edge":
        return spec
    if kind == "box":
        if int(rest) < 0:
            raise ValueError("box radius must be >= 0")
        return spec
    if kind == "rect":
        lo, hi = (int(v) for v in rest.split(":"))
        if hi < lo:
            raise ValueError("rect needs LO <= HI")
        return spec
    raise ValueError(f"expected 'edge', 'box:N' or 'rect:LO:HI', got {spec!r}")


def _parse_family_spec_str(raw):
    spec = str(raw)
    kind, _, rest = spec.partition(":")
    if kind == "boxes":
        lo, sep, hi = rest.partition("..")
        if sep and int(lo) >= 0 and int(hi) >= int(lo):
            return spec
    raise ValueError(f"expected 'boxes:LO..HI', got {spec!r}")


def _parse_bool(raw):
    if isinstance(raw, bool):
        return raw
    if str(raw).lower() in ("true", "1", "yes"):
        return True
    if str(raw).lower() in ("false", "0", "no"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


_PARSERS: dict[str, Callable] = {
    "int": _parse_int,
    "float": _parse_float,
    "prob": _parse_probability,
    "q": _parse_q,
    "coords": _parse_coords,
    "int_list": _parse_int_list,
    "p_grid": _parse_p_grid,
    "str": _parse_str,
    "bool": _parse_bool,
    "region_spec": _parse_region_spec_str,
    "family_spec": _parse_family_spec_str,
}


@dataclass(frozen=True)
class Opt:
    name: str
    kind: str
    required: bool = False
    default: object = None
    help: str = ""
    choices: tuple = ()


_COMMON = (
    Opt("out", "str", help="output file (default: stdout)"),
    Opt("threads", "int", help=f"worker pool size (default: ${THREADS_ENV} or 1)"),
)

_MC_COMMON = (
    Opt("sweeps", "int", default=20000, help="total sweeps including burn-in"),
    Opt("seed", "int", default=1, help="RNG seed, recorded in every record"),
    Opt("sampler", "str", default="auto", choices=("auto", "sw", "heatbath")),
)

COMMANDS: dict[str, tuple[Opt, ...]] = {
    "exact": (
        Opt("d", "int", required=True),
        Opt("n", "int", required=True),
        Opt("q", "q", default=1.0),
        Opt("p", "prob", required=True),
        Opt("x", "coords"),
        Opt("y", "coords"),
        Opt("max-edges", "int", default=exact.DEFAULT_ENUMERATION_CAP),
    )
    + _COMMON,
    "susceptibility": (
        Opt("d", "int", required=True),
        Opt("n", "int", required=True),
        Opt("q", "q", default=1.0),
        Opt("p", "prob", required=True),
        Opt("max-edges", "int", default=exact.DEFAULT_ENUMERATION_CAP),
    )
    + _COMMON,
    "phi": (
        Opt("d", "int", required=True),
        Opt("q", "q", default=1.0),
        Opt("S", "region_spec", required=True, help="candidate set, e.g. box:1"),
        Opt("p-grid", "p_grid", required=True),
    )
    + _COMMON,
    "ptilde": (
        Opt("d", "int", required=True),
        Opt("q", "q", default=1.0),
        Opt("family", "family_spec", required=True, help="candidate family, e.g. boxes:0..3"),
        Opt("tol", "float", default=1e-4),
    )
    + _COMMON,
    "simon": (
        Opt("d", "int", required=True),
        Opt("q", "q", default=2.0),
        Opt("p-grid", "p_grid", required=True),
        Opt("ambient", "region_spec", required=True, help="box:N or rect:LO:HI"),
        Opt("s-radius", "int", required=True),
        Opt("z", "coords", required=True),
        Opt("strict", "bool", default=False),
    )
    + _COMMON,
    "diffineq": (
        Opt("d", "int", required=True),
        Opt("n", "int", required=True),
        Opt("q", "q", default=2.0),
        Opt("p-grid", "p_grid", required=True),
        Opt("bracket-lower", "float", help="marks the claimed regime in reports"),
        Opt("strict", "bool", default=False),
    )
    + _COMMON,
    "derivcheck": (
        Opt("region", "region_spec", default="edge", help="'edge' or 'box:N'"),
        Opt("d", "int", default=1),
        Opt("q", "q", default=1.0),
        Opt("p", "prob", required=True),
        Opt("strict", "bool", default=False),
    )
    + _COMMON,
    "markov": (
        Opt("d", "int", required=True),
        Opt("n", "int", required=True),
        Opt("q", "q", default=2.0),
        Opt("p", "prob", required=True),
        Opt("s-radius", "int", required=True),
        Opt("x", "coords", required=True, help="inner endpoint of the crossing edge"),
        Opt("y", "coords", help="outer endpoint (default: first lattice neighbor outside S)"),
        Opt("strict", "bool", default=True),
    )
    + _COMMON,
    "fkg": (
        Opt("d", "int", required=True),
        Opt("n", "int", required=True),
        Opt("q", "q", default=2.0),
        Opt("p", "prob", required=True),
        Opt("strict", "bool", default=True),
    )
    + _COMMON,
    "mc": (
        Opt("d", "int", required=True),
        Opt("n", "int", required=True),
        Opt("q", "q", default=1.0),
        Opt("p", "prob", required=True),
        Opt("x", "coords", required=True),
        Opt("y", "coords", required=True),
    )
    + _MC_COMMON
    + _COMMON,
    "theta": (
        Opt("d", "int", required=True),
        Opt("q", "q", default=2.0),
        Opt("p", "prob", required=True),
        Opt("n", "int_list", required=True, help="box radii, e.g. 4,8,16"),
    )
    + _MC_COMMON
    + _COMMON,
    "fit": (
        Opt("d", "int", required=True),
        Opt("q", "q", default=2.0),
        Opt("p", "prob", required=True),
        Opt("m", "int", required=True, help="box radius"),
        Opt("distances", "int_list", required=True),
        Opt("bracket-lower", "float"),
    )
    + _MC_COMMON
    + _COMMON,
}


def validate_config(data: dict) -> list[str]:
    """Full schema error list; empty iff the config can run. Never computes."""
    errors: list[str] = []
    if not isinstance(data, dict):
        return ["config must be a JSON object"]
    command = data.get("command")
    if command is None:
        return ["missing command"]
    if command not in COMMANDS:
        return [f"unknown command {command!r}; expected one of {sorted(COMMANDS)}"]
    spec = {opt.name: opt for opt in COMMANDS[command]}
    for key, raw in data.items():
        if key == "command":
            continue
        if key not in spec:
            errors.append(f"{command}: unknown option {key!r}")
            continue
        if raw is None:
            continue
        opt = spec[key]
        try:
            value = _PARSERS[opt.kind](raw)
        except (ValueError, TypeError) as exc:
            errors.append(f"{command}: option {key!r}: {exc}")
            continue
        if opt.choices and value not in opt.choices:
            errors.append(f"{command}: option {key!r} must be one of {opt.choices}")
    for opt in COMMANDS[command]:
        if opt.required and data.get(opt.name) is None:
            errors.append(f"{command}: missing required option {opt.name!r}")
    return errors


def validate_text(text: str) -> list[str]:
    try:
        data = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        return [f"config is not valid JSON: {exc}"]
    return validate_config(data)


def _normalize(config: RunConfig) -> dict:
    """Parsed option values with defaults filled in (config must be valid)."""
    spec = COMMANDS[config.command]
    out = {}
    for opt in spec:
        raw = config.options.get(opt.name)
        out[opt.name] = opt.default if raw is None else _PARSERS[opt.kind](raw)
    if out.get("threads") is None:
        out["threads"] = int(os.environ.get(THREADS_ENV, "1"))
    return out


# ---------------------------------------------------------------------------
# output helpers


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _jsonl(records: Sequence[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _write_output(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".rclab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _summary(line: str) -> None:
    print(line, file=sys.stderr)


def _report_records(reports) -> list[dict]:
    return [r.to_json_dict() for r in reports]


def _checker_exit(reports, strict: bool) -> int:
    if strict and any(not r.holds for r in reports):
        return EXIT_VIOLATION
    return EXIT_OK


def _parse_region_spec(spec: str, d: int) -> lattice.Region:
    kind, _, rest = spec.partition(":")
    if kind == "box":
        return lattice.make_box(d, int(rest))
    if kind == "rect":
        lo, hi = (int(v) for v in rest.split(":"))
        return lattice.make_rect((lo,) * d, (hi,) * d)
    raise ValueError(f"unknown region spec {spec!r}")


# ---------------------------------------------------------------------------
# runners


def _run_exact(opt) -> int:
    region = lattice.make_box(opt["d"], opt["n"])
    params = RCParams(p=opt["p"], q=opt["q"])
    records = [
        {
            "quantity": "partition_function",
            "region_hash": region.fingerprint(),
            "d": opt["d"],
            "n": opt["n"],
            "p": opt["p"],
            "q": opt["q"],
            "value": exact.partition_function(region, params, max_edges=opt["max-edges"]),
        }
    ]
    if opt["x"] is not None and opt["y"] is not None:
        value = exact.connection_probability(
            region, params, opt["x"], opt["y"], max_edges=opt["max-edges"]
        )
        records.append(
            {
                "quantity": "connection_probability",
                "region_hash": region.fingerprint(),
                "d": opt["d"],
                "n": opt["n"],
                "p": opt["p"],
                "q": opt["q"],
                "x": list(opt["x"]),
                "y": list(opt["y"]),
                "value": value,
            }
        )
    for r in records:
        _summary(f"{r['quantity']}: {r['value']:.12g}")
    _write_output(opt["out"], _jsonl(records))
    return EXIT_OK


def _run_susceptibility(opt) -> int:
    region = lattice.make_box(opt["d"], opt["n"])
    params = RCParams(p=opt["p"], q=opt["q"])
    value = exact.susceptibility(
        region, params, (0,) * opt["d"], max_edges=opt["max-edges"]
    )
    record = {
        "quantity": "susceptibility",
        "region_hash": region.fingerprint(),
        "d": opt["d"],
        "n": opt["n"],
        "p": opt["p"],
        "q": opt["q"],
        "value": value,
    }
    _summary(f"susceptibility: {value:.12g}")
    _write_output(opt["out"], _jsonl([record]))
    return EXIT_OK


def _run_phi(opt) -> int:
    S = _parse_region_spec(opt["S"], opt["d"])
    rows = []
    for p in opt["p-grid"]:
        result = sharpness.phi(S, RCParams(p=p, q=opt["q"]))
        rows.append(
            (opt["S"], repr(p), repr(opt["q"]), repr(result.value), len(result.terms))
        )
        _summary(f"phi({opt['S']}, p={p:g}) = {result.value:.9g}")
    _write_output(
        opt["out"], _csv_text(("S_descriptor", "p", "q", "phi", "n_boundary_edges"), rows)
    )
    return EXIT_OK


def _parse_family_spec(spec: str, d: int) -> list[lattice.Region]:
    kind, _, rest = spec.partition(":")
    if kind == "boxes":
        lo, _, hi = rest.partition("..")
        lo_i, hi_i = int(lo), int(hi)
        if lo_i < 0 or hi_i < lo_i:
            raise ValueError(f"bad radius range in family spec {spec!r}")
        return [lattice.make_box(d, k) for k in range(lo_i, hi_i + 1)]
    raise ValueError(f"unknown family spec {spec!r}")


def _run_ptilde(opt) -> int:
    family = _parse_family_spec(opt["family"], opt["d"])
    estimate = sharpness.bracket_ptilde(opt["d"], opt["q"], family, tol=opt["tol"])
    payload = {
        "op": "bracket_ptilde",
        "d": opt["d"],
        "q": opt["q"],
        "tol": opt["tol"],
        "lower": estimate.lower,
        "upper": estimate.upper,
        "witness_radius": lattice.region_radius(estimate.witness),
        "family": estimate.family,
        "transcript": [
            {
                "p": step.p,
                "phi_min": step.phi_min,
                "witness_index": step.witness_index,
                "below_one": step.below_one,
            }
            for step in estimate.transcript
        ],
    }
    _summary(f"ptilde bracket: [{estimate.lower:.6g}, {estimate.upper:.6g}]")
    _write_output(opt["out"], _canonical_json(payload))
    return EXIT_OK


def _run_simon(opt) -> int:
    ambient = _parse_region_spec(opt["ambient"], opt["d"])
    S = lattice.make_box(opt["d"], opt["s-radius"])
    params_list = [RCParams(p=p, q=opt["q"]) for p in opt["p-grid"]]
    reports = ineq.simon_reports(
        ambient, S, tuple(opt["z"]), params_list, workers=opt["threads"]
    )
    for r in reports:
        _summary(f"simon {r.instance}: lhs={r.lhs:.6g} rhs={r.rhs:.6g} holds={r.holds}")
    _write_output(opt["out"], _jsonl(_report_records(reports)))
    return _checker_exit(reports, opt["strict"])


def _run_diffineq(opt) -> int:
    params_list = [RCParams(p=p, q=opt["q"]) for p in opt["p-grid"]]
    reports = ineq.check_differential_inequality(
        opt["n"], opt["d"], params_list, ptilde_lower=opt["bracket-lower"]
    )
    for r in reports:
        _summary(f"diffineq {r.instance}: lhs={r.lhs:.6g} rhs={r.rhs:.6g} holds={r.holds}")
    _write_output(opt["out"], _jsonl(_report_records(reports)))
    return _checker_exit(reports, opt["strict"])


def _run_derivcheck(opt) -> int:
    if opt["region"] == "edge":
        region = lattice.from_vertices(1, [(0,), (1,)])
        event = edge_open_event(0)
    else:
        region = _parse_region_spec(opt["region"], opt["d"])
        event = boundary_connection_event(region)
    reports = [
        ineq.check_derivative_identity(region, RCParams(p=opt["p"], q=opt["q"]), event)
    ]
    for r in reports:
        _summary(f"derivcheck {r.instance}: lhs={r.lhs:.9g} rhs={r.rhs:.9g} equal={r.holds}")
    _write_output(opt["out"], _jsonl(_report_records(reports)))
    return _checker_exit(reports, opt["strict"])


def _run_markov(opt) -> int:
    S = lattice.make_box(opt["d"], opt["s-radius"])
    x = tuple(opt["x"])
    if opt["y"] is not None:
        y = tuple(opt["y"])
    else:
        inside = set(S.vertices)
        outside = [v for v in lattice.lattice_neighbors(x) if v not in inside]
        if not outside:
            print(f"markov: {x} has no neighbor outside S", file=sys.stderr)
            return EXIT_INVALID
        y = outside[0]
    report = ineq.check_markov_factorization(
        opt["n"], opt["d"], RCParams(p=opt["p"], q=opt["q"]), S, (x, y)
    )
    _summary(f"markov {report.instance}: lhs={report.lhs:.9g} rhs={report.rhs:.9g} equal={report.holds}")
    _write_output(opt["out"], _jsonl(_report_records([report])))
    return _checker_exit([report], opt["strict"])


def _run_fkg(opt) -> int:
    region = lattice.make_box(opt["d"], opt["n"])
    d, n = opt["d"], opt["n"]
    origin = (0,) * d
    a = connection_event(region, origin, (n,) * d)
    b = connection_event(region, (-n,) * d, origin)
    report = ineq.check_fkg(region, RCParams(p=opt["p"], q=opt["q"]), a, b)
    _summary(f"fkg {report.instance}: lhs={report.lhs:.9g} rhs={report.rhs:.9g} holds={report.holds}")
    _write_output(opt["out"], _jsonl(_report_records([report])))
    return _checker_exit([report], opt["strict"])


def _mc_record(op: str, opt, estimate: mc.McEstimate, extra: dict) -> dict:
    record = {
        "op": op,
        "d": opt["d"],
        "q": opt["q"],
        "p": opt["p"],
        "mean": estimate.mean,
        "stderr": estimate.stderr,
        "n_sweeps": estimate.n_sweeps,
        "seed": estimate.seed,
        "sampler": opt["sampler"],
    }
    record.update(extra)
    return record


def _run_mc(opt) -> int:
    region = lattice.make_box(opt["d"], opt["n"])
    params = RCParams(p=opt["p"], q=opt["q"])
    estimate = mc.estimate_connection(
        region, params, opt["x"], opt["y"], opt["sweeps"], opt["seed"], sampler=opt["sampler"]
    )
    record = _mc_record(
        "estimate_connection",
        opt,
        estimate,
        {"region_hash": region.fingerprint(), "x": list(opt["x"]), "y": list(opt["y"])},
    )
    _summary(f"mc connection: {estimate.mean:.6g} +- {estimate.stderr:.2g}")
    _write_output(opt["out"], _jsonl([record]))
    return EXIT_OK


def _run_theta(opt) -> int:
    records = []
    for n in opt["n"]:
        estimate = mc.estimate_theta(
            opt["d"], opt["q"], opt["p"], n, opt["sweeps"], opt["seed"], sampler=opt["sampler"]
        )
        records.append(_mc_record("estimate_theta", opt, estimate, {"n": n}))
        _summary(f"theta(n={n}): {estimate.mean:.6g} +- {estimate.stderr:.2g}")
    _write_output(opt["out"], _jsonl(records))
    return EXIT_OK


def _run_fit(opt) -> int:
    fit = mc.fit_decay(
        opt["d"],
        opt["q"],
        opt["p"],
        opt["m"],
        opt["distances"],
        opt["sweeps"],
        opt["seed"],
        sampler=opt["sampler"],
        ptilde_lower=opt["bracket-lower"],
    )
    payload = {
        "op": "fit_decay",
        "d": opt["d"],
        "q": opt["q"],
        "p": opt["p"],
        "m": opt["m"],
        "n_sweeps": opt["sweeps"],
        "seed": opt["seed"],
        "sampler": opt["sampler"],
        "points": [
            {"distance": pt.distance, "estimate": pt.estimate, "stderr": pt.stderr}
            for pt in fit.points
        ],
        "censored": list(fit.censored),
        "rate": fit.rate,
        "rate_stderr": fit.rate_stderr,
        "r_squared": fit.r_squared,
    }
    if fit.rate is None:
        _summary("fit: no fit (fewer than two uncensored points)")
    else:
        _summary(f"fit: rate={fit.rate:.6g} +- {fit.rate_stderr:.2g}, r2={fit.r_squared:.4f}")
    _write_output(opt["out"], _canonical_json(payload))
    return EXIT_OK


_RUNNERS = {
    "exact": _run_exact,
    "susceptibility": _run_susceptibility,
    "phi": _run_phi,
    "ptilde": _run_ptilde,
    "simon": _run_simon,
    "diffineq": _run_diffineq,
    "derivcheck": _run_derivcheck,
    "markov": _run_markov,
    "fkg": _run_fkg,
    "mc": _run_mc,
    "theta": _run_theta,
    "fit": _run_fit,
}


def run(config: RunConfig) -> int:
    """Validate and execute one command; returns the process exit code."""
    data = {"command": config.command, **config.options}
    errors = validate_config(data)
    if errors:
        for e in errors:
            print(e, file=sys.stderr)
        return EXIT_INVALID
    try:
        return _RUNNERS[config.command](_normalize(config))
    except ResourceLimitError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rclab",
        description="Random-cluster model toolkit: exact engine, sharpness scans, "
        "inequality checkers, Monte Carlo.",
    )
    sub = parser.add_subparsers(dest="command")
    for command, opts in COMMANDS.items():
        cp = sub.add_parser(command)
        cp.add_argument("--config", help="JSON config file; flags override its fields")
        for opt in opts:
            cp.add_argument(
                f"--{opt.name}",
                dest=opt.name.replace("-", "_"),
                default=None,
                help=opt.help,
            )
    vp = sub.add_parser("validate")
    vp.add_argument("--config", required=True, help="JSON config file to check")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command is None:
        print("no command given; see --help", file=sys.stderr)
        return EXIT_INVALID
    if args.command == "validate":
        try:
            with open(args.config) as handle:
                text = handle.read()
        except OSError as exc:
            print(f"cannot read config: {exc}", file=sys.stderr)
            return EXIT_INVALID
        errors = validate_text(text)
        for e in errors:
            print(e, file=sys.stderr)
        if errors:
            return EXIT_INVALID
        print("config ok")
        return EXIT_OK
    options = {}
    if args.config is not None:
        try:
            with open(args.config) as handle:
                data = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"cannot read config: {exc}", file=sys.stderr)
            return EXIT_INVALID
        if not isinstance(data, dict):
            print("config must be a JSON object", file=sys.stderr)
            return EXIT_INVALID
        file_command = data.pop("command", None)
        if file_command is not None and file_command != args.command:
            print(
                f"config file is for command {file_command!r}, not {args.command!r}",
                file=sys.stderr,
            )
            return EXIT_INVALID
        options.update(data)
    for opt in COMMANDS[args.command]:
        value = getattr(args, opt.name.replace("-", "_"), None)
        if value is not None:
            options[opt.name] = value
    return run(RunConfig(command=args.command, options=options))


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``hocent {stats,centrality,cluscoeff,linkpred,synth}``.

Settings are resolved as defaults < ``--config`` file (``key=value`` lines)
< ``HOCENT_<KEY>`` environment variables < explicit flags.  Every output
starts with the resolved configuration so identical runs produce identical
bytes.  Exit status: 0 success, 1 runtime or convergence failure, 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from .graph import GraphFormatError, load_graph, write_edge_list
from .linkpred import experiment_rows, experiment_summary, run_split_experiment
from .measures import NoSecondOrderStructure, spectral_coefficient, static_coefficient, summarize
from .solver import MATRICES, MapSpec, solve
from .synthetic import GRID_COLUMNS, WheelParams, generate_wheel, sweep_phase_diagram
from .triangles import TENSORS, enumerate_triangles

logger = logging.getLogger("hocent")

ENV_PREFIX = "HOCENT_"



def _alpha(s):
    v = float(s)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {s}")
    return v


def _teleport(s):
    v = float(s)
    if not 0.0 <= v < 1.0:
        raise ValueError(f"c must lie in [0, 1), got {s}")
    return v


def _positive(kind):
    def parse(s):
        v = kind(s)
        if v <= 0:
            raise ValueError(f"expected a positive value, got {s}")
        return v
    return parse


def _choice(options):
    def parse(s):
        key = str(s)
        lowered = {o.lower(): o for o in options}
        if key.lower() not in lowered:
            raise ValueError(f"expected one of {', '.join(options)}, got {s}")
        return lowered[key.lower()]
    return parse


def _bool(s):
    if isinstance(s, bool):
        return s
    key = str(s).strip().lower()
    if key in ("1", "true", "yes", "on"):
        return True
    if key in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(f"expected a boolean, got {s}")


def _range(s):
    """``"5"`` -> [5]; ``"3:20"`` -> 3..20 inclusive."""
    text = str(s)
    if ":" in text:
        lo, hi = (int(t) for t in text.split(":", 1))
        if hi < lo:
            raise ValueError(f"empty range {s}")
        return text
    int(text)
    return text


def _expand(text):
    if ":" in text:
        lo, hi = (int(t) for t in text.split(":", 1))
        return list(range(lo, hi + 1))
    return [int(text)]


# key -> (default, parser); a parser raises ValueError on bad input
OPTIONS = {
    "input": (None, str),
    "format": ("auto", _choice(["auto", "edge-list", "matrix-market"])),
    "zero_based": (False, _bool),
    "output": (None, str),
    "output_format": ("csv", _choice(["csv", "json"])),
    "alpha": (0.5, _alpha),
    "p": (0.0, float),
    "tensor": ("B", _choice(list(TENSORS))),
    "matrix": ("adjacency", _choice(list(MATRICES))),
    "c": (0.85, _teleport),
    "tol": (1e-9, _positive(float)),
    "max_iter": (10000, _positive(int)),
    "norm": ("one", _choice(["one", "inf", "raw"])),
    "static": (False, _bool),
    "rng_seed": (0, int),
    "trials": (10, _positive(int)),
    "summary_output": (None, str),
    "m": ("4:10", _range),
    "k": (None, _range),
    "emit_graph": (False, _bool),
    "threads": (os.cpu_count() or 1, _positive(int)),
}

# options each subcommand reads (and echoes)
COMMAND_KEYS = {
    "stats": ["input", "format", "zero_based", "p", "tol", "max_iter"],
    "centrality": ["input", "format", "zero_based", "alpha", "p", "tensor", "matrix", "c", "tol",
                   "max_iter", "norm"],
    "cluscoeff": ["input", "format", "zero_based", "p", "tensor", "static", "tol", "max_iter", "norm"],
    "linkpred": ["input", "format", "zero_based", "alpha", "p", "tensor", "c", "rng_seed", "trials",
                 "summary_output"],
    "synth": ["m", "k", "alpha", "tensor", "p", "tol", "max_iter", "emit_graph"],
}
COMMON_KEYS = ["output", "output_format", "threads"]

# the phase diagram needs tight solves near the boundary and p = 1 for its closed forms;
# link prediction pairs the random walk with the random-walk tensor
COMMAND_DEFAULTS = {
    "synth": {"tol": 1e-12, "max_iter": 100000, "p": 1.0},
    "linkpred": {"tensor": "W"},
}


def _add(parser, *flags, key, **kw):
    parser.add_argument(*flags, dest=key, default=None, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hocent", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hocent {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    _add(common, "-o", "--output", key="output", help="output file (default: stdout)")
    _add(common, "--output-format", key="output_format", help="csv or json")
    _add(common, "--config", key="config", help="key=value configuration file")
    _add(common, "--threads", key="threads", help="cap on worker threads")

    graph_in = argparse.ArgumentParser(add_help=False)
    _add(graph_in, "-i", "--input", key="input", help="graph file")
    _add(graph_in, "--format", key="format", help="auto, edge-list or matrix-market")
    graph_in.add_argument("--zero-based", dest="zero_based", action="store_const", const="true",
                          default=None, help="edge-list ids start at 0")

    def solver_opts(p):
        _add(p, "--tol", key="tol")
        _add(p, "--max-iter", key="max_iter")

    s = sub.add_parser("stats", parents=[common, graph_in], help="dataset summary row")
    _add(s, "--p", key="p", help="power-mean exponent for the spectral columns")
    solver_opts(s)

    s = sub.add_parser("centrality", parents=[common, graph_in], help="first/second order centrality")
    for flag in ("alpha", "p", "tensor", "matrix", "c", "norm"):
        _add(s, f"--{flag}", key=flag)
    solver_opts(s)

    s = sub.add_parser("cluscoeff", parents=[common, graph_in], help="spectral clustering coefficients")
    for flag in ("p", "tensor", "norm"):
        _add(s, f"--{flag}", key=flag)
    s.add_argument("--static", dest="static", action="store_const", const="true", default=None)
    solver_opts(s)

    s = sub.add_parser("linkpred", parents=[common, graph_in], help="edge-removal link prediction")
    for flag in ("alpha", "p", "tensor", "c", "trials"):
        _add(s, f"--{flag}", key=flag)
    _add(s, "--rng-seed", key="rng_seed")
    _add(s, "--summary-output", key="summary_output", help="write the quartile JSON here")

    s = sub.add_parser("synth", parents=[common], help="wheel-with-leaves phase diagram")
    _add(s, "--m", key="m", help="cycle length or inclusive range a:b")
    _add(s, "--k", key="k", help="leaves per rim node or range a:b (default 0:m(m-3)+20)")
    for flag in ("alpha", "tensor", "p"):
        _add(s, f"--{flag}", key=flag)
    solver_opts(s)
    s.add_argument("--emit-graph", dest="emit_graph", action="store_const", const="true", default=None,
                   help="write the edge list of the single (m, k) graph instead of a grid")
    return parser


def _read_config_file(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (t.strip() for t in line.split("=", 1))
        values[key.replace("-", "_").lower()] = value
    return values


def resolve_config(args, environ=None) -> dict:
    """Merge defaults, config file, environment and flags; validate every value."""
    environ = os.environ if environ is None else environ
    keys = COMMAND_KEYS[args.command] + COMMON_KEYS
    layers = []
    if getattr(args, "config", None):
        layers.append(_read_config_file(args.config))
    layers.append({k: environ[ENV_PREFIX + k.upper()] for k in keys if ENV_PREFIX + k.upper() in environ})
    layers.append({k: getattr(args, k) for k in keys if getattr(args, k, None) is not None})
    config = {}
    for key in keys:
        default, parse = OPTIONS[key]
        default = COMMAND_DEFAULTS.get(args.command, {}).get(key, default)
        value = default
        for layer in layers:
            if key in layer:
                value = layer[key]
        if value is not None and not (value is default):
            try:
                value = parse(value)
            except ValueError as exc:
                raise ValueError(f"--{key.replace('_', '-')}: {exc}") from None
        config[key] = value
    if args.command != "synth" and not config.get("input"):
        raise ValueError("--input is required")
    return config


def fmt(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "NA"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{float(value):.17g}"
    return str(value)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return None if math.isnan(v) else (str(v) if math.isinf(v) else v)
    return value


def _header(config, meta=None) -> list:
    lines = [f"# hocent {__version__}", "# config: " + json.dumps(config, sort_keys=True)]
    for key, value in (meta or {}).items():
        lines.append(f"# {key}: {json.dumps(_jsonable(value))}")
    return lines


def render_csv(config, columns, rows, meta=None) -> str:
    out = _header(config, meta)
    out.append(",".join(columns))
    for row in rows:
        out.append(",".join(fmt(row[c]) for c in columns))
    return "\n".join(out) + "\n"


def render_json(config, payload) -> str:
    doc = {"hocent_version": __version__, "config": config}
    doc.update(payload)
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"


def _load(config):
    g = load_graph(config["input"], format=config["format"], zero_based=config["zero_based"])
    logger.info("loaded %s: n=%d m=%d repairs=%s", config["input"], g.n, g.edge_count, dict(g.repairs))
    return g


def _report_meta(rep):
    return {
        "eigenvalue": rep.eigenvalue,
        "iterations": rep.iterations,
        "converged": rep.converged,
        "bracket": list(rep.bracket),
        "warnings": rep.hypothesis_warnings,
    }


def _node_output(config, g, values, name, meta):
    rows = [{"node_id": g.labels[i], "value": float(v)} for i, v in enumerate(values)]
    if config["output_format"] == "json":
        return render_json(config, {"measure": name, **meta, "values": rows})
    return render_csv(config, ["node_id", "value"], rows, {"measure": name, **meta})


def _normalize(x, norm):
    if norm == "one":
        return x / x.sum()
    if norm == "inf":
        return x / x.max()
    return x


def cmd_stats(config):
    g = _load(config)
    ts = enumerate_triangles(g)
    summary = summarize(g, ts, p=config["p"], tol=config["tol"], max_iter=config["max_iter"])
    row = summary.as_dict()
    row["triangles"] = row.pop("triangle_count")
    columns = ["n", "m", "triangles", "global_cc", "average_cc", "average_spectral_cc",
               "average_closure", "average_spectral_closure", "connected"]
    if config["output_format"] == "json":
        return render_json(config, {"summary": {c: row[c] for c in columns}}), 0
    return render_csv(config, columns, [row]), 0


def cmd_centrality(config):
    g = _load(config)
    spec = MapSpec(alpha=config["alpha"], p=config["p"], matrix=config["matrix"],
                   tensor=config["tensor"], c=config["c"])
    ts = enumerate_triangles(g) if spec.uses_tensor else None
    rep = solve(g, ts, spec, tol=config["tol"], max_iter=config["max_iter"])
    values = _normalize(rep.eigenvector, config["norm"])
    text = _node_output(config, g, values, "centrality", _report_meta(rep))
    return text, 0 if rep.converged else 1


def cmd_cluscoeff(config):
    g = _load(config)
    ts = enumerate_triangles(g)
    if config["static"]:
        values = static_coefficient(ts, config["tensor"]).values
        return _node_output(config, g, values, f"static_{config['tensor']}", {}), 0
    mv = spectral_coefficient(g, ts, config["tensor"], config["p"], tol=config["tol"],
                              max_iter=config["max_iter"])
    values = _normalize(mv.values, config["norm"])
    text = _node_output(config, g, values, mv.name, _report_meta(mv.report))
    return text, 0 if mv.report.converged else 1


def cmd_linkpred(config):
    g = _load(config)
    spec = MapSpec(alpha=config["alpha"], p=config["p"], matrix="random_walk", tensor=config["tensor"])
    experiments = run_split_experiment(g, c=config["c"], spec=spec, rng_seed=config["rng_seed"],
                                       trials=config["trials"], threads=config["threads"])
    rows = experiment_rows(experiments)
    summary = experiment_summary(experiments)
    if config["summary_output"]:
        with open(config["summary_output"], "w", encoding="utf-8") as fh:
            fh.write(render_json(config, {"summary": summary}))
    if config["output_format"] == "json":
        return render_json(config, {"rows": rows, "summary": summary}), 0
    return render_csv(config, ["trial", "method", "hits", "total", "ratio"], rows,
                      {"rng_seed": config["rng_seed"], "summary": summary}), 0


def cmd_synth(config):
    ms = _expand(config["m"])
    if config["emit_graph"]:
        ks = _expand(config["k"] or "0")
        if len(ms) != 1 or len(ks) != 1:
            raise ValueError("--emit-graph needs a single --m and --k")
        return write_edge_list(generate_wheel(WheelParams(ms[0], ks[0]))), 0
    if min(ms) < 3:
        raise ValueError("m must be >= 3")
    k_values = (lambda m: range(0, m * (m - 3) + 21)) if config["k"] is None else _expand(config["k"])
    cells = sweep_phase_diagram(ms, k_values, config["alpha"], config["tensor"], config["p"],
                                tol=config["tol"], max_iter=config["max_iter"],
                                threads=config["threads"])
    rows = [{
        "m": c.m, "k": c.k, "alpha": c.alpha, "tensor": c.tensor,
        "numeric_x_gt_y": c.numeric_x_gt_y, "analytic_x_gt_y": c.analytic_x_gt_y,
        "lambda": c.lam, "numeric_lambda": c.numeric_lambda, "x": c.x, "y": c.y,
    } for c in cells]
    if config["output_format"] == "json":
        return render_json(config, {"grid": rows}), 0
    return render_csv(config, list(GRID_COLUMNS), rows), 0


COMMANDS = {
    "stats": cmd_stats,
    "centrality": cmd_centrality,
    "cluscoeff": cmd_cluscoeff,
    "linkpred": cmd_linkpred,
    "synth": cmd_synth,
}


def main(argv=None, environ=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = resolve_config(args, environ)
    except ValueError as exc:
        parser.error(str(exc))
    config = {"command": args.command, **config}
    try:
        text, status = COMMANDS[args.command](config)
    except (GraphFormatError, NoSecondOrderStructure, ValueError, ArithmeticError) as exc:
        print(f"hocent {args.command}: error: {exc}", file=sys.stderr)
        return 1
    if config.get("output"):
        with open(config["output"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status:
        print(f"hocent {args.command}: solver did not converge", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())

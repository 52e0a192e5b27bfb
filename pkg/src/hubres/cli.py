"""Command-line interface: ``hubres analyze | sweep | report | walk``.

Exit codes: 0 success, 1 input error, 2 violation of a proved bound,
3 numerical failure.  Floats are written with 12 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import failures, is_refuted
from .enumeration import (
    KNOWN_COUNTS,
    classify_sweep,
    enumerate_connected,
    read_graph6_file,
    records_to_csv,
    scatter_csv,
    sweep,
    validate_corpus,
)
from .graph import (
    DisconnectedGraphError,
    GraphError,
    ParseError,
    graph_stats,
    largest_component,
    parse_edge_list,
    parse_graph6,
    write_graph6,
)
from .laplacian import ALPHAS, Bias, as_bias, trace_bounds_report
from .linalg import ConvergenceError
from .randomwalk import (
    RNG_VERSION,
    NumericalError,
    commute_identity_report,
    mc_commute_time,
    relative_efficiency,
    volume,
)
from .resistance import (
    conjecture_check,
    kirchhoff_bounds_report,
    kirchhoff_index,
    metric_properties_report,
)
from .spectral import (
    PseudoinverseKind,
    biased_spectrum,
    eigen_bounds_report,
    normalized_laplacian_spectrum,
)

EXIT_OK, EXIT_INPUT, EXIT_BOUND, EXIT_NUMERIC = 0, 1, 2, 3
SCHEMA = "hubres.analysis/1"


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def fmt(x):
    """Round floats (recursively) to 12 significant digits; non-finite become strings."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {str(k): fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [fmt(v) for v in x]
    if isinstance(x, np.ndarray):
        return fmt(x.tolist())
    return x


def dump_json(obj) -> str:
    return json.dumps(fmt(obj), indent=2, sort_keys=True) + "\n"


def _emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# input
# ---------------------------------------------------------------------------

def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def load_input(args):
    """Return ``(graph, identity)`` from ``--graph6`` / ``--graph6-file`` / ``--edges``."""
    if args.graph6 is not None:
        return parse_graph6(args.graph6), args.graph6
    if args.graph6_file is not None:
        toks = [t for t in _read_text(args.graph6_file).split() if t]
        if not toks:
            raise InputError(f"{args.graph6_file}: no graph6 token")
        return parse_graph6(toks[0]), args.graph6_file
    if args.edges is not None:
        return parse_edge_list(_read_text(args.edges)), args.edges
    raise InputError("one of --graph6, --graph6-file or --edges is required")


def _reduce(g, lcc: bool):
    """Largest component when requested, else require connectivity."""
    if g.is_connected():
        return g, False
    if not lcc:
        raise DisconnectedGraphError("input graph is disconnected (use --lcc to analyse "
                                     "its largest connected component)")
    return largest_component(g), True


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def analysis_report(g, identity: str, alphas, kind=PseudoinverseKind.GROUP_INVERSE,
                    *, reduced: bool = False) -> dict:
    """JSON-ready report for one connected graph."""
    st = graph_stats(g)
    spectra = {a: biased_spectrum(g, a) for a in ALPHAS}
    spectra["normalized"] = normalized_laplacian_spectrum(g)
    R = {a: kirchhoff_index(g, a, spectrum=spectra[a]) for a in ALPHAS}
    rows = trace_bounds_report(g, st)
    for a in alphas:
        rows += [r for r in eigen_bounds_report(g, a, spectra=spectra, stats=st)
                 if "[" in r.bound_id or a == alphas[0]]
    rows += [r for r in kirchhoff_bounds_report(g, spectra=spectra, stats=st)
             if any(r.bound_id.endswith(f"[{int(a)}]") for a in alphas)]
    bad = failures(rows)
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "graph": identity,
        "graph6": write_graph6(g) if g.n <= 62 else None,
        "largest_component": reduced,
        "kind": kind.value,
        "stats": st.to_dict(),
        "alphas": [int(a) for a in alphas],
        "spectra": {str(int(a)): spectra[a].rho for a in alphas},
        "normalized_spectrum": spectra["normalized"].rho,
        "kirchhoff": {str(int(a)): R[a] for a in alphas},
        "volume": {str(int(a)): volume(g, a) for a in alphas},
        "bounds": {
            "rows": [dict(r.to_dict(), refuted=is_refuted(r.bound_id)) for r in rows],
            "failures": [r.bound_id for r in bad],
            "proved_failures": [r.bound_id for r in bad if not is_refuted(r.bound_id)],
        },
        "metric": {str(int(a)): metric_properties_report(g, a, kind).to_dict() for a in alphas},
    }
    if all(a in alphas for a in ALPHAS):
        triple = conjecture_check(g)
        report["conjecture"] = triple.to_dict()
    for a, key in ((Bias.REPELLING, "E1"), (Bias.ATTRACTING, "Em1")):
        if a in alphas:
            report[key] = (2.0 * g.m / volume(g, a)) * (R[Bias.STANDARD] / R[a])
    return report


def cmd_analyze(args) -> int:
    g, ident = load_input(args)
    g, reduced = _reduce(g, args.lcc)
    alphas = _alphas(args.alpha)
    rep = analysis_report(g, ident, alphas, PseudoinverseKind(args.kind), reduced=reduced)
    _emit(dump_json(rep), args.out)
    if rep["bounds"]["proved_failures"]:
        print("proved bound violated: " + ", ".join(rep["bounds"]["proved_failures"]),
              file=sys.stderr)
        return EXIT_BOUND
    return EXIT_OK


def _alphas(values):
    if not values:
        return list(ALPHAS)
    out = []
    for v in values:
        a = as_bias(int(v))
        if a not in out:
            out.append(a)
    return out


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def cmd_sweep(args) -> int:
    if (args.n is None) == (args.corpus is None):
        raise InputError("give exactly one of --n or --corpus")
    if args.n is not None:
        graphs = list(enumerate_connected(args.n))
    else:
        try:
            graphs = read_graph6_file(args.corpus)
        except OSError as exc:
            raise InputError(f"cannot read {args.corpus}: {exc.strerror or exc}") from None
        if not graphs:
            raise InputError(f"{args.corpus}: empty corpus")
        val = validate_corpus(graphs, check_isomorphism=not args.skip_validation)
        if val.expected is not None and val.count != val.expected:
            print(f"warning: corpus has {val.count} graphs, expected {val.expected} "
                  f"for n={val.orders[0]}", file=sys.stderr)
        if val.duplicates:
            print(f"warning: {len(val.duplicates)} isomorphic duplicate pairs in corpus",
                  file=sys.stderr)
        if val.disconnected:
            raise InputError(f"{len(val.disconnected)} disconnected graphs in corpus "
                             f"(first at index {val.disconnected[0]})")
    records = sweep(graphs, workers=args.workers, diagnostics=not args.no_diagnostics)
    summary = classify_sweep(records)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "records.csv").write_text(records_to_csv(records), encoding="utf-8")
        (out / "scatter.csv").write_text(scatter_csv(records), encoding="utf-8")
        (out / "summary.json").write_text(dump_json(summary.to_dict()), encoding="utf-8")
        print(f"{len(records)} records written to {out}", file=sys.stderr)
    else:
        sys.stdout.write(dump_json(summary.to_dict()))
    if summary.errors:
        return EXIT_NUMERIC
    proved = {b: c for b, c in summary.violations.items() if not is_refuted(b)}
    if proved:
        print("proved bounds violated: " + json.dumps(proved), file=sys.stderr)
        return EXIT_BOUND
    return EXIT_OK


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

def load_classmap(path) -> dict:
    """Filename -> class label, from JSON (object) or two-column CSV."""
    if path is None:
        return {}
    text = _read_text(path)
    if path.endswith(".json"):
        data = json.loads(text)
        if not isinstance(data, dict):
            raise InputError("class map JSON must be an object")
        return {str(k): str(v) for k, v in data.items()}
    out = {}
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].startswith("#"):
            continue
        if len(row) < 2:
            raise InputError(f"class map row needs two columns: {row}")
        out[row[0].strip()] = row[1].strip()
    return out


def _network_row(path: Path):
    try:
        g = parse_edge_list(path.read_text(encoding="utf-8"))
        g, reduced = _reduce(g, True)
        return {
            "file": path.name, "n": g.n, "m": g.m, "largest_component": reduced,
            "E1": relative_efficiency(g, Bias.REPELLING),
            "Em1": relative_efficiency(g, Bias.ATTRACTING),
        }, None
    except (ParseError, GraphError, OSError, UnicodeDecodeError) as exc:
        return None, {"file": path.name, "error": f"{type(exc).__name__}: {exc}"}


def _mean_std(xs):
    xs = np.asarray(xs, dtype=float)
    std = float(xs.std(ddof=1)) if len(xs) > 1 else None
    return float(xs.mean()), std


def efficiency_table(rows, classmap) -> list:
    """Per-class ``(type, number, E1 mean, std, E-1 mean, std)``; sample std, None for one member."""
    groups = {}
    for r in rows:
        groups.setdefault(r["class"], []).append(r)
    table = []
    for label in sorted(groups):
        rs = groups[label]
        e1, s1 = _mean_std([r["E1"] for r in rs])
        em1, sm1 = _mean_std([r["Em1"] for r in rs])
        table.append({"type": label, "number": len(rs), "E1_mean": e1, "E1_std": s1,
                      "Em1_mean": em1, "Em1_std": sm1})
    return table


def cmd_report(args) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        raise InputError(f"{root} is not a directory")
    classmap = load_classmap(args.classmap)
    files = sorted(p for p in root.iterdir() if p.is_file() and not p.name.startswith("."))
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        results = list(pool.map(_network_row, files))
    rows, exceptions = [], []
    for row, err in results:
        if err is not None:
            exceptions.append(err)
            continue
        row["class"] = classmap.get(row["file"], "unclassified")
        rows.append(row)
        if row["largest_component"]:
            exceptions.append({"file": row["file"],
                               "note": "disconnected; largest connected component analysed"})
    rep = {"networks": rows, "classes": efficiency_table(rows, classmap),
           "exceptions": exceptions}
    _emit(dump_json(rep), args.out)
    if args.table:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["type", "number", "E1_mean", "E1_std", "Em1_mean", "Em1_std"])
        for t in rep["classes"]:
            w.writerow([t["type"], t["number"]] + [
                "" if t[k] is None else f"{t[k]:.12g}"
                for k in ("E1_mean", "E1_std", "Em1_mean", "Em1_std")])
        Path(args.table).write_text(buf.getvalue(), encoding="utf-8")
    return EXIT_OK


# ---------------------------------------------------------------------------
# walk
# ---------------------------------------------------------------------------

def cmd_walk(args) -> int:
    g, ident = load_input(args)
    if not g.is_connected():
        raise DisconnectedGraphError("random-walk analysis requires a connected graph")
    for x in (args.v, args.w):
        if not 0 <= x < g.n:
            raise InputError(f"vertex {x} out of range 0..{g.n - 1}")
    if args.v == args.w:
        raise InputError("--v and --w must differ")
    a = as_bias(args.alpha)
    rep = commute_identity_report(g, a).to_dict()
    pair = next(p for p in rep["pairs"] if {p["v"], p["w"]} == {args.v, args.w})
    query = {"v": args.v, "w": args.w, "exact": pair["exact"], "predicted": pair["predicted"],
             "ratio": pair["ratio"]}
    if args.trials > 0:
        est = mc_commute_time(g, a, args.v, args.w, trials=args.trials, seed=args.seed,
                              step_cap=args.step_cap)
        z = (est.mean - pair["exact"]) / est.stderr if est.stderr > 0 else 0.0
        query["monte_carlo"] = {"trials": args.trials, "seed": args.seed,
                                "rng_version": RNG_VERSION, "mean": est.mean,
                                "stderr": est.stderr, "completed": est.completed,
                                "censored": est.censored, "z": z}
    rep["graph"] = ident
    rep["query"] = query
    _emit(dump_json(rep), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_input(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph6", help="graph6 token")
    src.add_argument("--graph6-file", help="file whose first token is a graph6 string ('-' = stdin)")
    src.add_argument("--edges", help="edge-list file, one 'u v' pair per line ('-' = stdin)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hubres", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--config", help="JSON file of default flag values (same keys as flags)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full report for one graph")
    _add_input(p)
    p.add_argument("--alpha", type=int, action="append", choices=(-1, 0, 1),
                   help="bias to include (repeatable; default all three)")
    p.add_argument("--kind", default="group", choices=[k.value for k in PseudoinverseKind],
                   help="pseudoinverse used for resistance matrices")
    p.add_argument("--lcc", action="store_true", help="analyse the largest component if disconnected")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="sweep all connected graphs of one order")
    p.add_argument("--n", type=int, help="built-in enumeration order (2..7)")
    p.add_argument("--corpus", help="graph6 corpus file, one token per line")
    p.add_argument("--out", help="directory for records.csv, scatter.csv and summary.json")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-diagnostics", action="store_true",
                   help="skip the per-graph resistance and group-inverse residual checks")
    p.add_argument("--skip-validation", action="store_true",
                   help="skip the corpus non-isomorphism check")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="relative efficiencies of a directory of edge lists")
    p.add_argument("directory")
    p.add_argument("--classmap", help="JSON object or CSV mapping file name to class")
    p.add_argument("--out", help="JSON report file (default stdout)")
    p.add_argument("--table", help="also write the per-class table as CSV")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("walk", help="exact and Monte Carlo commute times")
    _add_input(p)
    p.add_argument("--alpha", type=int, default=0, choices=(-1, 0, 1))
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--trials", type=int, default=100_000, help="0 disables Monte Carlo")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-cap", type=int, default=1_000_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_walk)
    return ap


def _apply_config(ap, argv):
    """Load ``--config`` and install its keys as subcommand defaults."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        cfg = json.loads(Path(known.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot load config {known.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise InputError("config must be a JSON object")
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    sub = next(a for a in ap._actions if isinstance(a, argparse._SubParsersAction))
    for p in sub.choices.values():
        dests = {a.dest for a in p._actions}
        p.set_defaults(**{k: v for k, v in cfg.items() if k in dests})
        # a config value satisfies a required flag
        for a in p._actions:
            if a.dest in cfg:
                a.required = False
        for grp in p._mutually_exclusive_groups:
            if any(a.dest in cfg for a in grp._group_actions):
                grp.required = False


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    try:
        _apply_config(ap, argv)
        args = ap.parse_args(argv)
        return args.func(args)
    except (InputError, ParseError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, NumericalError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

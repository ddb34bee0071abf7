"""Command-line front end.

Subcommands cover the individual stages (``build``, ``prox``, ``mds``,
``factor``, ``layout``), free-form chains (``pipeline``), and three
self-contained demonstrations (``demo``).  Every run writes a JSON report
with the input hash, configuration, and fit statistics; identical
invocations produce byte-identical reports apart from the timestamp.

Exit codes: 0 success, 1 data error (message carries the module-qualified
error name), 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import factor as factor_mod
from . import ingest, layout as layout_mod, matrices, proximity
from .errors import CocmapError
from .mds import MdsConfig, mds, procrustes_align
from .matrices import CooccurrenceMatrix, OccurrenceMatrix, ProximityMatrix

class UsageError(Exception):
    pass


# pipeline step -> (input kind, output kind)
STEP_KINDS = {
    "cooccurrence": ("occurrence", "cooccurrence"),
    "affiliations": ("occurrence", "cooccurrence"),
    "pearson": ("occurrence", "proximity"),
    "shift": ("proximity", "proximity"),
    "cosine": ("occurrence", "proximity"),
    "jaccard": ("occurrence", "proximity"),
    "euclidean": ("occurrence", "proximity"),
    "to-dissimilarity": ("proximity", "proximity"),
    "mds": ("proximity", "configuration"),
    "factor": ("occurrence", "loadings"),
    "layout": ("cooccurrence", "layout"),
}

DEMOS = ("cities-correct", "cities-distorted", "figure3")


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _hash_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _write(path: Path, text: str) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return str(path)


def _write_report(out_dir: Path, name: str, report: dict) -> str:
    report = dict(report)
    report["timestamp"] = _utc_now()
    return _write(out_dir / f"{name}_report.json",
                  json.dumps(report, sort_keys=True, indent=2) + "\n")


def _coords_csv(labels, coords) -> str:
    lines = ["label," + ",".join(f"dim{i + 1}" for i in range(coords.shape[1]))]
    for label, row in zip(labels, np.asarray(coords)):
        quoted = f'"{label}"' if "," in label else label
        lines.append(quoted + "," + ",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def _load_occurrence(args) -> tuple[OccurrenceMatrix, str]:
    if args.builtin:
        data = ingest.builtin_dataset(args.builtin)
        if not isinstance(data, OccurrenceMatrix):
            raise CocmapError(f"builtin {args.builtin!r} is not an occurrence matrix")
        return data, _hash_text(args.builtin)
    text = Path(args.input).read_text(encoding="utf-8")
    if args.format == "records":
        return ingest.parse_records(text), _hash_text(text)
    return ingest.parse_rectangular_matrix(text), _hash_text(text)


def _load_proximity(args) -> tuple[ProximityMatrix, str]:
    # --kind declares how to read the matrix; omitted, a file is read as a
    # dissimilarity and a builtin keeps its natural kind (counts: similarity)
    declared = {"sim": "similarity", "dissim": "dissimilarity", None: None}[args.kind]
    if args.builtin:
        data = ingest.builtin_dataset(args.builtin)
        if isinstance(data, CooccurrenceMatrix):
            data = ProximityMatrix(
                data.labels, np.asarray(data.data, dtype=float),
                kind=declared or "similarity", level=args.level,
            )
        if not isinstance(data, ProximityMatrix):
            raise CocmapError(f"builtin {args.builtin!r} is not a proximity matrix")
        if declared and declared != data.kind:
            data = ProximityMatrix(data.labels, data.data, kind=declared,
                                   level=args.level)
        return data, _hash_text(args.builtin)
    text = Path(args.input).read_text(encoding="utf-8")
    return (
        ingest.parse_square_matrix(text, declared or "dissimilarity", args.level),
        _hash_text(text),
    )


def _load_cooccurrence(args) -> tuple[CooccurrenceMatrix, str]:
    if args.builtin:
        data = ingest.builtin_dataset(args.builtin)
        if not isinstance(data, CooccurrenceMatrix):
            raise CocmapError(f"builtin {args.builtin!r} is not a co-occurrence matrix")
        return data, _hash_text(args.builtin)
    text = Path(args.input).read_text(encoding="utf-8")
    data = ingest.parse_square_matrix(text, "counts")
    return data, _hash_text(text)


def _mds_config(args) -> MdsConfig:
    return MdsConfig(
        dimensions=args.dims,
        level=args.level,
        init=args.init,
        seed=args.seed,
        max_iterations=args.max_iter,
        epsilon=args.epsilon,
    )


def _diag_policy(args) -> str:
    return "zeroed" if args.diag_policy == "zero" else "raw"


def _run_layout(graph, out_dir: Path, name: str, report_extra: dict) -> dict:
    result = layout_mod.kamada_kawai(graph)
    outputs = [
        _write(out_dir / f"{name}.net", layout_mod.export_pajek(graph, result)),
        _write(out_dir / f"{name}.svg", layout_mod.export_svg(graph, result)),
    ]
    report = {
        "results": {
            "final_energy": result.final_energy,
            "iterations": result.iterations,
            "nodes": graph.n,
            "edges": len(graph.edges),
        },
        "outputs": outputs,
        **report_extra,
    }
    outputs.append(_write_report(out_dir, name, report))
    return report


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_build(args) -> int:
    A, digest = _load_occurrence(args)
    out_dir = Path(args.out)
    derive = args.derive
    if derive == "occurrence":
        result = A
        text = ingest.serialize_rectangular_matrix(A)
    elif derive == "cooccurrence":
        result = matrices.cooccurrence(A, _diag_policy(args))
        text = ingest.serialize_square_matrix(result)
    else:
        result = matrices.affiliations(A)
        text = ingest.serialize_square_matrix(result)
    path = _write(out_dir / f"{derive}.csv", text)
    _write_report(out_dir, "build", {
        "command": "build",
        "config": {"derive": derive, "diag": args.diag_policy},
        "inputs": {"sha256": digest},
        "outputs": [path],
    })
    print(f"wrote {path}")
    return 0


def _cmd_prox(args) -> int:
    A, digest = _load_occurrence(args)
    out_dir = Path(args.out)
    measure = args.measure
    if measure == "pearson":
        P = proximity.pearson_columns(A, level=args.level)
        if args.shift:
            P = proximity.shift_pearson(P)
    elif measure == "cosine":
        P = proximity.cosine_columns(A, level=args.level)
    elif measure == "jaccard":
        P = proximity.jaccard_columns(A, level=args.level)
    else:
        P = proximity.euclidean_columns(A, level=args.level)
    path = _write(out_dir / f"{measure}.csv", ingest.serialize_square_matrix(P))
    _write_report(out_dir, "prox", {
        "command": "prox",
        "config": {"measure": measure, "shift": bool(args.shift), "level": args.level},
        "inputs": {"sha256": digest},
        "outputs": [path],
    })
    print(f"wrote {path}")
    return 0


def _cmd_mds(args) -> int:
    P, digest = _load_proximity(args)
    cfg = _mds_config(args)
    result = mds(P, cfg)
    out_dir = Path(args.out)
    coords_path = _write(out_dir / "configuration.csv",
                         _coords_csv(result.labels, result.coords))
    report = {
        "command": "mds",
        "config": {
            "dimensions": cfg.dimensions, "level": cfg.level, "init": cfg.init,
            "seed": cfg.seed, "max_iterations": cfg.max_iterations,
            "epsilon": cfg.epsilon, "kind": P.kind,
        },
        "inputs": {"sha256": digest},
        "results": {
            "stress": result.stress,
            "iterations": result.iterations_used,
            "converged": result.converged,
        },
        "outputs": [coords_path],
    }
    _write_report(out_dir, "mds", report)
    print(f"normalized raw stress: {result.stress:.6f} "
          f"({result.iterations_used} iterations)")
    return 0


def _cmd_factor(args) -> int:
    A, digest = _load_occurrence(args)
    n_factors = "auto" if args.factors is None else args.factors
    L = factor_mod.pca_from_occurrence(A, n_factors)
    if args.rotate == "varimax":
        L = factor_mod.varimax(L, kaiser_normalize=args.kaiser)
    out_dir = Path(args.out)
    csv_path = _write(out_dir / "loadings.csv", factor_mod.loadings_to_csv(L))
    table_path = _write(out_dir / "loadings.txt", factor_mod.format_loadings(L))
    _write_report(out_dir, "factor", {
        "command": "factor",
        "config": {"factors": n_factors, "rotate": args.rotate, "kaiser": args.kaiser},
        "inputs": {"sha256": digest},
        "results": {
            "eigenvalues": list(L.eigenvalues),
            "explained_variance_pct": list(L.explained_variance_pct),
            "rotation_iterations": L.rotation_iterations,
        },
        "outputs": [csv_path, table_path],
    })
    print(factor_mod.format_loadings(L), end="")
    return 0


def _cmd_layout(args) -> int:
    M, digest = _load_cooccurrence(args)
    graph = layout_mod.graph_from_cooccurrence(M, args.threshold)
    report = _run_layout(graph, Path(args.out), "layout", {
        "command": "layout",
        "config": {"threshold": args.threshold},
        "inputs": {"sha256": digest},
    })
    print(f"energy {report['results']['final_energy']:.6f} "
          f"after {report['results']['iterations']} vertex passes")
    return 0


def _cmd_pipeline(args) -> int:
    steps = [s.strip() for s in args.steps.split(",") if s.strip()]
    if not steps:
        raise UsageError("pipeline needs at least one step")
    for s in steps:
        if s not in STEP_KINDS:
            raise UsageError(f"unknown step {s!r}; choose from {sorted(STEP_KINDS)}")
    # validate the chain before touching any data
    current = "occurrence"
    for s in steps:
        expected, produced = STEP_KINDS[s]
        if expected != current:
            raise UsageError(
                f"step {s!r} needs {expected} input but would receive {current}"
            )
        current = produced
    A, digest = _load_occurrence(args)
    out_dir = Path(args.out)
    value = A
    outputs: list[str] = []
    results: dict = {}
    for s in steps:
        if s == "cooccurrence":
            value = matrices.cooccurrence(value, _diag_policy(args))
            outputs.append(_write(out_dir / "cooccurrence.csv",
                                  ingest.serialize_square_matrix(value)))
        elif s == "affiliations":
            value = matrices.affiliations(value)
            outputs.append(_write(out_dir / "affiliations.csv",
                                  ingest.serialize_square_matrix(value)))
        elif s == "pearson":
            value = proximity.pearson_columns(value, level=args.level)
        elif s == "shift":
            value = proximity.shift_pearson(value)
        elif s == "cosine":
            value = proximity.cosine_columns(value, level=args.level)
        elif s == "jaccard":
            value = proximity.jaccard_columns(value, level=args.level)
        elif s == "euclidean":
            value = proximity.euclidean_columns(value, level=args.level)
        elif s == "to-dissimilarity":
            value = proximity.to_dissimilarity(value)
        elif s == "mds":
            cfg = _mds_config(args)
            config = mds(value, cfg)
            outputs.append(_write(out_dir / "configuration.csv",
                                  _coords_csv(config.labels, config.coords)))
            results["stress"] = config.stress
            results["iterations"] = config.iterations_used
            value = config
        elif s == "factor":
            n_factors = "auto" if args.factors is None else args.factors
            L = factor_mod.pca_from_occurrence(value, n_factors)
            if args.rotate == "varimax":
                L = factor_mod.varimax(L, kaiser_normalize=args.kaiser)
            outputs.append(_write(out_dir / "loadings.csv",
                                  factor_mod.loadings_to_csv(L)))
            value = L
        elif s == "layout":
            graph = layout_mod.graph_from_cooccurrence(value, args.threshold)
            result = layout_mod.kamada_kawai(graph)
            outputs.append(_write(out_dir / "layout.net",
                                  layout_mod.export_pajek(graph, result)))
            outputs.append(_write(out_dir / "layout.svg",
                                  layout_mod.export_svg(graph, result)))
            results["final_energy"] = result.final_energy
            value = result
        if isinstance(value, ProximityMatrix) and s in (
            "pearson", "shift", "cosine", "jaccard", "euclidean", "to-dissimilarity",
        ):
            outputs.append(_write(out_dir / f"{s}.csv",
                                  ingest.serialize_square_matrix(value)))
    _write_report(out_dir, "pipeline", {
        "command": "pipeline",
        "config": {"steps": steps, "level": args.level, "dims": args.dims,
                   "diag": args.diag_policy, "threshold": args.threshold},
        "inputs": {"sha256": digest},
        "results": results,
        "outputs": outputs,
    })
    print(f"pipeline complete: {', '.join(steps)}")
    return 0


def _cmd_demo(args) -> int:
    out_dir = Path(args.out)
    if args.name == "cities-correct":
        cities = ingest.builtin_dataset("cities")
        result = mds(cities, MdsConfig(dimensions=2, level="ratio"))
        coords_path = _write(out_dir / "cities_map.csv",
                             _coords_csv(result.labels, result.coords))
        svg = _map_svg(result.labels, result.coords)
        svg_path = _write(out_dir / "cities_map.svg", svg)
        _write_report(out_dir, "demo_cities_correct", {
            "command": "demo cities-correct",
            "config": {"level": "ratio", "dimensions": 2},
            "inputs": {"builtin": "cities"},
            "results": {"stress": result.stress,
                        "iterations": result.iterations_used},
            "outputs": [coords_path, svg_path],
        })
        print(f"ten-city map recovered; normalized raw stress = {result.stress:.6f}")
        return 0
    if args.name == "cities-distorted":
        cities = ingest.builtin_dataset("cities")
        correlated = proximity.pearson_of_proximities(cities)
        result = mds(correlated, MdsConfig(dimensions=2, level="ratio"))
        direct = mds(cities, MdsConfig(dimensions=2, level="ratio"))
        _, congruence = procrustes_align(direct.coords, result.coords)
        coords_path = _write(out_dir / "cities_distorted.csv",
                             _coords_csv(result.labels, result.coords))
        svg_path = _write(out_dir / "cities_distorted.svg",
                          _map_svg(result.labels, result.coords))
        _write_report(out_dir, "demo_cities_distorted", {
            "command": "demo cities-distorted",
            "config": {"level": "ratio", "dimensions": 2},
            "inputs": {"builtin": "cities"},
            "results": {"stress": result.stress,
                        "direct_stress": direct.stress,
                        "congruence_with_direct_map": congruence,
                        "iterations": result.iterations_used},
            "outputs": [coords_path, svg_path],
        })
        print("warning: correlating the columns of a matrix that is already a "
              "proximity matrix re-normalizes them against their means and "
              "distorts the map.")
        print(f"distorted stress = {result.stress:.6f} vs direct stress = "
              f"{direct.stress:.6f}; map congruence with the direct solution = "
              f"{congruence:.3f}")
        return 0
    # figure3: Pearson + shift on the bundled 5x4 citation matrix
    A = ingest.builtin_dataset("figure2")
    shifted = proximity.shift_pearson(proximity.pearson_columns(A))
    path = _write(out_dir / "figure3.csv", ingest.serialize_square_matrix(shifted))
    _write_report(out_dir, "demo_figure3", {
        "command": "demo figure3",
        "config": {},
        "inputs": {"builtin": "figure2"},
        "results": {"matrix": [[round(float(v), 6) for v in row]
                               for row in np.asarray(shifted.data)]},
        "outputs": [path],
    })
    labels = shifted.labels
    width = max(len(s) for s in labels)
    print(" " * width + "".join(f"  {s:>6}" for s in labels))
    for label, row in zip(labels, np.asarray(shifted.data)):
        print(f"{label:<{width}}" + "".join(f"  {v:6.3f}" for v in row))
    return 0


def _map_svg(labels, coords) -> str:
    """Point-and-label SVG for a 2-D configuration (no edges)."""
    graph = layout_mod.WeightedGraph(tuple(labels), ())
    result = layout_mod.LayoutResult(np.asarray(coords)[:, :2], 0.0, 0)
    return layout_mod.export_svg(graph, result)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cocmap",
        description="Build occurrence/co-occurrence/proximity matrices from "
                    "citation-style data and map them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p, *, occurrence=False):
        p.add_argument("--in", dest="input", help="input file")
        p.add_argument("--builtin", choices=("cities", "figure1", "figure2"),
                       help="use a bundled dataset instead of a file")
        if occurrence:
            p.add_argument("--format", choices=("records", "matrix"),
                           default="records",
                           help="occurrence input format (default records)")

    def add_common(p):
        p.add_argument("--out", default="out", help="output directory")

    def add_mds_flags(p):
        p.add_argument("--level", choices=("ratio", "interval", "ordinal"),
                       default="ratio")
        p.add_argument("--dims", type=int, default=2)
        p.add_argument("--init", choices=("classical", "random"), default="classical")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--max-iter", type=int, default=1000)
        p.add_argument("--epsilon", type=float, default=1e-6)

    p = sub.add_parser("build", help="derive count matrices from records")
    add_input(p, occurrence=True)
    add_common(p)
    p.add_argument("--derive", choices=("occurrence", "cooccurrence", "affiliations"),
                   default="cooccurrence")
    p.add_argument("--diag", dest="diag_policy", choices=("raw", "zero"),
                   default="raw")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("prox", help="derive a proximity matrix from records")
    add_input(p, occurrence=True)
    add_common(p)
    p.add_argument("--measure", choices=("pearson", "cosine", "jaccard", "euclidean"),
                   default="pearson")
    p.add_argument("--shift", action="store_true",
                   help="apply the (r+1)/2 shift after Pearson")
    p.add_argument("--level", choices=("ratio", "interval", "ordinal"),
                   default="ratio")
    p.set_defaults(func=_cmd_prox)

    p = sub.add_parser("mds", help="scale a proximity matrix")
    add_input(p)
    add_common(p)
    add_mds_flags(p)
    p.add_argument("--kind", choices=("sim", "dissim"), default=None,
                   help="how to read the input matrix (default: dissimilarity "
                        "for files, the natural kind for builtins)")
    p.set_defaults(func=_cmd_mds)

    p = sub.add_parser("factor", help="principal-component factor analysis")
    add_input(p, occurrence=True)
    add_common(p)
    p.add_argument("--factors", type=int, default=None,
                   help="factor count (default: Kaiser criterion)")
    p.add_argument("--rotate", choices=("none", "varimax"), default="varimax")
    kaiser = p.add_mutually_exclusive_group()
    kaiser.add_argument("--kaiser", dest="kaiser", action="store_true", default=True)
    kaiser.add_argument("--no-kaiser", dest="kaiser", action="store_false")
    p.set_defaults(func=_cmd_factor)

    p = sub.add_parser("layout", help="spring-embed a co-occurrence matrix")
    add_input(p)
    add_common(p)
    p.add_argument("--threshold", type=int, default=1)
    p.set_defaults(func=_cmd_layout)

    p = sub.add_parser("pipeline", help="run an ordered chain of steps")
    add_input(p, occurrence=True)
    add_common(p)
    p.add_argument("--steps", required=True,
                   help="comma-separated steps, e.g. 'pearson,shift,mds'")
    p.add_argument("--diag", dest="diag_policy", choices=("raw", "zero"),
                   default="raw")
    p.add_argument("--threshold", type=int, default=1)
    p.add_argument("--factors", type=int, default=None)
    p.add_argument("--rotate", choices=("none", "varimax"), default="varimax")
    p.add_argument("--kaiser", dest="kaiser", action="store_true", default=True)
    p.add_argument("--no-kaiser", dest="kaiser", action="store_false")
    add_mds_flags(p)
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("demo", help="run a bundled demonstration")
    p.add_argument("name", choices=DEMOS)
    add_common(p)
    p.set_defaults(func=_cmd_demo)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "input", None) is None and getattr(args, "builtin", None) is None \
                and args.command in ("build", "prox", "mds", "factor", "layout", "pipeline"):
            raise UsageError("provide --in FILE or --builtin NAME")
        if getattr(args, "init", None) == "random" and args.seed is None:
            raise UsageError("--init random requires an explicit --seed")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except CocmapError as exc:
        print(f"error: {exc.qualified_name}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())

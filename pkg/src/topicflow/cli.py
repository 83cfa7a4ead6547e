"""Command-line driver: run the pipeline, export figures' data, serve, re-prune.

Exit codes: 0 success, 1 validation problem (bad config, missing files,
bad arguments), 2 runtime failure. Progress and errors go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import jsonutil
from .bundle import AnalysisBundle
from .config import DEFAULT_CONFIG_TOML, load_run_config
from .corpus import load_corpus
from .errors import InvalidSpecError, InvalidZetaError, IoError, TopicflowError
from .events import overlap_statistics
from .pipeline import run_analysis
from .relatedness import MEASURES, prune

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_run(args: argparse.Namespace) -> int:
    try:
        config = load_run_config(args.config)
        if args.seed is not None:
            config.hdp = config.hdp.with_seed(args.seed)
        config.validate()
    except TopicflowError as exc:
        _log(f"error: {exc}")
        return EXIT_VALIDATION

    try:
        docs = load_corpus(config.corpus_path, config.corpus_format)
        _log(f"loaded {len(docs)} documents from {config.corpus_path}")
        bundle = run_analysis(
            docs,
            config.epoch_spec,
            config.load_stopwords(),
            config.load_lexicon(),
            config.energy_fraction,
            config.hdp,
            config.zetas,
            jobs=args.jobs,
            progress=_log,
        )
        bundle.save(config.output_path)
    except TopicflowError as exc:
        _log(f"error: {exc}")
        return EXIT_RUNTIME
    _log(f"bundle written to {config.output_path} (hash {bundle.content_hash[:12]})")
    return EXIT_OK


def _load_bundle(path: str) -> AnalysisBundle:
    return AnalysisBundle.load(path)


def _export_scatter(bundle: AnalysisBundle, out: Path) -> None:
    """Pre-pruning edge strengths, one row per adjacent-epoch topic pair."""
    graphs = [bundle.graphs[m] for m in ("bhattacharyya", "kld_forward", "kld_backward")]
    with out.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bc", "kld_forward", "kld_backward"])
        for bc_e, fw_e, bw_e in zip(*(g.edges for g in graphs)):
            writer.writerow(
                [format(bc_e.raw_weight, ".17g"),
                 format(fw_e.raw_weight, ".17g"),
                 format(bw_e.raw_weight, ".17g")]
            )


def _export_overlap(bundle: AnalysisBundle, out: Path, kld_measure: str) -> None:
    report = overlap_statistics(bundle.graphs["bhattacharyya"], bundle.graphs[kld_measure])
    with out.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch_pair", "bhd_edges", "kld_edges", "shared", "bhd_norm", "kld_norm"])
        for p in report.pairs:
            writer.writerow(
                [f"{p.earlier_epoch}-{p.later_epoch}", p.bhd_edge_count, p.kld_edge_count,
                 p.shared_count, format(p.bhd_normalized, ".17g"), format(p.kld_normalized, ".17g")]
            )


def cmd_export(args: argparse.Namespace) -> int:
    try:
        bundle = _load_bundle(args.bundle)
    except TopicflowError as exc:
        _log(f"error: {exc}")
        return EXIT_VALIDATION
    out = Path(args.out)
    try:
        if args.what == "scatter":
            _export_scatter(bundle, out)
        elif args.what == "overlap":
            measure = args.measure or "kld_forward"
            if measure not in ("kld_forward", "kld_backward"):
                _log("error: overlap compares the BHD graph against a KLD graph")
                return EXIT_VALIDATION
            _export_overlap(bundle, out, measure)
        elif args.what == "graph":
            measure = args.measure or "bhattacharyya"
            if measure not in MEASURES:
                _log(f"error: unknown measure {measure!r}")
                return EXIT_VALIDATION
            graph = bundle.graphs[measure]
            if args.zeta is not None:
                graph = prune(graph, args.zeta)
            out.write_bytes(jsonutil.dump_bytes(graph.to_jsonable()))
        elif args.what == "events":
            out.write_bytes(jsonutil.dump_bytes([e.to_jsonable() for e in bundle.events]))
        else:  # pragma: no cover - argparse restricts choices
            return EXIT_VALIDATION
    except (InvalidZetaError, InvalidSpecError) as exc:
        _log(f"error: {exc}")
        return EXIT_VALIDATION
    except OSError as exc:
        _log(f"error: cannot write {out}: {exc}")
        return EXIT_VALIDATION
    _log(f"wrote {args.what} to {out}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        bundle = _load_bundle(args.bundle)
    except TopicflowError as exc:
        _log(f"error: {exc}")
        return EXIT_VALIDATION

    import uvicorn

    from .service import create_app

    app = create_app(bundle)
    _log(f"serving bundle {bundle.content_hash[:12]} on port {args.port}")
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit as exc:  # uvicorn signals port problems this way
        return EXIT_VALIDATION if exc.code else EXIT_OK
    except OSError as exc:
        _log(f"error: {exc}")
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_reprune(args: argparse.Namespace) -> int:
    if args.measure not in MEASURES:
        _log(f"error: unknown measure {args.measure!r}")
        return EXIT_VALIDATION
    try:
        bundle = _load_bundle(args.bundle)
        repruned = bundle.reprune(args.measure, args.zeta)
        repruned.save(args.bundle)
    except (InvalidZetaError, InvalidSpecError, IoError) as exc:
        _log(f"error: {exc}")
        return EXIT_VALIDATION
    except TopicflowError as exc:
        _log(f"error: {exc}")
        return EXIT_RUNTIME
    surviving = len(repruned.graphs[args.measure].surviving_edges())
    _log(
        f"re-pruned {args.measure} at zeta={args.zeta}: {surviving} surviving edges, "
        f"hash {repruned.content_hash[:12]}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topicflow",
        description="Temporal topic extraction and lineage tracking",
    )
    parser.add_argument(
        "--print-default-config",
        action="store_true",
        help="print a commented default run configuration and exit",
    )
    sub = parser.add_subparsers(dest="command")

    p_run = sub.add_parser("run", help="run the full analysis pipeline")
    p_run.add_argument("--config", required=True, help="TOML run configuration")
    p_run.add_argument("--jobs", type=int, default=1, help="parallel epoch fits")
    p_run.add_argument("--seed", type=int, default=None, help="override the configured seed")
    p_run.set_defaults(func=cmd_run)

    p_export = sub.add_parser("export", help="export figure data from a bundle")
    p_export.add_argument("--bundle", required=True)
    p_export.add_argument(
        "--what", required=True, choices=["scatter", "overlap", "graph", "events"]
    )
    p_export.add_argument("--out", required=True)
    p_export.add_argument("--zeta", type=float, default=None, help="re-prune view for graph export")
    p_export.add_argument("--measure", default=None, help="graph/overlap measure selection")
    p_export.set_defaults(func=cmd_export)

    p_serve = sub.add_parser("serve", help="serve a bundle over HTTP")
    p_serve.add_argument("--bundle", required=True)
    p_serve.add_argument("--port", type=int, required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.set_defaults(func=cmd_serve)

    p_reprune = sub.add_parser("reprune", help="re-prune a bundle at a new operating point")
    p_reprune.add_argument("--bundle", required=True)
    p_reprune.add_argument("--measure", required=True)
    p_reprune.add_argument("--zeta", type=float, required=True)
    p_reprune.set_defaults(func=cmd_reprune)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.print_default_config:
        print(DEFAULT_CONFIG_TOML, end="")
        return EXIT_OK
    if not getattr(args, "command", None):
        parser.print_help(sys.stderr)
        return EXIT_VALIDATION
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

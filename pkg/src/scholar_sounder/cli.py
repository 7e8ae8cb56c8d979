"""Command-line orchestration: load config, run soundings, run analysis,
write exports and a run manifest.

Exit codes: 0 success, 1 config error, 2 fetch/parse failure that aborted
the run, 3 completed with warnings (recorded in the manifest).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import TOOL_NAME, __version__, bundled_fixtures_dir
from .analysis import connected_components, degree_stats, detect_communities, k_core, top_clusters
from .config import Config, build_config, read_config_file
from .coauthor_graph import sound_authors
from .errors import ConfigError, FormatError, ScholarSounderError, SoundingError
from .export import from_gexf, make_bundle, to_edge_csv, to_gexf, to_graphml, to_json_report
from .fetcher import Fetcher
from .notion_graph import sound_tags, write_trace
from .parser import parse_author_page, parse_label_page

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_ABORTED = 2
EXIT_PARTIAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL_NAME, description=__doc__)
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--mode", choices=["live", "fixture"])
        p.add_argument("--fixtures", help="fixture corpus dir, or 'bundled'")
        p.add_argument("--cache", help="cache dir for live mode")
        p.add_argument("--out", help="output directory")
        p.add_argument("--depth", type=int)
        p.add_argument("--hop-limit", type=int, dest="hop_limit")
        p.add_argument("--delay-ms", type=int, dest="delay_ms")
        p.add_argument("--max-pages", type=int, dest="max_pages")
        p.add_argument("--seed", type=int)
        p.add_argument("--verbose", action="store_true")

    for name, help_text in [
        ("sound-tags", "build the tag notion network"),
        ("sound-authors", "build the co-authorship network"),
        ("all", "sound both networks, analyze, and export"),
    ]:
        p = sub.add_parser(name, help=help_text)
        add_run_flags(p)

    p = sub.add_parser("analyze", help="analyze an exported GEXF graph")
    p.add_argument("--in", dest="input", required=True, help="GEXF file")
    p.add_argument("--k-core", type=int, dest="kcore")
    p.add_argument("--min-weight", type=float, dest="min_weight", default=0.0)
    p.add_argument("--communities", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--verbose", action="store_true")

    p = sub.add_parser("export", help="re-emit an exported graph in another format")
    p.add_argument("--in", dest="input", required=True, help="GEXF file")
    p.add_argument("--format", choices=["gexf", "graphml", "csv", "json"], required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--verbose", action="store_true")

    return parser


def _merge_flags(data: dict, args) -> dict:
    """Overlay CLI flags onto the raw config mapping (flags win), so the
    merged result goes through the one validation path in build_config."""
    fetch = dict(data.get("fetch", {}))
    if getattr(args, "mode", None):
        fetch["mode"] = args.mode
    if getattr(args, "fixtures", None):
        fetch["fixtures_dir"] = (
            str(bundled_fixtures_dir()) if args.fixtures == "bundled" else args.fixtures
        )
    if getattr(args, "cache", None):
        fetch["cache_dir"] = args.cache
    if getattr(args, "delay_ms", None) is not None:
        fetch["min_delay_ms"] = args.delay_ms
    if getattr(args, "max_pages", None) is not None:
        fetch["max_pages_per_label"] = args.max_pages
    merged = dict(data)
    merged["fetch"] = fetch
    if getattr(args, "out", None):
        merged["out_dir"] = args.out
    if getattr(args, "depth", None) is not None:
        merged["depth"] = args.depth
    if getattr(args, "hop_limit", None) is not None:
        merged["hop_limit"] = args.hop_limit
    if getattr(args, "seed", None) is not None:
        merged["seed"] = args.seed
    return merged


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class RunContext:
    def __init__(self, config: Config):
        self.config = config
        self.started_at = datetime.now(timezone.utc).isoformat()
        self.outputs: list[Path] = []
        self.warnings = 0
        self.fetcher = Fetcher(config.fetch)
        config.out_dir.mkdir(parents=True, exist_ok=True)

    def write(self, name: str, text: str) -> Path:
        path = self.config.out_dir / name
        path.write_text(text, "utf-8")
        self.outputs.append(path)
        return path

    def finish_manifest(self):
        manifest = {
            "config_digest": self.config.digest(),
            "tool_version": f"{TOOL_NAME} {__version__}",
            "started_at": self.started_at,
            "finished_at": datetime.now(timezone.utc).isoformat(),
            "counts": {
                "pages_fetched": self.fetcher.pages_fetched,
                "cache_hits": self.fetcher.cache_hits,
                "warnings": self.warnings,
            },
            "outputs": [
                {"path": p.name, "sha256": _sha256(p)} for p in sorted(set(self.outputs))
            ],
        }
        path = self.config.out_dir / "run_manifest.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8")
        os.replace(tmp, path)


def _analysis_sections(graph, seed: int, kcore=None, min_weight=0.0, communities=True) -> dict:
    sections: dict = {}
    stats = degree_stats(graph)
    sections["degree_stats"] = {
        "degree": stats.degree,
        "weighted_degree": {n: _jsnum(w) for n, w in stats.weighted_degree.items()},
        "histogram": {str(k): v for k, v in sorted(stats.histogram.items())},
    }
    sections["components"] = [sorted(c) for c in connected_components(graph)]
    if communities:
        partition = detect_communities(graph, seed=seed)
        clusters = top_clusters(graph, partition, n=max(1, len(set(partition.assignment.values()) or {0})))
        sections["communities"] = {
            "count": len(set(partition.assignment.values())),
            "assignment": partition.assignment,
        }
        sections["top_clusters"] = [
            {
                "community_id": c.community_id,
                "size": c.size,
                "members": c.members,
                "internal_edges": c.internal_edges,
                "internal_weight": _jsnum(c.internal_weight),
            }
            for c in clusters
        ]
    if kcore is not None:
        core = k_core(graph, kcore, min_weight)
        sections["kcore"] = {
            "k": kcore,
            "min_weight": _jsnum(min_weight),
            "nodes": sorted(core.nodes),
            "edges": len(core.edges),
        }
    return sections


def _jsnum(x):
    f = float(x)
    return int(f) if f.is_integer() else f


def _run_sound_tags(ctx: RunContext) -> dict:
    net = sound_tags(ctx.config, ctx.fetcher.fetch, parse_label_page)
    graph = net.to_graph()
    bundle = make_bundle(graph, ctx.config.digest(), f"{TOOL_NAME} {__version__}")
    ctx.write("notion.gexf", to_gexf(bundle))
    ctx.write("notion.graphml", to_graphml(bundle))
    ctx.write("edges_notion.csv", to_edge_csv(bundle))
    trace_path = ctx.config.out_dir / "trace.tsv"
    write_trace(net.trace, trace_path)
    ctx.outputs.append(trace_path)
    return _analysis_sections(graph, ctx.config.seed)


def _run_sound_authors(ctx: RunContext) -> dict:
    net = sound_authors(
        ctx.config, ctx.fetcher.fetch, parse_author_page, parse_label=parse_label_page
    )
    ctx.warnings += net.report.failures
    graph = net.to_graph()
    bundle = make_bundle(graph, ctx.config.digest(), f"{TOOL_NAME} {__version__}")
    ctx.write("coauthors.gexf", to_gexf(bundle))
    ctx.write("coauthors.graphml", to_graphml(bundle))
    ctx.write("edges_coauthors.csv", to_edge_csv(bundle))
    trace_path = ctx.config.out_dir / "trace.tsv"
    report_lines = [
        f"# profiles_fetched={net.report.profiles_fetched}",
        f"# stubs={net.report.stubs}",
        f"# failures={net.report.failures}",
        f"# reciprocal_edges={net.report.reciprocal_edges}",
    ]
    with trace_path.open("a", encoding="utf-8") as fh:
        fh.write("\n".join(report_lines) + "\n")
    if trace_path not in ctx.outputs:
        ctx.outputs.append(trace_path)
    return {
        "coauthors": _analysis_sections(graph, ctx.config.seed),
        "coauthor_run": {
            "profiles_fetched": net.report.profiles_fetched,
            "stubs": net.report.stubs,
            "failures": net.report.failures,
            "reciprocal_edges": net.report.reciprocal_edges,
        },
    }


def _cmd_sound(args, which: str) -> int:
    config = build_config(_merge_flags(read_config_file(args.config), args))
    ctx = RunContext(config)
    try:
        report_sections: dict = {"metadata": {"config_digest": config.digest()}}
        if which in ("sound-tags", "all"):
            report_sections.update(_run_sound_tags(ctx))
        if which in ("sound-authors", "all"):
            report_sections.update(_run_sound_authors(ctx))
    except SoundingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        ctx.finish_manifest()
        return EXIT_ABORTED
    ctx.write("report.json", json.dumps(report_sections, indent=2, sort_keys=True) + "\n")
    ctx.finish_manifest()
    return EXIT_PARTIAL if ctx.warnings else EXIT_OK


def _cmd_analyze(args) -> int:
    try:
        bundle = from_gexf(Path(args.input).read_text("utf-8"))
    except (OSError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ABORTED
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "report.json"
    report = {}
    if report_path.is_file():
        report = json.loads(report_path.read_text("utf-8"))
    sections = _analysis_sections(
        bundle.graph,
        seed=args.seed,
        kcore=args.kcore,
        min_weight=args.min_weight,
        communities=args.communities,
    )
    report.update(sections)
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", "utf-8")
    return EXIT_OK


def _cmd_export(args) -> int:
    try:
        bundle = from_gexf(Path(args.input).read_text("utf-8"))
    except (OSError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ABORTED
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).stem
    if args.format == "gexf":
        (out_dir / f"{stem}.gexf").write_text(to_gexf(bundle), "utf-8")
    elif args.format == "graphml":
        (out_dir / f"{stem}.graphml").write_text(to_graphml(bundle), "utf-8")
    elif args.format == "csv":
        (out_dir / f"edges_{stem}.csv").write_text(to_edge_csv(bundle), "utf-8")
    elif args.format == "json":
        (out_dir / f"{stem}.json").write_text(to_json_report(bundle), "utf-8")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command in ("sound-tags", "sound-authors", "all"):
            return _cmd_sound(args, args.command)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "export":
            return _cmd_export(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ScholarSounderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ABORTED
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())

"""bloat-lens command line.

    bloat-lens <command> <history.json | directory> [--registry FILE] [--out DIR]
               [--format json|csv] [--scope compile,test] [--bots dependabot]
               [--jobs N]

Exit status: 0 success, 1 analysis error (other projects still reported),
2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from . import report
from .errors import BloatLensError
from .ingest import DEFAULT_BOT_PATTERNS, PRERELEASE_MARKERS, load_registry, parse_history
from .model import ANALYZED_SCOPES, ProjectHistory, parse_scope

log = logging.getLogger("bloat_lens")

COMMANDS = ("status", "trend", "patterns", "updates", "origins", "stats", "all")
REGISTRY_NAME = "registry.json"


class UsageError(Exception):
    pass


def _csv_list(text: str) -> list[str]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a non-empty comma-separated list")
    return items


def _jobs(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("--jobs must be >= 1")
    return n


def _default_jobs() -> int:
    try:
        return _jobs(os.environ.get("BLOAT_LENS_JOBS", "1"))
    except (ValueError, argparse.ArgumentTypeError):
        log.warning("ignoring invalid BLOAT_LENS_JOBS=%r", os.environ["BLOAT_LENS_JOBS"])
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", type=Path, help="history file or directory of history files")
    common.add_argument(
        "--registry",
        type=Path,
        help=f"artifact registry (default: {REGISTRY_NAME} next to the input)",
    )
    common.add_argument("--out", type=Path, help="output directory (default: standard output)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument(
        "--scope", type=_csv_list, default=["compile", "test"], help="analyzed scopes"
    )
    common.add_argument(
        "--bots",
        type=_csv_list,
        default=list(DEFAULT_BOT_PATTERNS),
        help="author-name substrings identifying bot commits",
    )
    common.add_argument(
        "--prerelease",
        type=_csv_list,
        default=list(PRERELEASE_MARKERS),
        help="version substrings that disqualify a release",
    )
    common.add_argument(
        "--jobs",
        type=_jobs,
        default=_default_jobs(),
        help="projects analyzed concurrently (env BLOAT_LENS_JOBS)",
    )
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="bloat-lens",
        description="Detect bloated dependencies and analyze their evolution.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "status": "per-snapshot usage status reports",
        "trend": "bloat series, trend labels and monthly averages",
        "patterns": "usage-status transition patterns",
        "updates": "version updates by humans and bots",
        "origins": "origin of each bloat appearance",
        "stats": "descriptive statistics of the projects",
        "all": "every analysis plus a summary document",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _history_paths(args) -> tuple[list[Path], Path]:
    if not args.input.exists():
        raise UsageError(f"no such file or directory: {args.input}")
    base = args.input if args.input.is_dir() else args.input.parent
    registry = args.registry or base / REGISTRY_NAME
    if not registry.is_file():
        raise UsageError(f"registry not found: {registry}")
    if args.input.is_dir():
        paths = sorted(
            p
            for p in args.input.glob("*.json")
            if p.resolve() != registry.resolve() and p.name != REGISTRY_NAME
        )
        if not paths:
            raise UsageError(f"no history files in {args.input}")
    else:
        paths = [args.input]
    return paths, registry


def _load(paths, registry_path, args) -> tuple[list[ProjectHistory], int]:
    registry = load_registry(registry_path)
    scopes = frozenset(parse_scope(s) for s in args.scope) if args.scope else ANALYZED_SCOPES

    def one(path):
        try:
            return parse_history(
                path,
                registry,
                scopes=scopes,
                bot_patterns=args.bots,
                prerelease_markers=args.prerelease,
            )
        except (BloatLensError, OSError) as e:
            print(f"bloat-lens: {path}: {type(e).__name__}: {e}", file=sys.stderr)
            return None

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(one, paths))

    failures = sum(r is None for r in results)
    histories: dict[str, ProjectHistory] = {}
    for path, h in zip(paths, results):
        if h is None:
            continue
        if h.project in histories:
            print(f"bloat-lens: {path}: duplicate project {h.project!r}, skipped", file=sys.stderr)
            failures += 1
            continue
        histories[h.project] = h
    return [histories[name] for name in sorted(histories)], failures


def safe_name(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", text).strip("_") or "_"


def status_reports(histories) -> dict:
    return {h.project: [report.snapshot_report(s) for s in h] for h in histories}


def status_table(histories) -> report.Table:
    rows = []
    for h in histories:
        for s in h:
            doc = report.snapshot_report(s)
            for d in doc["dependencies"]:
                rows.append(
                    (h.project, doc["commit"], doc["timestamp"], doc["kind"],
                     d["coordinate"], d["ga"], d["depth"], d["scope"], d["status"])
                )
    columns = ("project", "commit", "timestamp", "kind", "coordinate", "ga", "depth", "scope", "status")
    return report.Table(columns, tuple(rows))


def write_status(histories, out: Path, fmt: str) -> None:
    if fmt == "csv":
        report.emit_csv(status_table(histories), out / "status.csv")
        return
    for h in histories:
        folder = out / "reports" / safe_name(h.project)
        folder.mkdir(parents=True, exist_ok=True)
        for i, s in enumerate(h):
            name = f"{i:04d}_{safe_name(s.commit_id)}.json"
            (folder / name).write_text(report.dumps(report.snapshot_report(s)), encoding="utf-8")


def write_section(name, doc, tables, out: Path, fmt: str) -> None:
    if fmt == "json":
        (out / f"{name}.json").write_text(report.dumps(doc), encoding="utf-8")
    else:
        for filename, table in tables.items():
            report.emit_csv(table, out / filename)


def print_tables(tables: dict) -> None:
    for i, (filename, table) in enumerate(tables.items()):
        if i:
            sys.stdout.write("\n")
        sys.stdout.write(f"# {filename}\n")
        sys.stdout.write(report.csv_text(table))


def execute(command: str, histories, out: Optional[Path], fmt: str) -> None:
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)

    if command == "status":
        if out is not None:
            write_status(histories, out, fmt)
        elif fmt == "json":
            sys.stdout.write(report.dumps(status_reports(histories)))
        else:
            sys.stdout.write(report.csv_text(status_table(histories)))
        return

    if command == "all":
        summary = {}
        for name, build in report.SECTIONS.items():
            doc, tables = build(histories)
            summary[name] = doc
            if out is not None:
                write_section(name, doc, tables, out, "json")
                write_section(name, doc, tables, out, "csv")
        if out is not None:
            write_status(histories, out, "json")
            write_status(histories, out, "csv")
            (out / "summary.json").write_text(report.dumps(summary), encoding="utf-8")
        else:
            sys.stdout.write(report.dumps(summary))
        return

    doc, tables = report.SECTIONS[command](histories)
    if out is not None:
        write_section(command, doc, tables, out, fmt)
    elif fmt == "json":
        sys.stdout.write(report.dumps(doc))
    else:
        print_tables(tables)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="bloat-lens: %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        paths, registry_path = _history_paths(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"bloat-lens: error: {e}", file=sys.stderr)
        return 2

    try:
        histories, failures = _load(paths, registry_path, args)
        if not histories:
            print("bloat-lens: no project could be analyzed", file=sys.stderr)
            return 1
        execute(args.command, histories, args.out, args.format)
    except (BloatLensError, OSError) as e:
        print(f"bloat-lens: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    return 1 if failures else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

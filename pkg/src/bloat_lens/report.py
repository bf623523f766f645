"""Per-snapshot reports, aggregate tables, descriptive statistics and CSV output."""

from __future__ import annotations

import csv
import io
import json
import statistics
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, NamedTuple, Optional, Sequence

from .errors import EmptyInput, NoBloatedDependencies
from .ingest import format_timestamp
from .model import ActorKind, DepKind, ProjectHistory, Snapshot, UsageStatus
from .timeline import (
    OriginLabel,
    Pattern,
    Trend,
    attribute_updates,
    bloat_appearances,
    bloat_series,
    classify_origin,
    classify_trend,
    compress,
    dependencies_of_kind,
    classify_pattern,
    detect_updates,
    ls_slope,
    remain_bloated_ratio,
    status_series,
    transitive_fallout,
)

KINDS = (DepKind.DIRECT, DepKind.TRANSITIVE)


def dumps(doc: Any) -> str:
    """Canonical JSON text used for every emitted document."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def snapshot_report(snapshot: Snapshot) -> dict:
    deps = sorted(
        (d for d in snapshot.tree if d.coordinate in snapshot.statuses),
        key=lambda d: str(d.coordinate),
    )
    return {
        "commit": snapshot.commit_id,
        "timestamp": format_timestamp(snapshot.timestamp),
        "kind": snapshot.kind.value,
        "dependencies": [
            {
                "coordinate": str(d.coordinate),
                "ga": str(d.ga),
                "depth": d.kind.value,
                "scope": d.scope.label,
                "status": snapshot.statuses[d.coordinate].value,
            }
            for d in deps
        ],
    }


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row {row!r} does not match columns {self.columns!r}")


def csv_text(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def emit_csv(table: Table, path) -> None:
    Path(path).write_text(csv_text(table), encoding="utf-8", newline="")


def _month(ts: datetime) -> tuple[int, int]:
    return ts.year, ts.month


def _next_month(year: int, month: int) -> tuple[int, int]:
    return (year + 1, 1) if month == 12 else (year, month + 1)


def monthly_aggregate(histories: Sequence[ProjectHistory], kind: DepKind) -> Table:
    """Average bloated count per calendar month across projects.

    Each project contributes the count at its latest snapshot up to the end
    of the month; projects with no snapshot yet are left out of that month.
    """
    if not histories:
        raise EmptyInput("no histories")
    series = []
    for h in histories:
        counts = bloat_series(h, kind).values
        series.append([(s.timestamp, c) for s, c in zip(h, counts)])
    first = min(_month(pts[0][0]) for pts in series)
    last = max(_month(pts[-1][0]) for pts in series)

    rows = []
    ym = first
    while ym <= last:
        end = datetime(*_next_month(*ym), 1, tzinfo=timezone.utc)
        values = []
        for pts in series:
            current = None
            for ts, count in pts:
                if ts >= end:
                    break
                current = count
            if current is not None:
                values.append(current)
        rows.append((f"{ym[0]:04d}-{ym[1]:02d}", sum(values) / len(values)))
        ym = _next_month(*ym)
    return Table(("month", "average"), tuple(rows))


class DescriptiveStats(NamedTuple):
    min: float
    q1: float
    median: float
    mean: float
    q3: float
    max: float


def descriptive_stats(values: Sequence[float]) -> DescriptiveStats:
    """Five-number summary plus mean; quartiles interpolate between closest ranks."""
    data = sorted(values)
    if not data:
        raise EmptyInput("descriptive_stats of an empty sequence")
    if len(data) == 1:
        q1 = median = q3 = data[0]
    else:
        q1, median, q3 = statistics.quantiles(data, n=4, method="inclusive")
    return DescriptiveStats(data[0], q1, median, statistics.fmean(data), q3, data[-1])


# summary sections; each is a JSON-ready dict plus the CSV tables it owns


def months_active(history: ProjectHistory) -> int:
    (y0, m0), (y1, m1) = _month(history[0].timestamp), _month(history[-1].timestamp)
    return (y1 - y0) * 12 + (m1 - m0) + 1


def _count_kind(snapshot: Snapshot, kind: DepKind) -> int:
    return sum(1 for d in snapshot.tree if d.kind is kind and d.coordinate in snapshot.statuses)


STAT_ROWS = (
    "months",
    "analyzed_commits",
    "direct_initial",
    "transitive_initial",
    "direct_final",
    "transitive_final",
)


def project_stats(history: ProjectHistory) -> dict:
    return {
        "months": months_active(history),
        "analyzed_commits": len(history),
        "direct_initial": _count_kind(history[0], DepKind.DIRECT),
        "transitive_initial": _count_kind(history[0], DepKind.TRANSITIVE),
        "direct_final": _count_kind(history[-1], DepKind.DIRECT),
        "transitive_final": _count_kind(history[-1], DepKind.TRANSITIVE),
    }


def stats_section(histories: Sequence[ProjectHistory]) -> tuple[dict, dict[str, Table]]:
    per_project = {h.project: project_stats(h) for h in histories}
    descriptive = {}
    rows = []
    for name in STAT_ROWS:
        st = descriptive_stats([p[name] for p in per_project.values()])
        descriptive[name] = st._asdict()
        rows.append((name, *st))
    table = Table(("measure", *DescriptiveStats._fields), tuple(rows))
    return {"projects": per_project, "descriptive": descriptive}, {"stats.csv": table}


def trend_section(histories: Sequence[ProjectHistory]) -> tuple[dict, dict[str, Table]]:
    projects = {}
    dist = {k.value: Counter() for k in KINDS}
    rows = []
    for h in histories:
        entry = {}
        for kind in KINDS:
            series = bloat_series(h, kind)
            trend = classify_trend(series)
            dist[kind.value][trend.value] += 1
            entry[kind.value] = {
                "series": series.values,
                "slope": ls_slope(series.values),
                "trend": trend.value,
            }
            rows.append((h.project, kind.value, trend.value, ls_slope(series.values)))
        projects[h.project] = entry
    distribution = {k: {t.value: c[t.value] for t in Trend} for k, c in dist.items()}
    tables = {"trend.csv": Table(("project", "kind", "trend", "slope"), tuple(rows))}
    for kind in KINDS:
        tables[f"monthly_{kind.value}.csv"] = monthly_aggregate(histories, kind)
    return {"projects": projects, "distribution": distribution}, tables


def _letters(statuses) -> str:
    return "".join(s.letter for s in statuses)


def _ratio_or_none(patterns) -> Optional[float]:
    try:
        return remain_bloated_ratio(patterns)
    except NoBloatedDependencies:
        return None


def patterns_section(histories: Sequence[ProjectHistory]) -> tuple[dict, dict[str, Table]]:
    projects = {}
    all_patterns = {k: [] for k in KINDS}
    for h in histories:
        entry = {}
        for kind in KINDS:
            deps = {}
            for ga in dependencies_of_kind(h, kind):
                series = status_series(h, ga, kind)
                tokens = compress(series)
                pattern = classify_pattern(tokens)
                all_patterns[kind].append(pattern)
                deps[str(ga)] = {
                    "statuses": _letters(series.statuses),
                    "compressed": _letters(tokens),
                    "pattern": pattern.value,
                }
            entry[kind.value] = deps
        projects[h.project] = entry

    distribution = {}
    rows = []
    for kind in KINDS:
        c = Counter(all_patterns[kind])
        total = sum(c.values())
        distribution[kind.value] = {p.value: c[p] for p in Pattern}
        for p in Pattern:
            pct = 100.0 * c[p] / total if total else 0.0
            rows.append((kind.value, p.value, c[p], pct))
    doc = {
        "projects": projects,
        "distribution": distribution,
        "remain_bloated_ratio": {k.value: _ratio_or_none(all_patterns[k]) for k in KINDS},
    }
    return doc, {"patterns.csv": Table(("kind", "pattern", "count", "percent"), tuple(rows))}


def updates_section(histories: Sequence[ProjectHistory]) -> tuple[dict, dict[str, Table]]:
    projects = {}
    all_events = []
    fallout = 0
    for h in histories:
        events = detect_updates(h)
        all_events.extend(events)
        listed = []
        for e in events:
            n = transitive_fallout(h, e)
            if e.target_status is UsageStatus.BLOATED:
                fallout += n
            listed.append(
                {
                    "dependency": str(e.dependency),
                    "from": e.from_version,
                    "to": e.to_version,
                    "commit": h[e.index].commit_id,
                    "actor": e.actor.value,
                    "status": e.target_status.value,
                    "new_bloated_transitive": n,
                }
            )
        projects[h.project] = listed
    stats = attribute_updates(all_events)
    rows = tuple(
        (a.value, s.value, stats.count(a, s)) for a in ActorKind for s in UsageStatus
    )
    doc = {
        "projects": projects,
        "counts": {a.value: {s.value: stats.count(a, s) for s in UsageStatus} for a in ActorKind},
        "bloated_ratio": {a.value: stats.ratio(a) for a in ActorKind},
        "new_bloated_transitive_from_bloated_updates": fallout,
    }
    return doc, {"updates.csv": Table(("actor", "status", "count"), rows)}


def origins_section(histories: Sequence[ProjectHistory]) -> tuple[dict, dict[str, Table]]:
    projects = {}
    table = {label: Counter() for label in OriginLabel}
    for h in histories:
        listed = []
        for kind in KINDS:
            for ga, i in bloat_appearances(h, kind):
                labels = classify_origin(h, ga, i)
                for label in labels:
                    table[label][kind.value] += 1
                listed.append(
                    {
                        "dependency": str(ga),
                        "kind": kind.value,
                        "commit": h[i].commit_id,
                        "labels": [l.value for l in OriginLabel if l in labels],
                    }
                )
        projects[h.project] = listed
    doc = {
        "projects": projects,
        "table": {l.value: {k.value: table[l][k.value] for k in KINDS} for l in OriginLabel},
    }
    rows = tuple((l.value, table[l]["direct"], table[l]["transitive"]) for l in OriginLabel)
    return doc, {"origins.csv": Table(("origin", "direct", "transitive"), rows)}


SECTIONS = {
    "trend": trend_section,
    "patterns": patterns_section,
    "updates": updates_section,
    "origins": origins_section,
    "stats": stats_section,
}

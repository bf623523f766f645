"""Longitudinal analyses over a project history.

Bloat counts and their trend, per-dependency status patterns, version
updates and who made them, and the origin of each bloat appearance.
"""

from __future__ import annotations

import enum
import numbers
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import InsufficientPoints, NeverPresent, NoBloatedDependencies, NotABloatAppearance
from .model import GA, ActorKind, DepKind, ProjectHistory, UsageStatus
from .usage import using_classes

U = UsageStatus.USED
B = UsageStatus.BLOATED


class Trend(enum.Enum):
    INC = "inc"
    DEC = "dec"
    STABLE = "stable"


class Pattern(enum.Enum):
    U = "U"
    B = "B"
    UB = "UB"
    BU = "BU"
    FLUCTUATING = "fluctuating"


class OriginLabel(enum.Enum):
    ND = "ND"  # new dependency
    RC = "RC"  # removed code
    UC = "UC"  # updated code
    NV = "NV"  # new version


Origin = frozenset  # of OriginLabel


@dataclass(frozen=True)
class BloatSeries:
    project: str
    kind: DepKind
    points: tuple[tuple[int, int], ...]

    @property
    def values(self) -> list[int]:
        return [count for _, count in self.points]


@dataclass(frozen=True)
class StatusSeries:
    dependency: GA
    kind: DepKind
    entries: tuple[tuple[int, UsageStatus], ...]

    @property
    def statuses(self) -> list[UsageStatus]:
        return [status for _, status in self.entries]


@dataclass(frozen=True)
class UpdateEvent:
    dependency: GA
    from_version: str
    to_version: str
    index: int
    actor: ActorKind
    target_status: UsageStatus


@dataclass(frozen=True)
class UpdateStats:
    human_used: int = 0
    human_bloated: int = 0
    bot_used: int = 0
    bot_bloated: int = 0

    def count(self, actor: ActorKind, status: UsageStatus) -> int:
        return getattr(self, f"{actor.value}_{status.value}")

    @property
    def total(self) -> int:
        return self.human_used + self.human_bloated + self.bot_used + self.bot_bloated

    def ratio(self, actor: ActorKind) -> Optional[float]:
        """Share of this actor's updates that target bloated dependencies."""
        bloated = self.count(actor, B)
        n = bloated + self.count(actor, U)
        return bloated / n if n else None


def bloat_series(history: ProjectHistory, kind: DepKind) -> BloatSeries:
    points = []
    for i, snap in enumerate(history):
        n = sum(
            1
            for dep in snap.tree
            if dep.kind is kind and snap.statuses.get(dep.coordinate) is B
        )
        points.append((i, n))
    return BloatSeries(history.project, kind, tuple(points))


def _as_values(series) -> list:
    return series.values if isinstance(series, BloatSeries) else list(series)


def _slope_fraction(points: Sequence) -> Fraction:
    ys = [Fraction(y) if isinstance(y, numbers.Rational) else Fraction(float(y)) for y in points]
    n = len(ys)
    if n < 2:
        raise InsufficientPoints(f"need at least 2 points, got {n}")
    # x = 0..n-1, so sum(x) and the centred sum of squares have closed forms
    sxy = sum(i * y for i, y in enumerate(ys)) - Fraction(n - 1, 2) * sum(ys)
    sxx = Fraction(n * (n * n - 1), 12)
    return sxy / sxx


def ls_slope(points: Sequence) -> float:
    """Least-squares slope of ``points`` against their index 0..n-1.

    Computed in exact rational arithmetic, so a zero slope is exactly 0.0.
    """
    return float(_slope_fraction(points))


def classify_trend(series: Union[BloatSeries, Sequence]) -> Trend:
    values = _as_values(series)
    slope = _slope_fraction(values)
    if all(v == values[0] for v in values):
        return Trend.STABLE
    if slope > 0:
        return Trend.INC
    if slope < 0:
        return Trend.DEC
    return Trend.STABLE


def status_series(history: ProjectHistory, d: GA, kind: DepKind) -> StatusSeries:
    entries = []
    for i, snap in enumerate(history):
        dep = snap.tree.get(d)
        if dep is None or dep.kind is not kind:
            continue
        status = snap.statuses.get(dep.coordinate)
        if status is not None:
            entries.append((i, status))
    if not entries:
        raise NeverPresent(d)
    return StatusSeries(d, kind, tuple(entries))


def compress(series: Union[StatusSeries, Sequence[UsageStatus]]) -> list[UsageStatus]:
    """Collapse runs of equal statuses: [U, U, B, B] -> [U, B]."""
    statuses = series.statuses if isinstance(series, StatusSeries) else series
    out: list[UsageStatus] = []
    for s in statuses:
        if not out or out[-1] is not s:
            out.append(s)
    return out


def classify_pattern(tokens: Sequence[UsageStatus]) -> Pattern:
    if not tokens:
        raise ValueError("empty token list")
    if any(a is b for a, b in zip(tokens, tokens[1:])):
        raise ValueError("token list is not compressed")
    if len(tokens) > 2:
        return Pattern.FLUCTUATING
    return Pattern("".join(t.letter for t in tokens))


def dependencies_of_kind(history: ProjectHistory, kind: DepKind) -> list[GA]:
    """Every GA that carries a status as ``kind`` in some snapshot, sorted."""
    seen = set()
    for snap in history:
        for dep in snap.tree:
            if dep.kind is kind and dep.coordinate in snap.statuses:
                seen.add(dep.ga)
    return sorted(seen)


def dependency_patterns(history: ProjectHistory, kind: DepKind) -> dict[GA, Pattern]:
    return {
        ga: classify_pattern(compress(status_series(history, ga, kind)))
        for ga in dependencies_of_kind(history, kind)
    }


def remain_bloated_ratio(patterns: Iterable[Pattern]) -> float:
    """(B + UB) / (B + UB + BU + fluctuating)."""
    c = Counter(patterns)
    stay = c[Pattern.B] + c[Pattern.UB]
    denominator = stay + c[Pattern.BU] + c[Pattern.FLUCTUATING]
    if denominator == 0:
        raise NoBloatedDependencies("no dependency is ever bloated")
    return stay / denominator


def detect_updates(history: ProjectHistory) -> list[UpdateEvent]:
    """Version changes of dependencies that are direct in two consecutive snapshots.

    Dependencies outside the analyzed scopes carry no status and are skipped.
    """
    events = []
    for i in range(1, len(history)):
        prev, cur = history[i - 1], history[i]
        for dep in cur.tree:
            if dep.depth != 1:
                continue
            before = prev.tree.get(dep.ga)
            if before is None or before.depth != 1:
                continue
            if before.coordinate.version == dep.coordinate.version:
                continue
            status = cur.statuses.get(dep.coordinate)
            if status is None:
                continue
            events.append(
                UpdateEvent(
                    dep.ga,
                    before.coordinate.version,
                    dep.coordinate.version,
                    i,
                    cur.actor.kind,
                    status,
                )
            )
    return events


def attribute_updates(events: Iterable[UpdateEvent]) -> UpdateStats:
    c = Counter((e.actor, e.target_status) for e in events)
    return UpdateStats(
        human_used=c[ActorKind.HUMAN, U],
        human_bloated=c[ActorKind.HUMAN, B],
        bot_used=c[ActorKind.BOT, U],
        bot_bloated=c[ActorKind.BOT, B],
    )


def transitive_fallout(history: ProjectHistory, event: UpdateEvent) -> int:
    """New bloated transitive dependencies pulled in through the updated one."""
    post = history[event.index]
    pre = history[event.index - 1]
    count = 0
    for dep in post.tree:
        if dep.depth < 2 or dep.ga in pre.tree:
            continue
        if post.statuses.get(dep.coordinate) is not B:
            continue
        if event.dependency in post.tree.ancestors(dep.ga):
            count += 1
    return count


def bloat_appearances(history: ProjectHistory, kind: DepKind) -> list[tuple[GA, int]]:
    """Points where a dependency of ``kind`` is bloated but was not bloated just before.

    That is: absent from the previous snapshot (or there is none), or
    present there without a bloated status.
    """
    out = []
    for i, snap in enumerate(history):
        prev = history[i - 1] if i else None
        for dep in snap.tree:
            if dep.kind is not kind or snap.statuses.get(dep.coordinate) is not B:
                continue
            if prev is None or prev.status_of(dep.ga) is not B:
                out.append((dep.ga, i))
    return out


def classify_origin(history: ProjectHistory, d: GA, i: int) -> Origin:
    cur = history[i]
    if cur.status_of(d) is not B:
        raise NotABloatAppearance(f"{d} is not bloated at snapshot {i}")
    if i == 0 or d not in history[i - 1].tree:
        return frozenset({OriginLabel.ND})
    prev = history[i - 1]
    if prev.status_of(d) is B:
        raise NotABloatAppearance(f"{d} was already bloated at snapshot {i - 1}")

    classes = using_classes(prev.tree, prev.facts, d)
    if classes & cur.facts.classes:
        labels = {OriginLabel.UC}
    else:
        labels = {OriginLabel.RC}

    changed = prev.version_of(d) != cur.version_of(d)
    for ancestor in cur.tree.ancestors(d):
        before = prev.version_of(ancestor)
        if before is not None and before != cur.version_of(ancestor):
            changed = True
    if changed:
        labels.add(OriginLabel.NV)
    return frozenset(labels)


def origin_counts(history: ProjectHistory, kind: DepKind) -> Counter:
    """Label occurrences over all bloat appearances; co-labels count once each."""
    c: Counter = Counter()
    for ga, i in bloat_appearances(history, kind):
        c.update(classify_origin(history, ga, i))
    return c

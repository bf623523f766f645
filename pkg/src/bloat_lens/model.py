"""Core domain types: coordinates, scopes, resolved trees, snapshots, histories.

All types are frozen and carry no I/O.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime
from typing import TYPE_CHECKING, Iterator, Mapping, Optional

from .errors import MalformedCoordinate, SchemaError

if TYPE_CHECKING:
    from .usage import UsageFacts


@dataclass(frozen=True, order=True)
class GA:
    """Version-insensitive identity of a dependency (group:artifact)."""

    group: str
    artifact: str

    def __post_init__(self):
        for part in (self.group, self.artifact):
            if not part or ":" in part:
                raise MalformedCoordinate(f"invalid group/artifact part: {part!r}")

    def __str__(self) -> str:
        return f"{self.group}:{self.artifact}"


@dataclass(frozen=True, order=True)
class Coordinate:
    group: str
    artifact: str
    version: str

    def __post_init__(self):
        for part in (self.group, self.artifact):
            if not part or ":" in part:
                raise MalformedCoordinate(f"invalid group/artifact part: {part!r}")
        if not self.version or ":" in self.version:
            raise MalformedCoordinate(f"invalid version: {self.version!r}")

    @property
    def ga(self) -> GA:
        return GA(self.group, self.artifact)

    def __str__(self) -> str:
        return f"{self.group}:{self.artifact}:{self.version}"


def parse_coordinate(text: str) -> Coordinate:
    parts = text.split(":")
    if len(parts) != 3 or not all(parts):
        raise MalformedCoordinate(f"expected group:artifact:version, got {text!r}")
    return Coordinate(*parts)


def parse_ga(text: str) -> GA:
    parts = text.split(":")
    if len(parts) != 2 or not all(parts):
        raise MalformedCoordinate(f"expected group:artifact, got {text!r}")
    return GA(*parts)


@dataclass(frozen=True, order=True)
class Scope:
    """Maven scope. Labels outside the known set behave as ``other(label)``."""

    label: str

    KNOWN = ("compile", "test", "runtime", "provided")

    @property
    def is_other(self) -> bool:
        return self.label not in self.KNOWN

    def __str__(self) -> str:
        return self.label


COMPILE = Scope("compile")
TEST = Scope("test")
RUNTIME = Scope("runtime")
PROVIDED = Scope("provided")

# only these take part in bloat analysis unless a caller narrows them further
ANALYZED_SCOPES = frozenset({COMPILE, TEST})


def parse_scope(text: str) -> Scope:
    return Scope(text.strip().lower())


@dataclass(frozen=True)
class Declaration:
    """One ``<dependency>`` entry of a manifest or a registry entry."""

    ga: GA
    version: str
    scope: Scope = COMPILE

    @property
    def coordinate(self) -> Coordinate:
        return Coordinate(self.ga.group, self.ga.artifact, self.version)


class DepKind(enum.Enum):
    DIRECT = "direct"
    TRANSITIVE = "transitive"


@dataclass(frozen=True)
class ResolvedDependency:
    """A non-root node of a resolved tree.

    ``parent`` is the GA of the node whose expansion introduced this one, or
    None for direct dependencies (the parent is the root).
    """

    coordinate: Coordinate
    scope: Scope
    depth: int
    parent: Optional[GA] = None

    @property
    def ga(self) -> GA:
        return self.coordinate.ga

    @property
    def kind(self) -> DepKind:
        return DepKind.DIRECT if self.depth == 1 else DepKind.TRANSITIVE


@dataclass(frozen=True)
class DependencyTree:
    """Resolved dependency tree; one node per GA after mediation.

    ``dependencies`` is in resolution (breadth-first) order and excludes the
    root.
    """

    root: Coordinate
    dependencies: tuple[ResolvedDependency, ...] = ()
    _index: Mapping[GA, ResolvedDependency] = field(
        init=False, repr=False, compare=False, default=None
    )

    def __post_init__(self):
        index = {}
        for dep in self.dependencies:
            if dep.ga in index or dep.ga == self.root.ga:
                raise ValueError(f"GA resolved twice: {dep.ga}")
            if dep.depth < 1:
                raise ValueError(f"non-root node at depth {dep.depth}: {dep.ga}")
            index[dep.ga] = dep
        for dep in self.dependencies:
            if dep.depth == 1:
                if dep.parent is not None:
                    raise ValueError(f"direct dependency with parent: {dep.ga}")
            else:
                parent = index.get(dep.parent)
                if parent is None or parent.depth != dep.depth - 1:
                    raise ValueError(f"dangling parent for {dep.ga}")
        object.__setattr__(self, "_index", index)

    def __contains__(self, ga: GA) -> bool:
        return ga in self._index

    def __iter__(self) -> Iterator[ResolvedDependency]:
        return iter(self.dependencies)

    def __len__(self) -> int:
        return len(self.dependencies)

    def get(self, ga: GA) -> Optional[ResolvedDependency]:
        return self._index.get(ga)

    @property
    def nodes(self) -> frozenset[Coordinate]:
        return frozenset([self.root, *(d.coordinate for d in self.dependencies)])

    @property
    def direct(self) -> frozenset[Coordinate]:
        return frozenset(d.coordinate for d in self.dependencies if d.depth == 1)

    @property
    def transitive(self) -> frozenset[Coordinate]:
        return frozenset(d.coordinate for d in self.dependencies if d.depth > 1)

    @property
    def edges(self) -> frozenset[tuple[Coordinate, Coordinate]]:
        out = set()
        for dep in self.dependencies:
            parent = self.root if dep.parent is None else self._index[dep.parent].coordinate
            out.add((parent, dep.coordinate))
        return frozenset(out)

    def ancestors(self, ga: GA) -> list[GA]:
        """GAs on the resolution path from the root down to ``ga``, exclusive."""
        path = []
        dep = self._index[ga]
        while dep.parent is not None:
            path.append(dep.parent)
            dep = self._index[dep.parent]
        path.reverse()
        return path


class UsageStatus(enum.Enum):
    USED = "used"
    BLOATED = "bloated"

    @property
    def letter(self) -> str:
        return "U" if self is UsageStatus.USED else "B"


class ActorKind(enum.Enum):
    HUMAN = "human"
    BOT = "bot"


@dataclass(frozen=True)
class Actor:
    name: str
    kind: ActorKind = ActorKind.HUMAN

    @property
    def is_bot(self) -> bool:
        return self.kind is ActorKind.BOT


class SnapshotKind(enum.Enum):
    RELEASE = "release"
    BOT_UPDATE = "bot_update"
    OTHER = "other"


@dataclass(frozen=True)
class Snapshot:
    """One analyzed commit."""

    commit_id: str
    timestamp: datetime
    actor: Actor
    project_version: str
    manifest: tuple[Declaration, ...]
    tree: DependencyTree
    facts: "UsageFacts"
    statuses: Mapping[Coordinate, UsageStatus]
    kind: SnapshotKind = SnapshotKind.OTHER

    @property
    def sort_key(self) -> tuple[datetime, str]:
        return (self.timestamp, self.commit_id)

    def status_of(self, ga: GA) -> Optional[UsageStatus]:
        dep = self.tree.get(ga)
        if dep is None:
            return None
        return self.statuses.get(dep.coordinate)

    def version_of(self, ga: GA) -> Optional[str]:
        dep = self.tree.get(ga)
        return None if dep is None else dep.coordinate.version


@dataclass(frozen=True)
class ProjectHistory:
    project: str
    snapshots: tuple[Snapshot, ...]

    def __post_init__(self):
        object.__setattr__(self, "snapshots", tuple(self.snapshots))
        keys = [s.sort_key for s in self.snapshots]
        if keys != sorted(keys):
            raise SchemaError("snapshots", "snapshots are not in (timestamp, commit) order")

    def __len__(self) -> int:
        return len(self.snapshots)

    def __getitem__(self, i: int) -> Snapshot:
        return self.snapshots[i]

    def __iter__(self) -> Iterator[Snapshot]:
        return iter(self.snapshots)

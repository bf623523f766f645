"""Used/bloated status by reachability over the member-level call graph.

A dependency is used when at least one of its members is reachable from a
member of the project's own classes; otherwise it is bloated. Members that
are only reached from other, unreached dependency code do not count.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import AbstractSet, Iterable, Mapping, Union

from .errors import InvalidFacts, UnknownDependency, UnknownOwner
from .model import ANALYZED_SCOPES, GA, Coordinate, DependencyTree, Scope, UsageStatus


@dataclass(frozen=True, order=True)
class ProjectClass:
    name: str


@dataclass(frozen=True, order=True)
class ArtifactOwner:
    ga: GA


Owner = Union[ProjectClass, ArtifactOwner]


@dataclass(frozen=True)
class UsageFacts:
    """Member ownership and call edges extracted from one commit."""

    classes: frozenset[str] = frozenset()
    members: Mapping[str, Owner] = field(default_factory=dict)
    calls: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "classes", frozenset(self.classes))
        object.__setattr__(self, "calls", frozenset(self.calls))
        object.__setattr__(self, "members", dict(self.members))
        for caller, callee in self.calls:
            for m in (caller, callee):
                if m not in self.members:
                    raise InvalidFacts(f"call edge references unknown member {m!r}")
        for member, owner in self.members.items():
            if isinstance(owner, ProjectClass) and owner.name not in self.classes:
                raise InvalidFacts(
                    f"member {member!r} owned by undeclared class {owner.name!r}"
                )

    def members_of(self, owner: Owner) -> list[str]:
        return sorted(m for m, o in self.members.items() if o == owner)

    def artifact_owners(self) -> set[GA]:
        return {o.ga for o in self.members.values() if isinstance(o, ArtifactOwner)}


class MemberGraph:
    """Call adjacency over member ids, rooted at the project's own members."""

    def __init__(self, edges: Iterable[tuple[str, str]], roots: Iterable[str]):
        self.adjacency: dict[str, set[str]] = {}
        for caller, callee in edges:
            self.adjacency.setdefault(caller, set()).add(callee)
        self.roots = frozenset(roots)

    @classmethod
    def from_facts(cls, facts: UsageFacts) -> "MemberGraph":
        roots = [m for m, o in facts.members.items() if isinstance(o, ProjectClass)]
        return cls(facts.calls, roots)

    def reversed(self) -> "MemberGraph":
        edges = [(b, a) for a, succ in self.adjacency.items() for b in succ]
        return MemberGraph(edges, ())


def _closure(graph: MemberGraph, start: Iterable[str]) -> set[str]:
    seen = set(start)
    queue = deque(seen)
    while queue:
        member = queue.popleft()
        for nxt in graph.adjacency.get(member, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def reachable_members(graph: MemberGraph) -> frozenset[str]:
    """Forward closure of the root set, roots included."""
    return frozenset(_closure(graph, graph.roots))


def _check_owners(tree: DependencyTree, facts: UsageFacts) -> None:
    for ga in sorted(facts.artifact_owners()):
        if ga not in tree:
            raise UnknownOwner(ga)


def compute_statuses(
    tree: DependencyTree,
    facts: UsageFacts,
    scopes: AbstractSet[Scope] = ANALYZED_SCOPES,
) -> dict[Coordinate, UsageStatus]:
    """Status of every tree node whose scope is in ``scopes``.

    A dependency with no members in ``facts`` is bloated.
    """
    _check_owners(tree, facts)
    reached = reachable_members(MemberGraph.from_facts(facts))
    used = {
        facts.members[m].ga
        for m in reached
        if isinstance(facts.members.get(m), ArtifactOwner)
    }
    return {
        dep.coordinate: UsageStatus.USED if dep.ga in used else UsageStatus.BLOATED
        for dep in tree
        if dep.scope in scopes
    }


def using_classes(tree: DependencyTree, facts: UsageFacts, d: GA) -> frozenset[str]:
    """Project classes with a call path into some member of ``d``."""
    if d not in tree:
        raise UnknownDependency(d)
    _check_owners(tree, facts)
    targets = facts.members_of(ArtifactOwner(d))
    callers = _closure(MemberGraph.from_facts(facts).reversed(), targets)
    return frozenset(
        owner.name
        for m in callers
        if isinstance(owner := facts.members[m], ProjectClass)
    )

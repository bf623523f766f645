"""Dependency tree resolution with nearest-declaration-wins mediation."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DuplicateDeclaration, MissingArtifact
from .model import (
    COMPILE,
    RUNTIME,
    TEST,
    Coordinate,
    Declaration,
    DependencyTree,
    ResolvedDependency,
    Scope,
)


class Registry:
    """Artifact metadata: the declared dependencies of every known coordinate."""

    def __init__(self, entries: Mapping[Coordinate, Sequence[Declaration]] = ()):
        self._entries = {c: tuple(decls) for c, decls in dict(entries).items()}

    def lookup(self, coordinate: Coordinate) -> tuple[Declaration, ...]:
        try:
            return self._entries[coordinate]
        except KeyError:
            raise MissingArtifact(coordinate) from None

    def __contains__(self, coordinate: Coordinate) -> bool:
        return coordinate in self._entries

    def __iter__(self) -> Iterator[Coordinate]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def items(self):
        return self._entries.items()


def propagated_scope(parent: Scope, child: Scope) -> Scope:
    """Scope of a transitive node given its parent's scope and its declared scope.

    compile and runtime children take the scope of a non-compile parent;
    anything else keeps its own label. Test children never get here.
    """
    if parent != COMPILE and child in (COMPILE, RUNTIME):
        return parent
    return child


def check_manifest(manifest: Iterable[Declaration]) -> None:
    seen = set()
    for decl in manifest:
        if decl.ga in seen:
            raise DuplicateDeclaration(decl.ga)
        seen.add(decl.ga)


def resolve_tree(
    root: Coordinate, manifest: Sequence[Declaration], registry: Registry
) -> DependencyTree:
    """Resolve ``manifest`` against ``registry`` into a mediated tree.

    Breadth-first from the root: the first version reached for a GA wins
    (shallowest depth, then declaration order) and every later version of
    that GA is dropped, which also cuts cycles. Test-scoped declarations of
    non-root nodes are not followed.
    """
    check_manifest(manifest)
    resolved: dict = {root.ga: None}
    order: list[ResolvedDependency] = []
    queue: deque[ResolvedDependency] = deque()

    for decl in manifest:
        if decl.ga in resolved:
            continue
        dep = ResolvedDependency(decl.coordinate, decl.scope, 1, None)
        resolved[decl.ga] = dep
        order.append(dep)
        queue.append(dep)

    while queue:
        node = queue.popleft()
        for decl in registry.lookup(node.coordinate):
            if decl.scope == TEST or decl.ga in resolved:
                continue
            dep = ResolvedDependency(
                decl.coordinate,
                propagated_scope(node.scope, decl.scope),
                node.depth + 1,
                node.ga,
            )
            resolved[decl.ga] = dep
            order.append(dep)
            queue.append(dep)

    return DependencyTree(root, tuple(order))

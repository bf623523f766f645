"""Loading registry and project-history files, release and bot marking.

History document::

    {"project": str,
     "snapshots": [{"commit": str, "timestamp": ISO-8601 UTC, "author": str,
                    "project_version": str,
                    "manifest": [{"ga": "G:A", "version": str, "scope": str}],
                    "facts": {"classes": [...],
                              "members": [{"id": str, "owner": {"class": str} | {"ga": "G:A"}}],
                              "calls": [[caller, callee], ...]}}]}

Registry document::

    [{"coordinate": "G:A:V",
      "dependencies": [{"ga": "G:A", "version": str, "scope": str}]}]

Unknown fields are ignored in both.
"""

from __future__ import annotations

import dataclasses
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import AbstractSet, Any, Sequence

from .errors import MalformedCoordinate, SchemaError
from .model import (
    ANALYZED_SCOPES,
    Actor,
    ActorKind,
    Coordinate,
    Declaration,
    ProjectHistory,
    Scope,
    Snapshot,
    SnapshotKind,
    parse_coordinate,
    parse_ga,
    parse_scope,
)
from .resolver import Registry, check_manifest, resolve_tree
from .usage import ArtifactOwner, ProjectClass, UsageFacts, compute_statuses

log = logging.getLogger(__name__)

DEFAULT_BOT_PATTERNS = ("dependabot",)
PRERELEASE_MARKERS = ("snapshot", "beta")
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def _get(obj: Any, key: str, kind: type, loc: str, path=None):
    if not isinstance(obj, dict):
        raise SchemaError(loc, "expected an object", path)
    if key not in obj:
        raise SchemaError(f"{loc}.{key}", "missing field", path)
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise SchemaError(f"{loc}.{key}", f"expected {kind.__name__}", path)
    return value


def parse_timestamp(text: str) -> datetime:
    """ISO-8601 to an aware UTC datetime at second precision; naive means UTC."""
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime(TIMESTAMP_FORMAT)


def _declaration(obj, loc, path) -> Declaration:
    try:
        ga = parse_ga(_get(obj, "ga", str, loc, path))
    except MalformedCoordinate as e:
        raise SchemaError(f"{loc}.ga", str(e), path) from None
    version = _get(obj, "version", str, loc, path)
    if not version or ":" in version:
        raise SchemaError(f"{loc}.version", f"invalid version {version!r}", path)
    raw_scope = obj.get("scope", "compile")
    if not isinstance(raw_scope, str):
        raise SchemaError(f"{loc}.scope", "expected str", path)
    scope = parse_scope(raw_scope)
    if scope.is_other:
        log.warning("%s: unknown scope %r at %s, excluded from analysis", path or "<input>", scope.label, loc)
    return Declaration(ga, version, scope)


def _declarations(items, loc, path) -> tuple[Declaration, ...]:
    if not isinstance(items, list):
        raise SchemaError(loc, "expected an array", path)
    return tuple(_declaration(item, f"{loc}[{i}]", path) for i, item in enumerate(items))


def registry_from_json(doc: Any, path=None) -> Registry:
    if not isinstance(doc, list):
        raise SchemaError("$", "registry must be an array", path)
    entries: dict[Coordinate, tuple[Declaration, ...]] = {}
    for i, item in enumerate(doc):
        loc = f"[{i}]"
        try:
            coord = parse_coordinate(_get(item, "coordinate", str, loc, path))
        except MalformedCoordinate as e:
            raise SchemaError(f"{loc}.coordinate", str(e), path) from None
        if coord in entries:
            raise SchemaError(f"{loc}.coordinate", f"duplicate entry {coord}", path)
        entries[coord] = _declarations(item.get("dependencies", []), f"{loc}.dependencies", path)
    return Registry(entries)


def load_registry(path) -> Registry:
    path = Path(path)
    return registry_from_json(_read_json(path), path)


def facts_from_json(doc: Any, loc: str = "facts", path=None) -> UsageFacts:
    if not isinstance(doc, dict):
        raise SchemaError(loc, "expected an object", path)
    classes = doc.get("classes", [])
    if not isinstance(classes, list) or not all(isinstance(c, str) for c in classes):
        raise SchemaError(f"{loc}.classes", "expected an array of strings", path)
    members = {}
    raw_members = doc.get("members", [])
    if not isinstance(raw_members, list):
        raise SchemaError(f"{loc}.members", "expected an array", path)
    for i, m in enumerate(raw_members):
        mloc = f"{loc}.members[{i}]"
        mid = _get(m, "id", str, mloc, path)
        owner = _get(m, "owner", dict, mloc, path)
        if "class" in owner and isinstance(owner["class"], str):
            parsed = ProjectClass(owner["class"])
        elif "ga" in owner and isinstance(owner["ga"], str):
            try:
                parsed = ArtifactOwner(parse_ga(owner["ga"]))
            except MalformedCoordinate as e:
                raise SchemaError(f"{mloc}.owner.ga", str(e), path) from None
        else:
            raise SchemaError(f"{mloc}.owner", 'expected {"class": ...} or {"ga": ...}', path)
        if mid in members:
            raise SchemaError(f"{mloc}.id", f"duplicate member {mid!r}", path)
        members[mid] = parsed
    calls = []
    raw_calls = doc.get("calls", [])
    if not isinstance(raw_calls, list):
        raise SchemaError(f"{loc}.calls", "expected an array", path)
    for i, edge in enumerate(raw_calls):
        if not (isinstance(edge, list) and len(edge) == 2 and all(isinstance(x, str) for x in edge)):
            raise SchemaError(f"{loc}.calls[{i}]", "expected [caller, callee]", path)
        calls.append(tuple(edge))
    try:
        return UsageFacts(frozenset(classes), members, frozenset(calls))
    except ValueError as e:
        raise SchemaError(loc, str(e), path) from None


def facts_to_json(facts: UsageFacts) -> dict:
    members = []
    for mid in sorted(facts.members):
        owner = facts.members[mid]
        if isinstance(owner, ProjectClass):
            members.append({"id": mid, "owner": {"class": owner.name}})
        else:
            members.append({"id": mid, "owner": {"ga": str(owner.ga)}})
    return {
        "classes": sorted(facts.classes),
        "members": members,
        "calls": [list(edge) for edge in sorted(facts.calls)],
    }


def root_coordinate(project: str, version: str) -> Coordinate:
    """The project's own coordinate; ``project`` may be "group:artifact" or a bare name."""
    if ":" in project:
        ga = parse_ga(project)
        return Coordinate(ga.group, ga.artifact, version)
    return Coordinate(project, project, version)


def history_from_json(
    doc: Any,
    registry: Registry,
    *,
    path=None,
    scopes: AbstractSet[Scope] = ANALYZED_SCOPES,
    bot_patterns: Sequence[str] = DEFAULT_BOT_PATTERNS,
    prerelease_markers: Sequence[str] = PRERELEASE_MARKERS,
) -> ProjectHistory:
    project = _get(doc, "project", str, "$", path)
    raw = _get(doc, "snapshots", list, "$", path)
    if len(raw) < 2:
        raise SchemaError("$.snapshots", "at least two snapshots are required", path)

    snapshots = []
    for i, item in enumerate(raw):
        loc = f"$.snapshots[{i}]"
        commit = _get(item, "commit", str, loc, path)
        try:
            ts = parse_timestamp(_get(item, "timestamp", str, loc, path))
        except ValueError as e:
            raise SchemaError(f"{loc}.timestamp", str(e), path) from None
        author = _get(item, "author", str, loc, path)
        version = _get(item, "project_version", str, loc, path)
        manifest = _declarations(_get(item, "manifest", list, loc, path), f"{loc}.manifest", path)
        facts = facts_from_json(_get(item, "facts", dict, loc, path), f"{loc}.facts", path)
        try:
            root = root_coordinate(project, version)
        except MalformedCoordinate as e:
            raise SchemaError(f"{loc}.project_version", str(e), path) from None
        check_manifest(manifest)
        tree = resolve_tree(root, manifest, registry)
        statuses = compute_statuses(tree, facts, scopes)
        snapshots.append(
            Snapshot(
                commit_id=commit,
                timestamp=ts,
                actor=Actor(author),
                project_version=version,
                manifest=manifest,
                tree=tree,
                facts=facts,
                statuses=statuses,
            )
        )
    snapshots.sort(key=lambda s: s.sort_key)
    history = ProjectHistory(project, tuple(snapshots))
    history = detect_bots(history, bot_patterns)
    return detect_releases(history, prerelease_markers)


def parse_history(path, registry: Registry, **kwargs) -> ProjectHistory:
    path = Path(path)
    return history_from_json(_read_json(path), registry, path=path, **kwargs)


def history_to_json(history: ProjectHistory) -> dict:
    """Inverse of history_from_json; derived data (tree, statuses, kinds) is omitted."""
    return {
        "project": history.project,
        "snapshots": [
            {
                "commit": s.commit_id,
                "timestamp": format_timestamp(s.timestamp),
                "author": s.actor.name,
                "project_version": s.project_version,
                "manifest": [
                    {"ga": str(d.ga), "version": d.version, "scope": d.scope.label}
                    for d in s.manifest
                ],
                "facts": facts_to_json(s.facts),
            }
            for s in history
        ],
    }


def is_prerelease(version: str, markers: Sequence[str] = PRERELEASE_MARKERS) -> bool:
    v = version.lower()
    return any(m.lower() in v for m in markers)


def detect_releases(
    history: ProjectHistory, markers: Sequence[str] = PRERELEASE_MARKERS
) -> ProjectHistory:
    """Mark snapshots whose project version changed to a non-prerelease value.

    Bot-update snapshots keep their kind.
    """
    out = []
    prev_version = None
    for i, snap in enumerate(history):
        if snap.kind is not SnapshotKind.BOT_UPDATE:
            changed = i == 0 or snap.project_version != prev_version
            release = changed and not is_prerelease(snap.project_version, markers)
            kind = SnapshotKind.RELEASE if release else SnapshotKind.OTHER
            snap = dataclasses.replace(snap, kind=kind)
        prev_version = snap.project_version
        out.append(snap)
    return ProjectHistory(history.project, tuple(out))


def detect_bots(
    history: ProjectHistory, bot_patterns: Sequence[str] = DEFAULT_BOT_PATTERNS
) -> ProjectHistory:
    """Mark commits whose author name contains a bot pattern (case-insensitive).

    A human snapshot previously marked as a bot update drops back to OTHER;
    run detect_releases afterwards to re-mark releases.
    """
    if not bot_patterns:
        raise ValueError("bot_patterns must not be empty")
    patterns = [p.lower() for p in bot_patterns]
    out = []
    for snap in history:
        name = snap.actor.name
        if any(p in name.lower() for p in patterns):
            snap = dataclasses.replace(
                snap, actor=Actor(name, ActorKind.BOT), kind=SnapshotKind.BOT_UPDATE
            )
        else:
            kind = SnapshotKind.OTHER if snap.kind is SnapshotKind.BOT_UPDATE else snap.kind
            snap = dataclasses.replace(snap, actor=Actor(name, ActorKind.HUMAN), kind=kind)
        out.append(snap)
    return ProjectHistory(history.project, tuple(out))


def _read_json(path: Path):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(f"line {e.lineno} column {e.colno}", e.msg, path) from None

"""Bloated-dependency detection and longitudinal analysis over commit histories."""

from .errors import BloatLensError
from .ingest import detect_bots, detect_releases, load_registry, parse_history
from .model import (
    GA,
    Coordinate,
    Declaration,
    DependencyTree,
    DepKind,
    ProjectHistory,
    Scope,
    Snapshot,
    UsageStatus,
    parse_coordinate,
    parse_ga,
)
from .resolver import Registry, resolve_tree
from .usage import UsageFacts, compute_statuses, reachable_members, using_classes

__version__ = "0.1.0"

"""Independent oracles and random instance generators shared by the tests.

The oracles deliberately take different routes from the library code:
path enumeration instead of BFS closure, sorted path lists instead of a
queue, raw manifest diffs instead of tree walks.
"""

import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

from bloat_lens.ingest import detect_bots, detect_releases
from bloat_lens.model import (
    Actor,
    Coordinate,
    Declaration,
    DependencyTree,
    GA,
    ProjectHistory,
    ResolvedDependency,
    Scope,
    Snapshot,
    UsageStatus,
)
from bloat_lens.resolver import Registry, resolve_tree
from bloat_lens.usage import ArtifactOwner, ProjectClass, UsageFacts, compute_statuses

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

U = UsageStatus.USED
B = UsageStatus.BLOATED


# -- reachability ---------------------------------------------------------


def simple_paths_from(start, edges):
    """Every simple path (as a tuple of nodes) starting at ``start``."""
    succ = {}
    for a, b in edges:
        succ.setdefault(a, []).append(b)
    out = []
    stack = [(start,)]
    while stack:
        path = stack.pop()
        out.append(path)
        for nxt in succ.get(path[-1], ()):
            if nxt not in path:
                stack.append(path + (nxt,))
    return out


def oracle_reachable(roots, edges):
    return {p[-1] for r in roots for p in simple_paths_from(r, edges)}


def oracle_statuses(tree, facts):
    roots = [m for m, o in facts.members.items() if isinstance(o, ProjectClass)]
    reached = oracle_reachable(roots, facts.calls)
    out = {}
    for dep in tree:
        mine = {m for m, o in facts.members.items() if o == ArtifactOwner(dep.ga)}
        out[dep.coordinate] = U if mine & reached else B
    return out


def oracle_using_classes(facts, ga):
    mine = {m for m, o in facts.members.items() if o == ArtifactOwner(ga)}
    found = set()
    for cls in facts.classes:
        roots = [m for m, o in facts.members.items() if o == ProjectClass(cls)]
        if oracle_reachable(roots, facts.calls) & mine:
            found.add(cls)
    return found


# -- resolution -----------------------------------------------------------

# scope of a node reached through a parent with scope `row` via an edge declared `col`
SCOPE_TABLE = {
    ("compile", "compile"): "compile",
    ("compile", "runtime"): "runtime",
    ("compile", "provided"): "provided",
    ("test", "compile"): "test",
    ("test", "runtime"): "test",
    ("test", "provided"): "provided",
    ("runtime", "compile"): "runtime",
    ("runtime", "runtime"): "runtime",
    ("runtime", "provided"): "provided",
    ("provided", "compile"): "provided",
    ("provided", "runtime"): "provided",
    ("provided", "provided"): "provided",
}


def brute_resolve(root, manifest, registry):
    """Enumerate every root-to-node declaration path and keep, per GA, the
    shallowest, lexicographically-first path whose every prefix is itself a
    kept path. Returns a list of (coordinate, scope label, depth, parent GA)
    in kept-path order."""
    paths = []  # (index tuple, declaration tuple, scope labels)
    stack = []
    for k, decl in enumerate(manifest):
        if decl.ga != root.ga:
            stack.append(((k,), (decl,), (decl.scope.label,)))
    while stack:
        idx, decls, scopes = stack.pop()
        paths.append((idx, decls, scopes))
        on_path = {d.ga for d in decls} | {root.ga}
        for j, child in enumerate(registry.lookup(decls[-1].coordinate)):
            if child.scope.label == "test" or child.ga in on_path:
                continue
            scope = SCOPE_TABLE.get((scopes[-1], child.scope.label), child.scope.label)
            stack.append((idx + (j,), decls + (child,), scopes + (scope,)))

    paths.sort(key=lambda p: (len(p[0]), p[0]))
    kept = {}
    order = []
    for idx, decls, scopes in paths:
        ga = decls[-1].ga
        if ga in kept:
            continue
        if any(kept.get(decls[k].ga, (None,))[0] != idx[: k + 1] for k in range(len(decls) - 1)):
            continue
        kept[ga] = (idx, decls, scopes)
        parent = decls[-2].ga if len(decls) > 1 else None
        order.append((decls[-1].coordinate, scopes[-1], len(decls), parent))
    return order


def is_acyclic(tree):
    """Kahn's algorithm over the tree's edge set."""
    nodes = set(tree.nodes)
    indeg = {n: 0 for n in nodes}
    succ = {n: [] for n in nodes}
    for a, b in tree.edges:
        succ[a].append(b)
        indeg[b] += 1
    ready = [n for n in nodes if indeg[n] == 0]
    seen = 0
    while ready:
        n = ready.pop()
        seen += 1
        for m in succ[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                ready.append(m)
    return seen == len(nodes)


SCOPES = ["compile"] * 5 + ["test", "runtime", "provided"]


def random_registry(rng, max_coords=10):
    n_ga = rng.randint(2, 6)
    gas = [GA("g", f"a{i}") for i in range(n_ga)]
    coords = []
    for ga in gas:
        for v in rng.sample(["1", "2", "3"], rng.randint(1, 2)):
            coords.append(Coordinate(ga.group, ga.artifact, v))
    rng.shuffle(coords)
    coords = coords[:max_coords]
    by_ga = {}
    for c in coords:
        by_ga.setdefault(c.ga, []).append(c.version)
    known = sorted(by_ga)
    entries = {}
    for c in coords:
        decls = []
        for ga in rng.sample(known, min(len(known), rng.randint(0, 3))):
            decls.append(Declaration(ga, rng.choice(by_ga[ga]), Scope(rng.choice(SCOPES))))
        entries[c] = decls
    registry = Registry(entries)
    manifest = [
        Declaration(ga, rng.choice(by_ga[ga]), Scope(rng.choice(SCOPES)))
        for ga in rng.sample(known, rng.randint(0, min(4, len(known))))
    ]
    return Coordinate("root", "root", "0"), manifest, registry


# -- member graphs --------------------------------------------------------


def random_tree(rng, max_deps=6):
    root = Coordinate("p", "p", "1")
    deps = []
    for i in range(rng.randint(1, max_deps)):
        parents = [None] + [d for d in deps]
        parent = rng.choice(parents) if deps else None
        depth = 1 if parent is None else parent.depth + 1
        deps.append(
            ResolvedDependency(
                Coordinate("g", f"d{i}", "1"),
                Scope("compile"),
                depth,
                None if parent is None else parent.ga,
            )
        )
    deps.sort(key=lambda d: d.depth)
    return DependencyTree(root, tuple(deps))


def random_facts(rng, tree, max_members=12, edge_p=0.2):
    n_classes = rng.randint(0, 3)
    classes = [f"C{i}" for i in range(n_classes)]
    owners = [ProjectClass(c) for c in classes] + [ArtifactOwner(d.ga) for d in tree]
    members = {}
    for k in range(rng.randint(1, max_members)):
        members[f"m{k}"] = rng.choice(owners)
    ids = list(members)
    calls = {(a, b) for a in ids for b in ids if a != b and rng.random() < edge_p}
    return UsageFacts(frozenset(classes), members, frozenset(calls))


# -- histories ------------------------------------------------------------


def make_history(project, rows, registry, bots=("dependabot",)):
    """rows: (commit, timestamp, author, project_version, manifest, facts)."""
    snaps = []
    for commit, ts, author, pv, manifest, facts in rows:
        root = Coordinate(project, project, pv)
        tree = resolve_tree(root, manifest, registry)
        snaps.append(
            Snapshot(
                commit_id=commit,
                timestamp=ts,
                actor=Actor(author),
                project_version=pv,
                manifest=tuple(manifest),
                tree=tree,
                facts=facts,
                statuses=compute_statuses(tree, facts),
            )
        )
    snaps.sort(key=lambda s: s.sort_key)
    return detect_releases(detect_bots(ProjectHistory(project, tuple(snaps)), bots))


def random_history(rng, n_snapshots=None):
    """A history over a small random registry with compile/test scopes only."""
    return random_history_and_registry(rng, n_snapshots)[0]


def random_history_and_registry(rng, n_snapshots=None):
    n_ga = rng.randint(3, 7)
    gas = [GA("g", f"a{i}") for i in range(n_ga)]
    versions = ["1", "2", "3"]
    entries = {}
    for ga in gas:
        for v in versions:
            children = rng.sample(gas, rng.randint(0, 2))
            entries[Coordinate(ga.group, ga.artifact, v)] = [
                Declaration(c, rng.choice(versions)) for c in children if c != ga
            ]
    registry = Registry(entries)

    n = n_snapshots or rng.randint(2, 8)
    ts = datetime(2020, 1, 1, tzinfo=timezone.utc)
    manifest = {ga: rng.choice(versions) for ga in rng.sample(gas, rng.randint(1, 3))}
    rows = []
    for i in range(n):
        if i:
            move = rng.random()
            if move < 0.4 and manifest:
                ga = rng.choice(sorted(manifest))
                manifest[ga] = rng.choice(versions)
            elif move < 0.6:
                manifest[rng.choice(gas)] = rng.choice(versions)
            elif move < 0.75 and len(manifest) > 1:
                manifest.pop(rng.choice(sorted(manifest)))
        decls = [Declaration(ga, v, Scope(rng.choice(["compile", "test"]))) for ga, v in sorted(manifest.items())]
        tree = resolve_tree(Coordinate("p", "p", str(i)), decls, registry)
        facts = random_facts(rng, tree, max_members=10, edge_p=0.25)
        author = rng.choice(["alice", "bob", "dependabot[bot]"])
        rows.append((f"c{i:02d}", ts, author, f"1.{i}", decls, facts))
        ts += timedelta(days=rng.randint(0, 40))
    return make_history("rand", rows, registry), registry


def naive_updates(history):
    """Pairwise diff of declared (GA -> version) maps of consecutive snapshots."""
    out = []
    for i in range(1, len(history)):
        before = {d.ga: d.version for d in history[i - 1].manifest}
        after = {d.ga: d.version for d in history[i].manifest}
        for ga in sorted(set(before) & set(after)):
            if before[ga] != after[ga]:
                status = history[i].statuses[Coordinate(ga.group, ga.artifact, after[ga])]
                out.append((ga, before[ga], after[ga], i, history[i].actor.kind, status))
    return sorted(out, key=lambda e: (e[3], e[0]))


def naive_pattern(letters):
    changes = sum(1 for a, b in zip(letters, letters[1:]) if a != b)
    if changes == 0:
        return letters[0]
    if changes == 1:
        return letters[0] + letters[-1]
    return "fluctuating"


def closed_form_slope(ys):
    n = len(ys)
    xbar = (n - 1) / 2
    ybar = sum(ys) / n
    num = sum((x - xbar) * (y - ybar) for x, y in enumerate(ys))
    den = sum((x - xbar) ** 2 for x in range(n))
    return num / den


def utc(text):
    return datetime.fromisoformat(text).replace(tzinfo=timezone.utc)


def seeded(seed):
    return random.Random(seed)

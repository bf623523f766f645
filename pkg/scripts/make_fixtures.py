"""Regenerate the JSON fixtures under fixtures/.

    python scripts/make_fixtures.py [--seed 7] [--out fixtures]

usage_demo.json / upgrade_demo.json encode the hand-built dependency-usage and
status-transition examples; golden/ adds seeded synthetic projects sharing
one registry. Output is deterministic for a given seed.
"""

import argparse
import json
import random
import shutil
from datetime import datetime, timedelta, timezone
from pathlib import Path

G = "org.example"


def dep(ga, version, scope="compile"):
    return {"ga": ga, "version": version, "scope": scope}


def entry(coord, deps=()):
    return {"coordinate": coord, "dependencies": list(deps)}


def demo_registry():
    return [
        entry(f"{G}:d1:1.0", [dep(f"{G}:d4", "1.0"), dep(f"{G}:d5", "1.0")]),
        entry(f"{G}:d2:1.0"),
        entry(f"{G}:d3:1.0", [dep(f"{G}:d6", "1.0")]),
        entry(f"{G}:d4:1.0"),
        entry(f"{G}:d5:1.0"),
        entry(f"{G}:d6:1.0"),
        entry(f"{G}:lib:1.0.0"),
        entry(f"{G}:lib:1.1.0"),
        entry(f"{G}:lib:1.1.1"),
        entry(f"{G}:lib:2.0.0", [dep(f"{G}:lib-core", "2.0.0")]),
        entry(f"{G}:lib-core:2.0.0"),
    ]


def usage_demo_facts():
    def m(mid, **owner):
        return {"id": mid, "owner": owner}

    return {
        "classes": ["p.Main", "p.Util"],
        "members": [
            m("p.Main#run", **{"class": "p.Main"}),
            m("p.Util#help", **{"class": "p.Util"}),
            m("d1#a", ga=f"{G}:d1"),
            m("d1#b", ga=f"{G}:d1"),
            m("d2#x", ga=f"{G}:d2"),
            m("d3#y", ga=f"{G}:d3"),
            m("d4#z", ga=f"{G}:d4"),
            m("d5#w", ga=f"{G}:d5"),
            m("d6#v", ga=f"{G}:d6"),
        ],
        "calls": [
            ["p.Main#run", "d1#a"],
            ["d1#a", "d4#z"],
            ["p.Util#help", "d6#v"],
            # d1#b is never reached, so d5 stays bloated
            ["d1#b", "d5#w"],
            ["d3#y", "d6#v"],
        ],
    }


def usage_demo_history():
    manifest = [dep(f"{G}:d1", "1.0"), dep(f"{G}:d2", "1.0"), dep(f"{G}:d3", "1.0")]
    snaps = []
    for i, version in enumerate(["1.0.0", "1.1.0", "1.2.0"]):
        snaps.append(
            {
                "commit": f"f3c{i}",
                "timestamp": f"2020-0{i + 1}-15T10:00:00Z",
                "author": "Alice",
                "project_version": version,
                "manifest": manifest,
                "facts": usage_demo_facts(),
            }
        )
    return {"project": "usage_demo", "snapshots": snaps}


def upgrade_demo_history():
    lib = f"{G}:lib"

    def facts(uses_lib, version):
        members = [{"id": "App#run", "owner": {"class": "app.App"}}]
        members += [
            {"id": "lib#parse", "owner": {"ga": lib}},
            {"id": "lib#format", "owner": {"ga": lib}},
        ]
        calls = [["App#run", "lib#parse"]] if uses_lib else []
        if version == "2.0.0":
            members.append({"id": "core#init", "owner": {"ga": f"{G}:lib-core"}})
            calls.append(["lib#format", "core#init"])
        return {"classes": ["app.App"], "members": members, "calls": calls}

    rows = [
        ("f4c0", "2020-01-10T09:00:00Z", "Alice", "1.0.0", "1.0.0", True),
        ("f4c1", "2020-02-10T09:00:00Z", "Alice", "1.1.0", "1.1.0", True),
        ("f4c2", "2020-03-10T09:00:00Z", "Bob", "1.2.0", "1.1.1", False),
        ("f4c3", "2020-04-10T09:00:00Z", "dependabot[bot]", "1.2.0", "2.0.0", False),
    ]
    snaps = [
        {
            "commit": commit,
            "timestamp": ts,
            "author": author,
            "project_version": pv,
            "manifest": [dep(lib, libv)],
            "facts": facts(uses, libv),
        }
        for commit, ts, author, pv, libv, uses in rows
    ]
    return {"project": "upgrade_demo", "snapshots": snaps}


# synthetic projects

SYN_G = "com.acme"
N_ARTIFACTS = 14
VERSIONS = ("1.0", "1.1", "2.0")


def synthetic_registry(rng):
    out = []
    for a in range(N_ARTIFACTS):
        for v in VERSIONS:
            deps = []
            for b in rng.sample(range(N_ARTIFACTS), rng.randint(0, 3)):
                if b == a:
                    continue
                scope = "test" if rng.random() < 0.1 else "compile"
                deps.append(dep(f"{SYN_G}:a{b}", rng.choice(VERSIONS), scope))
            out.append(entry(f"{SYN_G}:a{a}:{v}", deps))
    return out


def resolve_gas(manifest, registry_map):
    """Cheap breadth-first GA set, mirroring nearest-wins, to generate facts."""
    seen = {}
    queue = []
    for d in manifest:
        seen[d["ga"]] = (d["version"], None)
        queue.append((d["ga"], d["version"]))
    while queue:
        ga, v = queue.pop(0)
        for child in registry_map[f"{ga}:{v}"]:
            if child["scope"] == "test" or child["ga"] in seen:
                continue
            seen[child["ga"]] = (child["version"], ga)
            queue.append((child["ga"], child["version"]))
    return seen


def synthetic_facts(classes, usage, tree, rng_seed):
    rng = random.Random(rng_seed)
    members = []
    calls = []
    for c in sorted(classes):
        members.append({"id": f"{c}#m0", "owner": {"class": c}})
        members.append({"id": f"{c}#m1", "owner": {"class": c}})
    for ga in sorted(tree):
        short = ga.split(":")[1]
        for k in range(3):
            members.append({"id": f"{short}#m{k}", "owner": {"ga": ga}})
    for ga, (_, parent) in sorted(tree.items()):
        if parent is not None and rng.random() < 0.5:
            calls.append([f"{parent.split(':')[1]}#m{rng.randint(0, 2)}", f"{ga.split(':')[1]}#m0"])
    for c, gas in sorted(usage.items()):
        if c not in classes:
            continue
        for ga in sorted(gas):
            if ga in tree:
                calls.append([f"{c}#m{rng.randint(0, 1)}", f"{ga.split(':')[1]}#m{rng.randint(0, 2)}"])
    return {"classes": sorted(classes), "members": members, "calls": calls}


def synthetic_history(name, rng, registry_map, n_snapshots):
    ts = datetime(2019, rng.randint(1, 12), rng.randint(1, 28), 12, tzinfo=timezone.utc)
    manifest = {}
    for a in rng.sample(range(N_ARTIFACTS), 3):
        manifest[f"{SYN_G}:a{a}"] = (rng.choice(VERSIONS), "test" if rng.random() < 0.2 else "compile")
    classes = {f"{name}.C{i}" for i in range(3)}
    usage = {}
    next_class = 3
    version = [1, 0, 0]
    snaps = []
    for i in range(n_snapshots):
        author = "dev-" + rng.choice(["ann", "bo", "cy"])
        if i:
            move = rng.choice(["add", "remove", "update", "bot", "code", "delclass", "newclass"])
            if move == "add":
                a = f"{SYN_G}:a{rng.randrange(N_ARTIFACTS)}"
                manifest.setdefault(a, (rng.choice(VERSIONS), "compile"))
            elif move == "remove" and len(manifest) > 1:
                manifest.pop(rng.choice(sorted(manifest)))
            elif move in ("update", "bot"):
                ga = rng.choice(sorted(manifest))
                v, s = manifest[ga]
                manifest[ga] = (rng.choice([x for x in VERSIONS if x != v]), s)
                if move == "bot":
                    author = "dependabot[bot]"
            elif move == "delclass" and len(classes) > 1:
                classes.discard(rng.choice(sorted(classes)))
            elif move == "newclass":
                classes.add(f"{name}.C{next_class}")
                next_class += 1
        tree = resolve_gas(
            [{"ga": ga, "version": v} for ga, (v, _) in manifest.items()], registry_map
        )
        if i == 0 or rng.random() < 0.5:
            c = rng.choice(sorted(classes))
            usage[c] = set(rng.sample(sorted(tree), min(len(tree), rng.randint(0, 2))))
        if author != "dependabot[bot]":
            version[2] += 1
            if rng.random() < 0.3:
                version[1] += 1
                version[2] = 0
        pv = ".".join(map(str, version)) + ("-SNAPSHOT" if rng.random() < 0.2 else "")
        snaps.append(
            {
                "commit": f"{name}-{i:03d}",
                "timestamp": ts.strftime("%Y-%m-%dT%H:%M:%SZ"),
                "author": author,
                "project_version": pv,
                "manifest": [dep(ga, v, s) for ga, (v, s) in manifest.items()],
                "facts": synthetic_facts(classes, usage, tree, i * 7919 + len(name)),
            }
        )
        ts += timedelta(days=rng.randint(5, 60))
    return {"project": name, "snapshots": snaps}


def write(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "fixtures")
    args = ap.parse_args()
    rng = random.Random(args.seed)

    registry = demo_registry() + synthetic_registry(rng)
    registry_map = {e["coordinate"]: e["dependencies"] for e in registry}

    out = args.out
    write(out / "registry.json", registry)
    write(out / "usage_demo.json", usage_demo_history())
    write(out / "upgrade_demo.json", upgrade_demo_history())

    golden = out / "golden"
    if golden.exists():
        shutil.rmtree(golden)
    write(golden / "registry.json", registry)
    write(golden / "usage_demo.json", usage_demo_history())
    write(golden / "upgrade_demo.json", upgrade_demo_history())
    for k, name in enumerate(["acme-web", "acme-cli", "acme-core"]):
        write(golden / f"{name}.json", synthetic_history(name, rng, registry_map, 12 + 6 * k))
    print(f"wrote fixtures to {out}")


if __name__ == "__main__":
    main()

"""Run every analysis over a directory of histories and print a short digest.

    python scripts/desk_study.py [fixtures/golden]
"""

import sys
from pathlib import Path

from bloat_lens import report
from bloat_lens.ingest import load_registry, parse_history


def main():
    folder = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures" / "golden")
    registry = load_registry(folder / "registry.json")
    histories = [
        parse_history(p, registry)
        for p in sorted(folder.glob("*.json"))
        if p.name != "registry.json"
    ]
    print(f"{len(histories)} projects, {sum(len(h) for h in histories)} snapshots")

    trend, _ = report.trend_section(histories)
    for kind, dist in trend["distribution"].items():
        print(f"trend {kind:<10} " + "  ".join(f"{k}={v}" for k, v in dist.items()))

    patterns, _ = report.patterns_section(histories)
    for kind, dist in patterns["distribution"].items():
        ratio = patterns["remain_bloated_ratio"][kind]
        shown = "n/a" if ratio is None else f"{100 * ratio:.1f}%"
        print(f"patterns {kind:<10} " + "  ".join(f"{k}={v}" for k, v in dist.items()) + f"  remain-bloated={shown}")

    updates, _ = report.updates_section(histories)
    for actor, counts in updates["counts"].items():
        ratio = updates["bloated_ratio"][actor]
        shown = "n/a" if ratio is None else f"{100 * ratio:.1f}%"
        print(f"updates {actor:<6} used={counts['used']} bloated={counts['bloated']} ({shown} bloated)")

    origins, _ = report.origins_section(histories)
    print("origins " + "  ".join(f"{k}={v['direct']}/{v['transitive']}" for k, v in origins["table"].items()) + "  (direct/transitive)")


if __name__ == "__main__":
    main()

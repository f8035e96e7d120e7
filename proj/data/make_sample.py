#!/usr/bin/env python3
"""Regenerate the sample families in data/sample (stdlib only)."""
import json
import math
import struct
from pathlib import Path

OUT = Path(__file__).resolve().parent / "sample"


def member(name, shape, origin, h, values):
    raw = OUT / f"{name}.f64"
    raw.write_bytes(struct.pack(f"<{len(values)}d", *values))
    man = {"version": 1, "dim": len(shape), "shape": shape, "origin": origin, "spacing": h, "values": raw.name}
    (OUT / f"{name}.json").write_text(json.dumps(man, indent=2) + "\n")
    return {"label": name, "manifest": f"{name}.json"}


def family(path, members):
    (OUT / path).write_text(json.dumps({"version": 1, "members": members}, indent=2) + "\n")


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    # 1-D tents drifting right on [-2, 2]
    n, h, o = 64, 1.0 / 16, -2.0
    tents = []
    for i, c in enumerate((-0.5, -0.25, 0.0, 0.25, 0.5)):
        vals = [max(0.0, 1.0 - abs(o + (j + 0.5) * h - c) / 0.75) for j in range(n)]
        tents.append(member(f"tent{i}", [n], [o], h, vals))
    family("tents.json", tents)

    # step functions on [0, 1] for helly
    steps = []
    for i in range(8):
        c = 0.5 + 0.3 * (-1) ** i / (i + 1)
        steps.append(member(f"step{i}", [50], [0.0], 0.02, [1.0 if (j + 0.5) * 0.02 >= c else 0.0 for j in range(50)]))
    family("steps.json", steps)

    # 2-D smooth bumps for sobolev
    m, h2, o2 = 48, 0.125, -3.0
    bumps = []
    for i, (cx, cy) in enumerate(((0.0, 0.0), (0.25, 0.0), (0.0, 0.25))):
        vals = []
        for a in range(m):
            for b in range(m):
                x, y = o2 + (a + 0.5) * h2 - cx, o2 + (b + 0.5) * h2 - cy
                r2 = (x * x + y * y) / 4.0
                vals.append((1.0 - r2) ** 3 if r2 < 1.0 else 0.0)
        bumps.append(member(f"bump{i}", [m, m], [o2, o2], h2, vals))
    family("bumps.json", bumps)


if __name__ == "__main__":
    main()

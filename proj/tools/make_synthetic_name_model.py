#!/usr/bin/env python3
"""Generates data/names/synthetic_10.json, a small stand-in color-name model.

Bins sit on a 10-unit Lab lattice restricted to the sRGB gamut. Each of the
ten terms has a prototype color; a bin's count for a term falls off as a
Gaussian (sigma 25) of the Lab distance to that prototype, rounded to an
integer. This is synthetic data: it has the right shape for tests and
offline use, not the statistics of a real naming survey.
"""

import json
import math
import pathlib

M = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
]
WHITE = [sum(row) for row in M]

PROTOTYPES = {
    "red": "#E6194B",
    "orange": "#F58231",
    "yellow": "#FFE119",
    "green": "#3CB44B",
    "teal": "#469990",
    "blue": "#4363D8",
    "purple": "#911EB4",
    "pink": "#F58FB1",
    "brown": "#9A6324",
    "grey": "#A9A9A9",
}


def decode(v):
    return v / 12.92 if v <= 0.04045 else ((v + 0.055) / 1.055) ** 2.4


def f(t):
    return t ** (1 / 3) if t > (6 / 29) ** 3 else t / (3 * (6 / 29) ** 2) + 4 / 29


def finv(t):
    return t ** 3 if t > 6 / 29 else 3 * (6 / 29) ** 2 * (t - 4 / 29)


def hex_to_lab(h):
    rgb = [decode(int(h[i:i + 2], 16) / 255) for i in (1, 3, 5)]
    xyz = [sum(M[r][c] * rgb[c] for c in range(3)) for r in range(3)]
    fx, fy, fz = (f(xyz[i] / WHITE[i]) for i in range(3))
    return (116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz))


def invert(m):
    a, b, c = m[0]
    d, e, g = m[1]
    h, i, j = m[2]
    det = a * (e * j - g * i) - b * (d * j - g * h) + c * (d * i - e * h)
    return [
        [(e * j - g * i) / det, (c * i - b * j) / det, (b * g - c * e) / det],
        [(g * h - d * j) / det, (a * j - c * h) / det, (c * d - a * g) / det],
        [(d * i - e * h) / det, (b * h - a * i) / det, (a * e - b * d) / det],
    ]


MINV = invert(M)


def lab_in_gamut(L, a, b):
    fy = (L + 16) / 116
    fx = fy + a / 500
    fz = fy - b / 200
    xyz = [finv(fx) * WHITE[0], finv(fy) * WHITE[1], finv(fz) * WHITE[2]]
    lin = [sum(MINV[r][c] * xyz[c] for c in range(3)) for r in range(3)]
    return all(-1e-9 <= v <= 1 + 1e-9 for v in lin)


def main():
    terms = list(PROTOTYPES)
    protos = [hex_to_lab(PROTOTYPES[t]) for t in terms]
    bins, counts = [], []
    for L in range(5, 100, 10):
        for a in range(-100, 101, 10):
            for b in range(-100, 101, 10):
                if not lab_in_gamut(L, a, b):
                    continue
                idx = len(bins)
                bins.append([L, a, b])
                row = []
                for p in protos:
                    d2 = (L - p[0]) ** 2 + (a - p[1]) ** 2 + (b - p[2]) ** 2
                    row.append(round(100 * math.exp(-d2 / (2 * 25.0 ** 2))))
                if not any(row):
                    nearest = min(range(len(protos)),
                                  key=lambda k: sum((x - y) ** 2 for x, y in zip((L, a, b), protos[k])))
                    row[nearest] = 1
                counts.extend([idx, t, c] for t, c in enumerate(row) if c > 0)
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "names" / "synthetic_10.json"
    out.write_text(json.dumps({"terms": terms, "bins": bins, "counts": counts}, separators=(",", ":")) + "\n")
    print(f"{out}: {len(bins)} bins, {len(terms)} terms, {len(counts)} nonzero counts")


if __name__ == "__main__":
    main()

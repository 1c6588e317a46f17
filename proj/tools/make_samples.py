"""Writes the sample hierarchies and layouts under data/samples."""
import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "samples"


def node(id_, label=None, children=None):
    n = {"id": id_, "label": label or id_}
    if children:
        n["children"] = children
    return n


def three_level():
    # 4 parents, 11 middle nodes, 9 leaves below the middle level: 25 nodes.
    tree = {
        "mammals": {"cats": ["lion", "tiger", "lynx"], "dogs": ["wolf", "fox"], "bats": []},
        "birds": {"raptors": ["eagle", "hawk"], "songbirds": [], "seabirds": []},
        "fish": {"sharks": ["mako"], "rays": []},
        "reptiles": {"snakes": ["cobra"], "lizards": []},
    }
    children = []
    for p, mids in tree.items():
        children.append(node(p, children=[node(m, children=[node(l) for l in leaves]) for m, leaves in mids.items()]))
    return node("animals", children=children), tree


def leaves_of(tree):
    out = []
    for mids in tree.values():
        for m, leaves in mids.items():
            out.extend(leaves or [m])
    return out


def grid(labels, rows, cols, rng, features=None):
    # Contiguous blocks in row-major order so classes form regions.
    samples = []
    n = rows * cols
    for k in range(n):
        label = labels[k * len(labels) // n]
        s = {"pos": [k // cols, k % cols], "label": label}
        if features:
            s["features"] = [round(v + rng.gauss(0, 0.05), 4) for v in features[label]]
        samples.append(s)
    return {"kind": "grid", "samples": samples}


def main():
    rng = random.Random(7)
    OUT.mkdir(parents=True, exist_ok=True)
    h, tree = three_level()
    (OUT / "hierarchy_3level.json").write_text(json.dumps(h, indent=1) + "\n")
    leaves = leaves_of(tree)
    feats = {l: [rng.random() for _ in range(4)] for l in leaves}
    (OUT / "grid_3level.json").write_text(json.dumps(grid(leaves, 12, 12, rng, feats)) + "\n")

    flat = node("root", children=[node(f"c{i:02d}") for i in range(30)])
    (OUT / "flat_30.json").write_text(json.dumps(flat, indent=1) + "\n")
    labels = [f"c{i:02d}" for i in range(30)]
    feats = {l: [rng.random() for _ in range(4)] for l in labels}
    (OUT / "grid_30x30.json").write_text(json.dumps(grid(labels, 30, 30, rng, feats)) + "\n")


if __name__ == "__main__":
    main()

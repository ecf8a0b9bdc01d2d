#!/usr/bin/env python3
"""Writes the bundled presentation corpus and graph fixtures under corpus/."""

import json
import pathlib
import sys

OMEGA = "omega"


def graph(vertices, edges=()):
    return {"vertices": list(vertices), "edges": [list(e) for e in edges]}


def leaf(vertices, edges=()):
    return {"type": "leaf", "graph": graph(vertices, edges)}


def glue(s_vertices, s_edges, families):
    return {"type": "glue", "s": graph(s_vertices, s_edges), "families": families}


def fam(multiplicity, child, attachment):
    return {"multiplicity": multiplicity, "child": child, "attachment": [list(a) for a in attachment]}


def cycle(names):
    return [(names[i], names[(i + 1) % len(names)]) for i in range(len(names))]


def complete(names):
    return [(a, b) for i, a in enumerate(names) for b in names[i + 1:]]


def omega_star():
    return glue(["c"], [], [fam(OMEGA, leaf(["l"]), [("c", "l")])])


def t2():
    return glue(["s"], [], [fam(OMEGA, omega_star(), [("s", "c")])])


def omega_fan():
    return glue(["c"], [], [fam(OMEGA, leaf(["a", "b"], [("a", "b")]), [("c", "a"), ("c", "b")])])


PRESENTATIONS = {
    "omega_star": omega_star(),
    "t2": t2(),
    "t3": glue(["r"], [], [fam(OMEGA, t2(), [("r", "s")])]),
    "omega_star_pendant": glue(["c", "p"], [("c", "p")], [fam(OMEGA, leaf(["l"]), [("c", "l")])]),
    "omega_fan": omega_fan(),
    "star_of_fans": glue(["r"], [], [fam(OMEGA, omega_fan(), [("r", "c")])]),
    "omega_k2_edge": glue(["s", "t"], [("s", "t")], [fam(OMEGA, leaf(["x"]), [("s", "x"), ("t", "x")])]),
    "k2_omega": glue(
        ["a", "b"],
        [],
        [
            fam(OMEGA, leaf(["x"]), [("a", "x")]),
            fam(OMEGA, leaf(["y"]), [("b", "y")]),
            fam(2, leaf(["z"]), [("a", "z"), ("b", "z")]),
        ],
    ),
    "double_star": glue(
        ["a", "b"],
        [("a", "b")],
        [fam(OMEGA, leaf(["l"]), [("a", "l")]), fam(OMEGA, leaf(["l"]), [("b", "l")])],
    ),
    "mixed_finite": glue(
        ["s", "t"],
        [("s", "t")],
        [
            fam(3, leaf(["x", "y", "z"], cycle(["x", "y", "z"])), [("s", "x"), ("t", "y")]),
            fam(OMEGA, leaf(["l"]), [("s", "l")]),
        ],
    ),
    "omega_triangle_leaves": glue(["c"], [], [fam(OMEGA, leaf(["a", "b", "d"], cycle(["a", "b", "d"])), [("c", "a")])]),
    "omega_c5": glue(
        ["c"], [], [fam(OMEGA, leaf(["v1", "v2", "v3", "v4", "v5"], cycle(["v1", "v2", "v3", "v4", "v5"])), [("c", "v1"), ("c", "v3")])]
    ),
    "finite_glue": glue(
        ["a"], [], [fam(3, leaf(["x", "y"], [("x", "y")]), [("a", "x")]), fam(2, leaf(["z"]), [("a", "z")])]
    ),
    "omega_k4_leaves": glue(["c"], [], [fam(OMEGA, leaf(["a", "b", "d", "e"], complete(["a", "b", "d", "e"])), [("c", "a"), ("c", "b")])]),
    "hub_pair_shared": glue(
        ["h1", "h2"], [], [fam(OMEGA, leaf(["x"]), [("h1", "x"), ("h2", "x")]), fam(1, leaf(["y"]), [("h1", "y")])]
    ),
    "bipartite_block": glue(
        ["a", "b", "c"],
        [("a", "b"), ("b", "c")],
        [fam(OMEGA, leaf(["u", "v"], [("u", "v")]), [("a", "u"), ("c", "v")]), fam(2, leaf(["w"]), [("b", "w")])],
    ),
    "omega_path_leaves": glue(["c"], [], [fam(OMEGA, leaf(["a", "b", "d"], [("a", "b"), ("b", "d")]), [("c", "a"), ("c", "d")])]),
    "three_families": glue(
        ["s", "t", "u"],
        [("s", "t")],
        [
            fam(OMEGA, leaf(["x"]), [("s", "x")]),
            fam(OMEGA, leaf(["y", "z"], [("y", "z")]), [("t", "y"), ("u", "z")]),
            fam(4, leaf(["w"]), [("u", "w"), ("s", "w")]),
        ],
    ),
    "deep_mixed": glue(
        ["r", "q"],
        [("r", "q")],
        [
            fam(
                OMEGA,
                glue(
                    ["m"],
                    [],
                    [
                        fam(2, leaf(["x", "y"], [("x", "y")]), [("m", "x")]),
                        fam(OMEGA, glue(["n"], [], [fam(OMEGA, leaf(["l"]), [("n", "l")])]), [("m", "n")]),
                    ],
                ),
                [("r", "m")],
            ),
            fam(3, leaf(["z"]), [("q", "z"), ("r", "z")]),
        ],
    ),
    "ladder": glue(["a", "b"], [("a", "b")], [fam(OMEGA, leaf(["p", "q", "r", "s"], cycle(["p", "q", "r", "s"])), [("a", "p"), ("b", "q")])]),
    "omega_star_with_s_edge": glue(
        ["c", "d"], [("c", "d")], [fam(OMEGA, leaf(["l"]), [("c", "l")]), fam(2, leaf(["x"]), [("d", "x")])]
    ),
    "nested_finite_omega": glue(["r"], [], [fam(2, omega_star(), [("r", "c")])]),
    "leaf_triangle": leaf(["a", "b", "c"], cycle(["a", "b", "c"])),
    "k33_leaves": glue(
        ["c"],
        [],
        [fam(OMEGA, leaf(["a1", "a2", "a3", "b1", "b2", "b3"], [(a, b) for a in ["a1", "a2", "a3"] for b in ["b1", "b2", "b3"]]), [("c", "a1")])],
    ),
    "shared_edge_pair": glue(
        ["s", "t"], [], [fam(OMEGA, leaf(["x", "y"], [("x", "y")]), [("s", "x"), ("t", "x"), ("s", "y")])]
    ),
    "zero_family": glue(["c"], [], [fam(OMEGA, leaf(["l"]), [("c", "l")]), fam(0, leaf(["z"]), [("c", "z")])]),
    "separator_only": glue(["a", "b", "c"], cycle(["a", "b", "c"]), []),
}

GRAPHS = {
    "empty": graph([]),
    "single": graph(["a"]),
    "triangle": graph(["a", "b", "c"], cycle(["a", "b", "c"])),
    "k4": graph(["a", "b", "c", "d"], complete(["a", "b", "c", "d"])),
    "p7": graph([f"v{i}" for i in range(1, 8)], [(f"v{i}", f"v{i + 1}") for i in range(1, 7)]),
    "c5": graph([f"v{i}" for i in range(5)], cycle([f"v{i}" for i in range(5)])),
    "k33": graph(["a1", "a2", "a3", "b1", "b2", "b3"], [(a, b) for a in ["a1", "a2", "a3"] for b in ["b1", "b2", "b3"]]),
    "star5": graph(["c", "l1", "l2", "l3", "l4", "l5"], [("c", f"l{i}") for i in range(1, 6)]),
    "petersen": graph(
        [str(i) for i in range(10)],
        [(str(i), str((i + 1) % 5)) for i in range(5)]
        + [(str(i), str(i + 5)) for i in range(5)]
        + [(str(5 + i), str(5 + (i + 2) % 5)) for i in range(5)],
    ),
}


def write(path, value):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(value, indent=2, sort_keys=True) + "\n")


def main(root):
    root = pathlib.Path(root)
    for name, p in PRESENTATIONS.items():
        write(root / "presentations" / f"{name}.json", p)
    for name, g in GRAPHS.items():
        write(root / "graphs" / f"{name}.json", g)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "corpus")

"""Write the input documents of the bundled corpus.

Each upsilon cone is described as the join of some vertex cones plus
recession directions in the sigma factor, which is how the fibre pictures
are read: a polyhedron is the convex hull of its vertices plus a cone of
unbounded directions.

Run from the repository root:  python3 tools/make_corpus.py
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "tropical_rubber" / "corpus"


def orthant_sigma(labels):
    n = len(labels)
    cones = [{"name": "0", "gens": []}]
    for i, lab in enumerate(labels):
        cones.append({"name": lab, "gens": [[int(j == i) for j in range(n)]]})
    if n == 2:
        cones.append({"name": labels[0] + labels[1], "gens": [[1, 0], [0, 1]]})
    return {"rank": n, "labels": list(labels), "cones": cones}


def cells(n_sigma, vertex_gens, layout):
    """layout: list of (name, [vertex names], [sigma directions])."""
    out = []
    for name, verts, dirs in layout:
        gens = []
        for v in verts:
            gens.extend(vertex_gens[v])
        for d in dirs:
            gens.append(list(d) + [0] * (len(gens[0]) - n_sigma))
        out.append({"name": name, "gens": sorted(set(map(tuple, gens)))})
    for c in out:
        c["gens"] = [list(g) for g in c["gens"]]
    return out


def tau(labels):
    n = len(labels)
    return {"rank": n, "labels": list(labels), "gens": [[int(i == j) for j in range(n)] for i in range(n)]}


X, Y, XY = (1, 0), (0, 1), (1, 1)


def introduction():
    V = {
        "v0": [(0, 0, 1, 0), (0, 0, 0, 1)],
        "v1": [(0, 1, 1, 0), (0, 1, 0, 1)],
        "v2": [(1, 1, 1, 0), (0, 0, 0, 1)],
        "v3": [(1, 1, 1, 0), (0, 1, 0, 1)],
    }
    layout = [(v, [v], []) for v in V] + [
        ("P01", ["v0", "v1"], []), ("P02", ["v0", "v2"], []),
        ("P23", ["v2", "v3"], []), ("P13", ["v1", "v3"], []),
        ("R0", ["v0"], [X]), ("R1", ["v1"], [Y]), ("R2", ["v2"], [X]),
        ("R3x", ["v3"], [X]), ("R3y", ["v3"], [Y]),
        ("Q0123", ["v0", "v1", "v2", "v3"], []),
        ("A02", ["v0", "v2"], [X]), ("A23", ["v2", "v3"], [X]),
        ("A3", ["v3"], [X, Y]), ("A13", ["v1", "v3"], [Y]),
    ]
    return {
        "name": "introduction",
        "sigma": orthant_sigma(["D1", "D2"]),
        "tau": tau(["e1", "e2"]),
        "upsilon": {"cones": cells(2, V, layout)},
        "sample_point": [1, 1],
    }


def rank_one():
    V = {
        "v0": [(0, 1, 0), (0, 0, 1)],
        "v1": [(1, 1, 0), (0, 0, 1)],
        "v2": [(1, 1, 0), (1, 0, 1)],
    }
    layout = [(v, [v], []) for v in V] + [
        ("P01", ["v0", "v1"], []), ("P12", ["v1", "v2"], []), ("R2", ["v2"], [(1,)]),
    ]
    sigma = {"rank": 1, "labels": ["l"], "cones": [{"name": "0", "gens": []}, {"name": "l", "gens": [[1]]}]}
    return {
        "name": "rank_one",
        "sigma": sigma,
        "tau": tau(["e1", "e2"]),
        "upsilon": {"cones": cells(1, V, layout)},
        "one_complex_vertices": ["v0"],
        "sample_point": [1, 1],
    }


def actionondiv():
    V = {"v0": [(0, 0, 1)], "v1": [(0, 1, 1)], "v2": [(1, 1, 1)]}
    layout = [(v, [v], []) for v in V] + [
        ("P01", ["v0", "v1"], []), ("P12", ["v1", "v2"], []), ("P02", ["v0", "v2"], []),
        ("R0", ["v0"], [X]), ("R1", ["v1"], [Y]),
        ("R2x", ["v2"], [X]), ("R2d", ["v2"], [XY]), ("R2y", ["v2"], [Y]),
        ("A02", ["v0", "v2"], [X]), ("A2x", ["v2"], [X, XY]), ("A2y", ["v2"], [XY, Y]),
        ("A12", ["v1", "v2"], [Y]), ("T012", ["v0", "v1", "v2"], []),
    ]
    missing = {
        "name": "m_missing",
        "base_point": [1],
        "vertices": [
            {"name": "u0", "target": "v0", "position": [0, 0], "geometrically_stable": True},
            {"name": "u2", "target": "v2", "position": [1, 1], "geometrically_stable": True},
        ],
        "edges": [
            {"name": "a", "source": "u0", "target": "u2", "slope": [1, 1], "length": 1},
            {"name": "b", "source": "u0", "slope": [1, 0]},
            {"name": "c", "source": "u2", "slope": [1, 0]},
            {"name": "d", "source": "u2", "slope": [1, 1]},
            {"name": "g", "source": "u2", "slope": [0, 1]},
        ],
    }
    return {
        "name": "actionondiv",
        "sigma": orthant_sigma(["l1", "l2"]),
        "tau": tau(["e"]),
        "upsilon": {"cones": cells(2, V, layout)},
        "one_complex_vertices": ["v0", "v1", "v2"],
        "maps": [missing],
        "sample_point": [1],
    }


RANK2_V = {
    "v0": [(0, 0, 1, 0), (0, 0, 0, 1)],
    "v1": [(0, 0, 1, 0), (0, 1, 0, 1)],
    "v2": [(1, 1, 1, 0), (0, 0, 0, 1)],
    "v3": [(1, 1, 1, 0), (0, 1, 0, 1)],
}


def rank2rubber2():
    layout = [(v, [v], []) for v in RANK2_V] + [
        ("P01", ["v0", "v1"], []), ("P02", ["v0", "v2"], []),
        ("P23", ["v2", "v3"], []), ("P13", ["v1", "v3"], []),
        ("R0", ["v0"], [X]), ("R1", ["v1"], [Y]), ("R2", ["v2"], [X]),
        ("R3x", ["v3"], [X]), ("R3y", ["v3"], [Y]),
        ("Q0123", ["v0", "v1", "v2", "v3"], []),
        ("A02", ["v0", "v2"], [X]), ("A23", ["v2", "v3"], [X]),
        ("A3", ["v3"], [X, Y]), ("A13", ["v1", "v3"], [Y]),
    ]
    return {
        "name": "rank2rubber2",
        "sigma": orthant_sigma(["l1", "l2"]),
        "tau": tau(["e1", "e2"]),
        "upsilon": {"cones": cells(2, RANK2_V, layout)},
        "sample_point": [1, 1],
    }


def diagonal_refinement():
    V = {"v0": [(0, 0, 1)], "v1": [(0, 1, 1)], "v2": [(1, 1, 1)], "v3": [(1, 2, 1)]}
    layout = [(v, [v], []) for v in V] + [
        ("P01", ["v0", "v1"], []), ("P02", ["v0", "v2"], []),
        ("P23", ["v2", "v3"], []), ("P13", ["v1", "v3"], []), ("P", ["v0", "v3"], []),
        ("R0", ["v0"], [X]), ("R1", ["v1"], [Y]), ("R2", ["v2"], [X]),
        ("R3x", ["v3"], [X]), ("R3y", ["v3"], [Y]),
        ("T023", ["v0", "v2", "v3"], []), ("T013", ["v0", "v1", "v3"], []),
        ("A02", ["v0", "v2"], [X]), ("A23", ["v2", "v3"], [X]),
        ("A3", ["v3"], [X, Y]), ("A13", ["v1", "v3"], [Y]),
    ]
    return {
        "name": "diagonal_refinement",
        "sigma": orthant_sigma(["l1", "l2"]),
        "tau": tau(["e"]),
        "upsilon": {"cones": cells(2, V, layout)},
        "sample_point": [1],
    }


def noncomplete():
    V = {k: RANK2_V[k] for k in ("v0", "v2", "v3")}
    layout = [(v, [v], []) for v in V] + [
        ("P02", ["v0", "v2"], []), ("P23", ["v2", "v3"], []),
        # no ray from v0 along l2: over e1 = 0 the vertex v3 would land on it
        ("R0", ["v0"], [X]), ("R2", ["v2"], [X]),
        ("R3x", ["v3"], [X]), ("R3y", ["v3"], [Y]),
    ]
    return {
        "name": "noncomplete",
        "sigma": orthant_sigma(["l1", "l2"]),
        "tau": tau(["e1", "e2"]),
        "upsilon": {"cones": cells(2, V, layout)},
        "sample_point": [1, 1],
    }


def tube_example():
    V = {"v0": [(0, 0, 1)], "v1": [(0, 1, 1)], "v2": [(1, 1, 1)]}
    layout = [(v, [v], []) for v in V] + [
        ("P01", ["v0", "v1"], []), ("P02", ["v0", "v2"], []),
        ("R0", ["v0"], [X]), ("R1", ["v1"], [Y]), ("R2x", ["v2"], [X]), ("R2y", ["v2"], [Y]),
    ]
    m1 = {
        "name": "m1",
        "base_point": [1],
        "vertices": [
            {"name": "u0", "target": "v0", "position": [0, 0], "geometrically_stable": True},
            {"name": "u1", "target": "v1", "position": [0, 1]},
            {"name": "u2", "target": "v2", "position": [1, 1], "geometrically_stable": True},
        ],
        "edges": [
            {"name": "a", "source": "u0", "target": "u1", "slope": [0, 1], "length": 1},
            {"name": "b", "source": "u1", "slope": [0, 1]},
            {"name": "c", "source": "u0", "target": "u2", "slope": [1, 1], "length": 1},
            {"name": "d", "source": "u2", "slope": [1, 0]},
            {"name": "g", "source": "u2", "slope": [0, 1]},
            {"name": "h", "source": "u0", "slope": [1, 0]},
        ],
    }
    m2 = json.loads(json.dumps(m1))
    m2["name"] = "m1_two_slopes"
    m2["vertices"].append({"name": "u1b", "target": "v1", "position": [0, 1]})
    m2["legs"] = [
        {"name": "x1", "vertex": "u1b", "slope": [1, 0]},
        {"name": "x2", "vertex": "u1b", "slope": [-1, 0]},
    ]
    return {
        "name": "tube_example",
        "sigma": orthant_sigma(["l1", "l2"]),
        "tau": tau(["e"]),
        "upsilon": {"cones": cells(2, V, layout)},
        "one_complex_vertices": ["v0", "v1", "v2"],
        "maps": [m1, m2],
        "sample_point": [1],
    }


CASES = [introduction, rank_one, actionondiv, rank2rubber2, diagonal_refinement, noncomplete, tube_example]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for make in CASES:
        doc = make()
        path = OUT / f"{doc['name']}.json"
        path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        print("wrote", path)


if __name__ == "__main__":
    main()

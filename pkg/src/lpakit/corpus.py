"""Named example graphs and seeded random graph generators."""
from __future__ import annotations

import random
from dataclasses import replace

from .graph import Graph, cuntz_splice, out_split_graph, source_eliminate

__all__ = [
    "rose",
    "rose_minus",
    "upsilon",
    "from_matrix",
    "small_det_graph",
    "sink_point",
    "named",
    "NAMED",
    "random_graph",
    "random_regular_matrix",
    "random_moves",
]


def rose(n: int) -> Graph:
    """One vertex with ``n`` loops."""
    return Graph.build(["v"], [(f"e{i}", "v", "v") for i in range(1, n + 1)], name=f"R{n}")


def rose_minus(n: int = 2) -> Graph:
    return replace(cuntz_splice(rose(n), "v"), name=f"R{n}-")


def from_matrix(rows, names=None, name=None) -> Graph:
    """Graph whose incidence matrix is the square matrix ``rows``."""
    n = len(rows)
    names = list(names) if names else [f"v{i + 1}" for i in range(n)]
    edges = []
    for i, row in enumerate(rows):
        for j, c in enumerate(row):
            for k in range(c):
                edges.append((f"a{i + 1}_{j + 1}_{k + 1}", names[i], names[j]))
    return Graph.build(names, edges, name=name)


def upsilon() -> Graph:
    return Graph.build(["v1", "v2"], [("e", "v1", "v1"), ("f", "v1", "v2"), ("g", "v2", "v1")],
                       name="Upsilon")


def small_det_graph() -> Graph:
    """Two vertices with incidence ``[[1, 3], [1, 1]]``."""
    return from_matrix([[1, 3], [1, 1]], name="M2")


def sink_point() -> Graph:
    return Graph.build(["v"], [], name="point")


NAMED = {
    "R1": lambda: rose(1),
    "R2": lambda: rose(2),
    "R3": lambda: rose(3),
    "R4": lambda: rose(4),
    "R2-": lambda: rose_minus(2),
    "Upsilon": upsilon,
    "M2": small_det_graph,
    "point": sink_point,
}


def named(key: str) -> Graph:
    return NAMED[key]()


def random_graph(rng: random.Random, max_vertices=5, max_edges=10, regular=False) -> Graph:
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    m = rng.randint(n if regular else 0, max(max_edges, n if regular else 0))
    srcs = list(vs) if regular else []
    while len(srcs) < m:
        srcs.append(rng.choice(vs))
    rng.shuffle(srcs)
    edges = [(f"e{k}", s, rng.choice(vs)) for k, s in enumerate(srcs)]
    return Graph.build(vs, edges, name="random")


def random_regular_matrix(rng: random.Random, max_vertices=4, max_entry=3) -> list[list[int]]:
    n = rng.randint(1, max_vertices)
    while True:
        rows = [[rng.randint(0, max_entry) for _ in range(n)] for _ in range(n)]
        if all(any(r) for r in rows):
            return rows


def random_moves(G: Graph, rng: random.Random, steps=3) -> Graph:
    """Apply moves preserving the singular count and ``BF``.

    Out-splits are skipped once the edge count passes 30 to keep matrices
    desk-sized.
    """
    for _ in range(steps):
        ops = ["relabel"]
        if len(G.edges) <= 12:
            ops.append("outsplit")
        srcs = [v for v in G.sources if v not in G.sinks]
        if srcs and len(G.vertices) > 1:
            ops.append("elim")
        op = rng.choice(ops)
        if op == "outsplit":
            G = out_split_graph(G)
        elif op == "elim":
            G = source_eliminate(G, rng.choice(srcs))
        else:
            order = list(G.vertices)
            rng.shuffle(order)
            G = Graph.build(order, [(e.id, e.src, e.dst) for e in G.edges], name=G.name)
    return G

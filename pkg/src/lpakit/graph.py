"""Finite directed graphs, their matrices, predicates and moves.

A :class:`Graph` keeps vertices and edges in input order; that order fixes
the row and column indexing of every matrix built from it, and all
matrices carry the corresponding labels.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .intlin import IntMatrix

__all__ = [
    "Edge",
    "Graph",
    "GraphFormatError",
    "NotAnEliminableSource",
    "UnknownVertex",
    "VertexClassification",
    "PisReport",
    "classify_vertices",
    "incidence_matrix",
    "bf_matrix",
    "is_purely_infinite_simple",
    "source_eliminate",
    "out_split_matrices",
    "out_split_graph",
    "dual_graph",
    "cuntz_splice",
    "double_cover",
    "square_graph",
    "parse_graph",
    "format_graph",
    "load_graph",
]


class GraphFormatError(ValueError):
    pass


class NotAnEliminableSource(ValueError):
    pass


class UnknownVertex(KeyError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "edges", tuple(
            e if isinstance(e, Edge) else Edge(*map(str, e)) for e in self.edges))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphFormatError("duplicate vertex id")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise GraphFormatError("duplicate edge id")
        for e in self.edges:
            if e.src not in vs or e.dst not in vs:
                raise GraphFormatError(f"edge {e.id} uses an undeclared vertex")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, self.edges))

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]],
              name: str | None = None) -> Graph:
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges), name)

    # -- lookups ------------------------------------------------------------

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def out_edges(self) -> dict[str, tuple[Edge, ...]]:
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def in_edges(self) -> dict[str, tuple[Edge, ...]]:
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.dst].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def src(self, e: str) -> str:
        return self.edge_map[e].src

    def dst(self, e: str) -> str:
        return self.edge_map[e].dst

    @property
    def sinks(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self.out_edges[v])

    @property
    def sources(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self.in_edges[v])

    @property
    def regular_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.out_edges[v])

    @property
    def is_regular(self) -> bool:
        return not self.sinks

    @property
    def is_essential(self) -> bool:
        return not self.sinks and not self.sources

    def has_vertex(self, v: str) -> bool:
        return v in self.out_edges

    def __str__(self):
        return format_graph(self)


# ---------------------------------------------------------------------------
# text / JSON formats


def format_graph(G: Graph, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps({
            "vertices": list(G.vertices),
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in G.edges],
        }, indent=2) + "\n"
    lines = [f"vertex {v}" for v in G.vertices]
    lines += [f"edge {e.id} {e.src} {e.dst}" for e in G.edges]
    return "\n".join(lines) + "\n"


def parse_graph(text: str, name: str | None = None) -> Graph:
    """Parse the line format (``vertex``/``edge`` records) or its JSON twin."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
            return Graph(tuple(data["vertices"]),
                         tuple(Edge(str(e["id"]), str(e["src"]), str(e["dst"]))
                               for e in data["edges"]), name)
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise GraphFormatError(f"bad JSON graph: {exc}") from exc
    vertices, edges = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        # ids may contain '#', so a comment starts only at a token boundary
        parts = []
        for tok in raw.split():
            if tok.startswith("#"):
                break
            parts.append(tok)
        if not parts:
            continue
        if parts[0] == "vertex" and len(parts) == 2:
            vertices.append(parts[1])
        elif parts[0] == "edge" and len(parts) == 4:
            edges.append(Edge(parts[1], parts[2], parts[3]))
        elif parts[0] in ("infinite", "emitter"):
            raise GraphFormatError(f"line {lineno}: infinite emitters are not supported")
        else:
            raise GraphFormatError(f"line {lineno}: cannot parse {raw!r}")
    return Graph(tuple(vertices), tuple(edges), name)


def load_graph(path) -> Graph:
    from pathlib import Path

    p = Path(path)
    return parse_graph(p.read_text(encoding="utf-8"), name=p.stem)


# ---------------------------------------------------------------------------
# classification and matrices


@dataclass(frozen=True)
class VertexClassification:
    sinks: frozenset[str]
    sources: frozenset[str]
    regular: frozenset[str]
    singular: frozenset[str]


def classify_vertices(G: Graph) -> VertexClassification:
    sinks = frozenset(G.sinks)
    return VertexClassification(
        sinks=sinks,
        sources=frozenset(G.sources),
        regular=frozenset(G.vertices) - sinks,
        singular=sinks,
    )


def incidence_matrix(G: Graph) -> IntMatrix:
    """Reduced incidence matrix: rows are regular vertices, columns all vertices."""
    reg = G.regular_vertices
    col = {v: j for j, v in enumerate(G.vertices)}
    rows = []
    for v in reg:
        row = [0] * len(G.vertices)
        for e in G.out_edges[v]:
            row[col[e.dst]] += 1
        rows.append(row)
    return IntMatrix.from_rows(rows, nrows=len(reg), ncols=len(G.vertices),
                               row_labels=reg, col_labels=G.vertices)


def bf_matrix(G: Graph) -> IntMatrix:
    """``I - A^t`` with rows indexed by all vertices, columns by regular ones."""
    At = incidence_matrix(G).T
    reg = set(G.regular_vertices)
    rows = []
    for i, v in enumerate(G.vertices):
        row = []
        for j, w in enumerate(At.col_labels):
            row.append(int(v == w) - At[i, j])
        rows.append(row)
    return IntMatrix.from_rows(rows, nrows=len(G.vertices), ncols=len(reg),
                               row_labels=G.vertices, col_labels=At.col_labels)


# ---------------------------------------------------------------------------
# purely infinite simple


@dataclass(frozen=True)
class PisReport:
    holds: bool
    failed: str | None = None
    witness: object = None

    def __bool__(self):
        return self.holds


def _reach(G: Graph) -> dict[str, set[str]]:
    out = {}
    for v in G.vertices:
        seen = {v}
        todo = deque([v])
        while todo:
            x = todo.popleft()
            for e in G.out_edges[x]:
                if e.dst not in seen:
                    seen.add(e.dst)
                    todo.append(e.dst)
        out[v] = seen
    return out


def _cyclic_components(G: Graph, reach) -> list[frozenset[str]]:
    """Strongly connected components that contain at least one edge."""
    comps, done = [], set()
    for v in G.vertices:
        if v in done:
            continue
        comp = frozenset(w for w in reach[v] if v in reach[w])
        done |= comp
        if len(comp) > 1 or any(e.dst == v for e in G.out_edges[v]):
            comps.append(comp)
    return comps


def _exitless_cycle(G: Graph) -> list[str] | None:
    for v in G.vertices:
        path, x = [], v
        for _ in range(len(G.vertices)):
            outs = G.out_edges[x]
            if len(outs) != 1:
                break
            path.append(outs[0].id)
            x = outs[0].dst
            if x == v:
                return path
    return None


def is_purely_infinite_simple(G: Graph) -> PisReport:
    """Condition (L), cofinality and existence of a cycle, with a witness.

    Cofinality of a finite graph is checked as: every vertex reaches every
    sink and every strongly connected component carrying an edge.
    """
    cyc = _exitless_cycle(G)
    if cyc is not None:
        return PisReport(False, "cycle without exit", cyc)
    reach = _reach(G)
    for v in G.vertices:
        for s in G.sinks:
            if s not in reach[v]:
                return PisReport(False, "not cofinal", {"vertex": v, "misses_sink": s})
    comps = _cyclic_components(G, reach)
    for v in G.vertices:
        for c in comps:
            if not reach[v] & c:
                return PisReport(False, "not cofinal",
                                 {"vertex": v, "misses_cycle_at": sorted(c)[0]})
    if not comps:
        return PisReport(False, "no cycle", None)
    return PisReport(True)


# ---------------------------------------------------------------------------
# moves


def source_eliminate(G: Graph, v: str) -> Graph:
    if not G.has_vertex(v):
        raise UnknownVertex(v)
    if G.in_edges[v] or not G.out_edges[v]:
        raise NotAnEliminableSource(f"{v} is not a source that emits edges")
    return Graph(tuple(w for w in G.vertices if w != v),
                 tuple(e for e in G.edges if e.src != v), G.name)


def out_split_matrices(G: Graph) -> tuple[IntMatrix, IntMatrix]:
    """The matrices ``B`` (edges x (edges + sinks)) and ``J`` ((edges + sinks) x edges).

    ``B[e, x]`` records whether ``x`` may follow ``e``; ``J`` is the
    identity on edges with zero rows for the sinks, so that ``J - B^t`` is
    the Bowen-Franks matrix of the out-split graph.
    """
    sinks = G.sinks
    edges = [e.id for e in G.edges]
    cols = edges + list(sinks)
    B = []
    for e in G.edges:
        row = [int(e.dst == f.src) for f in G.edges]
        row += [int(e.dst == s) for s in sinks]
        B.append(row)
    J = [[int(x == e) for e in edges] for x in cols]
    Bm = IntMatrix.from_rows(B, nrows=len(edges), ncols=len(cols),
                             row_labels=edges, col_labels=cols)
    Jm = IntMatrix.from_rows(J, nrows=len(cols), ncols=len(edges),
                             row_labels=cols, col_labels=edges)
    return Bm, Jm


def out_split_graph(G: Graph) -> Graph:
    B, _ = out_split_matrices(G)
    verts = B.col_labels
    if len(set(verts)) != len(verts):
        raise GraphFormatError("edge ids collide with sink ids")
    edges = [Edge(f"{e}>{x}", e, x)
             for i, e in enumerate(B.row_labels)
             for j, x in enumerate(verts) if B[i, j]]
    Gs = Graph(tuple(verts), tuple(edges))
    assert incidence_matrix(Gs).same_entries(B)
    return Gs


def dual_graph(G: Graph) -> Graph:
    return Graph(G.vertices, tuple(Edge(e.id, e.dst, e.src) for e in G.edges), G.name)


def cuntz_splice(G: Graph, v: str) -> Graph:
    """Attach the two-vertex, six-edge gadget at ``v``."""
    if not G.has_vertex(v):
        raise UnknownVertex(v)
    v1, v2 = f"{v}#1", f"{v}#2"
    new = [(v, v1), (v1, v), (v1, v1), (v1, v2), (v2, v1), (v2, v2)]
    edges = [Edge(f"{v}#s{k}", a, b) for k, (a, b) in enumerate(new, 1)]
    return Graph(G.vertices + (v1, v2), G.edges + tuple(edges))


def double_cover(G: Graph) -> Graph:
    """Vertices and edges doubled; sources keep their level, ranges flip it."""
    verts = tuple(f"{v}@{i}" for i in (0, 1) for v in G.vertices)
    edges = tuple(Edge(f"{e.id}@{i}", f"{e.src}@{i}", f"{e.dst}@{1 - i}")
                  for i in (0, 1) for e in G.edges)
    return Graph(verts, edges)


def square_graph(G: Graph) -> Graph:
    """Same vertices; one edge per path of length two."""
    edges = tuple(Edge(f"{e.id}.{f.id}", e.src, f.dst)
                  for e in G.edges for f in G.out_edges[e.dst])
    return Graph(G.vertices, edges)

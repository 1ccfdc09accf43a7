"""Integer-coefficient arithmetic in Cohn and Leavitt path algebras.

A monomial ``alpha beta*`` is a pair of paths ending at the same vertex; a
path is ``(start, edges)``.  Cohn elements are arbitrary combinations of
monomials.  Leavitt elements are kept in the normal form where no monomial
has both paths ending in the special (last listed) edge of a vertex; the
rewrite

    alpha' e (beta' e)*  ->  alpha' beta'*  -  sum_{f != e, s(f) = s(e)} alpha' f (beta' f)*

removes such monomials.
"""
from __future__ import annotations

import random
import re
from typing import Iterable, Mapping

from .graph import Graph
from .invariants import NotRegular

__all__ = [
    "TermSyntaxError",
    "UnknownGenerator",
    "AmbientMismatch",
    "NotRegular",
    "Path",
    "Monomial",
    "Term",
    "parse",
    "multiply",
    "normal_form",
    "star",
    "bar",
    "grade",
    "grade_mod2",
    "rho_apply",
    "verify_minus_one_identity",
]

Path = tuple  # (start vertex, tuple of edge ids)
Monomial = tuple  # (alpha, beta)

COHN = "cohn"
LEAVITT = "leavitt"


class TermSyntaxError(ValueError):
    pass


class UnknownGenerator(KeyError):
    pass


class AmbientMismatch(ValueError):
    pass


def _end(G: Graph, p: Path) -> str:
    return G.dst(p[1][-1]) if p[1] else p[0]


def _extends(p: Path, q: Path) -> bool:
    """Whether ``q`` starts with ``p``."""
    return p[0] == q[0] and q[1][:len(p[1])] == p[1]


def _special(G: Graph) -> dict[str, str]:
    return {v: es[-1].id for v, es in G.out_edges.items() if es}


class Term:
    """Element of ``C(E)`` or ``L(E)`` with integer coefficients."""

    __slots__ = ("graph", "ambient", "coeffs")

    def __init__(self, graph: Graph, ambient: str, coeffs: Mapping[Monomial, int] = ()):
        if ambient not in (COHN, LEAVITT):
            raise ValueError(f"unknown ambient {ambient!r}")
        self.graph = graph
        self.ambient = ambient
        self.coeffs = {m: c for m, c in dict(coeffs).items() if c}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, G: Graph, ambient=COHN) -> Term:
        return cls(G, ambient)

    @classmethod
    def vertex(cls, G: Graph, v: str, ambient=COHN) -> Term:
        p = (v, ())
        return cls(G, ambient, {(p, p): 1})

    @classmethod
    def edge(cls, G: Graph, e: str, ambient=COHN, ghost=False) -> Term:
        E = G.edge_map[e]
        p, q = (E.src, (e,)), (E.dst, ())
        return cls(G, ambient, {(q, p) if ghost else (p, q): 1})

    @classmethod
    def scalar(cls, G: Graph, n: int, ambient=COHN) -> Term:
        return cls(G, ambient, {((v, ()), (v, ())): n for v in G.vertices})

    @classmethod
    def generator(cls, G: Graph, name: str, ambient=COHN, ghost=False) -> Term:
        if G.has_vertex(name):
            return cls.vertex(G, name, ambient)
        if name in G.edge_map:
            return cls.edge(G, name, ambient, ghost)
        raise UnknownGenerator(name)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: Term):
        if self.ambient != other.ambient or self.graph != other.graph:
            raise AmbientMismatch("terms live in different algebras")

    def _new(self, coeffs) -> Term:
        t = Term(self.graph, self.ambient, coeffs)
        return normal_form(t) if self.ambient == LEAVITT else t

    def __add__(self, other: Term) -> Term:
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return Term(self.graph, self.ambient, out)

    def __neg__(self) -> Term:
        return Term(self.graph, self.ambient, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: Term) -> Term:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return Term(self.graph, self.ambient, {m: other * c for m, c in self.coeffs.items()})
        return multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return (self.ambient, self.graph, self.coeffs) == (other.ambient, other.graph, other.coeffs)

    def __hash__(self):
        return hash((self.ambient, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def in_ambient(self, ambient: str) -> Term:
        t = Term(self.graph, ambient, self.coeffs)
        return normal_form(t) if ambient == LEAVITT else t

    def __str__(self):
        return format_term(self)

    def __repr__(self):
        return f"Term({self.ambient}: {self})"


def _mono_product(G: Graph, m1: Monomial, m2: Monomial) -> Monomial | None:
    (a, b), (c, d) = m1, m2
    if _extends(b, c):
        rest = c[1][len(b[1]):]
        return ((a[0], a[1] + rest), d)
    if _extends(c, b):
        rest = b[1][len(c[1]):]
        return (a, (d[0], d[1] + rest))
    return None


def multiply(x: Term, y: Term) -> Term:
    x._check(y)
    out: dict = {}
    for m1, c1 in x.coeffs.items():
        for m2, c2 in y.coeffs.items():
            m = _mono_product(x.graph, m1, m2)
            if m is not None:
                out[m] = out.get(m, 0) + c1 * c2
    return x._new(out)


def _redex(G: Graph, m: Monomial, special) -> tuple | None:
    a, b = m
    if a[1] and b[1] and a[1][-1] == b[1][-1]:
        e = a[1][-1]
        if special.get(G.src(e)) == e:
            return e
    return None


def normal_form(x: Term, rng: random.Random | None = None) -> Term:
    """Leavitt normal form; ``rng`` shuffles the order redexes are reduced."""
    G = x.graph
    special = _special(G)
    out = {m: c for m, c in x.coeffs.items()}
    while True:
        pending = [m for m in out if _redex(G, m, special)]
        if not pending:
            break
        pending.sort()
        if rng is not None:
            rng.shuffle(pending)
        for m in pending[: (rng.randint(1, len(pending)) if rng else len(pending))]:
            c = out.pop(m, 0)
            if not c:
                continue
            (a0, ae), (b0, be) = m
            e = ae[-1]
            a, b = (a0, ae[:-1]), (b0, be[:-1])
            terms = [((a, b), c)]
            for f in G.out_edges[G.src(e)][:-1]:
                terms.append((((a0, a[1] + (f.id,)), (b0, b[1] + (f.id,))), -c))
            for mm, cc in terms:
                out[mm] = out.get(mm, 0) + cc
                if not out[mm]:
                    del out[mm]
    return Term(G, LEAVITT, out)


def star(x: Term) -> Term:
    return x._new({(b, a): c for (a, b), c in x.coeffs.items()})


def bar(x: Term) -> Term:
    """Signed involution: ``v -> v``, ``e -> -e*``, ``e* -> -e``."""
    return x._new({(b, a): c * (-1) ** (len(a[1]) + len(b[1])) for (a, b), c in x.coeffs.items()})


def grade(x: Term) -> int | None:
    """``|alpha| - |beta|`` shared by every monomial, else ``None``."""
    ds = {len(a[1]) - len(b[1]) for a, b in x.coeffs}
    return ds.pop() if len(ds) == 1 else None


def grade_mod2(x: Term) -> int | None:
    ds = {(len(a[1]) - len(b[1])) % 2 for a, b in x.coeffs}
    return ds.pop() if len(ds) == 1 else None


# ---------------------------------------------------------------------------
# the representation on finitely supported functions of paths


def _rho_vertex(G, v, vec):
    return {p: c for p, c in vec.items() if p[0] == v}


def _rho_edge(G, e, vec):
    E = G.edge_map[e]
    return {(E.src, (e,) + p[1]): c for p, c in vec.items() if p[0] == E.dst}


def _rho_ghost(G, e, vec):
    E = G.edge_map[e]
    return {(E.dst, p[1][1:]): c for p, c in vec.items() if p[1][:1] == (e,)}


def _word(m: Monomial):
    """Generators of ``alpha beta*`` from left to right."""
    a, b = m
    if not a[1] and not b[1]:
        return [("v", a[0])]
    return [("e", e) for e in a[1]] + [("g", e) for e in reversed(b[1])]


def rho_apply(x: Term, vec: Mapping[Path, int]) -> dict[Path, int]:
    """Apply the path representation of ``x``, one generator at a time."""
    if x.ambient != COHN:
        raise AmbientMismatch("the path representation is defined on the Cohn algebra")
    G = x.graph
    act = {"v": _rho_vertex, "e": _rho_edge, "g": _rho_ghost}
    out: dict = {}
    for m, c in x.coeffs.items():
        w = dict(vec)
        for kind, g in reversed(_word(m)):
            w = act[kind](G, g, w)
        for p, k in w.items():
            out[p] = out.get(p, 0) + c * k
    return {p: k for p, k in out.items() if k}


def verify_minus_one_identity(G: Graph) -> bool:
    """``sum_e e bar(e) == -1`` in ``L(E)``."""
    if not G.is_regular:
        raise NotRegular("the identity needs every vertex to emit an edge")
    total = Term.zero(G, LEAVITT)
    for e in G.edges:
        t = Term.edge(G, e.id, LEAVITT)
        total = total + t * bar(t)
    return normal_form(total) == Term.scalar(G, -1, LEAVITT)


# ---------------------------------------------------------------------------
# text syntax

_TOKEN = re.compile(r"\s*(?:(?P<op>[-+()*])|(?P<word>[^\s\-+()*]+))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TermSyntaxError(f"unexpected character at {pos}: {text[pos:]!r}")
        out.append(("op", m["op"]) if m["op"] else ("word", m["word"]))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, G, ambient, tokens):
        self.G, self.ambient, self.toks, self.i = G, ambient, tokens, 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise TermSyntaxError(f"expected {value or 'a token'} at token {self.i}")
        self.i += 1
        return tok

    def expr(self) -> Term:
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        total = self.product() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
            total = total + self.product() * sign
        return total

    def product(self) -> Term:
        t = self.factor()
        while self.peek()[0] == "word" or self.peek() == ("op", "("):
            t = multiply(t, self.factor())
        return t

    def factor(self) -> Term:
        kind, val = self.peek()
        if kind == "word":
            self.take()
            ghost = 0
            while self.peek() == ("op", "*"):
                self.take()
                ghost += 1
            if val in self.G.edge_map or self.G.has_vertex(val):
                return Term.generator(self.G, val, self.ambient, ghost=bool(ghost % 2))
            if val.isdigit():
                t = Term.scalar(self.G, int(val), self.ambient)
            else:
                raise UnknownGenerator(val)
        elif (kind, val) == ("op", "("):
            self.take()
            t = self.expr()
            self.take(")")
            ghost = 0
            while self.peek() == ("op", "*"):
                self.take()
                ghost += 1
        else:
            raise TermSyntaxError(f"unexpected {val!r} at token {self.i}")
        return star(t) if ghost % 2 else t


def parse(text: str, G: Graph, ambient: str = LEAVITT) -> Term:
    toks = _tokenize(text)
    if not toks:
        raise TermSyntaxError("empty expression")
    p = _Parser(G, ambient, toks)
    t = p.expr()
    if p.i != len(toks):
        raise TermSyntaxError(f"trailing input at token {p.i}")
    return normal_form(t) if ambient == LEAVITT else t


def _mono_str(m: Monomial) -> str:
    a, b = m
    if not a[1] and not b[1]:
        return a[0]
    return " ".join(list(a[1]) + [f"{e}*" for e in reversed(b[1])])


def _mono_key(m: Monomial):
    a, b = m
    return (len(a[1]) + len(b[1]), a[1], b[1], a[0], b[0])


def format_term(x: Term) -> str:
    if not x.coeffs:
        return "0"
    parts = []
    for k, m in enumerate(sorted(x.coeffs, key=_mono_key)):
        c = x.coeffs[m]
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)} "
        body = f"{mag}{_mono_str(m)}"
        if k == 0:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def random_term(G: Graph, rng: random.Random, ambient=COHN, max_len=2, size=3) -> Term:
    """Random combination of monomials ``alpha beta*`` with short paths."""
    paths = list(_paths_upto(G, max_len))
    coeffs = {}
    for _ in range(rng.randint(1, size)):
        a = rng.choice(paths)
        ends = [p for p in paths if _end(G, p) == _end(G, a)]
        b = rng.choice(ends)
        coeffs[(a, b)] = coeffs.get((a, b), 0) + rng.choice([-2, -1, 1, 2, 3])
    t = Term(G, ambient, coeffs)
    return normal_form(t) if ambient == LEAVITT else t


def _paths_upto(G: Graph, n: int) -> Iterable[Path]:
    layer = [(v, ()) for v in G.vertices]
    for _ in range(n + 1):
        yield from layer
        layer = [(p[0], p[1] + (e.id,)) for p in layer for e in G.out_edges[_end(G, p)]]

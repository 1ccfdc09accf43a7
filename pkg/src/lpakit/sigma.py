"""Modules over the group ring ``Z[s]`` with ``s^2 = 1``.

``Z[s]`` is not a principal ideal domain, so modules are stored as an
abelian group together with the matrix of ``s`` on its canonical
generators.  Every ``Z[s]`` question is reduced to integer linear algebra
by restriction of scalars: a ``Z[s]``-matrix ``P + sQ`` acts on
``Z^n + sZ^n`` as the block matrix ``[[P, Q], [Q, P]]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .intlin import (
    FgAbelianGroup,
    GroupHom,
    IntMatrix,
    NonSquare,
    UnsupportedInfiniteGroup,
    cokernel,
    find_isomorphisms,
    presented_kernel,
)

__all__ = [
    "SigmaScalar",
    "SigmaMatrix",
    "SigmaModule",
    "double",
    "coker_sigma",
    "det_sigma",
    "is_unit",
    "mod_sigma_minus_one",
    "sigma_iso_decide",
    "hom_sigma",
    "tensor_sigma",
]


@dataclass(frozen=True)
class SigmaScalar:
    """The element ``a + b*s`` of ``Z[s]``."""

    a: int
    b: int = 0

    def __add__(self, other):
        other = _scalar(other)
        return SigmaScalar(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return SigmaScalar(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_scalar(other))

    def __mul__(self, other):
        o = _scalar(other)
        return SigmaScalar(self.a * o.a + self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def at(self, s: int) -> int:
        """Evaluate at ``s = +1`` or ``s = -1``."""
        return self.a + s * self.b

    def norm(self) -> int:
        return self.at(1) * self.at(-1)

    def __str__(self):
        return f"{self.a}{self.b:+d}*s"

    @classmethod
    def parse(cls, text: str) -> SigmaScalar:
        t = text.replace(" ", "").replace("+-", "-")
        if not t.endswith("*s"):
            return cls(int(t), 0)
        body = t[:-2]
        cut = max(body.rfind("+", 1), body.rfind("-", 1))
        if cut <= 0:
            return cls(0, int(body))
        return cls(int(body[:cut]), int(body[cut:]))


def _scalar(x) -> SigmaScalar:
    return x if isinstance(x, SigmaScalar) else SigmaScalar(int(x), 0)


SIGMA = SigmaScalar(0, 1)


@dataclass(frozen=True)
class SigmaMatrix:
    """``P + s*Q`` for integer matrices ``P`` and ``Q`` of equal shape."""

    P: IntMatrix
    Q: IntMatrix

    def __post_init__(self):
        if self.P.shape != self.Q.shape:
            raise ValueError("P and Q must have the same shape")

    @classmethod
    def from_scalars(cls, rows: Sequence[Sequence]) -> SigmaMatrix:
        rows = [[_scalar(x) for x in r] for r in rows]
        m = len(rows)
        n = len(rows[0]) if rows else 0
        return cls(IntMatrix.from_rows([[x.a for x in r] for r in rows], nrows=m, ncols=n),
                   IntMatrix.from_rows([[x.b for x in r] for r in rows], nrows=m, ncols=n))

    @classmethod
    def identity(cls, n: int) -> SigmaMatrix:
        return cls(IntMatrix.identity(n), IntMatrix.zeros(n, n))

    @property
    def shape(self):
        return self.P.shape

    def __getitem__(self, ij) -> SigmaScalar:
        return SigmaScalar(self.P[ij], self.Q[ij])

    def __matmul__(self, other: SigmaMatrix) -> SigmaMatrix:
        return SigmaMatrix(self.P @ other.P + self.Q @ other.Q,
                           self.P @ other.Q + self.Q @ other.P)

    def __add__(self, other):
        return SigmaMatrix(self.P + other.P, self.Q + other.Q)

    def __sub__(self, other):
        return SigmaMatrix(self.P - other.P, self.Q - other.Q)

    def __eq__(self, other):
        if not isinstance(other, SigmaMatrix):
            return NotImplemented
        return self.P.same_entries(other.P) and self.Q.same_entries(other.Q)

    def __hash__(self):
        return hash((self.P.entries, self.Q.entries))

    def at(self, s: int) -> IntMatrix:
        return self.P + self.Q.scale(s)

    def to_json(self) -> dict:
        return {"P": self.P.to_json(), "Q": self.Q.to_json()}

    @classmethod
    def from_json(cls, data) -> SigmaMatrix:
        return cls(IntMatrix.from_json(data["P"]), IntMatrix.from_json(data["Q"]))


def double(M: SigmaMatrix) -> IntMatrix:
    """Restriction of scalars: ``[[P, Q], [Q, P]]`` on the basis ``{1, s}``."""
    P, Q = M.P.unlabeled(), M.Q.unlabeled()
    return P.hstack(Q).vstack(Q.hstack(P))


def undouble(D: IntMatrix) -> SigmaMatrix:
    """Inverse of :func:`double` for block matrices of the right shape."""
    m, n = D.rows // 2, D.cols // 2
    P = D.submatrix(range(m), range(n))
    Q = D.submatrix(range(m), range(n, 2 * n))
    if not double(SigmaMatrix(P, Q)).same_entries(D):
        raise ValueError("matrix does not commute with s")
    return SigmaMatrix(P, Q)


def _swap(n: int) -> IntMatrix:
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[i][n + i] = 1
        rows[n + i][i] = 1
    return IntMatrix.from_rows(rows, nrows=2 * n, ncols=2 * n)


def det_sigma(M: SigmaMatrix) -> SigmaScalar:
    """Determinant in ``Z[s]``.

    ``Z[s]`` embeds in ``Z x Z`` through the evaluations ``s = 1`` and
    ``s = -1``; both integer determinants are computed exactly and the pair
    is pulled back.
    """
    m, n = M.shape
    if m != n:
        raise NonSquare(f"determinant of a {m}x{n} matrix")
    x = M.at(1).det()
    y = M.at(-1).det()
    # x = a + b and y = a - b always have the same parity
    return SigmaScalar((x + y) // 2, (x - y) // 2)


def is_unit(x: SigmaScalar) -> bool:
    """Units of ``Z[s]`` are exactly ``+-1`` and ``+-s``."""
    x = _scalar(x)
    return abs(x.at(1)) == 1 and abs(x.at(-1)) == 1


@dataclass(frozen=True)
class SigmaModule:
    """A finitely generated ``Z[s]``-module: a group plus an involution."""

    underlying: FgAbelianGroup
    sigma: GroupHom

    def __post_init__(self):
        if self.sigma.domain is not self.underlying and not (
                self.sigma.domain.invariants == self.underlying.invariants):
            raise ValueError("sigma must act on the underlying group")
        if not (self.sigma @ self.sigma) == GroupHom.identity(self.underlying):
            raise ValueError("sigma does not square to the identity")

    @classmethod
    def trivial_action(cls, G: FgAbelianGroup) -> SigmaModule:
        return cls(G, GroupHom.identity(G))

    @classmethod
    def from_action(cls, G: FgAbelianGroup, matrix) -> SigmaModule:
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix.from_rows(matrix, nrows=G.ngens, ncols=G.ngens)
        return cls(G, GroupHom.checked(G, G, matrix))

    @classmethod
    def free(cls, n: int = 1) -> SigmaModule:
        """``Z[s]^n``, with underlying group ``Z^{2n}`` and ``s`` swapping halves."""
        return coker_sigma(SigmaMatrix(IntMatrix.zeros(n, 0), IntMatrix.zeros(n, 0)))

    @classmethod
    def zero(cls) -> SigmaModule:
        return cls.trivial_action(FgAbelianGroup.trivial())

    @property
    def action(self) -> IntMatrix:
        return self.sigma.matrix

    def __str__(self):
        return f"{self.underlying} (s = {self.action.tolist()})"


def coker_sigma(M: SigmaMatrix) -> SigmaModule:
    """Cokernel of a ``Z[s]``-matrix, with ``s`` descended from the swap."""
    G = cokernel(double(M))
    S = _swap(M.shape[0])
    act = G.proj @ S @ G.lift
    return SigmaModule(G, GroupHom(G, G, act))


def mod_sigma_minus_one(M: SigmaModule) -> FgAbelianGroup:
    """Coinvariants ``M / (s - 1) M``."""
    G = M.underlying
    rel = IntMatrix.diagonal(G.moduli)
    return cokernel(rel.hstack(M.action - IntMatrix.identity(G.ngens)))


def _equivariant_checks(M: SigmaModule, N: SigmaModule):
    """Pruning predicates ``h(s g_j) == s h(g_j)`` for each generator ``j``."""
    A, B = M.underlying, N.underlying
    checks = []
    for j in range(A.ngens):
        col = M.action.column(j)
        depth = max([j] + [c for c, x in enumerate(col) if x])

        def pred(images, j=j, col=col):
            lhs = B.zero()
            for c, x in enumerate(col):
                if x:
                    lhs = B.add(lhs, B.scale(x, images[c]))
            return lhs == N.sigma(images[j])

        checks.append((depth, pred))
    return checks


def sigma_iso_decide(M: SigmaModule, N: SigmaModule) -> GroupHom | None:
    """An ``s``-equivariant isomorphism ``M -> N``, or ``None``.

    Non-isomorphic underlying groups are rejected at once; otherwise both
    groups must be finite and every candidate is searched.
    """
    if M.underlying.invariants != N.underlying.invariants:
        return None
    if M.underlying.rank:
        raise UnsupportedInfiniteGroup("equivariant search needs finite modules")
    h = next(find_isomorphisms(M.underlying, N.underlying, _equivariant_checks(M, N)), None)
    if h is not None:
        assert h @ M.sigma == N.sigma @ h
    return h


def _entry_steps(m: int, n: int) -> tuple[int, int]:
    """For a hom entry ``Z/m -> Z/n``: (lattice step, resulting modulus)."""
    if m == 0:
        return 1, n
    if n == 0:
        return 0, 1
    g = math.gcd(m, n)
    return n // g, g


def hom_sigma(M: SigmaModule, N: SigmaModule) -> FgAbelianGroup:
    """Equivariant homomorphisms ``M -> N`` as an abelian group.

    ``Hom(M, N)`` is parametrised entrywise (``h_ij = c_ij t_ij`` with
    ``t_ij`` modulo ``gcd(m_j, n_i)``); the answer is the kernel of
    ``h -> s_N h - h s_M`` into ``N^{#gens M}``.
    """
    A, B = M.underlying, N.underlying
    ka, kb = A.ngens, B.ngens
    params = []  # (i, j, step, modulus)
    for i, n in enumerate(B.moduli):
        for j, m in enumerate(A.moduli):
            step, mod = _entry_steps(m, n)
            if step:
                params.append((i, j, step, mod))
    SA, SB = M.action, N.action
    cols = []
    for i, j, step, _ in params:
        # H = step * E_ij ; value s_N H - H s_M, flattened column by column
        val = [[0] * ka for _ in range(kb)]
        for r in range(kb):
            val[r][j] += step * SB[r, i]
        for c in range(ka):
            val[i][c] -= step * SA[j, c]
        cols.append([val[r][c] for c in range(ka) for r in range(kb)])
    F = IntMatrix.from_columns(cols, ka * kb)
    dom_rel = IntMatrix.diagonal([p[3] for p in params])
    cod_rel = IntMatrix.diagonal(list(B.moduli) * ka)
    K, _ = presented_kernel(F, dom_rel, cod_rel)
    return K


def tensor_sigma(M: SigmaModule, N: SigmaModule) -> FgAbelianGroup:
    """``M (x)_{Z[s]} N = (M (x) N) / (s m (x) n - m (x) s n)``."""
    A, B = M.underlying, N.underlying
    ka, kb = A.ngens, B.ngens

    def idx(a, b):
        return a * kb + b

    rels = []
    for a, m in enumerate(A.moduli):
        for b, n in enumerate(B.moduli):
            g = math.gcd(m, n)
            if g:
                v = [0] * (ka * kb)
                v[idx(a, b)] = g
                rels.append(v)
    for a in range(ka):
        for b in range(kb):
            v = [0] * (ka * kb)
            for c in range(ka):
                v[idx(c, b)] += M.action[c, a]
            for d in range(kb):
                v[idx(a, d)] -= N.action[d, b]
            if any(v):
                rels.append(v)
    return cokernel(IntMatrix.from_columns(rels, ka * kb))

"""Exact linear algebra over the integers.

Everything here works with Python ints, so there is no overflow and no
rounding.  Matrices are small (desk-scale); the algorithms favour
determinism and explicit unimodular witnesses over asymptotic speed.

The central objects are

* :class:`IntMatrix` -- an immutable integer matrix with optional labels,
* :func:`hnf` / :func:`snf` -- normal forms with witnesses,
* :class:`FgAbelianGroup` -- a finitely generated abelian group in
  canonical form (free part first, then torsion with ascending invariant
  factors), remembering how ambient vectors map into it,
* :class:`GroupHom` -- a homomorphism written on canonical generators.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence

__all__ = [
    "IntMatrix",
    "FgAbelianGroup",
    "GroupHom",
    "NonSquare",
    "UnsupportedInfiniteGroup",
    "SearchTooLarge",
    "hnf",
    "snf",
    "cokernel",
    "kernel_basis",
    "image_basis",
    "solve",
    "reduce_mod_lattice",
    "presented_kernel",
    "hom_group",
    "tensor_group",
    "direct_sum",
    "hom_exists_with_value",
    "iso_with_element_constraint",
    "find_isomorphisms",
    "SEARCH_LIMIT",
]

# Exhaustive searches refuse groups larger than this.
SEARCH_LIMIT = 10_000


class NonSquare(ValueError):
    pass


class UnsupportedInfiniteGroup(ValueError):
    pass


class SearchTooLarge(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# matrices


def _labels(labels, n, what):
    if labels is None:
        return None
    labels = tuple(str(x) for x in labels)
    if len(labels) != n:
        raise ValueError(f"{what} labels have length {len(labels)}, expected {n}")
    return labels


@dataclass(frozen=True)
class IntMatrix:
    """Dense matrix of arbitrary-precision integers.

    ``rows`` and ``cols`` are stored explicitly so that empty matrices
    (``3 x 0``, ``0 x 2``...) keep their shape.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]
    row_labels: tuple[str, ...] | None = None
    col_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match dimensions")
        object.__setattr__(self, "row_labels", _labels(self.row_labels, self.rows, "row"))
        object.__setattr__(self, "col_labels", _labels(self.col_labels, self.cols, "column"))

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], *, nrows=None, ncols=None,
                  row_labels=None, col_labels=None) -> IntMatrix:
        data = tuple(tuple(int(x) for x in r) for r in rows)
        m = len(data) if nrows is None else nrows
        if ncols is None:
            if data:
                ncols = len(data[0])
            elif col_labels is not None:
                ncols = len(col_labels)
            else:
                ncols = 0
        if not data and m:
            data = tuple(() for _ in range(m))
        return cls(m, ncols, data, row_labels, col_labels)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int, **kw) -> IntMatrix:
        cols = [list(c) for c in columns]
        return cls.from_rows(
            [[c[i] for c in cols] for i in range(nrows)], nrows=nrows, ncols=len(cols), **kw)

    @classmethod
    def zeros(cls, m: int, n: int) -> IntMatrix:
        return cls(m, n, tuple((0,) * n for _ in range(m)))

    @classmethod
    def identity(cls, n: int, labels=None) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)),
                   labels, labels)

    @classmethod
    def diagonal(cls, diag: Sequence[int], m: int | None = None, n: int | None = None) -> IntMatrix:
        m = len(diag) if m is None else m
        n = len(diag) if n is None else n
        rows = [[0] * n for _ in range(m)]
        for i, d in enumerate(diag):
            rows[i][i] = d
        return cls.from_rows(rows, nrows=m, ncols=n)

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def relabel(self, row_labels=None, col_labels=None) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, self.entries, row_labels, col_labels)

    def unlabeled(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, self.entries)

    def same_entries(self, other: IntMatrix) -> bool:
        return self.shape == other.shape and self.entries == other.entries

    # -- arithmetic -------------------------------------------------------

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows,
                         tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)),
                         self.col_labels, self.row_labels)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            rows = tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in ocols) for r in self.entries)
            return IntMatrix(self.rows, other.cols, rows, self.row_labels, other.col_labels)
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.entries)

    def _zip(self, other: IntMatrix, op) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        rows = tuple(tuple(op(a, b) for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        return IntMatrix(self.rows, self.cols, rows, self.row_labels, self.col_labels)

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.entries),
                         self.row_labels, self.col_labels)

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix(self.rows, self.cols + other.cols,
                         tuple(a + b for a, b in zip(self.entries, other.entries)))

    def vstack(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
        return IntMatrix.from_rows([[self.entries[i][j] for j in cols] for i in rows],
                                   nrows=len(rows), ncols=len(cols))

    def det(self) -> int:
        """Determinant by Bareiss fraction-free elimination."""
        if self.rows != self.cols:
            raise NonSquare(f"determinant of a {self.rows}x{self.cols} matrix")
        return bareiss_det(self.tolist())

    def rank(self) -> int:
        return sum(1 for i in range(min(self.shape)) if snf(self)[0][i, i] != 0)

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [str(x) for r in self.entries for x in r],
            "row_labels": list(self.row_labels) if self.row_labels is not None else None,
            "col_labels": list(self.col_labels) if self.col_labels is not None else None,
        }

    @classmethod
    def from_json(cls, data) -> IntMatrix:
        if isinstance(data, str):
            data = json.loads(data)
        m, n = int(data["rows"]), int(data["cols"])
        flat = [int(x) for x in data["entries"]]
        if len(flat) != m * n:
            raise ValueError("entries length does not match rows*cols")
        rows = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(m))
        return cls(m, n, rows, data.get("row_labels"), data.get("col_labels"))

    def __str__(self):
        if not self.rows or not self.cols:
            return f"[{self.rows}x{self.cols} empty]"
        w = max(len(str(x)) for r in self.entries for x in r)
        return "\n".join("[" + " ".join(str(x).rjust(w) for x in r) + "]" for r in self.entries)


def bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    a = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _as_matrix(rows, m, n):
    return IntMatrix.from_rows(rows, nrows=m, ncols=n)


# ---------------------------------------------------------------------------
# normal forms


def hnf(M: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form: returns ``(H, U)`` with ``U @ M == H``.

    ``H`` is in echelon form, pivots are positive, entries above a pivot lie
    in ``[0, pivot)`` and zero rows are at the bottom.  ``U`` is unimodular.
    """
    m, n = M.shape
    a = M.tolist()
    u = _eye(m)
    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if a[i][j]]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(a[i][j]), i))
            a[r], a[p] = a[p], a[r]
            u[r], u[p] = u[p], u[r]
            for i in range(r + 1, m):
                if a[i][j]:
                    q = a[i][j] // a[r][j]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            if all(a[i][j] == 0 for i in range(r + 1, m)):
                break
        if a[r][j] == 0:
            continue
        if a[r][j] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][j] // a[r][j]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return _as_matrix(a, m, n), _as_matrix(u, m, m)


def snf(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``(D, U, V)`` with ``U @ M @ V == D``.

    Pivot choice is the smallest nonzero absolute value, ties broken in
    row-major order, so witnesses are reproducible.  The diagonal of ``D``
    is nonnegative with ``d_i | d_{i+1}``; zeros come last.
    """
    m, n = M.shape
    a = M.tolist()
    u = _eye(m)
    v = _eye(n)

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, c):  # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):  # col_dst += c * col_src
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
            if rest:
                _, i, j = min(rest)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:  # flip the column so U (and hence proj) keeps its sign
            a[t][t] = -a[t][t]
            for row in v:
                row[t] = -row[t]
    return _as_matrix(a, m, n), _as_matrix(u, m, m), _as_matrix(v, n, n)


def _diag(D: IntMatrix) -> list[int]:
    return [D[i, i] for i in range(min(D.shape))]


def _inverse_unimodular(U: IntMatrix) -> IntMatrix:
    # U @ X = I column by column; U is unimodular so the HNF of U is I.
    n = U.rows
    H, W = hnf(U)
    assert H.same_entries(IntMatrix.identity(n)), "matrix is not unimodular"
    return W  # W @ U == I, so W is the inverse


def image_basis(M: IntMatrix) -> IntMatrix:
    """Columns form a basis of the column space of ``M`` (HNF echelon order)."""
    H, _ = hnf(M.T)
    rows = [r for r in H.entries if any(r)]
    return IntMatrix.from_columns(rows, M.rows)


def reduce_mod_lattice(vec: Sequence[int], basis: IntMatrix) -> tuple[int, ...]:
    """Canonical representative of ``vec`` modulo the lattice spanned by ``basis``.

    ``basis`` must come from :func:`image_basis`; each pivot coordinate of
    the result lies in ``[0, pivot)``.
    """
    v = list(vec)
    for b in basis.columns():
        p = next(i for i, x in enumerate(b) if x)
        q = v[p] // b[p]
        if q:
            v = [x - q * y for x, y in zip(v, b)]
    return tuple(v)


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Columns form a (saturated) basis of ``{x : M x = 0}``."""
    D, _, V = snf(M)
    r = sum(1 for d in _diag(D) if d)
    return V.submatrix(range(M.cols), range(r, M.cols))


def solve(M: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """Some integer ``x`` with ``M x = b``, or ``None`` if there is none."""
    b = tuple(b)
    if len(b) != M.rows:
        raise ValueError("right-hand side has wrong length")
    D, U, V = snf(M)
    c = U @ b
    diag = _diag(D)
    y = [0] * M.cols
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci:
                return None
        elif ci % d:
            return None
        else:
            y[i] = ci // d
    return V @ y


# ---------------------------------------------------------------------------
# abelian groups


def _norm(coords, moduli):
    return tuple(x % d if d else x for x, d in zip(coords, moduli))


@dataclass(frozen=True, eq=False)
class FgAbelianGroup:
    """``Z^rank + Z/d_1 + ... + Z/d_n`` presented as the cokernel of a matrix.

    ``proj`` sends an ambient vector (a vector in the row space of the
    presentation) to canonical coordinates; ``lift`` sends canonical
    generators back to ambient representatives.  Torsion coordinates are
    meaningful modulo the matching invariant factor.

    Equality is isomorphism: two groups compare equal when their ranks and
    invariant factors agree.
    """

    rank: int
    invariant_factors: tuple[int, ...]
    presentation: IntMatrix
    proj: IntMatrix
    lift: IntMatrix

    def __post_init__(self):
        f = self.invariant_factors
        if any(d < 2 for d in f) or any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise ValueError(f"bad invariant factors {f}")

    # -- identity ---------------------------------------------------------

    @property
    def invariants(self) -> tuple[int, tuple[int, ...]]:
        return (self.rank, self.invariant_factors)

    def __eq__(self, other):
        if not isinstance(other, FgAbelianGroup):
            return NotImplemented
        return self.invariants == other.invariants

    def __hash__(self):
        return hash(self.invariants)

    def isomorphic(self, other: FgAbelianGroup) -> bool:
        return self.invariants == other.invariants

    def __str__(self):
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FgAbelianGroup({self})"

    # -- structure --------------------------------------------------------

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        """Order of each canonical generator; 0 marks a free generator."""
        return (0,) * self.rank + self.invariant_factors

    @property
    def ngens(self) -> int:
        return self.rank + len(self.invariant_factors)

    @property
    def ambient_dim(self) -> int:
        return self.presentation.rows

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def order(self) -> int | None:
        return math.prod(self.invariant_factors) if self.rank == 0 else None

    def normalize(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.ngens:
            raise ValueError("coordinate vector has wrong length")
        return _norm(coords, self.moduli)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def add(self, x, y) -> tuple[int, ...]:
        return _norm([a + b for a, b in zip(x, y)], self.moduli)

    def scale(self, c: int, x) -> tuple[int, ...]:
        return _norm([c * a for a in x], self.moduli)

    def coords(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of the class of an ambient vector."""
        return self.normalize(self.proj @ tuple(vec))

    def represent(self, coords: Sequence[int]) -> tuple[int, ...]:
        """An ambient vector in the given class."""
        return self.lift @ tuple(coords)

    def element_order(self, x) -> int | None:
        x = self.normalize(x)
        n = 1
        for xi, d in zip(x, self.moduli):
            if d == 0:
                if xi:
                    return None
            else:
                n = math.lcm(n, d // math.gcd(d, xi))
        return n

    def elements(self) -> Iterator[tuple[int, ...]]:
        if self.rank:
            raise UnsupportedInfiniteGroup("cannot enumerate an infinite group")
        return product(*(range(d) for d in self.invariant_factors))

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_cyclic(cls, moduli: Iterable[int]) -> FgAbelianGroup:
        """Direct sum of cyclic groups ``Z/m`` (``m = 0`` gives ``Z``)."""
        moduli = [abs(int(m)) for m in moduli]
        return cokernel(IntMatrix.diagonal(moduli))

    @classmethod
    def free(cls, n: int) -> FgAbelianGroup:
        return cls.from_cyclic([0] * n)

    @classmethod
    def trivial(cls) -> FgAbelianGroup:
        return cls.from_cyclic([])


def cokernel(M: IntMatrix) -> FgAbelianGroup:
    """``Z^rows / M Z^cols`` in canonical form."""
    m = M.rows
    D, U, _ = snf(M)
    diag = _diag(D) + [0] * max(0, m - min(M.shape))
    Uinv = _inverse_unimodular(U)
    free = [i for i in range(m) if diag[i] == 0]
    tors = [i for i in range(m) if diag[i] > 1]
    keep = free + tors
    proj = U.submatrix(keep, range(m))
    lift = Uinv.submatrix(range(m), keep)
    return FgAbelianGroup(len(free), tuple(diag[i] for i in tors), M, proj, lift)


def direct_sum(*groups: FgAbelianGroup) -> FgAbelianGroup:
    return FgAbelianGroup.from_cyclic([d for g in groups for d in g.moduli])


def hom_group(A: FgAbelianGroup, B: FgAbelianGroup) -> FgAbelianGroup:
    """``Hom(A, B)`` by invariant-factor arithmetic."""
    out = []
    for m in A.moduli:
        for n in B.moduli:
            if m == 0:
                out.append(n)              # Hom(Z, Z/n) = Z/n, Hom(Z, Z) = Z
            elif n == 0:
                continue                   # Hom(Z/m, Z) = 0
            else:
                out.append(math.gcd(m, n))
    return FgAbelianGroup.from_cyclic(out)


def tensor_group(A: FgAbelianGroup, B: FgAbelianGroup) -> FgAbelianGroup:
    """``A (x) B`` by invariant-factor arithmetic."""
    # gcd(0, n) = n and gcd(0, 0) = 0 cover every free case.
    return FgAbelianGroup.from_cyclic([math.gcd(m, n) for m in A.moduli for n in B.moduli])


def presented_kernel(F: IntMatrix, dom_rel: IntMatrix, cod_rel: IntMatrix
                     ) -> tuple[FgAbelianGroup, IntMatrix]:
    """Kernel of the map ``Z^p/dom_rel -> Z^q/cod_rel`` induced by ``F``.

    Returns the kernel as a group together with a ``p x k`` matrix sending
    its canonical generators to ambient representatives in ``Z^p``.
    ``F`` must map ``dom_rel`` into the span of ``cod_rel``.
    """
    p = F.cols
    stacked = F.hstack(cod_rel.scale(-1))
    K = kernel_basis(stacked)
    top = IntMatrix.from_rows(K.entries[:p], nrows=p, ncols=K.cols)
    L = image_basis(top) if top.cols else IntMatrix.zeros(p, 0)
    rel_cols = []
    for c in dom_rel.columns():
        if any(c):
            y = solve(L, c)
            if y is None:
                raise ValueError("domain relations are not in the kernel lattice")
            rel_cols.append(y)
    R = IntMatrix.from_columns(rel_cols, L.cols)
    G = cokernel(R)
    return G, L @ G.lift


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism given by its values on canonical generators.

    ``matrix`` has one column per generator of ``domain``, holding the
    canonical coordinates of its image in ``codomain``.
    """

    domain: FgAbelianGroup
    codomain: FgAbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.codomain.ngens, self.domain.ngens):
            raise ValueError("homomorphism matrix has wrong shape")
        cols = [self.codomain.normalize(c) for c in self.matrix.columns()]
        object.__setattr__(self, "matrix",
                           IntMatrix.from_columns(cols, self.codomain.ngens))

    @classmethod
    def checked(cls, domain, codomain, matrix) -> GroupHom:
        h = cls(domain, codomain, matrix)
        if not h.is_well_defined():
            raise ValueError("matrix does not define a homomorphism")
        return h

    @classmethod
    def identity(cls, A: FgAbelianGroup) -> GroupHom:
        return cls(A, A, IntMatrix.identity(A.ngens))

    @classmethod
    def zero(cls, A: FgAbelianGroup, B: FgAbelianGroup) -> GroupHom:
        return cls(A, B, IntMatrix.zeros(B.ngens, A.ngens))

    def __call__(self, x) -> tuple[int, ...]:
        return self.codomain.normalize(self.matrix @ tuple(x))

    def __matmul__(self, other: GroupHom) -> GroupHom:
        """Composition ``self o other``."""
        return GroupHom(other.domain, self.codomain, self.matrix @ other.matrix)

    def __eq__(self, other):
        if not isinstance(other, GroupHom):
            return NotImplemented
        return self.matrix.same_entries(other.matrix)

    def __hash__(self):
        return hash(self.matrix.entries)

    def is_well_defined(self) -> bool:
        for j, m in enumerate(self.domain.moduli):
            if m and any(self.codomain.scale(m, self.matrix.column(j))):
                return False
        return True

    def _relations(self, G: FgAbelianGroup) -> IntMatrix:
        return IntMatrix.diagonal(G.moduli)

    def is_surjective(self) -> bool:
        stacked = self.matrix.hstack(self._relations(self.codomain))
        return cokernel(stacked).is_trivial

    def is_injective(self) -> bool:
        K, _ = presented_kernel(self.matrix, self._relations(self.domain),
                                self._relations(self.codomain))
        return K.is_trivial

    def is_isomorphism(self) -> bool:
        return self.is_well_defined() and self.is_surjective() and self.is_injective()

    def kernel(self) -> tuple[FgAbelianGroup, GroupHom]:
        K, incl = presented_kernel(self.matrix, self._relations(self.domain),
                                   self._relations(self.codomain))
        return K, GroupHom(K, self.domain, incl)

    def inverse(self) -> GroupHom:
        if not self.is_isomorphism():
            raise ValueError("not an isomorphism")
        A, B = self.domain, self.codomain
        stacked = self.matrix.hstack(self._relations(B))
        cols = []
        for i in range(B.ngens):
            e = [0] * B.ngens
            e[i] = 1
            x = solve(stacked, e)
            cols.append(x[:A.ngens])
        return GroupHom(B, A, IntMatrix.from_columns(cols, A.ngens))


# ---------------------------------------------------------------------------
# existence questions


def hom_exists_with_value(A: FgAbelianGroup, a, B: FgAbelianGroup, b) -> GroupHom | None:
    """A homomorphism ``h: A -> B`` with ``h(a) = b``, or ``None``.

    Each row of ``h`` is an independent linear Diophantine problem: the
    allowed entries ``h_ij`` form the lattice ``c_ij Z`` with
    ``c_ij = n_i / gcd(m_j, n_i)``, and row ``i`` must satisfy
    ``sum_j h_ij a_j = b_i (mod n_i)``.
    """
    a = A.normalize(a)
    b = B.normalize(b)
    rows = []
    for i, n in enumerate(B.moduli):
        steps = []
        for m in A.moduli:
            if m == 0:
                steps.append(1)
            elif n == 0:
                steps.append(0)
            else:
                steps.append(n // math.gcd(m, n))
        coeffs = [c * aj for c, aj in zip(steps, a)] + [n]
        x = solve(IntMatrix.from_rows([coeffs]), [b[i]])
        if x is None:
            return None
        rows.append([c * t for c, t in zip(steps, x[:-1])])
    h = GroupHom(A, B, IntMatrix.from_rows(rows, nrows=B.ngens, ncols=A.ngens))
    assert h.is_well_defined() and h(a) == b
    return h


def _subgroup_extend(S: set, x, order: int, G: FgAbelianGroup) -> set | None:
    """``S + <x>`` if the sum is direct of size ``|S| * order``, else ``None``."""
    multiples = [G.scale(t, x) for t in range(order)]
    if any(m in S for m in multiples[1:]):
        return None
    return {G.add(s, m) for s in S for m in multiples}


def find_isomorphisms(A: FgAbelianGroup, B: FgAbelianGroup,
                      constraints: Sequence[tuple[int, Callable[[list], bool]]] = (),
                      node_limit: int = 2_000_000) -> Iterator[GroupHom]:
    """Enumerate isomorphisms ``A -> B`` of finite groups by backtracking.

    Generator ``j`` of ``A`` is sent to an element of ``B`` of the same
    order, independent of the images chosen so far.  ``constraints`` holds
    pairs ``(depth, predicate)``: the predicate sees the list of images once
    generators ``0..depth`` are assigned and may prune the branch.
    """
    if A.rank or B.rank:
        raise UnsupportedInfiniteGroup("isomorphism search needs finite groups")
    if A.invariants != B.invariants:
        return
    if B.order > SEARCH_LIMIT:
        raise SearchTooLarge(f"group of order {B.order} exceeds search limit {SEARCH_LIMIT}")
    by_order: dict[int, list] = {}
    for x in B.elements():
        by_order.setdefault(B.element_order(x), []).append(x)
    checks: dict[int, list] = {}
    for depth, pred in constraints:
        checks.setdefault(max(depth, 0), []).append(pred)
    k = A.ngens
    moduli = A.moduli
    nodes = 0

    def rec(j, images, S):
        nonlocal nodes
        if j == k:
            yield GroupHom(A, B, IntMatrix.from_columns(images, B.ngens))
            return
        for x in by_order.get(moduli[j], ()):
            nodes += 1
            if nodes > node_limit:
                raise SearchTooLarge("isomorphism search exceeded node budget")
            S2 = _subgroup_extend(S, x, moduli[j], B)
            if S2 is None:
                continue
            images.append(x)
            if all(p(images) for p in checks.get(j, ())):
                yield from rec(j + 1, images, S2)
            images.pop()

    if k == 0:
        if all(p([]) for ps in checks.values() for p in ps):
            yield GroupHom(A, B, IntMatrix.zeros(B.ngens, 0))
        return
    yield from rec(0, [], {B.zero()})


def _support_depth(vec) -> int:
    nz = [i for i, x in enumerate(vec) if x]
    return max(nz) if nz else 0


def iso_with_element_constraint(A: FgAbelianGroup, a, B: FgAbelianGroup, b) -> GroupHom | None:
    """An isomorphism ``h: A -> B`` with ``h(a) = b``, or ``None``.

    Non-isomorphic groups give ``None`` immediately; otherwise both groups
    must be finite and the search is exhaustive.
    """
    if A.invariants != B.invariants:
        return None
    if A.rank:
        raise UnsupportedInfiniteGroup("element-constrained isomorphism search needs finite groups")
    a = A.normalize(a)
    b = B.normalize(b)

    def hits(images):
        acc = B.zero()
        for aj, img in zip(a, images):
            acc = B.add(acc, B.scale(aj, img))
        return acc == b

    return next(find_isomorphisms(A, B, [(_support_depth(a), hits)]), None)

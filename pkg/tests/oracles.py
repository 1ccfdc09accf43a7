"""Slow, independent reference computations used to derive test expectations.

Nothing here calls the Smith/Hermite machinery of the package.
"""
from __future__ import annotations

import itertools
from functools import reduce
from math import gcd


def leibniz_det(rows, zero=0, one=1):
    """Determinant by the permutation expansion; works for any commutative ring."""
    n = len(rows)
    total = zero
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = one
        for i in range(n):
            term = term * rows[i][perm[i]]
        total = total + term if inv % 2 == 0 else total - term
    return total


def _rank(rows, ncols):
    from fractions import Fraction

    a = [[Fraction(x) for x in r] for r in rows]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def determinantal_cokernel(rows, m, n):
    """``(free rank, invariant factors)`` of ``Z^m / M Z^n`` via gcds of minors."""
    r = _rank(rows, n) if m and n else 0
    prev, factors = 1, []
    for k in range(1, r + 1):
        g = 0
        for I in itertools.combinations(range(m), k):
            for J in itertools.combinations(range(n), k):
                g = gcd(g, leibniz_det([[rows[i][j] for j in J] for i in I]))
        factors.append(g // prev)
        prev = g
    return m - r, tuple(d for d in factors if d != 1)


def elements(moduli):
    return itertools.product(*[range(d) for d in moduli])


def count_homs(a_mod, b_mod):
    """Count additive maps between finite groups by checking every function."""
    A = list(elements(a_mod))
    B = list(elements(b_mod))

    def add(x, y, mod):
        return tuple((p + q) % d for p, q, d in zip(x, y, mod))

    count = 0
    for images in itertools.product(range(len(B)), repeat=len(A)):
        f = {a: B[i] for a, i in zip(A, images)}
        if all(f[add(x, y, a_mod)] == add(f[x], f[y], b_mod) for x in A for y in A):
            count += 1
    return count


def count_homs_by_generators(a_mod, b_mod):
    """Same count, using that a map is fixed by generator images of the right order."""
    B = list(elements(b_mod))
    total = 1
    for d in a_mod:
        total *= sum(1 for b in B if all((d * x) % m == 0 for x, m in zip(b, b_mod)))
    return total


def tensor_order(a_mod, b_mod):
    """``|A (x) B| = |Hom(A, B^)|`` and ``B^ = B`` for finite ``B``."""
    return count_homs_by_generators(a_mod, b_mod)


def equivariant_isos(a_mod, sa, b_mod, sb):
    """All bijective maps ``A -> B`` with ``h s_A = s_B h``; ``s`` as column matrices."""
    A, B = list(elements(a_mod)), list(elements(b_mod))
    if len(A) != len(B):
        return []
    k = len(a_mod)

    def apply(mat, x, mod):
        return tuple(sum(mat[i][j] * x[j] for j in range(len(x))) % mod[i] for i in range(len(mod)))

    out = []
    for imgs in itertools.product(B, repeat=k):
        if any(any((d * c) % m for c, m in zip(img, b_mod)) for d, img in zip(a_mod, imgs)):
            continue

        def h(x):
            return tuple(sum(x[j] * imgs[j][i] for j in range(k)) % b_mod[i]
                         for i in range(len(b_mod)))

        if len({h(x) for x in A}) != len(B):
            continue
        if all(h(apply(sa, x, a_mod)) == apply(sb, h(x), b_mod) for x in A):
            out.append(imgs)
    return out


def kernel_size(F, k_mod, n_dom, n_cod):
    """Brute force ``|ker|`` of the block map ``F`` on ``K^n_dom -> K^n_cod``."""
    dom_mod = list(k_mod) * n_dom
    cod_mod = list(k_mod) * n_cod
    count = 0
    for x in elements(dom_mod):
        y = [sum(F[i][j] * x[j] for j in range(len(x))) % cod_mod[i] for i in range(len(cod_mod))]
        count += not any(y)
    return count


def matmul(a, b, ncols):
    """``a @ b`` for list-of-rows matrices; ``ncols`` fixes the shape when ``b`` is empty."""
    return [[sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(ncols)]
            for i in range(len(a))]


def kron_homotopy_system(A, d0, d1):
    """Stack ``A h = d0`` and ``h A = d1`` as one linear system in ``vec(h)``.

    ``A`` is ``m0 x m1`` so ``h`` is ``m1 x m0``; unknown index ``(i, j) -> i*m0 + j``.
    """
    m0, m1 = len(A), len(A[0]) if A else 0
    rows, rhs = [], []
    for p in range(m0):
        for q in range(m0):
            row = [0] * (m1 * m0)
            for t in range(m1):
                row[t * m0 + q] += A[p][t]
            rows.append(row)
            rhs.append(d0[p][q])
    for p in range(m1):
        for q in range(m1):
            row = [0] * (m1 * m0)
            for t in range(m0):
                row[p * m0 + t] += A[t][q]
            rows.append(row)
            rhs.append(d1[p][q])
    return rows, rhs


def lcm(*xs):
    return reduce(lambda a, b: a * b // gcd(a, b), xs, 1)


def fraction_det(rows):
    """Determinant by Gaussian elimination over the rationals."""
    from fractions import Fraction

    a = [[Fraction(x) for x in r] for r in rows]
    n, det = len(a), Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    assert det.denominator == 1
    return int(det)

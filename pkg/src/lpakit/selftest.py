"""Seeded randomized consistency checks behind ``lpakit selftest``."""
from __future__ import annotations

import random

from .corpus import random_graph, random_moves, rose
from .graph import double_cover, out_split_graph
from .intlin import IntMatrix, snf
from .invariants import bf, bf_twisted
from .lifting import kk_iso_exists, verify_certificate
from .lpa_terms import COHN, multiply, random_term, rho_apply
from .sigma import mod_sigma_minus_one


def _snf_ok(rng):
    m, n = rng.randint(1, 5), rng.randint(1, 5)
    M = IntMatrix.from_rows([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)])
    D, U, V = snf(M)
    d = [D[i, i] for i in range(min(m, n))]
    chain = all(b % a == 0 if a else b == 0 for a, b in zip(d, d[1:]))
    return (U @ M @ V).same_entries(D) and U.is_unimodular() and V.is_unimodular() and chain


def _cover_ok(rng):
    G = random_graph(rng)
    tb = bf_twisted(G).module
    return tb.underlying == bf(double_cover(G)).group and mod_sigma_minus_one(tb) == bf(G).group


def _outsplit_ok(rng):
    G = random_graph(rng, max_edges=8)
    return bf(out_split_graph(G)).group == bf(G).group


def _lift_ok(rng):
    E = random_graph(rng, max_vertices=3, max_edges=6)
    F = random_moves(E, rng, 2)
    res = kk_iso_exists(E, F, with_inverse=True)
    return bool(res) and verify_certificate(res.certificate)


def _rho_ok(rng):
    G = rng.choice([rose(2), random_graph(rng, 3, 5, regular=True)])
    x, y = random_term(G, rng, COHN), random_term(G, rng, COHN)
    z = random_term(G, rng, COHN, max_len=2, size=2)
    vec = {a: c for (a, b), c in z.coeffs.items()}
    return rho_apply(multiply(x, y), vec) == rho_apply(x, rho_apply(y, vec))


CHECKS = {
    "snf witnesses": _snf_ok,
    "double cover and coinvariants": _cover_ok,
    "out-split invariance": _outsplit_ok,
    "lifting certificates": _lift_ok,
    "path representation": _rho_ok,
}


def run(rng: random.Random, count: int = 20) -> dict[str, bool]:
    return {name: all(check(rng) for _ in range(count)) for name, check in CHECKS.items()}

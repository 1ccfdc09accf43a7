"""End terms of the K-theory and universal-coefficient exact sequences.

Coefficient data is a map ``degree -> SigmaModule``.  The middle term of a
sequence is reported only when it is forced (an end vanishes, or the right
end is free so the sequence splits); otherwise it is left open.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .graph import Graph
from .intlin import FgAbelianGroup, IntMatrix, direct_sum, hom_group, presented_kernel, tensor_group
from .invariants import bf, bf_dual, bf_twisted, bf_twisted_dual, twisted_bf_matrix
from .sigma import SigmaMatrix, SigmaModule, hom_sigma, tensor_sigma

__all__ = [
    "MissingDegree",
    "CoefficientData",
    "SequenceEnds",
    "kh_ends",
    "uct_ends",
    "kernel_of_tensored",
    "group_json",
]


class MissingDegree(KeyError):
    pass


@dataclass(frozen=True)
class CoefficientData:
    kh: Mapping[int, SigmaModule] = field(default_factory=dict)

    def __getitem__(self, n: int) -> SigmaModule:
        try:
            return self.kh[n]
        except KeyError:
            raise MissingDegree(f"no coefficient group in degree {n}") from None

    @classmethod
    def field_like(cls) -> CoefficientData:
        """``KH_0 = Z[s]`` and ``KH_{-1} = 0``."""
        return cls({0: SigmaModule.free(1), -1: SigmaModule.zero()})

    @classmethod
    def from_json(cls, data: dict) -> CoefficientData:
        kh = {}
        for deg, entry in data.items():
            if entry == "Zsigma":
                kh[int(deg)] = SigmaModule.free(1)
                continue
            grp = FgAbelianGroup.from_cyclic([0] * entry.get("rank", 0) + list(entry.get("factors", [])))
            if "sigma" in entry:
                kh[int(deg)] = SigmaModule.from_action(grp, entry["sigma"])
            else:
                kh[int(deg)] = SigmaModule.trivial_action(grp)
        return cls(kh)


def group_json(G: FgAbelianGroup | None):
    if G is None:
        return None
    return {"rank": G.rank, "factors": list(G.invariant_factors), "text": str(G)}


@dataclass(frozen=True)
class SequenceEnds:
    left: FgAbelianGroup
    right: FgAbelianGroup
    middle: FgAbelianGroup | None
    split_reason: str

    def __post_init__(self):
        m = self.middle
        if m is not None and self.left.is_finite and self.right.is_finite:
            assert m.order == self.left.order * self.right.order

    def to_json(self) -> dict:
        return {"left": group_json(self.left), "right": group_json(self.right),
                "middle": group_json(self.middle), "split_reason": self.split_reason}


def _settle(left: FgAbelianGroup, right: FgAbelianGroup) -> SequenceEnds:
    if left.is_trivial:
        return SequenceEnds(left, right, right, "left end vanishes")
    if right.is_trivial:
        return SequenceEnds(left, right, left, "right end vanishes")
    if not right.invariant_factors:
        return SequenceEnds(left, right, direct_sum(left, right), "right end is free; sequence splits")
    return SequenceEnds(left, right, None, "extension ambiguous")


def kernel_of_tensored(M: SigmaMatrix, K: SigmaModule, twisted: bool) -> FgAbelianGroup:
    """Kernel of ``M (x) K : K^cols -> K^rows``.

    Untwisted, the ``s``-part of ``M`` is ignored and each entry acts as an
    integer; twisted, an entry ``p + q s`` acts as ``p + q s_K``.
    Coordinates are vertex-major over the canonical generators of ``K``.
    """
    G = K.underlying
    k = G.ngens
    m, n = M.shape
    S = K.action
    rows = [[0] * (n * k) for _ in range(m * k)]
    for i in range(m):
        for j in range(n):
            p, q = M.P[i, j], M.Q[i, j]
            for a in range(k):
                for b in range(k):
                    if twisted:
                        val = p * int(a == b) + q * S[a, b]
                    else:
                        val = (p + q) * int(a == b)
                    rows[i * k + a][j * k + b] = val
    F = IntMatrix.from_rows(rows, nrows=m * k, ncols=n * k)
    dom = IntMatrix.diagonal(list(G.moduli) * n)
    cod = IntMatrix.diagonal(list(G.moduli) * m)
    kern, _ = presented_kernel(F, dom, cod)
    return kern


def kh_ends(G: Graph, coeff: CoefficientData, n: int, twisted: bool = False) -> SequenceEnds:
    khn, khm = coeff[n], coeff[n - 1]
    M = twisted_bf_matrix(G)
    if twisted:
        left = tensor_sigma(bf_twisted(G).module, khn)
    else:
        left = tensor_group(bf(G).group, khn.underlying)
    # I - A^t is M at s = 1, so passing M untwisted sums P and Q
    right = kernel_of_tensored(M, khm, twisted)
    return _settle(left, right)


def uct_ends(G: Graph, coeff: CoefficientData, twisted: bool = False, via_dual_graph: bool = False
             ) -> SequenceEnds:
    kh0, kh1 = coeff[0], coeff[1]
    if via_dual_graph:
        from .graph import dual_graph

        Gt = dual_graph(G)
        dual = bf_twisted(Gt).module if twisted else bf(Gt).group
    else:
        dual = bf_twisted_dual(G).module if twisted else bf_dual(G).group
    if twisted:
        left = tensor_sigma(kh1, dual)
        right = hom_sigma(bf_twisted(G).module, kh0)
    else:
        left = tensor_group(kh1.underlying, dual)
        right = hom_group(bf(G).group, kh0.underlying)
    return _settle(left, right)

"""Bowen-Franks type invariants of a finite graph and determinant criteria."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .graph import Graph, bf_matrix, incidence_matrix, is_purely_infinite_simple
from .intlin import FgAbelianGroup, IntMatrix, cokernel
from .sigma import (
    SigmaMatrix,
    SigmaModule,
    SigmaScalar,
    coker_sigma,
    det_sigma,
    is_unit,
)

__all__ = [
    "NotRegular",
    "BFData",
    "TwistedBFData",
    "StructDescriptor",
    "BFCriterion",
    "bf",
    "bf_dual",
    "bf_twisted",
    "bf_twisted_dual",
    "twisted_bf_matrix",
    "twisted_dual_matrix",
    "jh_vanishes",
    "canonical_form",
    "bfolbf_criterion",
    "invariant_report",
]


class NotRegular(ValueError):
    pass


@dataclass(frozen=True)
class BFData:
    group: FgAbelianGroup
    unit_class: tuple[int, ...]
    source: str

    def to_json(self) -> dict:
        return {"rank": self.group.rank, "factors": list(self.group.invariant_factors),
                "unit_class": list(self.unit_class), "source": self.source}


@dataclass(frozen=True)
class TwistedBFData:
    module: SigmaModule
    unit_class: tuple[int, ...]
    source: str

    @property
    def group(self) -> FgAbelianGroup:
        return self.module.underlying

    def to_json(self) -> dict:
        g = self.group
        return {"rank": g.rank, "factors": list(g.invariant_factors),
                "unit_class": list(self.unit_class),
                "sigma": self.module.action.tolist(), "source": self.source}


def _identity_cols(G: Graph) -> IntMatrix:
    """``I`` with the singular columns removed (rows all vertices)."""
    reg = G.regular_vertices
    return IntMatrix.from_rows([[int(v == w) for w in reg] for v in G.vertices],
                               nrows=len(G.vertices), ncols=len(reg))


def bf(G: Graph) -> BFData:
    """``Coker(I - A^t)`` with the class of the sum of all vertices."""
    grp = cokernel(bf_matrix(G))
    return BFData(grp, grp.coords([1] * len(G.vertices)), "I-A^t")


def bf_dual(G: Graph) -> BFData:
    """``Coker(I^t - A)``; rows are the regular vertices."""
    M = (_identity_cols(G) - incidence_matrix(G).T.unlabeled()).T
    grp = cokernel(M)
    return BFData(grp, grp.coords([1] * M.rows), "I^t-A")


def twisted_bf_matrix(G: Graph) -> SigmaMatrix:
    """``I - s A^t`` as a pair of integer matrices."""
    return SigmaMatrix(_identity_cols(G), -incidence_matrix(G).T.unlabeled())


def twisted_dual_matrix(G: Graph) -> SigmaMatrix:
    """``I^t - s A``."""
    return SigmaMatrix(_identity_cols(G).T, -incidence_matrix(G).unlabeled())


def _twisted(M: SigmaMatrix, source: str) -> TwistedBFData:
    mod = coker_sigma(M)
    n = M.shape[0]
    return TwistedBFData(mod, mod.underlying.coords([1] * n + [0] * n), source)


def bf_twisted(G: Graph) -> TwistedBFData:
    return _twisted(twisted_bf_matrix(G), "I-sA^t")


def bf_twisted_dual(G: Graph) -> TwistedBFData:
    return _twisted(twisted_dual_matrix(G), "I^t-sA")


def jh_vanishes(G: Graph, coeff: Literal["Z", "Zsigma"] = "Zsigma") -> tuple[bool, bool]:
    """Vanishing of the untwisted and twisted classes by determinant units.

    Both answers are ``False`` for graphs with a sink.  For ``coeff="Z"``
    the twisted determinant is judged after ``s -> 1``.
    """
    if coeff not in ("Z", "Zsigma"):
        raise ValueError(f"unknown coefficient ring {coeff!r}")
    if not G.is_regular:
        return (False, False)
    untwisted = abs(bf_matrix(G).det()) == 1
    d = det_sigma(twisted_bf_matrix(G))
    twisted = is_unit(d) if coeff == "Zsigma" else abs(d.at(1)) == 1
    return (untwisted, twisted)


@dataclass(frozen=True)
class StructDescriptor:
    singular: int
    free_rest: int
    cycle_sizes: tuple[int, ...]


def canonical_form(G: Graph) -> StructDescriptor:
    grp = bf(G).group
    s = len(G.sinks)
    return StructDescriptor(s, grp.rank - s, tuple(d + 1 for d in grp.invariant_factors))


@dataclass(frozen=True)
class BFCriterion:
    det_plus: int
    det_minus: int
    det_plus_unit: bool
    det_minus_nonunit_nonzero: bool

    @property
    def holds(self) -> bool:
        return self.det_plus_unit and self.det_minus_nonunit_nonzero


def bfolbf_criterion(G: Graph) -> BFCriterion:
    """``det(I + A) = +-1`` and ``det(I - A)`` neither 0 nor a unit."""
    if not G.is_regular:
        raise NotRegular("criterion needs a regular graph")
    A = incidence_matrix(G).unlabeled()
    I = IntMatrix.identity(A.rows)
    dp, dm = (I + A).det(), (I - A).det()
    return BFCriterion(dp, dm, abs(dp) == 1, abs(dm) > 1)


def invariant_report(G: Graph) -> dict:
    """JSON-ready summary of the invariants of ``G``."""
    b = bf(G)
    tb = bf_twisted(G)
    pis = is_purely_infinite_simple(G)
    dets: dict = {}
    flags = {"pis": pis.holds, "regular": G.is_regular, "essential": G.is_essential}
    if G.is_regular:
        crit = bfolbf_criterion(G)
        dets = {"det(I-A^t)": bf_matrix(G).det(), "det(I+A)": crit.det_plus,
                "det(I-sA^t)": str(det_sigma(twisted_bf_matrix(G)))}
        flags["bfolbf"] = crit.holds
    flags["jh_vanishes"] = dict(zip(("untwisted", "twisted"), jh_vanishes(G)))
    return {
        "graph_id": G.name,
        "bf": b.to_json(),
        "bf_twisted": tb.to_json(),
        "dets": dets,
        "flags": flags,
    }

"""Graph-side hypotheses of the classification results and the graded obstruction."""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph, PisReport, is_purely_infinite_simple
from .intlin import GroupHom, IntMatrix, hom_exists_with_value, iso_with_element_constraint
from .invariants import bf, bf_twisted
from .lifting import ChainMapCertificate, kk_iso_exists

__all__ = ["RingFlags", "TheoremStatus", "ClassificationReport", "classify_pair",
           "Obstruction", "graded_hom_obstruction"]


@dataclass(frozen=True)
class RingFlags:
    """Ground-ring properties the caller vouches for; echoed, never checked."""

    regular_supercoherent: bool = False
    two_invertible: bool = False
    minus_one_positive: bool = False
    lambda_assumption: bool = False

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class TheoremStatus:
    name: str
    graph_side: bool
    unital: bool
    ring_hypotheses: tuple[str, ...]

    def to_json(self) -> dict:
        return {"name": self.name, "graph_side": self.graph_side, "unital": self.unital,
                "ring_hypotheses": list(self.ring_hypotheses)}


@dataclass(frozen=True)
class ClassificationReport:
    pis_e: PisReport
    pis_f: PisReport
    bf_e: object
    bf_f: object
    bf_iso: GroupHom | None
    unital_iso: GroupHom | None
    unital_reason: str
    certificate: ChainMapCertificate | None
    applicable_theorems: list[TheoremStatus] = field(default_factory=list)
    flags: RingFlags = RingFlags()

    def __post_init__(self):
        assert self.unital_iso is None or self.bf_iso is not None

    def to_json(self) -> dict:
        def pis(r):
            return {"holds": r.holds, "failed": r.failed, "witness": r.witness}

        def iso(h):
            return None if h is None else h.matrix.tolist()

        return {
            "pis_E": pis(self.pis_e),
            "pis_F": pis(self.pis_f),
            "bf_E": self.bf_e.to_json(),
            "bf_F": self.bf_f.to_json(),
            "bf_iso": iso(self.bf_iso),
            "unital_iso": iso(self.unital_iso),
            "unital_reason": self.unital_reason,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "applicable_theorems": [t.to_json() for t in self.applicable_theorems],
            "ring_flags": self.flags.to_json(),
        }


def classify_pair(E: Graph, F: Graph, flags: RingFlags = RingFlags()) -> ClassificationReport:
    pe, pf = is_purely_infinite_simple(E), is_purely_infinite_simple(F)
    be, bff = bf(E), bf(F)
    A, B = be.group, bff.group
    bf_iso = unital = None
    reason = "Bowen-Franks groups are not isomorphic"
    if A == B:
        bf_iso = GroupHom(A, B, IntMatrix.identity(A.ngens))
        if A.is_finite:
            unital = iso_with_element_constraint(A, be.unit_class, B, bff.unit_class)
            reason = ("found isomorphism matching unit classes" if unital is not None
                      else "no isomorphism matches the unit classes")
        else:
            reason = "unit-class matching unsupported for infinite BF"
    cert = None
    if bf_iso is not None and len(E.sinks) == len(F.sinks):
        cert = kk_iso_exists(E, F, xi0=unital if unital is not None else bf_iso).certificate
    graph_ok = pe.holds and pf.holds and bf_iso is not None
    theorems = [
        TheoremStatus("stable hermitian classification", graph_ok, False,
                      ("lambda-assumption", "K0h-regular (e.g. regular supercoherent, 2 invertible)")),
        TheoremStatus("hermitian classification", graph_ok, graph_ok and unital is not None,
                      ("lambda-assumption", "K0h-regular", "-1 positive")),
        TheoremStatus("algebraic classification", graph_ok, graph_ok and unital is not None,
                      ("regular supercoherent",)),
    ]
    return ClassificationReport(pe, pf, be, bff, bf_iso, unital, reason, cert,
                                [t for t in theorems if t.graph_side], flags)


@dataclass(frozen=True)
class Obstruction:
    possible: bool
    reason: str
    witness: GroupHom | None = None

    def to_json(self) -> dict:
        return {"possible": self.possible, "reason": self.reason,
                "witness": None if self.witness is None else self.witness.matrix.tolist()}


def graded_hom_obstruction(E: Graph, F: Graph) -> Obstruction:
    """Is there a group map of twisted groups sending unit class to unit class?

    If not, no unital grading-preserving algebra map ``L(E) -> L(F)``
    exists (for ground rings where the twisted group is the graded ``K_0``).
    """
    te, tf = bf_twisted(E), bf_twisted(F)
    h = hom_exists_with_value(te.group, te.unit_class, tf.group, tf.unit_class)
    if h is None:
        return Obstruction(False, f"no homomorphism {te.group} -> {tf.group} preserves the unit class")
    return Obstruction(True, "unit-preserving homomorphism exists", h)

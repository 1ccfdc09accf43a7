"""Chain-level certificates lifting Bowen-Franks isomorphisms.

Given two-term complexes ``Z^{m1} --A--> Z^{m0}`` and ``Z^{n1} --M--> Z^{n0}``
and an isomorphism ``xi0 : Coker A -> Coker M``, :func:`lift_iso` builds
integer matrices ``f0, f1`` with ``f0 A = M f1`` inducing ``xi0`` on
cokernels and an isomorphism on kernels.  ``f1`` is assembled as

    f1(x) = xi1(x - s(A x)) + t(f0(A x))

where ``s`` and ``t`` are sections of ``A`` and ``M`` onto their images and
``xi1`` matches chosen kernel bases.  Every certificate is re-checked by
:func:`verify_certificate`, which recomputes everything from the matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph, bf_matrix
from .intlin import (
    FgAbelianGroup,
    GroupHom,
    IntMatrix,
    cokernel,
    image_basis,
    kernel_basis,
    reduce_mod_lattice,
    solve,
)
from .invariants import bf, bf_twisted, twisted_bf_matrix
from .sigma import SigmaMatrix, SigmaModule, coker_sigma, double, sigma_iso_decide, undouble

__all__ = [
    "RankMismatch",
    "NotAnIsomorphism",
    "KernelNonzero",
    "NotEquivariant",
    "CertificateError",
    "Section",
    "ChainMapCertificate",
    "SigmaChainMapCertificate",
    "IsoSearch",
    "lift_iso",
    "lift_iso_sigma",
    "verify_certificate",
    "verify_sigma_certificate",
    "homotopy",
    "kk_iso_exists",
    "kk_iso_exists_twisted",
]


class RankMismatch(ValueError):
    pass


class NotAnIsomorphism(ValueError):
    pass


class KernelNonzero(ValueError):
    pass


class NotEquivariant(ValueError):
    pass


class CertificateError(AssertionError):
    pass


class Section:
    """A homomorphism ``Im(M) -> Z^cols`` splitting ``M`` onto its image."""

    def __init__(self, M: IntMatrix):
        self.M = M.unlabeled()
        self.basis = image_basis(self.M)
        pre = []
        for b in self.basis.columns():
            x = solve(self.M, b)
            assert x is not None
            pre.append(x)
        self.preimages = IntMatrix.from_columns(pre, M.cols)

    def __call__(self, y) -> tuple[int, ...]:
        c = solve(self.basis, y)
        if c is None:
            raise ValueError("vector is not in the image")
        return self.preimages @ c


def _unit(n, i):
    v = [0] * n
    v[i] = 1
    return v


@dataclass(frozen=True)
class ChainMapCertificate:
    mat_a: IntMatrix
    mat_m: IntMatrix
    f0: IntMatrix
    f1: IntMatrix
    xi0: GroupHom
    ker_a: IntMatrix
    ker_m: IntMatrix
    xi1: IntMatrix
    inverse: ChainMapCertificate | None = field(default=None, compare=False)
    h: IntMatrix | None = field(default=None, compare=False)

    def to_json(self, verified: bool | None = None) -> dict:
        if verified is None:
            verify_certificate(self)
            verified = True
        out = {
            "mat_a": self.mat_a.to_json(),
            "mat_m": self.mat_m.to_json(),
            "f0": self.f0.to_json(),
            "f1": self.f1.to_json(),
            "xi0": self.xi0.matrix.to_json(),
            "ker_a": self.ker_a.to_json(),
            "ker_m": self.ker_m.to_json(),
            "xi1": self.xi1.to_json(),
            "coker_a": str(self.xi0.domain),
            "coker_m": str(self.xi0.codomain),
        }
        if self.inverse is not None:
            out["g0"] = self.inverse.f0.to_json()
            out["g1"] = self.inverse.f1.to_json()
        if self.h is not None:
            out["h"] = self.h.to_json()
        if verified:
            out["verified"] = True
        return out


def _lift_f0(xi0: GroupHom, m0: int, target: FgAbelianGroup, image: IntMatrix) -> IntMatrix:
    cols = []
    for k in range(m0):
        y = xi0(xi0.domain.coords(_unit(m0, k)))
        cols.append(reduce_mod_lattice(target.represent(y), image))
    return IntMatrix.from_columns(cols, target.ambient_dim)


def _is_identity_case(A: IntMatrix, M: IntMatrix, xi0: GroupHom) -> bool:
    return A.same_entries(M) and xi0.matrix.same_entries(IntMatrix.identity(xi0.domain.ngens))


def lift_iso(mat_a: IntMatrix, mat_m: IntMatrix, xi0: GroupHom) -> ChainMapCertificate:
    """Chain map realising ``xi0`` on cokernels; see the module docstring."""
    A, M = mat_a.unlabeled(), mat_m.unlabeled()
    (m0, m1), (n0, n1) = A.shape, M.shape
    cok_a, cok_m = cokernel(A), cokernel(M)
    if xi0.domain.invariants != cok_a.invariants or xi0.codomain.invariants != cok_m.invariants:
        raise NotAnIsomorphism("xi0 does not go between the two cokernels")
    xi0 = GroupHom(cok_a, cok_m, xi0.matrix)
    if not xi0.is_isomorphism():
        raise NotAnIsomorphism("xi0 is not bijective")
    ker_a, ker_m = kernel_basis(A), kernel_basis(M)
    if ker_a.cols != ker_m.cols:
        raise RankMismatch(f"kernel ranks {ker_a.cols} and {ker_m.cols} differ")
    k = ker_a.cols
    if _is_identity_case(A, M, xi0):
        return ChainMapCertificate(A, M, IntMatrix.identity(m0), IntMatrix.identity(m1),
                                   xi0, ker_a, ker_m, IntMatrix.identity(k))
    f0 = _lift_f0(xi0, m0, cok_m, image_basis(M))
    s, t = Section(A), Section(M)
    cols = []
    for j in range(m1):
        x = _unit(m1, j)
        Ax = A @ x
        z = [xi - si for xi, si in zip(x, s(Ax))] if m0 else x
        c = solve(ker_a, z)
        kpart = ker_m @ c
        tpart = t(f0 @ Ax)
        cols.append([p + q for p, q in zip(kpart, tpart)])
    f1 = IntMatrix.from_columns(cols, n1)
    cert = ChainMapCertificate(A, M, f0, f1, xi0, ker_a, ker_m, IntMatrix.identity(k))
    verify_certificate(cert)
    return cert


def verify_certificate(cert: ChainMapCertificate) -> bool:
    """Recompute homology from the matrices and check every claim.

    Raises :class:`CertificateError` on the first failure.
    """
    A, M, f0, f1 = cert.mat_a, cert.mat_m, cert.f0, cert.f1
    if not (f0 @ A).same_entries(M @ f1):
        raise CertificateError("square does not commute")
    cok_a, cok_m = cokernel(A), cokernel(M)
    for j in range(cok_a.ngens):
        img = cok_m.coords(f0 @ cok_a.represent(_unit(cok_a.ngens, j)))
        if img != cert.xi0(_unit(cok_a.ngens, j)):
            raise CertificateError(f"f0 does not induce xi0 on generator {j}")
    if not GroupHom(cok_a, cok_m, cert.xi0.matrix).is_isomorphism():
        raise CertificateError("xi0 is not an isomorphism")
    ka, km = cert.ker_a, cert.ker_m
    for K, X in ((ka, A), (km, M)):
        if any(any(r) for r in (X @ K).entries):
            raise CertificateError("kernel basis is not in the kernel")
        if K.cols != X.cols - X.rank():
            raise CertificateError("kernel basis has the wrong rank")
        if cokernel(K).invariant_factors:
            raise CertificateError("kernel basis is not saturated")
    image = f1 @ ka
    for j in range(ka.cols):
        c = solve(km, image.column(j))
        if c is None or tuple(c) != cert.xi1.column(j):
            raise CertificateError("f1 does not induce xi1 on kernels")
    if not cert.xi1.is_unimodular():
        raise CertificateError("xi1 is not invertible")
    return True


def homotopy(forward: ChainMapCertificate, backward: ChainMapCertificate) -> IntMatrix:
    """``h`` with ``h A = 1 - g1 f1`` and ``A h = 1 - g0 f0``.

    Built as ``s o (1 - g0 f0)`` from the section of ``A``; both identities
    are checked before returning.
    """
    A = forward.mat_a
    m0, m1 = A.shape
    g0f0 = backward.f0 @ forward.f0
    g1f1 = backward.f1 @ forward.f1
    d0 = IntMatrix.identity(m0) - g0f0
    d1 = IntMatrix.identity(m1) - g1f1
    s = Section(A)
    try:
        h = IntMatrix.from_columns([s(d0.column(j)) for j in range(m0)], m1)
    except ValueError as exc:
        raise CertificateError("1 - g0 f0 does not factor through the differential") from exc
    if not (A @ h).same_entries(d0) or not (h @ A).same_entries(d1):
        raise CertificateError("homotopy identities fail")
    return h


# ---------------------------------------------------------------------------
# Z[s] version


@dataclass(frozen=True)
class SigmaChainMapCertificate:
    mat_a: SigmaMatrix
    mat_m: SigmaMatrix
    f0: SigmaMatrix
    f1: SigmaMatrix
    xi0: GroupHom

    def to_json(self) -> dict:
        verify_sigma_certificate(self)
        return {"mat_a": self.mat_a.to_json(), "mat_m": self.mat_m.to_json(),
                "f0": self.f0.to_json(), "f1": self.f1.to_json(),
                "xi0": self.xi0.matrix.to_json(), "verified": True}


def _injective(D: IntMatrix) -> bool:
    return kernel_basis(D).cols == 0


def lift_iso_sigma(mat_a: SigmaMatrix, mat_m: SigmaMatrix, xi0: GroupHom) -> SigmaChainMapCertificate:
    """Lift an equivariant isomorphism when both differentials are injective."""
    DA, DM = double(mat_a), double(mat_m)
    if not _injective(DA) or not _injective(DM):
        raise KernelNonzero("lifting over Z[s] needs injective differentials")
    mod_a, mod_m = coker_sigma(mat_a), coker_sigma(mat_m)
    xi0 = GroupHom(mod_a.underlying, mod_m.underlying, xi0.matrix)
    if not xi0.is_isomorphism():
        raise NotAnIsomorphism("xi0 is not bijective")
    if not (xi0 @ mod_a.sigma) == (mod_m.sigma @ xi0):
        raise NotEquivariant("xi0 does not commute with s")
    (m0, m1), (n0, n1) = mat_a.shape, mat_m.shape
    if _is_identity_case(DA, DM, xi0):
        f0, f1 = SigmaMatrix.identity(m0), SigmaMatrix.identity(m1)
    else:
        # lift only the 1-level generators; s-equivariance fixes the rest
        full = _lift_f0(xi0, 2 * m0, mod_m.underlying, image_basis(DM))
        P = full.submatrix(range(n0), range(m0))
        Q = full.submatrix(range(n0, 2 * n0), range(m0))
        f0 = SigmaMatrix(P, Q)
        rhs = double(f0) @ DA
        cols = []
        for j in range(m1):
            x = solve(DM, rhs.column(j))
            assert x is not None
            cols.append(x)
        half = IntMatrix.from_columns(cols, 2 * n1)
        f1 = SigmaMatrix(half.submatrix(range(n1), range(m1)),
                         half.submatrix(range(n1, 2 * n1), range(m1)))
    cert = SigmaChainMapCertificate(mat_a, mat_m, f0, f1, xi0)
    verify_sigma_certificate(cert)
    return cert


def verify_sigma_certificate(cert: SigmaChainMapCertificate) -> bool:
    if not (cert.mat_m @ cert.f1) == (cert.f0 @ cert.mat_a):
        raise CertificateError("square does not commute over Z[s]")
    mod_a, mod_m = coker_sigma(cert.mat_a), coker_sigma(cert.mat_m)
    A, B = mod_a.underlying, mod_m.underlying
    F0 = double(cert.f0)
    for j in range(A.ngens):
        img = B.coords(F0 @ A.represent(_unit(A.ngens, j)))
        if img != cert.xi0(_unit(A.ngens, j)):
            raise CertificateError(f"f0 does not induce xi0 on generator {j}")
    xi = GroupHom(A, B, cert.xi0.matrix)
    if not xi.is_isomorphism() or not (xi @ mod_a.sigma) == (mod_m.sigma @ xi):
        raise CertificateError("xi0 is not an equivariant isomorphism")
    return True


# ---------------------------------------------------------------------------
# graph-level procedures


@dataclass(frozen=True)
class IsoSearch:
    certificate: object | None
    reason: str

    def __bool__(self):
        return self.certificate is not None


def _canonical_iso(A: FgAbelianGroup, B: FgAbelianGroup) -> GroupHom:
    return GroupHom(A, B, IntMatrix.identity(A.ngens))


def kk_iso_exists(E: Graph, F: Graph, with_inverse: bool = False,
                  xi0: GroupHom | None = None) -> IsoSearch:
    """Certificate lifting ``xi0`` (default: match canonical generators).

    With ``with_inverse`` the certificate also carries the lift of
    ``xi0^-1`` and the homotopy between the composite and the identity.
    """
    if len(E.sinks) != len(F.sinks):
        return IsoSearch(None, f"singular counts differ ({len(E.sinks)} vs {len(F.sinks)})")
    be, bf_ = bf(E).group, bf(F).group
    if be.invariants != bf_.invariants:
        return IsoSearch(None, f"Bowen-Franks groups differ ({be} vs {bf_})")
    if xi0 is None:
        xi0 = _canonical_iso(be, bf_)
    A, M = bf_matrix(E), bf_matrix(F)
    cert = lift_iso(A, M, xi0)
    if with_inverse:
        back = lift_iso(M, A, cert.xi0.inverse())
        h = homotopy(cert, back)
        cert = ChainMapCertificate(cert.mat_a, cert.mat_m, cert.f0, cert.f1, cert.xi0,
                                   cert.ker_a, cert.ker_m, cert.xi1, back, h)
    return IsoSearch(cert, "lifted canonical isomorphism")


def kk_iso_exists_twisted(E: Graph, F: Graph) -> IsoSearch:
    ME, MF = twisted_bf_matrix(E), twisted_bf_matrix(F)
    if not _injective(double(ME)) or not _injective(double(MF)):
        raise KernelNonzero("twisted Bowen-Franks matrices must be injective")
    me, mf = bf_twisted(E).module, bf_twisted(F).module
    if me.underlying.invariants != mf.underlying.invariants:
        return IsoSearch(None, f"twisted groups differ ({me.underlying} vs {mf.underlying})")
    if me.underlying.rank:
        return IsoSearch(None, "unsupported: equivariant search needs finite modules")
    if E == F:
        xi0 = GroupHom.identity(me.underlying)
    else:
        xi0 = sigma_iso_decide(me, mf)
    if xi0 is None:
        return IsoSearch(None, "no s-equivariant isomorphism exists")
    return IsoSearch(lift_iso_sigma(ME, MF, xi0), "lifted equivariant isomorphism")

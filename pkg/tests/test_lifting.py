import random

import pytest

from lpakit.corpus import random_graph, random_moves, rose, rose_minus, small_det_graph, upsilon
from lpakit.graph import bf_matrix
from lpakit.intlin import FgAbelianGroup, GroupHom, IntMatrix, cokernel, solve
from lpakit.invariants import twisted_bf_matrix
from lpakit.lifting import (
    CertificateError,
    ChainMapCertificate,
    KernelNonzero,
    NotAnIsomorphism,
    NotEquivariant,
    RankMismatch,
    homotopy,
    kk_iso_exists,
    kk_iso_exists_twisted,
    lift_iso,
    lift_iso_sigma,
    verify_certificate,
)
from lpakit.sigma import SigmaMatrix, SigmaScalar, coker_sigma

from oracles import kron_homotopy_system, matmul


def M(rows):
    return IntMatrix.from_rows(rows)


def hom(A, B, rows):
    return GroupHom(cokernel(A), cokernel(B), IntMatrix.from_rows(rows, nrows=cokernel(B).ngens,
                                                                   ncols=cokernel(A).ngens))


def independent_check(cert):
    """Commuting square and induced cokernel map, recomputed by hand."""
    A, Mm, f0, f1 = (x.tolist() for x in (cert.mat_a, cert.mat_m, cert.f0, cert.f1))
    assert matmul(f0, A, cert.mat_a.cols) == matmul(Mm, f1, cert.mat_a.cols)
    cA, cM = cokernel(cert.mat_a), cokernel(cert.mat_m)
    for k in range(cA.ngens):
        g = [int(i == k) for i in range(cA.ngens)]
        image = cert.f0 @ cA.represent(g)
        target = cM.represent(cert.xi0(g))
        diff = tuple(a - b for a, b in zip(image, target))
        assert solve(cert.mat_m, diff) is not None


def test_identity_certificate():
    A = M([[0, -1], [-3, 0]])
    xi = GroupHom.identity(cokernel(A))
    c = lift_iso(A, A, xi)
    assert c.f0.same_entries(IntMatrix.identity(2)) and c.f1.same_entries(IntMatrix.identity(2))
    assert verify_certificate(c)


@pytest.mark.parametrize("unit", [1, 2])
def test_r4_to_small_det_graph(unit):
    A, B = M([[-3]]), M([[0, -1], [-3, 0]])
    c = lift_iso(A, B, hom(A, B, [[unit]]))
    assert c.f0.shape == (2, 1) and c.f1.shape == (2, 1)
    independent_check(c)


def test_r2_to_r2_minus_on_trivial_groups():
    A = M([[-1]])
    B = bf_matrix(rose_minus()).unlabeled()
    assert B.tolist() == [[-1, -1, 0], [-1, 0, -1], [0, -1, 0]]
    c = lift_iso(A, B, hom(A, B, []))
    independent_check(c)


def test_lift_errors():
    Z0, Z1 = IntMatrix.zeros(1, 1), IntMatrix.from_rows([[]], nrows=1, ncols=0)
    with pytest.raises(RankMismatch):
        lift_iso(Z0, Z1, GroupHom.identity(cokernel(Z0)))
    A = M([[-3]])
    with pytest.raises(NotAnIsomorphism):
        lift_iso(A, A, hom(A, A, [[0]]))


def test_certificate_tampering_is_detected():
    A, B = M([[-3]]), M([[0, -1], [-3, 0]])
    c = lift_iso(A, B, hom(A, B, [[1]]))
    bad = ChainMapCertificate(c.mat_a, c.mat_m, c.f0, c.f1 + IntMatrix.from_rows([[1], [0]]),
                              c.xi0, c.ker_a, c.ker_m, c.xi1)
    with pytest.raises(CertificateError):
        verify_certificate(bad)
    bad = ChainMapCertificate(c.mat_a, c.mat_m, c.f0, c.f1, hom(A, B, [[2]]), c.ker_a, c.ker_m, c.xi1)
    with pytest.raises(CertificateError):
        verify_certificate(bad)


def test_lift_with_kernels():
    # rank-one kernels on both sides, cokernel Z + Z/2
    A = M([[2, 0, 0], [0, 0, 0]])
    B = M([[0, 0, 0], [0, 2, 0]])
    xi = GroupHom(cokernel(A), cokernel(B), IntMatrix.identity(2))
    c = lift_iso(A, B, xi)
    assert c.ker_a.cols == c.ker_m.cols == 2
    independent_check(c)


def test_lift_is_deterministic():
    A, B = M([[-3]]), M([[0, -1], [-3, 0]])
    xi = hom(A, B, [[2]])
    assert lift_iso(A, B, xi) == lift_iso(A, B, xi)


def test_homotopy_matches_kronecker_solvability():
    rng = random.Random(40)
    done = 0
    while done < 15:
        E = random_graph(rng, 3, 6)
        F = random_moves(E, rng, 2)
        res = kk_iso_exists(E, F, with_inverse=True)
        assert res
        c = res.certificate
        done += 1
        A = c.mat_a
        if A.rows == 0 or A.cols == 0:
            continue
        d0 = (IntMatrix.identity(A.rows) - c.inverse.f0 @ c.f0).tolist()
        d1 = (IntMatrix.identity(A.cols) - c.inverse.f1 @ c.f1).tolist()
        rows, rhs = kron_homotopy_system(A.tolist(), d0, d1)
        assert solve(IntMatrix.from_rows(rows, ncols=A.rows * A.cols), rhs) is not None
        assert (A @ c.h).tolist() == d0 and (c.h @ A).tolist() == d1


def test_homotopy_rejects_unrelated_maps():
    A = M([[-3]])
    c = lift_iso(A, A, hom(A, A, [[1]]))
    fake = ChainMapCertificate(A, A, M([[2]]), M([[2]]), hom(A, A, [[2]]), c.ker_a, c.ker_m, c.xi1)
    with pytest.raises(CertificateError):
        homotopy(c, fake)


def test_lift_sigma_examples():
    X = SigmaMatrix.from_scalars([[SigmaScalar(1, -2)]])
    mod = coker_sigma(X)
    c = lift_iso_sigma(X, X, GroupHom.identity(mod.underlying))
    assert c.f0 == SigmaMatrix.identity(1) and c.f1 == SigmaMatrix.identity(1)
    c = lift_iso_sigma(X, X, mod.sigma)
    s = SigmaMatrix.from_scalars([[SigmaScalar(0, 1)]])
    assert c.f0 == s and c.f1 == s
    U = twisted_bf_matrix(upsilon())
    c = lift_iso_sigma(U, U, GroupHom.identity(coker_sigma(U).underlying))
    assert c.to_json()["verified"] is True


def test_lift_sigma_errors():
    R1 = twisted_bf_matrix(rose(1))
    with pytest.raises(KernelNonzero):
        lift_iso_sigma(R1, R1, GroupHom.identity(coker_sigma(R1).underlying))
    three = SigmaMatrix.from_scalars([[3]])
    mod = coker_sigma(three)
    assert mod.underlying == FgAbelianGroup.from_cyclic([3, 3])
    xi = GroupHom(mod.underlying, mod.underlying, IntMatrix.from_rows([[1, 0], [0, 2]]))
    with pytest.raises(NotEquivariant):
        lift_iso_sigma(three, three, xi)


def test_kk_iso_exists_examples():
    assert kk_iso_exists(rose(4), small_det_graph())
    res = kk_iso_exists(rose(2), rose(3))
    assert not res and "differ" in res.reason
    assert kk_iso_exists(rose(2), rose_minus())


def test_kk_iso_exists_twisted_examples():
    res = kk_iso_exists_twisted(rose(2), rose_minus())
    assert not res
    c = kk_iso_exists_twisted(rose_minus(), rose_minus()).certificate
    assert c.f0 == SigmaMatrix.identity(3)
    assert not kk_iso_exists_twisted(rose(4), small_det_graph())


def test_random_certificates_verify_independently():
    rng = random.Random(41)
    for _ in range(20):
        E = random_graph(rng, 3, 6)
        F = random_moves(E, rng, 3)
        res = kk_iso_exists(E, F)
        assert res
        independent_check(res.certificate)


def test_certificate_json_is_stamped():
    data = kk_iso_exists(rose(4), small_det_graph(), with_inverse=True).certificate.to_json()
    assert data["verified"] is True and {"g0", "g1", "h"} <= set(data)

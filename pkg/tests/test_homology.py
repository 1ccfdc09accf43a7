import random

import pytest

from lpakit.corpus import random_graph, rose, small_det_graph, upsilon
from lpakit.homology import CoefficientData, MissingDegree, SequenceEnds, kernel_of_tensored, kh_ends, uct_ends
from lpakit.intlin import FgAbelianGroup, kernel_basis
from lpakit.invariants import twisted_bf_matrix
from lpakit.sigma import SigmaModule

from oracles import kernel_size

Z3 = FgAbelianGroup.from_cyclic([3])
ZERO = SigmaModule.zero()


def triv(*moduli):
    return SigmaModule.trivial_action(FgAbelianGroup.from_cyclic(moduli))


def test_field_like_r4():
    e = kh_ends(rose(4), CoefficientData.field_like(), 0)
    assert e.left == FgAbelianGroup.from_cyclic([3, 3])
    assert e.right.is_trivial
    assert e.middle == FgAbelianGroup.from_cyclic([3, 3])


def test_field_like_twisted_r2():
    e = kh_ends(rose(2), CoefficientData.field_like(), 0, twisted=True)
    assert e.middle == Z3


def test_all_zero_coefficients():
    e = kh_ends(upsilon(), CoefficientData({0: ZERO, -1: ZERO}), 0)
    assert e.left.is_trivial and e.right.is_trivial and e.middle.is_trivial


def test_missing_degree():
    with pytest.raises(MissingDegree):
        kh_ends(rose(2), CoefficientData({0: ZERO}), 0)
    with pytest.raises(MissingDegree):
        uct_ends(rose(2), CoefficientData({0: ZERO}))


def test_ambiguous_extension_is_left_open():
    e = kh_ends(rose(4), CoefficientData({0: triv(3), -1: triv(3)}), 0)
    assert e.left == Z3 and e.right == Z3
    assert e.middle is None and e.split_reason == "extension ambiguous"


def test_free_right_end_splits():
    # R1: I - A^t = [0], so the kernel end is all of KH_0 = Z
    e = kh_ends(rose(1), CoefficientData({1: triv(2), 0: triv(0)}), 1)
    assert e.left == FgAbelianGroup.from_cyclic([2]) and e.right == FgAbelianGroup.free(1)
    assert e.middle == FgAbelianGroup.from_cyclic([0, 2])
    assert "splits" in e.split_reason


def test_sequence_ends_checks_orders():
    with pytest.raises(AssertionError):
        SequenceEnds(Z3, Z3, Z3, "wrong")


def test_uct_examples():
    kh = CoefficientData({0: triv(0), 1: triv(0)})
    e = uct_ends(rose(4), kh)
    assert e.left == Z3 and e.right.is_trivial and e.middle == Z3
    e = uct_ends(small_det_graph(), CoefficientData({0: triv(0, 3), 1: ZERO}))
    assert e.left.is_trivial and e.middle == e.right


def test_uct_dual_graph_route_agrees():
    rng = random.Random(14)
    kh = CoefficientData({0: triv(0, 4), 1: triv(0, 6)})
    khs = CoefficientData({0: SigmaModule.free(1), 1: SigmaModule.free(1)})
    checked = 0
    while checked < 25:
        G = random_graph(rng, 4, 8)
        if not G.is_essential:
            continue
        checked += 1
        for tw, data in ((False, kh), (True, khs)):
            a = uct_ends(G, data, twisted=tw)
            b = uct_ends(G, data, twisted=tw, via_dual_graph=True)
            assert (a.left, a.right, a.middle) == (b.left, b.right, b.middle)


def _block_matrix(M, K, twisted):
    """Independent construction of the map (M tensor K) in vertex-major blocks."""
    k = K.underlying.ngens
    S = K.action.tolist()
    m, n = M.shape
    F = [[0] * (n * k) for _ in range(m * k)]
    for i in range(m):
        for j in range(n):
            x = M[i, j]
            for a in range(k):
                for b in range(k):
                    F[i * k + a][j * k + b] = (x.a * (a == b) + x.b * S[a][b]) if twisted \
                        else (x.a + x.b) * (a == b)
    return F


def test_kernel_end_matches_brute_force():
    rng = random.Random(15)
    coeffs = [triv(2), triv(4), triv(2, 2), triv(6),
              SigmaModule.from_action(FgAbelianGroup.from_cyclic([5]), [[4]]),
              SigmaModule.from_action(FgAbelianGroup.from_cyclic([3, 3]), [[0, 1], [1, 0]])]
    for _ in range(40):
        G = random_graph(rng, 2, 4)
        M = twisted_bf_matrix(G)
        K = rng.choice(coeffs)
        for tw in (False, True):
            got = kernel_of_tensored(M, K, tw)
            F = _block_matrix(M, K, tw)
            expected = kernel_size(F, K.underlying.moduli, M.shape[1], M.shape[0])
            assert got.order == expected


def test_kernel_end_vanishes_for_injective_matrix_and_free_coefficients():
    rng = random.Random(16)
    for _ in range(30):
        G = random_graph(rng, 4, 8)
        M = twisted_bf_matrix(G)
        if kernel_basis(M.at(1)).cols:
            continue
        assert kernel_of_tensored(M, triv(0), False).is_trivial


def test_coefficient_json():
    data = CoefficientData.from_json({"0": "Zsigma", "-1": {"rank": 0, "factors": []},
                                      "1": {"factors": [5], "sigma": [[4]]}})
    assert data[0].underlying == FgAbelianGroup.free(2)
    assert data[-1].underlying.is_trivial
    assert data[1].action.tolist() == [[4]]

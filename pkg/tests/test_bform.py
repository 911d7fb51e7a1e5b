import random
from fractions import Fraction

import pytest

from oracle import oracle_mode
from voakit.bform import (check_recursion, classification_vector, gram, is_in_cv,
                          is_positive_definite, no_high_conformal, pair, quasi_primary_basis,
                          random_homogeneous, random_j1, verify_pos_l)
from voakit.errors import InhomogeneousInput
from voakit.fock import GradedVector, VACUUM
from voakit.modes import HeisenbergVOA


@pytest.fixture(scope="module")
def neg():
    return HeisenbergVOA(rank=1, level=-1, max_degree=6)


@pytest.fixture(scope="module")
def pos():
    return HeisenbergVOA(rank=1, level=1, max_degree=6)


def test_pair_examples(neg, pos):
    one = GradedVector.vacuum()
    assert pair(neg, one, one) == 1
    assert pair(neg, neg.h(1), neg.h(1)) == 1
    assert pair(pos, pos.h(1), pos.h(1)) == -1
    assert pair(neg, GradedVector.zero(), GradedVector.zero()) == 0


def test_pair_degree_two_against_oracle(neg):
    # (-1)^2 * coefficient of |0> in h(-2)(3)h(-2)|0>
    expected = oracle_mode(-1, ((1, 2),), 3, ((1, 2),))[VACUUM]
    assert pair(neg, neg.h(1, 2), neg.h(1, 2)) == expected == 6


def test_pair_rejects_inhomogeneous(neg):
    with pytest.raises(InhomogeneousInput):
        pair(neg, neg.h(1) + neg.h(1, 2), neg.h(1))
    with pytest.raises(InhomogeneousInput):
        pair(neg, neg.h(1), neg.h(1, 2))


def test_gram_symmetry_and_g0():
    voa = HeisenbergVOA(rank=2, level=Fraction(-1, 3), max_degree=5)
    assert gram(voa, 0) == [[1]]
    for n in range(6):
        g = gram(voa, n)
        assert all(g[i][j] == g[j][i] for i in range(len(g)) for j in range(len(g)))


@pytest.mark.parametrize("rank", [1, 2])
def test_positive_definite(rank):
    voa = HeisenbergVOA(rank=rank, level=-1, max_degree=6)
    res = is_positive_definite(voa, 6)
    assert res.positive and res.witness is None
    assert all(m > 0 for ms in res.minors.values() for m in ms)


def test_indefinite_witness(pos):
    res = is_positive_definite(pos, 6)
    assert not res.positive
    assert res.witness == pos.h(1) and res.witness_degree == 1 and res.witness_value == -1
    assert gram(pos, 1) == [[-1]]


def test_witness_in_larger_block():
    voa = HeisenbergVOA(rank=2, level=1, max_degree=4)
    res = is_positive_definite(voa, 4)
    assert pair(voa, res.witness, res.witness, res.witness_degree) <= 0


def test_quasi_primaries(neg):
    assert quasi_primary_basis(neg, 0) == [GradedVector.vacuum()]
    assert len(quasi_primary_basis(neg, 1)) == neg.dim(1)
    q2 = quasi_primary_basis(neg, 2)
    assert len(q2) == 1
    # proportional to omega
    assert q2[0] * neg.omega.coefficient(((1, 1), (1, 1))) == neg.omega
    for n in range(2, 7):
        assert len(quasi_primary_basis(neg, n)) == neg.dim(n) - neg.dim(n - 1)


def test_orthogonality_relations():
    voa = HeisenbergVOA(rank=2, level=-1, max_degree=5)
    one = GradedVector.vacuum()
    for n in range(1, 5):
        q = quasi_primary_basis(voa, n)
        images = [voa.translate(GradedVector.from_state(s)) for s in voa.basis(n - 1)]
        for v in q:
            for t in images:
                assert pair(voa, v, t, n) == 0
    for s in voa.all_states(4):
        t = voa.translate(GradedVector.from_state(s))
        # (1, Im T) = 0: the vacuum coefficient of the (-1)-product with 1
        assert voa.mode(one, -1, t).coefficient(VACUUM) == 0


def test_h0_skewness_degenerates():
    # k B(v, v) = B(h(0)v, v) = -B(v, h(0)v); h(0) = 0 here, so both sides vanish
    voa = HeisenbergVOA(rank=1, level=-1, max_degree=4)
    for s in voa.all_states(3):
        v = GradedVector.from_state(s)
        assert not voa.heis_mode(1, 0, v)


def test_recursion_identity(neg):
    assert check_recursion(neg, neg.h(1), 2)
    rng = random.Random(2)
    for n in range(2, 6):
        for _ in range(5):
            assert check_recursion(neg, random_homogeneous(neg, n - 1, rng), n)


def test_verify_pos_l():
    voa = HeisenbergVOA(rank=1, level=-1, max_degree=5)
    rep = verify_pos_l(voa, 5, trials=20)
    assert rep.ok and rep.recursion_checked > 0
    assert all(v > 0 for v in rep.minimum.values())


def test_no_high_conformal():
    voa = HeisenbergVOA(rank=1, level=-1, max_degree=5)
    rep = no_high_conformal(voa, 5, trials=10)
    assert rep.ok and rep.checked == {3: 3 + 10, 4: 5 + 10, 5: 7 + 10}


def test_classification_family():
    voa = HeisenbergVOA(rank=2, level=-1, max_degree=4)
    rng = random.Random(9)
    for _ in range(5):
        a = classification_vector(voa, random_j1(voa, rng), random_j1(voa, rng))
        assert is_in_cv(voa, a)
    assert not is_in_cv(voa, voa.omega + voa.h(1, 3))

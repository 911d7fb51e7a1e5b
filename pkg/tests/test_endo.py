import random
from fractions import Fraction

import pytest

from voakit.endo import Endo
from voakit.fock import GradedVector, random_vector
from voakit.modes import HeisenbergVOA


@pytest.fixture(scope="module")
def voa():
    return HeisenbergVOA(rank=2, max_degree=4)


def _lowering(voa, t):
    u = voa.h(1) * t
    return Endo(voa, {s: voa.exp_mode1(u, GradedVector.from_state(s)) for s in voa.all_states()})


def test_identity(voa):
    e = Endo.identity(voa)
    assert e.is_identity() and e.shift_profile == (0, 0)
    v = random_vector(voa.config, range(5), random.Random(1), 0.5)
    assert e(v) == v


def test_compose_and_inverse(voa):
    f = _lowering(voa, Fraction(2, 3))
    g = _lowering(voa, Fraction(-2, 3))
    assert (f @ g).is_identity()
    assert f.inverse() == g
    assert f.shift_profile == (-4, 0)
    v = random_vector(voa.config, range(5), random.Random(2), 0.5)
    assert f(f.solve(v)) == v


def test_general_inverse(voa):
    # mixed shifts force the full-matrix route
    imgs = {s: GradedVector.from_state(s) for s in voa.all_states()}
    imgs[((1, 1),)] = voa.h(1) + voa.vacuum() + voa.h(1, 2)
    f = Endo(voa, imgs)
    assert f.shift_profile[0] < 0 < f.shift_profile[1]
    assert (f @ f.inverse()).is_identity()


def test_blocks_and_json(voa):
    f = _lowering(voa, Fraction(1, 5))
    assert f.block(1, 0) == [[Fraction(1, 5), 0]]
    data = f.to_json()
    assert {"from": 1, "to": 0, "matrix": [["1/5", "0"]]} in data["blocks"]
    assert Endo.from_json(voa, f.dumps()) == f
    with pytest.raises(ValueError):
        Endo.from_blocks(voa, {(1, 0): [[1]]})


def test_rejects_foreign_states(voa):
    with pytest.raises(ValueError):
        Endo(voa, {((1, 9),): GradedVector.vacuum()})


def test_trust_after_mixed_composition(voa):
    raise_ = Endo(voa, {s: GradedVector.from_state(s) + (voa.h(1, 2) if s == ((1, 1),)
                                                         else GradedVector.zero())
                        for s in voa.all_states()})
    low = _lowering(voa, Fraction(1))
    assert (low @ raise_).trust_degree < voa.max_degree
    assert (raise_ @ low).trust_degree == voa.max_degree

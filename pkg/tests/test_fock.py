import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracle import colored_partition_count, partition_count
from voakit.errors import ConfigError, TruncationExceeded
from voakit.fock import (AlgebraConfig, GradedVector, VACUUM, canonical, degree, dim,
                         enumerate_basis, project, random_vector)
from voakit.modes import HeisenbergVOA


def test_degree_zero_is_vacuum():
    assert enumerate_basis(AlgebraConfig(), 0) == [VACUUM]


def test_rank1_degree2_states():
    assert enumerate_basis(AlgebraConfig(), 2) == [((1, 2),), ((1, 1), (1, 1))]


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_dims_match_partition_oracle(rank):
    cfg = AlgebraConfig(rank=rank, max_degree=6)
    for n in range(7):
        states = enumerate_basis(cfg, n)
        assert len(states) == len(set(states)) == colored_partition_count(n, rank)
        assert all(degree(s) == n for s in states)


def test_known_dims():
    assert [dim(AlgebraConfig(), n) for n in range(6)] == [1, 1, 2, 3, 5, 7]
    assert [partition_count(n) for n in range(6)] == [1, 1, 2, 3, 5, 7]
    assert dim(AlgebraConfig(rank=2), 2) == 5
    assert dim(AlgebraConfig(rank=2, max_degree=6), 6) == 65


def test_states_are_canonical():
    cfg = AlgebraConfig(rank=2, max_degree=5)
    for n in range(6):
        for s in enumerate_basis(cfg, n):
            assert canonical(s) == s


def test_enumerate_beyond_truncation():
    with pytest.raises(TruncationExceeded):
        enumerate_basis(AlgebraConfig(max_degree=4), 5)


@pytest.mark.parametrize("kw", [dict(rank=0), dict(level=0), dict(max_degree=3)])
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        AlgebraConfig(**kw)


def test_zero_coefficients_dropped():
    v = GradedVector({VACUUM: 0, ((1, 1),): Fraction(1, 2)})
    assert list(v) == [((1, 1),)]
    assert not (v - v)


def test_projection_examples():
    voa = HeisenbergVOA(rank=1, max_degree=6)
    a = voa.omega + voa.h(1, 2) * Fraction(3)
    assert project(a, 2) == a
    assert project(voa.vacuum() + voa.h(1), 0) == voa.vacuum()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_projection_round_trip(seed, rank):
    cfg = AlgebraConfig(rank=rank, max_degree=5)
    v = random_vector(cfg, range(6), random.Random(seed), density=0.4)
    total = GradedVector.zero()
    for n in range(6):
        total = total + v.project(n)
        assert v.project(n).is_homogeneous() or not v.project(n)
    assert total == v
    assert sum(len(c) for c in v.components().values()) == len(v)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_json_round_trip(seed):
    v = random_vector(AlgebraConfig(rank=2, max_degree=4), range(5), random.Random(seed), 0.3)
    assert GradedVector.from_json(v.to_json()) == v


def test_json_shape():
    v = GradedVector({((1, 2),): Fraction(-3, 4)})
    assert v.to_json() == {"terms": [{"state": [[1, 2]], "coeff": "-3/4"}]}


def test_truncate_and_degrees():
    v = GradedVector({VACUUM: 1, ((1, 3),): 2, ((1, 1),): 5})
    assert v.degrees() == [0, 1, 3]
    assert v.truncate(1) == GradedVector({VACUUM: 1, ((1, 1),): 5})
    assert v.max_degree() == 3 and v.min_degree() == 0
    assert GradedVector.zero().max_degree() == -1

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracle import oracle_mode, oracle_mode_vec
from voakit.errors import TruncationExceeded
from voakit.fock import AlgebraConfig, GradedVector, VACUUM, degree, random_vector
from voakit.modes import (HeisenbergVOA, check_borcherds_sample, check_skew_symmetry,
                          check_translation, check_vacuum, run_axiom_suite,
                          translation_by_derivation)


def _oracle_vs_engine(rank, level, top, strip, pair_bound=None):
    voa = HeisenbergVOA(rank=rank, level=level, max_degree=top, strip=strip)
    states = voa.all_states()
    mismatches = 0
    for sa in states:
        for sb in states:
            da, db = degree(sa), degree(sb)
            if pair_bound is not None and da + db > pair_bound:
                continue
            for n in range(da + db - top - 1, da + db):
                got = voa.mode(GradedVector.from_state(sa), n, GradedVector.from_state(sb))
                if got != GradedVector(oracle_mode(level, sa, n, sb)):
                    mismatches += 1
    return mismatches


@pytest.mark.parametrize("rank,top,bound", [(1, 4, None), (2, 4, 4)])
@pytest.mark.parametrize("level", [Fraction(1), Fraction(-1), Fraction(2, 3)])
@pytest.mark.parametrize("strip", ["first", "last"])
def test_engine_matches_brute_force_oracle(rank, top, bound, level, strip):
    assert _oracle_vs_engine(rank, level, top, strip, bound) == 0


def test_engine_matches_oracle_deeper():
    assert _oracle_vs_engine(1, Fraction(-2), 5, "first") == 0
    assert _oracle_vs_engine(2, Fraction(1), 4, "last") == 0


def test_stripping_orders_agree():
    a = HeisenbergVOA(rank=2, max_degree=5, strip="first")
    b = HeisenbergVOA(rank=2, max_degree=5, strip="last")
    rng = random.Random(3)
    for _ in range(20):
        u = random_vector(a.config, range(4), rng, 0.3)
        v = random_vector(a.config, range(3), rng, 0.3)
        for n in range(-2, 4):
            assert a.mode(u, n, v, truncate=True) == b.mode(u, n, v, truncate=True)


@pytest.fixture(scope="module")
def voa():
    return HeisenbergVOA(rank=1, level=Fraction(3, 2), max_degree=6)


def test_heis_mode_examples(voa):
    k = voa.level
    assert voa.heis_mode(1, 1, voa.h(1)) == GradedVector.vacuum() * k
    assert not voa.heis_mode(1, 0, voa.omega)
    assert voa.heis_mode(1, -2, voa.h(1)) == GradedVector.from_state(((1, 2), (1, 1)))
    with pytest.raises(TruncationExceeded):
        voa.heis_mode(1, -3, voa.h(1, 4))


def test_mode_examples(voa):
    w = voa.omega
    assert voa.mode(w, 1, voa.h(1)) == voa.h(1)
    assert voa.mode(w, 3, w) == GradedVector.vacuum() * Fraction(1, 2)
    assert voa.mode(w, 1, w) == w * 2
    one = voa.vacuum()
    b = voa.h(1, 2) + voa.h(1)
    assert voa.mode(one, -1, b) == b
    assert all(not voa.mode(one, n, b) for n in range(-4, 5) if n != -1)


def test_truncation_flag(voa):
    big = voa.h(1, 5)
    with pytest.raises(TruncationExceeded):
        voa.mode(big, -2, voa.h(1, 2))
    out, gap = voa.mode_with_gap(big + voa.h(1), -2, voa.h(1))
    assert gap and out == voa.mode(voa.h(1), -2, voa.h(1))


def test_translate_examples(voa):
    assert not voa.translate(voa.vacuum())
    assert voa.translate(voa.h(1)) == voa.h(1, 2)
    assert voa.translate(voa.h(1, 2)) == voa.h(1, 3) * 2


def test_translate_matches_derivation():
    voa = HeisenbergVOA(rank=2, max_degree=6)
    for s in voa.all_states(5):
        v = GradedVector.from_state(s)
        assert voa.translate(v) == translation_by_derivation(voa, v)


def test_degree_law():
    voa = HeisenbergVOA(rank=2, max_degree=6)
    for sa in voa.all_states(3):
        for sb in voa.all_states(3):
            for k in range(-2, 6):
                out = voa.mode(GradedVector.from_state(sa), k, GradedVector.from_state(sb),
                               truncate=True)
                assert set(out.degrees()) <= {degree(sa) + degree(sb) - k - 1}


def test_projection_of_products():
    voa = HeisenbergVOA(rank=1, max_degree=6)
    rng = random.Random(5)
    for _ in range(10):
        a = random_vector(voa.config, [1, 2, 3], rng)
        b = random_vector(voa.config, [2, 3], rng)
        for k in range(0, 4):
            d = 1 + 2 - k - 1
            if d < 0:
                continue
            lhs = voa.mode(a, k, b, truncate=True).project(d)
            assert lhs == voa.mode(a.project(1), k, b.project(2))


def test_one_product_with_omega(voa):
    # a_1(1) omega = a_1 for a_1 in V_1
    assert voa.mode(voa.h(1), 1, voa.omega) == voa.h(1)
    assert check_skew_symmetry(voa, voa.h(1), voa.omega)


def test_single_checks(voa):
    w = voa.omega
    assert check_vacuum(voa, w)
    assert check_translation(voa, w, voa.h(1, 2))
    assert check_skew_symmetry(voa, w, w)
    one, h = voa.vacuum(), voa.h(1)
    assert check_borcherds_sample(voa, one, one, one, 2, -1, 3)
    r = check_borcherds_sample(voa, h, h, one, 0, 1, 0)
    assert r.ok and r.checked == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_skew_symmetry_random(seed):
    voa = HeisenbergVOA(rank=2, max_degree=6)
    rng = random.Random(seed)
    a = random_vector(voa.config, range(4), rng, 0.3)
    b = random_vector(voa.config, range(3), rng, 0.3)
    r = check_skew_symmetry(voa, a, b)
    assert r.ok


def test_borcherds_small_scan():
    voa = HeisenbergVOA(rank=1, max_degree=6)
    small = [GradedVector.from_state(s) for s in voa.all_states(3)]
    idx = range(-3, 4)
    total = 0
    for u in small:
        for v in small:
            for w in small[:4]:
                for p in idx:
                    for q in idx:
                        r = check_borcherds_sample(voa, u, v, w, p, q, 0)
                        assert r.ok, r.failure
                        total += r.checked
    assert total > 1000


class _BrokenVOA(HeisenbergVOA):
    """Sign error in the 2-product of basis states; the checks must notice."""

    def _mode_basis(self, sa, n, sb):
        out = super()._mode_basis(sa, n, sb)
        if n == 2 and len(sa) == 2:
            return {s: -c for s, c in out.items()}
        return out


def test_suite_detects_broken_engine():
    bad = _BrokenVOA(rank=1, max_degree=5)
    rep = run_axiom_suite(bad, triple_degree=2)
    assert not rep.ok
    assert not rep.results["skew_symmetry"].ok or not rep.results["borcherds"].ok


def test_suite_small():
    rep = run_axiom_suite(HeisenbergVOA(rank=1, max_degree=4), triple_degree=2)
    assert rep.ok
    assert rep.results["borcherds"].checked > 0


def test_memo_is_shared_and_consistent(voa):
    w = voa.omega
    first = voa.mode(w, 1, w)
    assert voa.mode(w, 1, w) == first


def test_oracle_sanity():
    # independent of the engine: omega(3)omega = 1/2 at rank 1
    k = Fraction(-1)
    omega = {((1, 1), (1, 1)): 1 / (2 * k)}
    assert oracle_mode_vec(k, omega, 3, omega) == {VACUUM: Fraction(1, 2)}
    assert oracle_mode(k, ((1, 2),), 3, ((1, 2),)) == {VACUUM: -6 * k}


def test_exp_mode1(voa):
    h = voa.h(1)
    v = voa.exp_mode1(h, voa.omega)
    assert v == voa.omega + h + GradedVector.vacuum() * (voa.level / 2)
    assert v.project(1) == h
    with pytest.raises(ValueError):
        voa.exp_mode1(voa.omega, h)


def test_config_forms():
    voa = HeisenbergVOA(AlgebraConfig(rank=2, level=Fraction(1, 2)))
    assert voa.rank == 2 and voa.level == Fraction(1, 2) and voa.max_degree == 6

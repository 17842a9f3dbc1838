from __future__ import annotations

import random
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftlab import relations as R
from shiftlab.errors import HypothesisError, InputError, InstanceTooLarge
from shiftlab.relations import FiniteDynSystem, Relation


def brute_quantities(sys, F, U):
    """sep, spa and cov by enumerating every subset of X."""
    W = R.pullback(U, F, sys).bits
    n = sys.n
    subsets = [set(c) for k in range(n + 1) for c in combinations(range(n), k)]
    sep = max(len(S) for S in subsets if all(not W[x, y] for x in S for y in S if x != y))
    spa = min(len(S) for S in subsets if all(any(W[z, x] for z in S) for x in range(n)))
    small = [frozenset(S) for S in subsets if S and all(W[x, y] for x in S for y in S)]
    cov = None
    for k in range(1, n + 1):
        if any(set().union(*c) == set(range(n)) for c in combinations(small, k)):
            cov = k
            break
    return sep, spa, cov


@st.composite
def small_instances(draw):
    seed = draw(st.integers(0, 10_000))
    rng = random.Random(seed)
    sys = R.random_system(rng, n_max=6, index=draw(st.integers(0, 3)))
    U = R.random_entourage(rng, sys.n)
    F = R.random_window(rng, sys)
    return sys, F, U


def test_compose_and_inverse_by_hand():
    U = Relation.from_pairs(3, [(0, 1), (1, 2)])
    assert set(R.compose(U, U).pairs()) == {(0, 2)}
    assert set(R.inverse(U).pairs()) == {(1, 0), (2, 1)}
    E = Relation.from_partition([0, 0, 1])
    assert E.is_equivalence()
    assert sorted(map(sorted, R.equivalence_classes(E))) == [[0, 1], [2]]


def test_group_words_and_periods():
    sys = FiniteDynSystem(4, {"t": [1, 2, 3, 0]}, kind="z")
    assert sys.period == 4
    assert sys.act(sys.word("t t")) == (2, 3, 0, 1)
    fin = FiniteDynSystem(3, {"s": [1, 0, 2], "r": [1, 2, 0]}, kind="finite")
    assert len(fin.group()) == 6
    assert fin.act(fin.word("s^-1 s")) == (0, 1, 2)


def test_pullback_by_hand():
    # rotation of 3 points; U relates 0 and 1 only
    sys = FiniteDynSystem(3, {"t": [1, 2, 0]}, kind="z")
    U = Relation.from_pairs(3, [(0, 1), (1, 0)], reflexive=True)
    P = R.pullback(U, [0, 1], sys)
    assert P == Relation.diagonal(3)


@given(small_instances())
def test_quantities_match_subset_enumeration(inst):
    sys, F, U = inst
    assert (R.sep(sys, F, U), R.spa(sys, F, U), R.cov(sys, F, U)) == brute_quantities(sys, F, U)


@given(small_instances())
def test_equivalence_entourage_degeneracy(inst):
    sys, F, _ = inst
    labels = [x % 3 for x in range(sys.n)]
    U = Relation.from_partition(labels)
    k = R.class_count(sys, F, U)
    assert R.sep(sys, F, U) == R.spa(sys, F, U) == R.cov(sys, F, U) == k


@given(small_instances())
def test_chain_with_derived_v(inst):
    sys, F, U = inst
    V = R.compose(U, R.inverse(U))
    rep = R.check_chain(sys, F, U, V)
    assert rep.ok, rep.to_json()


def test_chain_hypothesis_checked():
    sys = FiniteDynSystem(3, {"t": [0, 1, 2]})
    U = Relation.from_pairs(3, [(0, 1)], reflexive=True)
    with pytest.raises(HypothesisError, match="hypothesis violated"):
        R.check_chain(sys, [0], U, U)


def test_caps_and_reflexivity():
    big = FiniteDynSystem(20, {"t": list(range(20))})
    with pytest.raises(InstanceTooLarge):
        R.sep(big, [0], Relation.diagonal(20))
    small = FiniteDynSystem(2, {"t": [0, 1]})
    with pytest.raises(InputError):
        R.spa(small, [0], Relation(np.zeros((2, 2), dtype=bool)))


def test_expansive_and_homoclinic():
    sys = FiniteDynSystem(4, {"t": [1, 2, 3, 0]})
    # U0 only distinguishes point 0; its translates separate everything
    labels = [0, 1, 1, 1]
    U0 = Relation.from_partition(labels)
    assert R.is_expansive(sys, U0)
    assert not R.is_expansive(sys, Relation.full(4))
    assert not R.homoclinic(sys, 0, 1)
    assert R.homoclinic(sys, 2, 2)


def test_two_point_counterexample():
    out = R.two_point_counterexample()
    assert out["pre_injective"] and not out["surjective"]
    assert out["expansive"] and out["equivariant"]
    assert out["myhill_fails"]


def test_sweeps_are_deterministic():
    a = R.chain_sweep(instances=20, seed=3)
    b = R.chain_sweep(instances=20, seed=3)
    assert a == b
    assert sum(a["violations"].values()) == 0

from __future__ import annotations

import math
from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from shiftlab import entropy as E
from shiftlab import relations as R
from shiftlab.errors import HypothesisError, InputError
from shiftlab.lattice import FiniteShape, FolnerBoxSequence
from shiftlab.shifts import ShiftPresentation, count_language

short_words = st.sampled_from(["".join(p) for n in (1, 2, 3) for p in product("01", repeat=n)])
forbidden_sets = st.lists(short_words, min_size=0, max_size=4, unique=True)


def make_sft(forbidden):
    try:
        return ShiftPresentation.sft("01", forbidden)
    except InputError:
        return None


def test_exact_values(full2, golden, period2):
    assert abs(E.entropy_exact(full2).value - math.log(2)) < 1e-12
    assert abs(E.entropy_exact(golden).value - oracles.golden_mean_closed_form()) < 1e-12
    assert abs(E.entropy_exact(period2).value) < 1e-12


def test_crosscheck_reported_for_slow_growth(one_block):
    rep = E.entropy_exact(one_block)
    assert abs(rep.value) < 1e-9
    # (n + 1)(n + 2) / 2 + ... words of length n: the rate at 32 is still far from 0
    cc = rep.extra["crosscheck"]
    assert cc["rate"] > 0.1 and not cc["within_tolerance"]


@given(forbidden_sets)
def test_perron_value_matches_eigenvalues(forbidden):
    X = make_sft(forbidden)
    assume(X is not None)
    B = oracles.two_block_matrix(forbidden)
    rho = max(abs(np.linalg.eigvals(B.astype(float))))
    h = E.entropy_exact(X).value
    if rho < 0.5:
        assert h == float("-inf") or abs(h) < 1e-9
    else:
        assert abs(h - math.log(rho)) < 1e-8


@given(forbidden_sets)
def test_entropy_is_below_every_block_rate(forbidden):
    X = make_sft(forbidden)
    assume(X is not None)
    h = E.entropy_exact(X).value
    for n in range(1, 13):
        assert h <= math.log(count_language(X, FiniteShape.box(n))) / n + 1e-9


def test_pattern_trace_full_shift(full2):
    rep = E.entropy_pattern_limit(full2, FolnerBoxSequence.upto(20))
    assert all(abs(r - math.log(2)) < 1e-12 for _, _, r in rep.trace)
    assert rep.lo <= math.log(2) <= rep.hi


def test_pattern_trace_golden(golden):
    rep = E.entropy_pattern_limit(golden, FolnerBoxSequence.upto(24))
    fib = oracles.fibonacci_counts(24)
    assert [c for _, c, _ in rep.trace] == fib[1:]
    rates = [r for _, _, r in rep.trace]
    assert rates == sorted(rates, reverse=True)
    h = oracles.golden_mean_closed_form()
    assert rep.lo <= h <= rep.hi


def test_quantities_table(golden):
    q = E.entropy_quantities(golden, FiniteShape([0, 1]), FolnerBoxSequence.upto(10))
    fib = oracles.fibonacci_counts(12)
    for row in q["table"]:
        assert row["sep"] == row["spa"] == row["cov"] == fib[row["n"] + 1]


@pytest.mark.parametrize("period", [3, 4, 5])
def test_periodic_points_brute_force(golden, period):
    sys, words = E.periodic_point_system(golden, period)
    expected = [w for w in product("01", repeat=period)
                if "11" not in "".join(w) + "".join(w)]
    assert sorted(words) == sorted(expected)
    for F in ([0], [0, 1], [0, 1, 2]):
        U = E.cylinder_relation(words, FiniteShape([0]))
        k = R.class_count(sys, F, U)
        assert R.sep(sys, F, U) == R.spa(sys, F, U) == R.cov(sys, F, U) == k


def test_periodic_shift_direction(golden):
    sys, words = E.periodic_point_system(golden, 3)
    perm = sys.act(sys.word("s"))
    for i, w in enumerate(words):
        # (sx)(t) = x(t - 1)
        assert words[perm[i]] == (w[-1],) + w[:-1]


def test_strip_bounds_against_oracle(hard_square):
    rep = E.strip_bounds(hard_square, range(1, 9))
    for row in rep.extra["strips"]:
        W = row["width"]
        assert abs(row["log_rho"] - math.log(oracles.hard_square_rho(W))) < 1e-9
        assert row["lower"] <= row["upper"]
    uppers = [row["upper"] for row in rep.extra["strips"]]
    assert all(b < a for a, b in zip(uppers, uppers[1:]))


def test_strict_drop(full2, golden, period2, one_block):
    out = E.strict_drop_check(full2, golden)
    assert out["margin"] > 0.2 and out["word_of_X_not_in_Y"] == "11"
    assert E.strict_drop_check(golden, period2)["margin"] > 0.4
    with pytest.raises(HypothesisError, match="equals"):
        E.strict_drop_check(golden, golden)
    with pytest.raises(HypothesisError, match="not contained"):
        E.strict_drop_check(golden, full2)
    with pytest.raises(HypothesisError, match="strongly irreducible"):
        E.strict_drop_check(one_block, ShiftPresentation.sft("01", ["1"]))


def test_positivity_bound(golden, full2, period2):
    out = E.positivity_bound_check(golden, FiniteShape.interval(-1, 1))
    assert out["h"] >= out["bound"] == pytest.approx(math.log(2) / 3)
    assert E.positivity_bound_check(full2, FiniteShape([0]))["passed"]
    with pytest.raises(HypothesisError, match="not certified"):
        E.positivity_bound_check(golden, FiniteShape([0]))
    with pytest.raises(HypothesisError):
        E.positivity_bound_check(period2, FiniteShape.interval(-1, 1))

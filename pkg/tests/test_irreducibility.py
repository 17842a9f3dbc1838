from __future__ import annotations

import re
from itertools import product

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from shiftlab import irreducibility as irr
from shiftlab.errors import InputError
from shiftlab.lattice import FiniteShape
from shiftlab.shifts import Pattern, ShiftPresentation, joinable

short_words = st.sampled_from(["".join(p) for n in (1, 2, 3) for p in product("01", repeat=n)])
forbidden_sets = st.lists(short_words, min_size=0, max_size=4, unique=True)


def make_sft(forbidden):
    try:
        return ShiftPresentation.sft("01", forbidden)
    except InputError:
        return None


def in_language(constraints: dict, words: set[str], lo: int) -> bool:
    """Does some word (placed at lo) of a brute-force language match the constraints?"""
    return any(all(w[t - lo] == s for t, s in constraints.items()) for w in words)


def one_block_words(n):
    return {"".join(p) for p in product("01", repeat=n) if re.fullmatch("0*1*0*", "".join(p))}


def merged(patterns):
    out = {}
    for p in patterns:
        for (t,), s in p.mapping.items():
            out[t] = s
    return out


def test_certificates_of_catalog_shifts(full2, golden, period2, one_block):
    c = irr.strong_irreducibility(golden)
    assert c.strongly_irreducible and c.method == "primitivity"
    assert c.delta.to_json() == [-1, 0, 1]
    assert irr.strong_irreducibility(full2).delta.to_json() == [0]
    assert not irr.strong_irreducibility(period2).strongly_irreducible
    ob = irr.strong_irreducibility(one_block)
    assert ob.status == "not_strongly_irreducible" and ob.method == "filler_search"


def test_period2_witness_replays(period2):
    c = irr.strong_irreducibility(period2, bound=10)
    p, q = c.witness
    assert c.failing_gaps == [0, 2, 4, 6, 8, 10]
    # the pair really fails at each listed gap and joins at the others
    for g in range(11):
        q_g = Pattern.word(q.values, len(p) + g)
        assert joinable(period2, p, q_g) == (g not in c.failing_gaps)


def test_one_block_witness_replays(one_block):
    c = irr.strong_irreducibility(one_block, bound=12)
    p, q = c.witness
    (lo,), _ = p.shape.bounds()
    for g in c.failing_gaps:
        q_g = Pattern.word(q.values, len(p) + g)
        cons = merged([p, q_g])
        n = max(cons) + 1
        assert not in_language(cons, one_block_words(n), 0)
    # two single ones are joined by an all-ones filler, so they cannot witness failure
    assert joinable(one_block, Pattern.word(["1"]), Pattern.word(["1"], 9))


@given(forbidden_sets)
def test_gap_analysis_agrees_with_primitivity(forbidden):
    X = make_sft(forbidden)
    assume(X is not None)
    c = irr.strong_irreducibility(X)
    table = oracles.two_block_join_table(forbidden, range(10, 18))
    assert c.strongly_irreducible == all(table.values())
    assert irr.filler_search(X) == c.strongly_irreducible


@given(forbidden_sets, st.integers(0, 3))
def test_delta_monotone_in_radius(forbidden, r):
    X = make_sft(forbidden)
    assume(X is not None)
    if irr.delta_irreducible(X, irr.interval_delta(r))[0]:
        assert irr.delta_irreducible(X, irr.interval_delta(r + 1))[0]
        assert irr.delta_irreducible(X, FiniteShape.interval(-r - 2, r + 1))[0]


@given(forbidden_sets, st.integers(0, 3))
def test_delta_verdict_against_enumeration(forbidden, r):
    X = make_sft(forbidden)
    assume(X is not None)
    ok, ce = irr.delta_irreducible(X, irr.interval_delta(r))
    if not ok:
        p, q = ce
        # the counterexample is separated and has no common extension
        assert all(abs(a[0] - b[0]) > r for a in p.shape for b in q.shape)
        cons = merged([p, q])
        lo, hi = min(cons), max(cons)
        words = oracles.sft_language(hi - lo + 1, forbidden)
        assert in_language(merged([p]), words, lo) and in_language(merged([q]), words, lo)
        assert not in_language(cons, words, lo)
    else:
        # no pair of words of length <= 2 fails at separations r + 1 .. r + 5
        for lu, lv, s in product((1, 2), (1, 2), range(r + 1, r + 6)):
            n = lu + s - 1 + lv
            words = oracles.sft_language(n, forbidden)
            us = oracles.sft_language(lu, forbidden)
            vs = oracles.sft_language(lv, forbidden)
            for u, v in product(us, vs):
                cons = {i: c for i, c in enumerate(u)} | {lu + s - 1 + i: c for i, c in enumerate(v)}
                assert in_language(cons, words, 0)


def test_delta_without_origin_fails(golden, full2):
    ok, (p, q) = irr.delta_irreducible(golden, FiniteShape([-1, 1]))
    assert not ok and p.shape == q.shape
    assert irr.delta_irreducible(golden, FiniteShape.interval(-1, 1)) == (True, None)
    assert not irr.delta_irreducible(golden, FiniteShape([0]))[0]
    assert irr.delta_irreducible(full2, FiniteShape([0]))[0]


def test_specification_subset():
    assert irr.specification_subset(FiniteShape([0]), FiniteShape.interval(-1, 1)).to_json() == [-1, 0, 1]
    assert irr.specification_subset(FiniteShape([0, 1]), FiniteShape([0])).to_json() == [-1, 0, 1]


def test_wsp_explicit_instances(golden):
    lam = FiniteShape.interval(-1, 1)
    pieces = [Pattern.word(["1"], 0), Pattern.word(["1"], 2), Pattern.word(["1", "0", "1"], 6)]
    rep = irr.wsp_check(golden, lam, instances=[pieces])
    assert rep.passed
    start, word = rep.results[0].found
    assert golden.accepts(word)
    with pytest.raises(InputError, match="separation"):
        irr.wsp_check(golden, lam, instances=[[Pattern.word(["1"], 0), Pattern.word(["0"], 1)]])


def test_wsp_exhaustive(golden, one_block):
    lam = FiniteShape.interval(-1, 1)
    assert irr.wsp_check(golden, lam, exhaustive=True, window=10).passed
    rep = irr.wsp_check(one_block, FiniteShape.interval(-2, 2), exhaustive=True, window=10)
    assert not rep.passed
    assert rep.exhaustive["witness"] is not None


def brute_wsp(words_of, lam, window, pieces):
    """A separated family inside [0, window) with no shadowing point, by enumeration."""
    S = {abs(t) for (t,) in lam}
    words = words_of(window + 8)
    for owners in product(range(pieces + 1), repeat=window):
        sites = {o: [t for t in range(window) if owners[t] == o] for o in range(1, pieces + 1)}
        if any(not v for v in sites.values()):
            continue
        if any(owners[a] and owners[b] and owners[a] != owners[b] and abs(a - b) in S
               for a in range(window) for b in range(window)):
            continue
        occupied = [t for t in range(window) if owners[t]]
        for syms in product("01", repeat=len(occupied)):
            cons = {t + 4: s for t, s in zip(occupied, syms)}
            parts = [{t: s for t, s in cons.items() if owners[t - 4] == o} for o in range(1, pieces + 1)]
            if all(in_language(p, words, 0) for p in parts) and not in_language(cons, words, 0):
                return cons
    return None


@pytest.mark.parametrize("pieces", [2, 3])
def test_wsp_search_against_enumeration(golden, one_block, pieces):
    lam = FiniteShape.interval(-1, 1)
    window = 5
    g_words = lambda n: oracles.sft_language(n, ["11"])  # noqa: E731
    assert (irr.wsp_search(golden, lam, pieces, window) is None) == (brute_wsp(g_words, lam, window, pieces) is None)
    found = irr.wsp_search(one_block, lam, pieces, window)
    assert (found is None) == (brute_wsp(one_block_words, lam, window, pieces) is None)
    assert found is not None

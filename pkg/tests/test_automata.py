from __future__ import annotations

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from shiftlab.automata import DFA, LabeledGraph, is_primitive, perron_root, shortest_missing

matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 2), min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(matrices)
def test_perron_root_matches_eigenvalues(rows):
    m = np.array(rows, dtype=float)
    rho = max(abs(np.linalg.eigvals(m)))
    r = perron_root(m)
    assert abs(r.value - rho) < 1e-7 * max(1.0, rho)
    assert r.lo - 1e-9 <= r.value <= r.hi + 1e-9


def test_primitivity():
    assert is_primitive(np.array([[1, 1], [1, 0]]))[0]
    assert not is_primitive(np.array([[0, 1], [1, 0]]))[0]
    ok, exp = is_primitive(np.array([[0, 1, 0], [0, 0, 1], [1, 1, 0]]))
    # Wielandt's bound for three vertices is (3 - 1)^2 + 1 = 5
    assert ok and exp == 5


def test_subset_construction_and_inclusion():
    # golden mean graph: a -0-> a, a -1-> b, b -0-> a
    g = LabeledGraph(2, [(0, 0, 0), (0, 1, 1), (1, 0, 0)])
    d = DFA.from_graph(g, 2)
    assert d.accepts((0, 1, 0, 1)) and not d.accepts((1, 1))
    assert d.counts(5) == [1, 2, 3, 5, 8, 13]
    full = DFA.from_graph(LabeledGraph(1, [(0, 0, 0), (0, 0, 1)]), 2)
    # a word of the second language missing from the first
    assert shortest_missing(d, full) == (1, 1)
    assert shortest_missing(full, d) is None

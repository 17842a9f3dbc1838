"""Labeled graphs, subset-construction DFAs and Perron roots.

Symbols are small ints here; the mapping to alphabet tokens lives in
:mod:`shiftlab.shifts`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InstanceTooLarge

DEAD = -1


@dataclass(frozen=True)
class LabeledGraph:
    """A finite directed multigraph whose edges carry symbol labels."""

    n: int
    edges: tuple  # (src, dst, label)

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]]):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(sorted(set((int(a), int(b), int(c)) for a, b, c in edges))))

    def out_edges(self) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for a, b, c in self.edges:
            out[a].append((c, b))
        return out

    def essential(self) -> tuple["LabeledGraph", list[int]]:
        """Trim to vertices with both an incoming and an outgoing edge, repeatedly.

        Returns the trimmed graph and the list of kept original vertex ids.
        """
        alive = set(range(self.n))
        edges = list(self.edges)
        while True:
            es = [e for e in edges if e[0] in alive and e[1] in alive]
            has_out = {a for a, _, _ in es}
            has_in = {b for _, b, _ in es}
            keep = alive & has_out & has_in
            if keep == alive and len(es) == len(edges):
                break
            alive, edges = keep, es
        kept = sorted(alive)
        idx = {v: i for i, v in enumerate(kept)}
        return LabeledGraph(len(kept), [(idx[a], idx[b], c) for a, b, c in edges]), kept

    def adjacency(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=np.int64)
        for a, b, _ in self.edges:
            m[a, b] += 1
        return m

    def step(self, states: frozenset, label: int | None) -> frozenset:
        """Vertices reachable from ``states`` by one edge (with the given label, or any)."""
        return frozenset(b for a, b, c in self.edges if a in states and (label is None or c == label))

    def infinite_past(self, word: Sequence[int]) -> frozenset:
        """Vertices at the end of a left-infinite path labeled ...word word word."""
        cur = frozenset(range(self.n))
        while True:
            nxt = cur
            for c in word:
                nxt = self.step(nxt, c)
            if nxt == cur:
                return cur
            cur = nxt

    def infinite_future(self, word: Sequence[int]) -> frozenset:
        """Vertices starting a right-infinite path labeled word word word..."""
        cur = frozenset(range(self.n))
        while True:
            nxt = frozenset(s for s in cur if self.read(frozenset([s]), word) & cur)
            if nxt == cur:
                return cur
            cur = nxt

    def read(self, states: frozenset, word: Sequence[int]) -> frozenset:
        for c in word:
            states = self.step(states, c)
            if not states:
                break
        return states


class DFA:
    """Deterministic automaton in which every state accepts.

    ``delta[q][c]`` is the successor of q on symbol c, or ``DEAD``. The
    accepted language is the set of words readable from ``start``; for the
    automata built here it is a factorial language L(X) of a shift space.
    """

    def __init__(self, nsym: int, delta: list[list[int]], start: int = 0, subsets: list | None = None):
        self.nsym = nsym
        self.delta = delta
        self.start = start
        self.subsets = subsets

    @property
    def nstates(self) -> int:
        return len(self.delta)

    @classmethod
    def from_graph(cls, g: LabeledGraph, nsym: int, initial: Iterable[int] | None = None,
                   cap: int = 200_000) -> "DFA":
        """Subset construction starting from ``initial`` (default: every vertex)."""
        out = g.out_edges()
        init = frozenset(range(g.n) if initial is None else initial)
        index = {init: 0}
        subsets = [init]
        delta: list[list[int]] = []
        queue = deque([init])
        while queue:
            S = queue.popleft()
            row = [DEAD] * nsym
            succ: dict[int, set] = {}
            for v in S:
                for c, w in out[v]:
                    succ.setdefault(c, set()).add(w)
            for c, T in succ.items():
                T = frozenset(T)
                if T not in index:
                    if len(index) >= cap:
                        raise InstanceTooLarge(f"subset construction exceeds {cap} states")
                    index[T] = len(subsets)
                    subsets.append(T)
                    queue.append(T)
                row[c] = index[T]
            delta.append(row)
        return cls(nsym, delta, 0, subsets)

    def run(self, word: Sequence[int], state: int | None = None) -> int:
        q = self.start if state is None else state
        for c in word:
            if q == DEAD:
                return DEAD
            q = self.delta[q][c]
        return q

    def accepts(self, word: Sequence[int]) -> bool:
        return self.run(word) != DEAD

    def count(self, n: int) -> int:
        """Number of accepted words of length n (exact)."""
        vec = {self.start: 1}
        for _ in range(n):
            nxt: dict[int, int] = {}
            for q, k in vec.items():
                for t in self.delta[q]:
                    if t != DEAD:
                        nxt[t] = nxt.get(t, 0) + k
            vec = nxt
        return sum(vec.values())

    def counts(self, n_max: int) -> list[int]:
        """[count(0), count(1), ..., count(n_max)] in one pass."""
        out = [1]
        vec = {self.start: 1}
        for _ in range(n_max):
            nxt: dict[int, int] = {}
            for q, k in vec.items():
                for t in self.delta[q]:
                    if t != DEAD:
                        nxt[t] = nxt.get(t, 0) + k
            vec = nxt
            out.append(sum(vec.values()))
        return out

    def words(self, n: int, cap: int = 100_000) -> Iterator[tuple[int, ...]]:
        """Accepted words of length n in lexicographic order."""
        produced = 0
        stack: list[tuple[int, tuple]] = [(self.start, ())]
        while stack:
            q, w = stack.pop()
            if len(w) == n:
                produced += 1
                if produced > cap:
                    raise InstanceTooLarge(f"more than {cap} words of length {n}")
                yield w
                continue
            for c in reversed(range(self.nsym)):
                t = self.delta[q][c]
                if t != DEAD:
                    stack.append((t, w + (c,)))

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.nstates, self.nstates), dtype=np.int64)
        for q, row in enumerate(self.delta):
            for t in row:
                if t != DEAD:
                    m[q, t] += 1
        return m


def shortest_missing(big: DFA, small: DFA) -> tuple[int, ...] | None:
    """Shortest word accepted by ``small`` but not by ``big``; None if L(small) is inside L(big)."""
    start = (small.start, big.start)
    seen = {start: None}
    queue = deque([start])
    while queue:
        qs, qb = queue.popleft()
        for c in range(small.nsym):
            ts = small.delta[qs][c]
            if ts == DEAD:
                continue
            tb = big.delta[qb][c] if qb != DEAD else DEAD
            node = (ts, tb)
            if node in seen:
                continue
            seen[node] = ((qs, qb), c)
            if tb == DEAD:
                word = []
                cur = node
                while seen[cur] is not None:
                    prev, sym = seen[cur]
                    word.append(sym)
                    cur = prev
                return tuple(reversed(word))
            queue.append(node)
    return None


def strongly_connected(m) -> tuple[int, np.ndarray]:
    return connected_components(csr_matrix(np.asarray(m) > 0), directed=True, connection="strong")


@dataclass(frozen=True)
class PerronRoot:
    """Spectral radius of a nonnegative matrix with Collatz-Wielandt bounds."""

    value: float
    lo: float
    hi: float
    iterations: int


def _power(B: np.ndarray, tol: float, max_iter: int) -> PerronRoot:
    # B + I is primitive when B is irreducible, so the iteration converges
    A = B + np.eye(B.shape[0])
    v = np.ones(B.shape[0])
    lo, hi = 0.0, np.inf
    for it in range(1, max_iter + 1):
        w = A @ v
        ratios = w / v
        lo, hi = float(ratios.min()), float(ratios.max())
        if hi - lo <= tol * hi:
            break
        v = w / w.max()
    else:
        raise InstanceTooLarge(f"power iteration did not converge in {max_iter} steps")
    return PerronRoot((lo + hi) / 2 - 1.0, lo - 1.0, hi - 1.0, it)


def perron_root(m, tol: float = 1e-12, max_iter: int = 1_000_000) -> PerronRoot:
    """Spectral radius of a nonnegative square matrix.

    Computed as the maximum over strongly connected components, each by power
    iteration on (B + I) bracketed by Collatz-Wielandt bounds.
    """
    m = np.asarray(m, dtype=float)
    ncomp, labels = strongly_connected(m)
    best = PerronRoot(0.0, 0.0, 0.0, 0)
    for c in range(ncomp):
        idx = np.nonzero(labels == c)[0]
        B = m[np.ix_(idx, idx)]
        if not B.any():
            continue
        r = _power(B, tol, max_iter)
        if r.value > best.value:
            best = r
    return best


def is_primitive(m) -> tuple[bool, int | None]:
    """Primitivity of a nonnegative matrix and its exponent (least k with M^k > 0).

    Uses Wielandt's bound (n-1)^2 + 1 on the exponent of a primitive matrix.
    """
    a = (np.asarray(m) > 0).astype(np.int64)
    n = a.shape[0]
    if n == 0:
        return False, None
    bound = (n - 1) ** 2 + 1
    p = a.copy()
    for k in range(1, bound + 1):
        if p.all():
            return True, k
        p = ((p @ a) > 0).astype(np.int64)
    return False, None


def matrix_power_zero_pattern(m, k: int) -> np.ndarray:
    a = (np.asarray(m) > 0).astype(np.int64)
    p = np.eye(a.shape[0], dtype=np.int64)
    for _ in range(k):
        p = ((p @ a) > 0).astype(np.int64)
    return p > 0

"""Strong irreducibility and the weak specification property for 1D shifts.

Two exact procedures live here.

* The gap test: for words u, v of L(X) and a gap length g, ``u w v`` is a word
  for some |w| = g iff P(u) A^g Q(v) > 0, where P(u) is the set of vertices a
  path labeled u can end at, Q(v) the set it can start from, and A the
  adjacency matrix of the essential graph. Only inclusion-minimal P and Q
  matter, and the Boolean powers of A are eventually periodic, so whether all
  pairs join at every large gap is decided after finitely many powers.
* The layout search: a breadth-first search over interleavings of k owners'
  sites, each owner reading its own point, while tracking the set of DFA
  states a common point can be in. It decides Delta-irreducibility for an
  arbitrary finite Delta and is the exhaustive WSP instance sweep.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from . import lattice
from .automata import DEAD, is_primitive
from .errors import InputError, InstanceTooLarge, TheoremViolation
from .lattice import FiniteShape
from .shifts import Pattern, ShiftPresentation, find_extension

POWER_CAP = 20_000
SEARCH_CAP = 2_000_000


@dataclass
class IrreducibilityCertificate:
    status: str  # strongly_irreducible | not_strongly_irreducible | unknown
    method: str  # primitivity | filler_search
    delta: FiniteShape | None = None
    witness: tuple[Pattern, Pattern] | None = None
    failing_gaps: list[int] = field(default_factory=list)
    gap_bound: int | None = None
    proof: str = ""
    exponent: int | None = None

    @property
    def strongly_irreducible(self) -> bool:
        return self.status == "strongly_irreducible"

    def to_json(self) -> dict:
        out = {"status": self.status, "method": self.method, "proof": self.proof}
        if self.delta is not None:
            out["delta"] = self.delta.to_json()
        if self.exponent is not None:
            out["primitivity_exponent"] = self.exponent
        if self.witness is not None:
            out["witness"] = [p.to_json() for p in self.witness]
            out["failing_gaps"] = self.failing_gaps
            out["gap_bound"] = self.gap_bound
        return out


# ---------------------------------------------------------------------------
# gap test


def _forward_sets(X: ShiftPresentation) -> dict[frozenset, tuple[int, ...]]:
    """P(u) for every word u, with a shortest u producing it."""
    g = X.graph
    start = frozenset(range(g.n))
    seen = {start: ()}
    queue = deque([start])
    while queue:
        S = queue.popleft()
        for c in range(len(X.alphabet)):
            T = g.step(S, c)
            if T and T not in seen:
                if len(seen) >= SEARCH_CAP:
                    raise InstanceTooLarge("too many follower sets")
                seen[T] = seen[S] + (c,)
                queue.append(T)
    return seen


def _backward_sets(X: ShiftPresentation) -> dict[frozenset, tuple[int, ...]]:
    """Q(v) for every word v, with a shortest v producing it."""
    g = X.graph
    into: dict[tuple[int, int], set] = {}
    for a, b, c in g.edges:
        into.setdefault((b, c), set()).add(a)
    start = frozenset(range(g.n))
    seen = {start: ()}
    queue = deque([start])
    while queue:
        S = queue.popleft()
        for c in range(len(X.alphabet)):
            T = frozenset(a for b in S for a in into.get((b, c), ()))
            if T and T not in seen:
                if len(seen) >= SEARCH_CAP:
                    raise InstanceTooLarge("too many predecessor sets")
                seen[T] = (c,) + seen[S]
                queue.append(T)
    return seen


def _minimal(sets: dict) -> list[frozenset]:
    keys = sorted(sets, key=lambda s: (len(s), sorted(s)))
    out: list[frozenset] = []
    for s in keys:
        if not any(m <= s for m in out):
            out.append(s)
    return out


@dataclass
class GapAnalysis:
    """Joinability of every pair of words at every gap length, in closed form."""

    preperiod: int
    period: int
    bad: dict  # gap g < preperiod + period -> list of failing (P index, Q index)
    P: list
    Q: list
    words_P: list
    words_Q: list

    def failing(self, g: int) -> list:
        if g >= self.preperiod:
            g = self.preperiod + (g - self.preperiod) % self.period
        return self.bad.get(g, [])

    @property
    def eventually_joinable(self) -> bool:
        return all(not self.bad.get(g) for g in range(self.preperiod, self.preperiod + self.period))

    @property
    def min_gap(self) -> int | None:
        """Least N with every pair joinable at every gap >= N (None if no such N)."""
        if not self.eventually_joinable:
            return None
        bad = [g for g, v in self.bad.items() if v]
        return max(bad) + 1 if bad else 0


def gap_analysis(X: ShiftPresentation) -> GapAnalysis:
    X._need_1d()
    fw, bw = _forward_sets(X), _backward_sets(X)
    P, Q = _minimal(fw), _minimal(bw)
    n = X.graph.n
    Pm = np.zeros((len(P), n), dtype=np.int64)
    Qm = np.zeros((len(Q), n), dtype=np.int64)
    for i, s in enumerate(P):
        Pm[i, list(s)] = 1
    for j, s in enumerate(Q):
        Qm[j, list(s)] = 1
    A = (X.graph.adjacency() > 0).astype(np.int64)
    M = np.eye(n, dtype=np.int64)
    seen: dict[bytes, int] = {}
    bad: dict[int, list] = {}
    g = 0
    while True:
        key = M.astype(np.uint8).tobytes()
        if key in seen:
            pre = seen[key]
            return GapAnalysis(pre, g - pre, bad, P, Q, [fw[s] for s in P], [bw[s] for s in Q])
        if g >= POWER_CAP:
            raise InstanceTooLarge(f"Boolean powers did not cycle within {POWER_CAP} steps")
        seen[key] = g
        ok = (Pm @ M @ Qm.T) > 0
        fails = [tuple(map(int, ij)) for ij in np.argwhere(~ok)]
        if fails:
            bad[g] = fails
        M = ((M @ A) > 0).astype(np.int64)
        g += 1


def _witness(X: ShiftPresentation, ga: GapAnalysis, bound: int):
    # the pair failing at the most gaps in the periodic part, at its first failing gap
    tally: dict = {}
    for g in range(ga.preperiod, ga.preperiod + ga.period):
        for pair in ga.bad.get(g, []):
            tally[pair] = tally.get(pair, 0) + 1
    pair = min(tally, key=lambda p: (-tally[p], ga.words_P[p[0]] != ga.words_Q[p[1]],
                                    len(ga.words_P[p[0]]) + len(ga.words_Q[p[1]]), p))
    u, v = ga.words_P[pair[0]], ga.words_Q[pair[1]]
    gaps = [g for g in range(bound + 1) if pair in ga.failing(g)]
    g0 = next(g for g in gaps if g >= ga.preperiod)
    p = Pattern.word(X.decode(u), 0)
    q = Pattern.word(X.decode(v), len(u) + g0)
    return (p, q), gaps


def interval_delta(radius: int) -> FiniteShape:
    return FiniteShape.interval(-radius, radius)


def strong_irreducibility(X: ShiftPresentation, bound: int | None = None, verify: bool = True) -> IrreducibilityCertificate:
    """Decide strong irreducibility of a 1D shift.

    SFTs are decided by primitivity of the essential higher block graph; the
    gap test supplies the least symmetric Delta (or a witness pair) and must
    agree with it. Sofic shifts are decided by the gap test alone; when the
    set computations exceed their caps the answer is ``unknown``.
    """
    if X.dim != 1:
        return IrreducibilityCertificate("unknown", "filler_search", proof="2D strong irreducibility is not decided")
    method = "primitivity" if X.kind == "sft" else "filler_search"
    exponent = None
    if X.kind == "sft":
        prim, exponent = is_primitive(X.graph.adjacency())
    try:
        ga = gap_analysis(X)
    except InstanceTooLarge as exc:
        if X.kind == "sft":
            raise
        return IrreducibilityCertificate("unknown", method, gap_bound=bound, proof=str(exc))
    si = ga.eventually_joinable
    if X.kind == "sft" and si != prim:
        raise TheoremViolation("primitivity and gap test disagree on strong irreducibility")
    if si:
        N = ga.min_gap
        delta = interval_delta(N)
        if verify:
            ok, _ = delta_irreducible(X, delta)
            if not ok:
                raise TheoremViolation(f"least joining gap {N} does not give a valid Delta")
        if X.kind == "sft":
            proof = f"essential {X.graph.n}-vertex block graph is primitive with exponent {exponent}"
        else:
            proof = "every pair of words joins at every gap of length at least the radius"
        return IrreducibilityCertificate("strongly_irreducible", method, delta=delta, proof=proof, exponent=exponent)
    bound = bound if bound is not None else max(2 * (ga.preperiod + ga.period), 10)
    witness, gaps = _witness(X, ga, bound)
    if X.kind == "sft":
        proof = "essential block graph is not primitive"
    else:
        proof = "the witness words fail to join at infinitely many gaps"
    proof += f"; failing gaps recur with period {ga.period} from gap {ga.preperiod}"
    return IrreducibilityCertificate("not_strongly_irreducible", method, witness=witness,
                                     failing_gaps=gaps, gap_bound=bound, proof=proof)


def filler_search(X: ShiftPresentation, max_radius: int = 32) -> bool | None:
    """Strong irreducibility by searching for a working symmetric Delta directly.

    Tries Delta = {-r..r} for r = 0, 1, ..., max_radius with the exact layout
    search. Returns True when one works, False when a single-interval pair
    fails at a gap that recurs forever, None when undecided within the bound.
    """
    ga = gap_analysis(X)
    if not ga.eventually_joinable:
        return False
    for r in range(max_radius + 1):
        if delta_irreducible(X, interval_delta(r))[0]:
            return True
    return None


# ---------------------------------------------------------------------------
# layout search


def _layout_search(X: ShiftPresentation, owners: int, conflict: Callable[[int, int, int], bool],
                   reach: int, nearest_only: bool, max_len: int | None = None):
    """Find an interleaving of owners' sites and owners' points with no common point.

    ``conflict(new, old, j)`` says whether owner ``new`` at t and a different
    owner ``old`` at t - j violate the separation rule (1 <= j <= reach).
    Returns None when every admissible instance is fillable, otherwise a list
    of per-owner Patterns.
    """
    dfa = X.dfa
    k = dfa.nsym
    start = dfa.start
    # state: owners' DFA states (None until the owner's first site), memory of
    # recent owners, and the DFA states the common point can be in
    init = ((None,) * owners, (0,) * reach, frozenset([start]))
    parent = {init: None}
    queue = deque([(init, 0)])

    def canon(mem: tuple) -> tuple:
        if not nearest_only:
            return mem
        seen_o = set()
        out = []
        for o in mem:
            if o and o not in seen_o:
                seen_o.add(o)
                out.append(o)
            else:
                out.append(0)
        return tuple(out)

    while queue:
        state, depth = queue.popleft()
        if max_len is not None and depth >= max_len:
            continue
        qs, mem, S = state
        for o in range(owners + 1):
            if o == 0 and state is init:
                continue
            if o and any(m and m != o and conflict(o, m, j + 1) for j, m in enumerate(mem)):
                continue
            # an owner's point is unconstrained before its first site, so only
            # owners already placed (and the current one) choose symbols
            active = [i for i in range(owners) if qs[i] is not None or i == o - 1]
            for choice in product(range(k), repeat=len(active)):
                syms = dict(zip(active, choice))
                nq = list(qs)
                dead = False
                for i, c in syms.items():
                    t = dfa.delta[start if qs[i] is None else qs[i]][c]
                    if t == DEAD:
                        dead = True
                        break
                    nq[i] = t
                if dead:
                    continue
                if o == 0:
                    T = frozenset(t for s in S for t in dfa.delta[s] if t != DEAD)
                else:
                    T = frozenset(dfa.delta[s][syms[o - 1]] for s in S) - {DEAD}
                nxt = (tuple(nq), canon((o,) + mem[:-1]) if reach else (), T)
                if nxt in parent:
                    continue
                parent[nxt] = (state, o, syms)
                if not T:
                    return _rebuild(X, nxt, parent, owners)
                if len(parent) > SEARCH_CAP:
                    raise InstanceTooLarge("layout search exceeded its state cap")
                queue.append((nxt, depth + 1))
    return None


def _rebuild(X: ShiftPresentation, end, parent, owners: int) -> list[Pattern]:
    steps = []
    cur = end
    while parent[cur] is not None:
        prev, o, syms = parent[cur]
        steps.append((o, syms))
        cur = prev
    steps.reverse()
    pieces: list[dict] = [dict() for _ in range(owners)]
    for t, (o, syms) in enumerate(steps):
        if o:
            pieces[o - 1][t] = X.alphabet.symbols[syms[o - 1]]
    return [Pattern.from_dict(p, dim=1) if p else Pattern(FiniteShape((), dim=1), ()) for p in pieces]


def delta_irreducible(X: ShiftPresentation, delta: FiniteShape) -> tuple[bool, tuple[Pattern, Pattern] | None]:
    """Is X Delta-irreducible? Returns (verdict, counterexample (p, q)).

    Delta-irreducible: whenever finite sets Omega1, Omega2 satisfy
    Omega1 cap (Omega2 + Delta) = empty, any two points can be matched on
    Omega1 and Omega2 respectively by a single point.
    """
    X._need_1d()
    if delta.dim != 1:
        raise InputError("Delta must be a subset of Z")
    D = set(delta.pointset)
    if (0,) not in D:
        # sites shared by both owners force equal symbols
        symbols = [c for c in range(len(X.alphabet)) if X.dfa.delta[X.dfa.start][c] != DEAD]
        if len(symbols) > 1:
            a, b = X.decode(symbols[:2])
            return False, (Pattern.word([a]), Pattern.word([b]))
        return True, None
    reach = max((abs(d[0]) for d in D), default=0)

    def conflict(new: int, old: int, j: int) -> bool:
        # new at t, old at t - j; owner 1 at a, owner 2 at b needs a - b outside Delta
        diff = j if new == 1 else -j
        return (diff,) in D

    nearest = set(D) == set(interval_delta(reach).pointset)
    found = _layout_search(X, 2, conflict, reach, nearest)
    if found is None:
        return True, None
    return False, (found[0], found[1])


def specification_subset(omega: FiniteShape, delta: FiniteShape) -> FiniteShape:
    """Lambda = Omega - Delta - Omega."""
    return lattice.shape_product(lattice.shape_product(omega, delta.reflect()), omega.reflect())


# ---------------------------------------------------------------------------
# weak specification


@dataclass
class WSPInstance:
    """Pieces given by the sites where the shadowing point must copy each x_i.

    For the entourage W({0}) the piece with agreement sites S_i has
    Omega_i = -S_i.
    """

    pieces: list

    def omegas(self) -> list[FiniteShape]:
        return [p.shape.reflect() for p in self.pieces]


@dataclass
class WSPResult:
    instance: WSPInstance
    found: tuple[int, tuple[str, ...]] | None

    def to_json(self) -> dict:
        out = {"pieces": [p.to_json() for p in self.instance.pieces], "found": self.found is not None}
        if self.found is not None:
            out["x"] = {"start": self.found[0], "word": list(self.found[1])}
        return out


@dataclass
class WSPReport:
    spec_set: FiniteShape
    results: list
    exhaustive: dict | None = None

    @property
    def passed(self) -> bool:
        ok = all(r.found is not None for r in self.results)
        if self.exhaustive is not None:
            ok = ok and self.exhaustive["passed"]
        return ok

    @property
    def violations(self) -> list:
        out = [r for r in self.results if r.found is None]
        return out

    def to_json(self) -> dict:
        out = {"lambda": self.spec_set.to_json(), "passed": self.passed,
               "instances": [r.to_json() for r in self.results]}
        if self.exhaustive is not None:
            out["exhaustive"] = self.exhaustive
        return out


def _separated(omegas: Sequence[FiniteShape], lam: FiniteShape) -> bool:
    for j, Oj in enumerate(omegas):
        for k, Ok in enumerate(omegas):
            if j != k and not Oj.isdisjoint(lattice.shape_product(lam, Ok)):
                return False
    return True


def wsp_check(X: ShiftPresentation, lam: FiniteShape, instances: Iterable = (), exhaustive: bool = False,
              max_pieces: int = 3, window: int = 16) -> WSPReport:
    """Check the weak specification property of X at W({0}) with specification set Lambda.

    Each explicit instance is a list of Patterns (agreement sites and the
    symbols of x_i there); it must satisfy Omega_j cap (Lambda + Omega_k) = empty.
    With ``exhaustive`` every separated family of up to ``max_pieces`` pieces
    inside ``window`` consecutive sites is covered by a symbolic search, and the
    two-piece case is compared with the multi-piece case.
    """
    X._need_1d()
    results = []
    for inst in instances:
        inst = inst if isinstance(inst, WSPInstance) else WSPInstance(list(inst))
        if not _separated(inst.omegas(), lam):
            raise InputError("instance pieces violate the Lambda-separation hypothesis")
        merged: dict = {}
        clash = False
        for p in inst.pieces:
            for pt, v in p.mapping.items():
                if merged.setdefault(pt[0], v) != v:
                    clash = True
        found = None if clash else find_extension(X, merged)
        if found is not None and not X.accepts(found[1]):
            raise TheoremViolation("extension search returned a word outside the language")
        results.append(WSPResult(inst, found))
    ex = None
    if exhaustive:
        ex = {"window": window, "max_pieces": max_pieces}
        for k in sorted({2, max_pieces}):
            fail = wsp_search(X, lam, k, window)
            ex[f"pieces_{k}"] = {"passed": fail is None,
                                 "witness": None if fail is None else [p.to_json() for p in fail]}
            if fail is not None and ex.get("witness") is None:
                ex["witness"] = [p.to_json() for p in fail]
        ex["passed"] = all(ex[f"pieces_{k}"]["passed"] for k in sorted({2, max_pieces}))
        if ex["pieces_2"]["passed"] and not ex[f"pieces_{max_pieces}"]["passed"]:
            raise TheoremViolation("two-piece specification holds but multi-piece specification fails")
    return WSPReport(lam, results, ex)


def wsp_search(X: ShiftPresentation, lam: FiniteShape, pieces: int, window: int | None) -> list[Pattern] | None:
    """Exhaustive search for a separated family with no shadowing point; None if there is none."""
    S = {p[0] for p in lam.points} | {-p[0] for p in lam.points}
    if 0 not in S:
        raise InputError("exhaustive WSP search needs 0 in Lambda")
    reach = max(abs(s) for s in S)
    nearest = S == set(range(-reach, reach + 1))

    def conflict(new: int, old: int, j: int) -> bool:
        return j in S

    found = _layout_search(X, pieces, conflict, reach, nearest, max_len=window)
    return None if found is None else [p for p in found if len(p)]

"""Sliding block codes between one-dimensional shifts.

A code with neighborhood hull [lo, hi] is run on the *lifted graph*: its states
are (vertex, last w - 1 symbols) for paths of the domain's essential graph, w
the hull length, and each edge carries the input symbol it reads and the output
symbol rule(window). Paths of the lifted graph are exactly the points of the
domain, and its output labels present the image.

Injectivity and pre-injectivity are decided on the pair graph: pairs of lifted
states, joined by pairs of edges with equal outputs. An edge is a *diff* edge
when its two input symbols differ and an *equal* edge otherwise.

* f is not injective iff some diff edge lies on a bi-infinite path, i.e. its
  source is reachable from a cycle and its target reaches a cycle.
* f is not pre-injective iff the same holds with cycles made of equal edges:
  two points agreeing outside a finite window have equal-input tails, and by
  finiteness those tails run around equal-edge cycles.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .automata import DFA, LabeledGraph, perron_root, shortest_missing
from .errors import HypothesisError, InputError, TheoremViolation
from .lattice import FiniteShape
from .shifts import EventuallyPeriodic, PointedConfiguration, ShiftPresentation, _as_ep

STRICT_MARGIN = 1e-9


class BlockCode:
    """A cellular automaton / sliding block code f: domain -> codomain.

    ``rule`` maps neighborhood patterns (tuples of symbols, in the sorted order
    of the neighborhood points) to codomain symbols, or is a callable on such
    tuples. y(n) = rule(x(n + a) for a in neighborhood).
    """

    def __init__(self, neighborhood, rule: Mapping | Callable, domain: ShiftPresentation,
                 codomain: ShiftPresentation | None = None, name: str | None = None):
        if not isinstance(neighborhood, FiniteShape):
            neighborhood = FiniteShape(neighborhood, dim=1)
        if neighborhood.dim != 1 or len(neighborhood) == 0:
            raise InputError("neighborhoods are nonempty subsets of Z")
        if domain.dim != 1:
            raise InputError("block codes act on one-dimensional shifts")
        codomain = codomain if codomain is not None else domain
        self.neighborhood = neighborhood
        self.domain = domain
        self.codomain = codomain
        self.name = name
        (self.lo,), (self.hi,) = neighborhood.bounds()
        self.width = self.hi - self.lo + 1
        offs = [p[0] - self.lo for p in neighborhood.points]
        A = domain.alphabet
        table: dict[tuple[int, ...], int] = {}
        for window in domain.dfa.words(self.width, cap=1_000_000):
            key = tuple(A.symbols[window[i]] for i in offs)
            try:
                out = rule(key) if callable(rule) else rule[key]
            except KeyError:
                raise InputError(f"rule is not defined on the admissible pattern {''.join(key)}") from None
            table[window] = codomain.alphabet.index(out)
        self.table = table
        missing = codomain.missing_from(self.image_presentation())
        if missing is not None:
            raise InputError(f"image leaves the codomain (the word {codomain.alphabet.join(missing)})")

    @classmethod
    def from_table(cls, neighborhood, table: Mapping[str, str], domain: ShiftPresentation,
                   codomain: ShiftPresentation | None = None, name: str | None = None) -> "BlockCode":
        """Rule given as written neighborhood patterns, e.g. {"10": "1"}."""
        rule = {tuple(domain.alphabet.split(k)): v for k, v in table.items()}
        return cls(neighborhood, rule, domain, codomain, name)

    def __repr__(self) -> str:
        return f"BlockCode({self.name or ''}, neighborhood={self.neighborhood.to_json()})"

    def local(self, window: Sequence[str]) -> str:
        """Output for a written hull window x(n + lo) ... x(n + hi)."""
        return self.codomain.alphabet.symbols[self.table[self.domain.encode(window)]]

    # -- lifted graph

    @cached_property
    def lifted(self) -> tuple[LabeledGraph, list[int], list[int]]:
        """(graph with edge labels = edge index, input symbol per edge, output symbol per edge)."""
        g = self.domain.graph
        out = g.out_edges()
        states: dict[tuple, int] = {}
        level = {(v, ()) for v in range(g.n)}
        for _ in range(self.width - 1):
            level = {(b, s + (c,)) for v, s in level for c, b in out[v]}
        queue = deque(sorted(level))
        for st in queue:
            states.setdefault(st, len(states))
        edges, ins, outs = [], [], []
        while queue:
            v, s = queue.popleft()
            for c, b in out[v]:
                window = s + (c,)
                nxt = (b, window[1:])
                if nxt not in states:
                    states[nxt] = len(states)
                    queue.append(nxt)
                edges.append((states[(v, s)], states[nxt], len(edges)))
                ins.append(c)
                outs.append(self.table[window])
        return LabeledGraph(len(states), edges), ins, outs

    def image_graph(self) -> LabeledGraph:
        lg, _, outs = self.lifted
        return LabeledGraph(lg.n, [(a, b, outs[e]) for a, b, e in lg.edges])

    def image_presentation(self) -> ShiftPresentation:
        """f(domain) as a sofic shift over the codomain alphabet."""
        return ShiftPresentation.from_graph(self.codomain.alphabet, self.image_graph(),
                                            name=f"image of {self.name or 'code'}")

    # -- application

    def apply(self, x):
        """f(x) for a periodic-plus-patch or eventually periodic configuration."""
        self.domain.check(x)
        if isinstance(x, EventuallyPeriodic):
            return self._apply_ep(x)
        p = x.period[0]
        base = x.base_config()
        cell = tuple(self._at(base, t) for t in range(p))
        y = PointedConfiguration(1, (p,), cell)
        changes = {}
        for (s,), _ in x.patch:
            for n in range(s - self.hi, s - self.lo + 1):
                changes[n] = self._at(x, n)
        return y.with_patch(changes)

    def _at(self, x, n: int) -> str:
        return self.local([x[n + d] for d in range(self.lo, self.hi + 1)])

    def _apply_ep(self, x: EventuallyPeriodic) -> EventuallyPeriodic:
        s, e = x.start - self.hi, x.end - self.lo
        L, R = len(x.left), len(x.right)
        left = tuple(self._at(x, s - L + j) for j in range(L))
        right = tuple(self._at(x, e + j) for j in range(R))
        middle = tuple(self._at(x, n) for n in range(s, e))
        return EventuallyPeriodic(left, middle, right, s)

    def __call__(self, x):
        return self.apply(x)

    # -- pair graph

    @cached_property
    def _pairs(self):
        lg, ins, outs = self.lifted
        by_out: list[dict[int, list[tuple[int, int]]]] = [dict() for _ in range(lg.n)]
        for a, b, e in lg.edges:
            by_out[a].setdefault(outs[e], []).append((b, e))
        nodes: dict[tuple[int, int], int] = {}
        order = []
        for u in range(lg.n):
            for v in range(lg.n):
                nodes[(u, v)] = len(order)
                order.append((u, v))
        edges = []  # (src, dst, diff, e1, e2)
        for (u, v), i in nodes.items():
            for o, lst in by_out[u].items():
                for b1, e1 in lst:
                    for b2, e2 in by_out[v].get(o, ()):
                        edges.append((i, nodes[(b1, b2)], ins[e1] != ins[e2], e1, e2))
        return order, edges

    def _pair_witness(self, equal_cycles: bool):
        """A bi-infinite pair path through a diff edge, as (x, y), or None."""
        order, edges = self._pairs
        n = len(order)
        _, ins, _ = self.lifted
        sym = self.domain.alphabet.symbols
        cyc_edges = [e for e in edges if not e[2]] if equal_cycles else edges
        cyclic = _cyclic_nodes(n, cyc_edges)
        if not cyclic:
            return None
        fwd = _closure(n, edges, cyclic, forward=True)
        bwd = _closure(n, edges, cyclic, forward=False)
        diffs = [e for e in edges if e[2] and e[0] in fwd and e[1] in bwd]
        if not diffs:
            return None
        # prefer a loop through one diff edge from a cyclic node back to itself
        comp = _components(n, edges)
        for d in diffs:
            same = [c for c in cyclic if comp[c] == comp[d[0]] == comp[d[1]]]
            if same:
                c = min(same)
                base = _path(n, cyc_edges, c, c, nonempty=True)
                head = _path(n, edges, c, d[0])
                tail = _path(n, edges, d[1], c)
                loop = head + [d] + tail
                return self._periodic_pair(base, loop, ins, sym, equal_cycles)
        d = diffs[0]
        src = min(_closure(n, edges, {d[0]}, forward=False) & cyclic)
        dst = min(_closure(n, edges, {d[1]}, forward=True) & cyclic)
        left = _path(n, cyc_edges, src, src, nonempty=True)
        right = _path(n, cyc_edges, dst, dst, nonempty=True)
        mid = _path(n, edges, src, d[0]) + [d] + _path(n, edges, d[1], dst)
        xs = [tuple(sym[ins[e[k]]] for e in part) for part in (left, mid, right) for k in (3, 4)]
        return (EventuallyPeriodic(xs[0], xs[2], xs[4], 0), EventuallyPeriodic(xs[1], xs[3], xs[5], 0))

    def _periodic_pair(self, base, loop, ins, sym, homoclinic: bool):
        bx = tuple(sym[ins[e[3]]] for e in base)
        by = tuple(sym[ins[e[4]]] for e in base)
        lx = tuple(sym[ins[e[3]]] for e in loop)
        ly = tuple(sym[ins[e[4]]] for e in loop)
        if not homoclinic:
            # the loop itself is a cycle of the pair graph: two periodic points
            return PointedConfiguration.periodic(lx), PointedConfiguration.periodic(ly)
        # repeat the loop so the base cycle resumes in phase after it
        k = len(bx) // gcd(len(lx), len(bx))
        lx, ly = lx * k, ly * k
        x = PointedConfiguration.periodic(bx).with_patch({t: s for t, s in enumerate(lx)})
        y = PointedConfiguration.periodic(by).with_patch({t: s for t, s in enumerate(ly)})
        return x, y

    # -- decisions

    def is_surjective(self) -> tuple[bool, tuple[str, ...] | None]:
        """Exact: compare the image DFA with the codomain DFA; witness is a shortest missing word."""
        w = shortest_missing(DFA.from_graph(self.image_graph(), len(self.codomain.alphabet)), self.codomain.dfa)
        return (w is None), (None if w is None else self.codomain.decode(w))

    def is_injective(self):
        pair = self._pair_witness(equal_cycles=False)
        return pair is None, pair

    def is_preinjective(self):
        pair = self._pair_witness(equal_cycles=True)
        return pair is None, pair


# ---------------------------------------------------------------------------
# graph helpers on (src, dst, ...) edge lists


def _adj(n: int, edges, forward: bool = True) -> list[list]:
    out: list[list] = [[] for _ in range(n)]
    for e in edges:
        if forward:
            out[e[0]].append(e)
        else:
            out[e[1]].append(e)
    return out


def _components(n: int, edges) -> np.ndarray:
    if not edges:
        return np.arange(n)
    m = csr_matrix((np.ones(len(edges)), ([e[0] for e in edges], [e[1] for e in edges])), shape=(n, n))
    return connected_components(m, directed=True, connection="strong")[1]


def _cyclic_nodes(n: int, edges) -> set[int]:
    comp = _components(n, edges)
    sizes = np.bincount(comp, minlength=n)
    out = {e[0] for e in edges if e[0] == e[1]}
    out |= {e[0] for e in edges if comp[e[0]] == comp[e[1]] and sizes[comp[e[0]]] > 1}
    return out


def _closure(n: int, edges, seeds, forward: bool) -> set[int]:
    adj = _adj(n, edges, forward)
    seen = set(seeds)
    stack = list(seeds)
    while stack:
        v = stack.pop()
        for e in adj[v]:
            w = e[1] if forward else e[0]
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _path(n: int, edges, src: int, dst: int, nonempty: bool = False) -> list:
    """Shortest edge path src -> dst (a cycle when ``nonempty`` and src == dst)."""
    if src == dst and not nonempty:
        return []
    adj = _adj(n, edges)
    prev: dict[int, tuple] = {}
    queue = deque([src])
    seen = set() if nonempty else {src}
    while queue:
        v = queue.popleft()
        for e in adj[v]:
            w = e[1]
            if w in seen:
                continue
            seen.add(w)
            prev[w] = e
            if w == dst:
                path = []
                while True:
                    e = prev[w]
                    path.append(e)
                    w = e[0]
                    if w == src and (not nonempty or len(path) > 0):
                        return path[::-1]
            queue.append(w)
    raise RuntimeError("no path between nodes expected to be connected")


# ---------------------------------------------------------------------------
# public operations


def apply(f: BlockCode, x):
    return f.apply(x)


def compose(f: BlockCode, g: BlockCode) -> BlockCode:
    """f o g: apply g, then f."""
    if not g.codomain.same_shift(f.domain) or g.codomain.alphabet != f.domain.alphabet:
        raise InputError("codomain of g differs from the domain of f")
    lo, hi = f.lo + g.lo, f.hi + g.hi
    nb = FiniteShape.interval(lo, hi)
    A = g.domain.alphabet

    def rule(window: tuple) -> str:
        # window covers x(n + lo) .. x(n + hi); g's outputs at n + f.lo .. n + f.hi
        mid = [g.local(window[i:i + g.width]) for i in range(f.width)]
        return f.local(mid)

    return BlockCode(nb, rule, g.domain, f.codomain, name=f"{f.name or 'f'} o {g.name or 'g'}")


def image_presentation(f: BlockCode) -> ShiftPresentation:
    return f.image_presentation()


def is_surjective(f: BlockCode):
    return f.is_surjective()


def is_injective(f: BlockCode):
    return f.is_injective()


def is_preinjective(f: BlockCode):
    return f.is_preinjective()


def _certify_si(X: ShiftPresentation):
    from .irreducibility import strong_irreducibility

    cert = strong_irreducibility(X)
    if not cert.strongly_irreducible:
        raise HypothesisError(f"domain is not certified strongly irreducible ({cert.status})")
    return cert


def myhill_check(f: BlockCode) -> dict:
    """Pre-injective implies surjective, for an endomorphism of a strongly irreducible shift."""
    if not f.domain.same_shift(f.codomain):
        raise InputError("myhill_check needs an endomorphism (domain equal to codomain)")
    cert = _certify_si(f.domain)
    pre, pair = f.is_preinjective()
    surj, missing = f.is_surjective()
    out = {"preinjective": pre, "surjective": surj, "delta": cert.delta.to_json()}
    if pair is not None:
        out["homoclinic_pair"] = [c.to_json() for c in pair]
    if missing is not None:
        out["missing_word"] = f.codomain.alphabet.join(missing)
    if pre and not surj:
        raise TheoremViolation("pre-injective endomorphism of a strongly irreducible shift is not surjective")
    out["verdict"] = "PASS" if pre else "PASS (vacuous: not pre-injective)"
    return out


def preinjectivity_failure_on_drop(f: BlockCode) -> dict:
    """A homoclinic pair with equal images, when the image has smaller entropy than the domain."""
    cert = _certify_si(f.domain)
    h_dom = float(np.log(perron_root(f.domain.dfa.matrix()).value))
    img = f.image_presentation()
    h_img = float(np.log(perron_root(img.dfa.matrix()).value))
    if not h_dom - h_img > STRICT_MARGIN:
        raise HypothesisError("no strict drop: the image has the same entropy as the domain")
    pre, pair = f.is_preinjective()
    if pre:
        raise TheoremViolation("entropy drops but no homoclinic pair with equal images exists")
    x, y = pair
    fx, fy = f.apply(x), f.apply(y)
    if not same_image(f, x, y) or not homoclinic_distinct(x, y):
        raise TheoremViolation("pair search returned an invalid witness")
    return {"h_domain": h_dom, "h_image": h_img, "margin": h_dom - h_img, "delta": cert.delta.to_json(),
            "x": x.to_json(), "y": y.to_json(), "f(x)": fx.to_json(), "f(y)": fy.to_json()}


def homoclinic_distinct(x, y) -> bool:
    from .shifts import homoclinic

    ok, diff = homoclinic(x, y)
    return ok and len(diff) > 0


def same_image(f: BlockCode, x, y) -> bool:
    """Replay: do x and y have the same image? Compared on the eventually periodic form."""
    from .shifts import homoclinic

    fx, fy = f.apply(x), f.apply(y)
    ok, diff = homoclinic(fx, fy)
    return ok and len(diff) == 0


# ---------------------------------------------------------------------------
# elementary cellular automata


def full_shift(symbols: str | Sequence[str] = "01") -> ShiftPresentation:
    return ShiftPresentation.full(symbols, name="full")


def eca(number: int, X: ShiftPresentation | None = None) -> BlockCode:
    """Elementary rule ``number`` on the full 2-shift, neighborhood {-1, 0, 1}.

    The new value of a cell with neighbors (l, c, r) is bit 4l + 2c + r of the
    rule number.
    """
    if not 0 <= number < 256:
        raise InputError("elementary rules are numbered 0..255")
    X = X if X is not None else full_shift()

    def rule(w):
        l, c, r = (int(s) for s in w)
        return str((number >> (4 * l + 2 * c + r)) & 1)

    return BlockCode([-1, 0, 1], rule, X, X, name=f"rule {number}")


def myhill_sweep(rules: Sequence[int] = range(256)) -> dict:
    """Surjectivity and pre-injectivity of elementary rules on the full 2-shift."""
    X = full_shift()
    rows = []
    for r in rules:
        f = eca(r, X)
        surj, _ = f.is_surjective()
        pre, _ = f.is_preinjective()
        inj, _ = f.is_injective()
        rows.append({"rule": r, "surjective": surj, "preinjective": pre, "injective": inj})
    bad = [row["rule"] for row in rows if row["preinjective"] and not row["surjective"]]
    return {
        "rules": len(rows),
        "surjective": sum(r["surjective"] for r in rows),
        "preinjective": sum(r["preinjective"] for r in rows),
        "injective": sum(r["injective"] for r in rows),
        "preinjective_not_surjective": bad,
        "garden_of_eden_counts_match": sum(r["surjective"] for r in rows) == sum(r["preinjective"] for r in rows),
        "table": rows,
    }

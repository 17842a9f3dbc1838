"""Relations on a finite set and exact finite-scale entropy quantities.

Everything here works on an explicit finite set X = {0, ..., n-1} with a group
acting by permutations, so every quantity is computed by exhaustive search.
This module is the brute-force reference the subshift code is checked against.

Group elements
--------------
For a ``kind="z"`` system (Z acting through one permutation ``p``) group
elements are ints and ``k`` acts as ``p**k``. For ``kind="finite"`` the group
generated by the permutations is materialised and its elements are the
permutations themselves, as tuples.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import HypothesisError, InputError, InstanceTooLarge

DEFAULT_CAP = 16
GROUP_ORDER_CAP = 50_000


class Relation:
    """A subset U of X x X, stored as an n x n boolean matrix."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        bits = np.array(bits, dtype=bool)
        if bits.ndim != 2 or bits.shape[0] != bits.shape[1]:
            raise InputError("a relation needs a square boolean matrix")
        bits.setflags(write=False)
        self.bits = bits

    @classmethod
    def diagonal(cls, n: int) -> "Relation":
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> "Relation":
        return cls(np.ones((n, n), dtype=bool))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]], reflexive: bool = False) -> "Relation":
        m = np.eye(n, dtype=bool) if reflexive else np.zeros((n, n), dtype=bool)
        for x, y in pairs:
            if not (0 <= x < n and 0 <= y < n):
                raise InputError(f"pair {(x, y)} outside a set of size {n}")
            m[x, y] = True
        return cls(m)

    @classmethod
    def from_partition(cls, labels: Sequence[int]) -> "Relation":
        """The equivalence relation whose classes are the fibres of ``labels``."""
        lab = np.asarray(labels)
        return cls(lab[:, None] == lab[None, :])

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for x, y in zip(*np.nonzero(self.bits))]

    def __getitem__(self, x: int) -> set[int]:
        """U[x] = {y : (x, y) in U}."""
        return {int(y) for y in np.nonzero(self.bits[x])[0]}

    def __contains__(self, pair) -> bool:
        x, y = pair
        return bool(self.bits[x, y])

    def __eq__(self, other) -> bool:
        return isinstance(other, Relation) and self.bits.shape == other.bits.shape and bool(
            np.array_equal(self.bits, other.bits)
        )

    def __hash__(self):
        return hash((self.n, self.bits.tobytes()))

    def __le__(self, other: "Relation") -> bool:
        _same_size(self, other)
        return not bool(np.any(self.bits & ~other.bits))

    def __and__(self, other: "Relation") -> "Relation":
        _same_size(self, other)
        return Relation(self.bits & other.bits)

    def __or__(self, other: "Relation") -> "Relation":
        _same_size(self, other)
        return Relation(self.bits | other.bits)

    def __repr__(self) -> str:
        return f"Relation(n={self.n}, pairs={self.pairs()})"

    def is_reflexive(self) -> bool:
        return bool(np.all(np.diag(self.bits)))

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.bits, self.bits.T))

    def is_transitive(self) -> bool:
        return compose(self, self) <= self

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()


def _same_size(U: Relation, V: Relation) -> None:
    if U.n != V.n:
        raise InputError(f"relations on sets of different sizes ({U.n} vs {V.n})")


def compose(U: Relation, V: Relation) -> Relation:
    """U o V = {(x, y) : there is z with (x, z) in V and (z, y) in U}."""
    _same_size(U, V)
    prod = V.bits.astype(np.int64) @ U.bits.astype(np.int64)
    return Relation(prod > 0)


def inverse(U: Relation) -> Relation:
    return Relation(U.bits.T)


def equivalence_classes(U: Relation) -> list[frozenset[int]]:
    """Classes of an equivalence relation; raises if U is not one."""
    if not U.is_equivalence():
        raise InputError("relation is not an equivalence relation")
    seen: set[frozenset[int]] = set()
    out = []
    for x in range(U.n):
        c = frozenset(U[x])
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# finite dynamical systems


def _perm(p: Sequence[int], n: int) -> tuple[int, ...]:
    p = tuple(int(v) for v in p)
    if sorted(p) != list(range(n)):
        raise InputError(f"{p} is not a permutation of range({n})")
    return p


def _mul(p: tuple, q: tuple) -> tuple:
    """(p q)(x) = p(q(x)): apply q first."""
    return tuple(p[i] for i in q)


def _inv(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def _order(p: tuple) -> int:
    ident = tuple(range(len(p)))
    q, k = p, 1
    while q != ident:
        q = _mul(p, q)
        k += 1
    return k


@dataclass
class FiniteDynSystem:
    """A finite set {0..n-1} with a group acting by permutations."""

    n: int
    generators: dict
    kind: str = "z"
    order_cap: int = GROUP_ORDER_CAP
    elements: list = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise InputError("a finite system needs at least one point")
        self.generators = {name: _perm(p, self.n) for name, p in self.generators.items()}
        if self.kind == "z":
            if len(self.generators) != 1:
                raise InputError("a Z-action is given by exactly one permutation")
            (self._z,) = self.generators.values()
            self._zorder = _order(self._z)
            self.elements = []
        elif self.kind == "finite":
            self.elements = self._closure()
        else:
            raise InputError(f"unknown group kind {self.kind!r}")

    def _closure(self) -> list[tuple]:
        ident = tuple(range(self.n))
        gens = list(self.generators.values())
        seen = {ident}
        order = [ident]
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for s in gens:
                    h = _mul(s, g)
                    if h not in seen:
                        seen.add(h)
                        order.append(h)
                        nxt.append(h)
                        if len(seen) > self.order_cap:
                            raise InstanceTooLarge(
                                f"generated group exceeds {self.order_cap} elements"
                            )
            frontier = nxt
        return order

    @property
    def identity(self):
        return 0 if self.kind == "z" else tuple(range(self.n))

    @property
    def period(self) -> int:
        """Order of the acting permutation (Z-actions only)."""
        if self.kind != "z":
            raise InputError("period is defined for Z-actions only")
        return self._zorder

    def act(self, g) -> tuple[int, ...]:
        """The permutation by which g acts."""
        if self.kind == "z":
            if not isinstance(g, (int, np.integer)):
                raise InputError(f"Z-action expects integer group elements, got {g!r}")
            k = int(g) % self._zorder
            q = tuple(range(self.n))
            for _ in range(k):
                q = _mul(self._z, q)
            return q
        g = tuple(g)
        if g not in set(self.elements):
            raise InputError(f"{g} is not an element of the acting group")
        return g

    def mul(self, g, h):
        if self.kind == "z":
            return int(g) + int(h)
        return _mul(self.act(g), self.act(h))

    def inv(self, g):
        if self.kind == "z":
            return -int(g)
        return _inv(self.act(g))

    def word(self, names: str):
        """Group element spelled by space separated generator names (``s^-1`` allowed)."""
        g = self.identity
        for tok in names.split():
            name, _, exp = tok.partition("^")
            if name not in self.generators:
                raise InputError(f"unknown generator {name!r}")
            e = int(exp) if exp else 1
            s = 1 if self.kind == "z" else self.generators[name]
            if e < 0:
                s = self.inv(s)
            for _ in range(abs(e)):
                g = self.mul(g, s)
        return g

    def group(self) -> list:
        """All group elements (finite kind) or one full period of Z."""
        if self.kind == "z":
            return list(range(self._zorder))
        return list(self.elements)


def pullback(U: Relation, F: Iterable, sys: FiniteDynSystem) -> Relation:
    """U^(F): pairs (x, y) with (gx, gy) in U for every g in F."""
    F = list(F)
    if not F:
        raise InputError("pullback needs a nonempty set of group elements")
    if U.n != sys.n:
        raise InputError("relation and system have different sizes")
    acc = np.ones((sys.n, sys.n), dtype=bool)
    for g in F:
        p = np.array(sys.act(g))
        acc &= U.bits[np.ix_(p, p)]
    return Relation(acc)


def _check_instance(sys: FiniteDynSystem, U: Relation, cap: int) -> None:
    if sys.n > cap:
        raise InstanceTooLarge(f"instance too large: |X| = {sys.n} exceeds cap {cap}")
    if not U.is_reflexive():
        raise InputError("entourages must be reflexive")


def _masks(bits: np.ndarray) -> list[int]:
    return [sum(1 << int(j) for j in np.nonzero(row)[0]) for row in bits]


def sep(sys: FiniteDynSystem, F, U: Relation, cap: int = DEFAULT_CAP) -> int:
    """Maximal size of an (F, U)-separated set (a maximum independent set)."""
    _check_instance(sys, U, cap)
    W = pullback(U, F, sys).bits
    conflict = (W | W.T) & ~np.eye(sys.n, dtype=bool)
    nbr = _masks(conflict)

    @lru_cache(maxsize=None)
    def best(cand: int) -> int:
        if not cand:
            return 0
        v = (cand & -cand).bit_length() - 1
        rest = cand & ~(1 << v)
        if not nbr[v] & cand:
            return 1 + best(rest)
        return max(1 + best(rest & ~nbr[v]), best(rest))

    return best((1 << sys.n) - 1)


def spa(sys: FiniteDynSystem, F, U: Relation, cap: int = DEFAULT_CAP) -> int:
    """Minimal size of an (F, U)-spanning set (a minimum set cover by the rows of U^(F))."""
    _check_instance(sys, U, cap)
    rows = _masks(pullback(U, F, sys).bits)
    n = sys.n
    covering = [[z for z in range(n) if rows[z] >> x & 1] for x in range(n)]

    @lru_cache(maxsize=None)
    def best(uncovered: int) -> int:
        if not uncovered:
            return 0
        # branch on the uncovered point with the fewest candidate spanners
        x = min(
            (i for i in range(n) if uncovered >> i & 1),
            key=lambda i: len(covering[i]),
        )
        return 1 + min(best(uncovered & ~rows[z]) for z in covering[x])

    return best((1 << n) - 1)


def cov(sys: FiniteDynSystem, F, U: Relation, cap: int = DEFAULT_CAP) -> int:
    """Minimal size of an (F, U)-cover: a cover of X by sets that are U^(F)-small."""
    _check_instance(sys, U, cap)
    W = pullback(U, F, sys).bits
    n = sys.n
    adj = _masks(W & W.T & ~np.eye(n, dtype=bool))

    def maximal_cliques(v: int, allowed: int) -> list[int]:
        out = []

        def bk(r: int, p: int, x: int) -> None:
            if not p and not x:
                out.append(r)
                return
            for u in range(n):
                if p >> u & 1:
                    bk(r | 1 << u, p & adj[u], x & adj[u])
                    p &= ~(1 << u)
                    x |= 1 << u

        bk(1 << v, adj[v] & allowed & ~(1 << v), 0)
        return out

    @lru_cache(maxsize=None)
    def best(uncovered: int) -> int:
        if not uncovered:
            return 0
        v = (uncovered & -uncovered).bit_length() - 1
        return 1 + min(best(uncovered & ~c) for c in maximal_cliques(v, uncovered))

    return best((1 << n) - 1)


def class_count(sys: FiniteDynSystem, F, U: Relation) -> int:
    """Fast path for equivalence entourages: the number of classes of U^(F)."""
    return len(equivalence_classes(pullback(U, F, sys)))


@dataclass
class ChainReport:
    """The five quantities of the sep/spa/cov chain and which inequalities hold."""

    values: dict
    inequalities: dict

    @property
    def ok(self) -> bool:
        return all(self.inequalities.values())

    def to_json(self) -> dict:
        return {"values": dict(self.values), "inequalities": dict(self.inequalities), "ok": self.ok}


def check_chain(sys: FiniteDynSystem, F, U: Relation, V: Relation, cap: int = DEFAULT_CAP) -> ChainReport:
    """Evaluate cov(VoV) <= spa(V) <= sep(V) <= spa(U) <= cov(U).

    Requires V symmetric and U o U* contained in V.
    """
    if not V.is_symmetric() or not compose(U, inverse(U)) <= V:
        raise HypothesisError("hypothesis violated: need V symmetric and U o U* inside V")
    F = list(F)
    vals = {
        "cov(VoV)": cov(sys, F, compose(V, V), cap),
        "spa(V)": spa(sys, F, V, cap),
        "sep(V)": sep(sys, F, V, cap),
        "spa(U)": spa(sys, F, U, cap),
        "cov(U)": cov(sys, F, U, cap),
    }
    names = list(vals)
    ineq = {f"{a} <= {b}": vals[a] <= vals[b] for a, b in zip(names, names[1:])}
    return ChainReport(vals, ineq)


def is_expansive(sys: FiniteDynSystem, U0: Relation, horizon: Iterable | None = None) -> bool:
    """True iff the intersection of g^-1 U0 over the horizon is the diagonal.

    The horizon defaults to the whole group (finite kind) or one full period of
    the acting permutation (Z-actions), where the answer is exact.
    """
    horizon = sys.group() if horizon is None else list(horizon)
    return pullback(U0, horizon, sys) == Relation.diagonal(sys.n)


def homoclinic(sys: FiniteDynSystem, x: int, y: int) -> bool:
    """Homoclinicity for the discrete uniform structure on X.

    For a Z-action the orbit pair is periodic, so being eventually in the
    diagonal means lying in it over a full period. For a finite group the
    whole group is a finite exceptional set, so every pair is homoclinic.
    """
    if sys.kind == "finite":
        return True
    return all(sys.act(k)[x] == sys.act(k)[y] for k in range(sys.period))


def is_equivariant(sys: FiniteDynSystem, f: Sequence[int]) -> bool:
    return all(
        f[p[x]] == p[f[x]] for p in sys.generators.values() for x in range(sys.n)
    )


def map_properties(sys: FiniteDynSystem, f: Sequence[int]) -> dict:
    """Injectivity, pre-injectivity and surjectivity of a self-map of X."""
    f = [int(v) for v in f]
    if len(f) != sys.n or any(not 0 <= v < sys.n for v in f):
        raise InputError("map must send range(n) into range(n)")
    pre = all(
        f[x] != f[y]
        for x in range(sys.n)
        for y in range(x + 1, sys.n)
        if homoclinic(sys, x, y)
    )
    return {
        "equivariant": is_equivariant(sys, f),
        "injective": len(set(f)) == sys.n,
        "pre_injective": pre,
        "surjective": set(f) == set(range(sys.n)),
    }


def two_point_counterexample() -> dict:
    """Two fixed points under a trivial Z-action and the map collapsing both to x1.

    The system is expansive (the diagonal is an entourage of the discrete
    structure), homoclinicity classes are singletons, and the map is
    pre-injective without being surjective.
    """
    sys = FiniteDynSystem(2, {"t": (0, 1)}, kind="z")
    props = map_properties(sys, [0, 0])
    props["expansive"] = is_expansive(sys, Relation.diagonal(2))
    props["myhill_fails"] = props["pre_injective"] and not props["surjective"]
    return props


# ---------------------------------------------------------------------------
# randomized sweeps


def random_system(rng: random.Random, n_max: int = 10, finite_every: int = 4, index: int = 0) -> FiniteDynSystem:
    """A random system; every ``finite_every``-th one is a small finite-group action."""
    if finite_every and index % finite_every == finite_every - 1:
        n = rng.randint(2, min(6, n_max))
        gens = {}
        for name in ("s", "t")[: rng.randint(1, 2)]:
            p = list(range(n))
            rng.shuffle(p)
            gens[name] = p
        return FiniteDynSystem(n, gens, kind="finite")
    n = rng.randint(2, n_max)
    p = list(range(n))
    rng.shuffle(p)
    return FiniteDynSystem(n, {"t": p}, kind="z")


def random_entourage(rng: random.Random, n: int, density: float | None = None) -> Relation:
    density = rng.random() * 0.5 if density is None else density
    m = np.eye(n, dtype=bool)
    for x in range(n):
        for y in range(n):
            if rng.random() < density:
                m[x, y] = True
    return Relation(m)


def random_window(rng: random.Random, sys: FiniteDynSystem, size_max: int = 3) -> list:
    k = rng.randint(1, size_max)
    if sys.kind == "z":
        return sorted(set(rng.randint(-3, 3) for _ in range(k)))
    return list({rng.choice(sys.elements) for _ in range(k)})


def chain_sweep(instances: int = 200, seed: int = 7, n_max: int = 10) -> dict:
    """Randomized check of the chain, right invariance, monotonicity and submultiplicativity."""
    rng = random.Random(seed)
    violations = {"chain": [], "right_invariance": [], "monotonicity": [], "submultiplicativity": []}
    for i in range(instances):
        sys = random_system(rng, n_max=n_max, index=i)
        U = random_entourage(rng, sys.n)
        extra = random_entourage(rng, sys.n, density=rng.random() * 0.3)
        V = compose(U, inverse(U)) | extra | inverse(extra)
        F = random_window(rng, sys)
        rep = check_chain(sys, F, U, V)
        if not rep.ok:
            violations["chain"].append({"instance": i, **rep.to_json()})

        g = rng.randint(-5, 5) if sys.kind == "z" else rng.choice(sys.elements)
        Fg = [sys.mul(f, g) for f in F]
        for q in (sep, spa, cov):
            if q(sys, Fg, U) != q(sys, F, U):
                violations["right_invariance"].append({"instance": i, "quantity": q.__name__})

        bigger = U | random_entourage(rng, sys.n)
        for q in (sep, spa, cov):
            if q(sys, F, bigger) > q(sys, F, U):
                violations["monotonicity"].append({"instance": i, "quantity": q.__name__})

        E = random_window(rng, sys)
        union = list(dict.fromkeys(list(E) + list(F)))
        if cov(sys, union, U) > cov(sys, E, U) * cov(sys, F, U):
            violations["submultiplicativity"].append({"instance": i})
    return {
        "instances": instances,
        "seed": seed,
        "violations": {k: len(v) for k, v in violations.items()},
        "details": violations,
    }


def equivalence_sweep(instances: int = 50, seed: int = 11, n_max: int = 10) -> dict:
    """For equivalence entourages, sep = spa = cov = number of classes of U^(F)."""
    rng = random.Random(seed)
    mismatches = []
    for i in range(instances):
        sys = random_system(rng, n_max=n_max, index=i)
        k = rng.randint(1, sys.n)
        U = Relation.from_partition([rng.randrange(k) for _ in range(sys.n)])
        F = random_window(rng, sys)
        values = (sep(sys, F, U), spa(sys, F, U), cov(sys, F, U), class_count(sys, F, U))
        if len(set(values)) != 1:
            mismatches.append({"instance": i, "values": values})
    return {"instances": instances, "seed": seed, "mismatches": mismatches}

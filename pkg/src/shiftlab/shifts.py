"""Shift spaces over Z and Z^2.

One-dimensional shifts are presented either by forbidden words (an SFT,
recoded to its higher block graph) or by a labeled graph (a sofic shift). Both
are trimmed to their essential part and determinized, so language questions
become questions about a DFA whose accepted words are exactly L(X).

Two-dimensional shifts are SFTs whose forbidden patterns span at most two
rows; they support box counting through row transfer matrices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import lattice
from .automata import DEAD, DFA, LabeledGraph, perron_root, shortest_missing
from .errors import InputError, InstanceTooLarge
from .lattice import FiniteShape, PointLike, as_point

WILDCARD = "."
ENUMERATION_CAP = 100_000
ROW_CAP = 4096
BLOCK_STATE_CAP = 200_000


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __init__(self, symbols: Iterable[str]):
        syms = tuple(str(s) for s in symbols)
        if not syms:
            raise InputError("alphabet must be nonempty")
        if len(set(syms)) != len(syms):
            raise InputError(f"alphabet symbols must be distinct: {syms}")
        if WILDCARD in syms or any(not s or " " in s or "/" in s for s in syms):
            raise InputError(f"invalid alphabet symbol in {syms}")
        object.__setattr__(self, "symbols", syms)

    def __len__(self) -> int:
        return len(self.symbols)

    @cached_property
    def _index(self) -> dict:
        return {s: i for i, s in enumerate(self.symbols)}

    @property
    def compact(self) -> bool:
        """True when every symbol is one character, so words can be written without spaces."""
        return all(len(s) == 1 for s in self.symbols)

    def index(self, sym: str) -> int:
        try:
            return self._index[str(sym)]
        except KeyError:
            raise InputError(f"symbol {sym!r} not in alphabet {self.symbols}") from None

    def encode(self, word: Sequence[str]) -> tuple[int, ...]:
        return tuple(self.index(s) for s in word)

    def decode(self, word: Sequence[int]) -> tuple[str, ...]:
        return tuple(self.symbols[c] for c in word)

    def split(self, text: str) -> list[str]:
        """Tokenize a written word; ``.`` is a hole."""
        text = text.strip()
        if " " in text or not self.compact:
            return text.split()
        return list(text)

    def join(self, word: Sequence[str]) -> str:
        return ("" if self.compact else " ").join(word)


@dataclass(frozen=True)
class Pattern:
    """Symbols assigned to the points of a finite shape."""

    shape: FiniteShape
    values: tuple

    def __init__(self, shape: FiniteShape, values: Sequence[str]):
        values = tuple(str(v) for v in values)
        if len(values) != len(shape):
            raise InputError("pattern needs one symbol per shape point")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_dict(cls, d: Mapping, dim: int | None = None) -> "Pattern":
        items = sorted((as_point(p), str(v)) for p, v in d.items())
        shape = FiniteShape((p for p, _ in items), dim=dim if dim is not None else (len(items[0][0]) if items else 1))
        return cls(shape, [v for _, v in items])

    @classmethod
    def word(cls, symbols: Sequence[str], start: int = 0) -> "Pattern":
        """A 1D pattern from a token sequence placed at ``start``; ``.`` marks holes."""
        return cls.from_dict({start + i: s for i, s in enumerate(symbols) if s != WILDCARD}, dim=1)

    @classmethod
    def rows(cls, rows: Sequence[Sequence[str]]) -> "Pattern":
        """A 2D pattern; ``rows[y][x]`` is the symbol at (x, y); ``.`` marks holes."""
        return cls.from_dict(
            {(x, y): s for y, row in enumerate(rows) for x, s in enumerate(row) if s != WILDCARD}, dim=2
        )

    @cached_property
    def mapping(self) -> dict:
        return dict(zip(self.shape.points, self.values))

    def __getitem__(self, p: PointLike) -> str:
        return self.mapping[as_point(p, self.shape.dim)]

    def __len__(self) -> int:
        return len(self.values)

    def translate(self, g: PointLike) -> "Pattern":
        return Pattern(lattice.translate(self.shape, g), self.values)

    def restrict(self, shape: FiniteShape) -> "Pattern":
        m = self.mapping
        return Pattern.from_dict({p: m[p] for p in shape.points}, dim=shape.dim)

    def normalized(self) -> "Pattern":
        """Translate so the lower corner of the hull is the origin."""
        lo, _ = self.shape.bounds()
        return self.translate(lattice.neg(lo))

    def to_json(self) -> dict:
        return {"shape": self.shape.to_json(), "values": list(self.values)}

    def __repr__(self) -> str:
        return f"Pattern({dict(zip(self.shape.to_json() if self.shape.dim == 1 else map(tuple, self.shape.to_json()), self.values))})"


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class PointedConfiguration:
    """A periodic configuration, optionally modified on a finite patch.

    The base is x(p) = cell[p mod period] (componentwise). ``patch`` holds the
    points where x differs from its base, sorted.
    """

    dim: int
    period: tuple
    cell: tuple  # values on product(range(p_0), ..., range(p_{d-1}))
    patch: tuple = ()

    @classmethod
    def periodic(cls, cell, dim: int = 1) -> "PointedConfiguration":
        """1D: ``cell`` is the repeating word. 2D: ``cell[y][x]`` rows of the repeating block."""
        if dim == 1:
            cell = tuple(str(s) for s in cell)
            if not cell:
                raise InputError("period must be at least 1")
            return cls(1, (len(cell),), cell)
        rows = [tuple(str(s) for s in r) for r in cell]
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise InputError("2D cell must be a nonempty rectangle")
        px, py = len(rows[0]), len(rows)
        return cls(2, (px, py), tuple(rows[y][x] for x in range(px) for y in range(py)))

    def base(self, p: PointLike) -> str:
        p = as_point(p, self.dim)
        if self.dim == 1:
            return self.cell[p[0] % self.period[0]]
        px, py = self.period
        return self.cell[(p[0] % px) * py + (p[1] % py)]

    def __getitem__(self, p: PointLike) -> str:
        p = as_point(p, self.dim)
        return self._patch.get(p, self.base(p))

    @cached_property
    def _patch(self) -> dict:
        return dict(self.patch)

    def with_patch(self, changes: Mapping) -> "PointedConfiguration":
        merged = dict(self._patch)
        for p, v in changes.items():
            merged[as_point(p, self.dim)] = str(v)
        patch = tuple(sorted((p, v) for p, v in merged.items() if v != self.base(p)))
        return PointedConfiguration(self.dim, self.period, self.cell, patch)

    def support(self) -> FiniteShape:
        return FiniteShape((p for p, _ in self.patch), dim=self.dim)

    def base_config(self) -> "PointedConfiguration":
        return PointedConfiguration(self.dim, self.period, self.cell)

    def window(self, lo: int, hi: int) -> tuple[str, ...]:
        """1D values on positions lo, ..., hi - 1."""
        return tuple(self[t] for t in range(lo, hi))

    def to_eventually_periodic(self) -> "EventuallyPeriodic":
        if self.dim != 1:
            raise InputError("only 1D configurations have an eventually periodic form")
        p = self.period[0]
        if self.patch:
            lo = (self.patch[0][0][0] // p) * p
            hi = -((-(self.patch[-1][0][0] + 1)) // p) * p
        else:
            lo = hi = 0
        return EventuallyPeriodic(self.cell, self.window(lo, hi), self.cell, lo)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "period": list(self.period),
            "cell": list(self.cell),
            "patch": [[list(p) if self.dim == 2 else p[0], v] for p, v in self.patch],
        }


@dataclass(frozen=True)
class EventuallyPeriodic:
    """A 1D configuration periodic to the left and to the right of a finite middle word.

    x(t) = middle[t - start] on the middle, left[(t - start) mod |left|] to the
    left of it and right[(t - end) mod |right|] to the right, where end is
    start + |middle|.
    """

    left: tuple
    middle: tuple
    right: tuple
    start: int = 0

    dim = 1

    def __post_init__(self):
        if not self.left or not self.right:
            raise InputError("periodic tails must be nonempty")

    @property
    def end(self) -> int:
        return self.start + len(self.middle)

    def __getitem__(self, t) -> str:
        (t,) = as_point(t, 1)
        if t < self.start:
            return self.left[(t - self.start) % len(self.left)]
        if t >= self.end:
            return self.right[(t - self.end) % len(self.right)]
        return self.middle[t - self.start]

    def window(self, lo: int, hi: int) -> tuple[str, ...]:
        return tuple(self[t] for t in range(lo, hi))

    def to_json(self) -> dict:
        return {"left": list(self.left), "middle": list(self.middle), "right": list(self.right), "start": self.start}


def _as_ep(x) -> EventuallyPeriodic:
    return x if isinstance(x, EventuallyPeriodic) else x.to_eventually_periodic()


# ---------------------------------------------------------------------------
# presentations


class ShiftPresentation:
    """A nonempty shift space X, as an SFT (d = 1, 2) or a sofic labeled graph (d = 1)."""

    def __init__(self, alphabet: Alphabet, dim: int, kind: str, forbidden: Sequence[Pattern] = (),
                 graph: LabeledGraph | None = None, name: str | None = None):
        self.alphabet = alphabet
        self.dim = dim
        self.kind = kind
        self.forbidden = tuple(forbidden)
        self.name = name
        if dim not in (1, 2):
            raise InputError("only Z and Z^2 are supported")
        if kind == "sofic" and dim != 1:
            raise InputError("sofic presentations are one-dimensional")
        for p in self.forbidden:
            if p.shape.dim != dim:
                raise InputError("forbidden pattern has the wrong dimension")
            for v in p.values:
                alphabet.index(v)
        if dim == 1:
            if graph is None:
                graph = self._block_graph()
            graph, _ = graph.essential()
            if graph.n == 0:
                raise InputError(f"the presented shift {name or ''} is empty".replace("  ", " "))
            self.graph = graph
        else:
            self.graph = None
            if max((len(set(q[1] for q in p.shape.points)) for p in self.forbidden), default=1) > 2 or any(
                p.normalized().shape.bounds()[1][1] > 1 for p in self.forbidden
            ):
                raise InputError("2D forbidden patterns may span at most two rows")
            self._certify_nonempty_2d()

    # -- constructors

    @classmethod
    def sft(cls, alphabet, forbidden: Iterable = (), dim: int = 1, name: str | None = None) -> "ShiftPresentation":
        """An SFT. Forbidden entries are Patterns or written words (2D rows separated by ``/``)."""
        alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        pats = []
        for f in forbidden:
            if isinstance(f, Pattern):
                pats.append(f)
            elif dim == 1:
                pats.append(Pattern.word(alphabet.split(f)))
            else:
                pats.append(Pattern.rows([alphabet.split(r) for r in f.split("/")]))
        if any(len(p) == 0 for p in pats):
            raise InputError("forbidden patterns must be nonempty")
        return cls(alphabet, dim, "sft", pats, name=name)

    @classmethod
    def sofic(cls, alphabet, vertices: Sequence[str], edges: Iterable[tuple[str, str, str]],
              name: str | None = None) -> "ShiftPresentation":
        alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        vid = {v: i for i, v in enumerate(vertices)}
        if len(vid) != len(vertices):
            raise InputError("duplicate vertex names")
        es = []
        for a, b, lab in edges:
            if a not in vid or b not in vid:
                raise InputError(f"edge {a}->{b} uses an undeclared vertex")
            es.append((vid[a], vid[b], alphabet.index(lab)))
        return cls(alphabet, 1, "sofic", graph=LabeledGraph(len(vid), es), name=name)

    @classmethod
    def from_graph(cls, alphabet: Alphabet, graph: LabeledGraph, name: str | None = None) -> "ShiftPresentation":
        return cls(alphabet, 1, "sofic", graph=graph, name=name)

    @classmethod
    def full(cls, alphabet, dim: int = 1, name: str | None = None) -> "ShiftPresentation":
        return cls.sft(alphabet, (), dim=dim, name=name)

    # -- 1D machinery

    @property
    def window_length(self) -> int:
        """Length of the longest forbidden pattern's hull (d = 1 SFTs)."""
        return max((len(p.shape.hull()) for p in self.forbidden), default=1)

    @property
    def block_length(self) -> int:
        """Memory m of the higher block recoding: vertices are the allowed m-words."""
        return max(self.window_length - 1, 1)

    @cached_property
    def forbidden_words(self) -> frozenset:
        """Forbidden patterns expanded to concrete encoded words (holes filled every way)."""
        out = set()
        k = len(self.alphabet)
        for p in self.forbidden:
            q = p.normalized()
            hull = len(q.shape.hull())
            fixed = {pt[0]: self.alphabet.index(v) for pt, v in q.mapping.items()}
            holes = [i for i in range(hull) if i not in fixed]
            for fill in product(range(k), repeat=len(holes)):
                w = dict(fixed)
                w.update(zip(holes, fill))
                out.add(tuple(w[i] for i in range(hull)))
        return frozenset(out)

    def _clean(self, word: tuple, suffix_only: bool = False) -> bool:
        lengths = {len(f) for f in self.forbidden_words}
        n = len(word)
        for L in lengths:
            starts = [n - L] if suffix_only else range(n - L + 1)
            for i in starts:
                if i >= 0 and word[i:i + L] in self.forbidden_words:
                    return False
        return True

    def _block_graph(self) -> LabeledGraph:
        m = self.block_length
        k = len(self.alphabet)
        if k ** m > BLOCK_STATE_CAP:
            raise InstanceTooLarge(f"higher block recoding needs {k ** m} states")
        states = [w for w in product(range(k), repeat=m) if self._clean(w)]
        idx = {w: i for i, w in enumerate(states)}
        edges = []
        for w in states:
            for a in range(k):
                ext = w + (a,)
                if self._clean(ext, suffix_only=True):
                    # every factor not ending at the new symbol lies inside w
                    edges.append((idx[w], idx[ext[1:]], a))
        return LabeledGraph(len(states), edges)

    @cached_property
    def dfa(self) -> DFA:
        self._need_1d()
        return DFA.from_graph(self.graph, len(self.alphabet))

    def _need_1d(self) -> None:
        if self.dim != 1:
            raise InputError("operation needs a one-dimensional shift")

    def encode(self, word: Sequence[str]) -> tuple[int, ...]:
        return self.alphabet.encode(word)

    def decode(self, word: Sequence[int]) -> tuple[str, ...]:
        return self.alphabet.decode(word)

    def accepts(self, word: Sequence[str] | str) -> bool:
        """Is the written word in the language L(X)?"""
        if isinstance(word, str):
            word = self.alphabet.split(word)
        return self.dfa.accepts(self.encode(word))

    def missing_from(self, other: "ShiftPresentation") -> tuple[str, ...] | None:
        """Shortest word of ``other`` that is not a word of self (None when other is inside self)."""
        self._same_alphabet(other)
        w = shortest_missing(self.dfa, other.dfa)
        return None if w is None else self.decode(w)

    def contains_shift(self, other: "ShiftPresentation") -> bool:
        return self.missing_from(other) is None

    def same_shift(self, other: "ShiftPresentation") -> bool:
        return self.contains_shift(other) and other.contains_shift(self)

    def _same_alphabet(self, other: "ShiftPresentation") -> None:
        if self.alphabet != other.alphabet or self.dim != other.dim:
            raise InputError("shifts over different alphabets or dimensions")

    def contains(self, x) -> bool:
        """Membership of a pointed (or eventually periodic) configuration."""
        if self.dim == 2:
            return self._contains_2d(x)
        ep = _as_ep(x)
        g = self.graph
        past = g.infinite_past(self.encode(ep.left))
        mid = g.read(past, self.encode(ep.middle))
        return bool(mid & g.infinite_future(self.encode(ep.right)))

    def check(self, x) -> None:
        if not self.contains(x):
            raise InputError(f"configuration is not a point of {self.name or 'the shift'}")

    # -- 2D machinery

    @cached_property
    def safe_symbol(self) -> str | None:
        """A symbol occurring in no forbidden pattern (2D), if any.

        Locally admissible box patterns padded with it extend to points, so
        box counts are then counts of globally admissible patterns.
        """
        used = {v for p in self.forbidden for v in p.values}
        for s in self.alphabet.symbols:
            if s not in used:
                return s
        return None

    def _certify_nonempty_2d(self) -> None:
        if self.safe_symbol is not None:
            return
        syms = self.alphabet.symbols
        for px, py in ((1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3), (3, 2), (3, 3)):
            if len(syms) ** (px * py) > 50_000:
                break
            for vals in product(syms, repeat=px * py):
                cfg = PointedConfiguration(2, (px, py), vals)
                if self._contains_2d(cfg):
                    return
        raise InputError("could not certify that the 2D shift is nonempty (no small periodic point)")

    def _contains_2d(self, x: PointedConfiguration) -> bool:
        px, py = x.period
        anchors = set(product(range(px), range(py)))
        for (pt, _) in x.patch:
            for p in self.forbidden:
                q = p.normalized()
                for c in q.shape.points:
                    anchors.add((pt[0] - c[0], pt[1] - c[1]))
        for p in self.forbidden:
            q = p.normalized()
            for a in anchors:
                if all(x[(a[0] + c[0], a[1] + c[1])] == v for c, v in q.mapping.items()):
                    return False
        return True

    def transfer(self, width: int, row_cap: int = ROW_CAP) -> "RowTransfer":
        if self.dim != 2:
            raise InputError("row transfer matrices are for 2D shifts")
        cache = self.__dict__.setdefault("_transfer_cache", {})
        if width not in cache:
            cache[width] = RowTransfer(self, width, row_cap)
        return cache[width]

    def __repr__(self) -> str:
        return f"ShiftPresentation({self.name or self.kind}, dim={self.dim}, alphabet={self.alphabet.symbols})"


class RowTransfer:
    """Locally admissible rows of a given width and which rows may sit on top of which."""

    def __init__(self, X: ShiftPresentation, width: int, row_cap: int = ROW_CAP):
        k = len(X.alphabet)
        if width < 1:
            raise InputError("strip width must be positive")
        if k ** width > 1 << 22:
            raise InstanceTooLarge(f"{k}^{width} candidate rows")
        rows = np.array(list(product(range(k), repeat=width)), dtype=np.int8).reshape(-1, width)
        keep = np.ones(len(rows), dtype=bool)
        two_row = []
        for p in X.forbidden:
            q = p.normalized()
            cells = [(c[0], c[1], X.alphabet.index(v)) for c, v in q.mapping.items()]
            span = max(c[0] for c in cells) + 1
            if span > width:
                continue
            if all(c[1] == 0 for c in cells):
                for o in range(width - span + 1):
                    hit = np.ones(len(rows), dtype=bool)
                    for dx, _, s in cells:
                        hit &= rows[:, o + dx] == s
                    keep &= ~hit
            else:
                two_row.append((cells, span))
        rows = rows[keep]
        if len(rows) > row_cap:
            raise InstanceTooLarge(f"{len(rows)} admissible rows exceed the cap {row_cap}")
        compat = np.ones((len(rows), len(rows)), dtype=bool)
        for cells, span in two_row:
            for o in range(width - span + 1):
                lower = np.ones(len(rows), dtype=bool)
                upper = np.ones(len(rows), dtype=bool)
                for dx, dy, s in cells:
                    if dy == 0:
                        lower &= rows[:, o + dx] == s
                    else:
                        upper &= rows[:, o + dx] == s
                compat &= ~np.outer(lower, upper)
        self.width = width
        self.rows = rows
        self.compat = compat
        self._pred = [np.nonzero(compat[:, j])[0].tolist() for j in range(len(rows))]

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def count(self, height: int) -> int:
        """Exact number of locally admissible width x height patterns."""
        if height == 0:
            return 1
        vec = [1] * self.nrows
        for _ in range(height - 1):
            vec = [sum(vec[i] for i in pred) for pred in self._pred]
        return sum(vec)

    @cached_property
    def perron(self):
        return perron_root(self.compat.astype(float))


# ---------------------------------------------------------------------------
# operations


def shift_apply(g: PointLike, x):
    """The configuration gx with gx(h) = x(h - g)."""
    g = as_point(g, x.dim)
    if isinstance(x, EventuallyPeriodic):
        return EventuallyPeriodic(x.left, x.middle, x.right, x.start + g[0])
    if x.dim == 1:
        p = x.period[0]
        cell = tuple(x.base(t - g[0]) for t in range(p))
    else:
        px, py = x.period
        cell = tuple(x.base((i - g[0], j - g[1])) for i in range(px) for j in range(py))
    patch = tuple(sorted((lattice.add(q, g), v) for q, v in x.patch))
    return PointedConfiguration(x.dim, x.period, cell, patch)


def _interval_hull(shape: FiniteShape) -> tuple[int, int]:
    (lo,), (hi,) = shape.bounds()
    return lo, hi


def count_language(X: ShiftPresentation, shape: FiniteShape) -> int:
    """|pi_shape(X)|, the number of restrictions of points of X to ``shape``."""
    if shape.dim != X.dim:
        raise InputError("shape and shift have different dimensions")
    if len(shape) == 0:
        return 1
    if X.dim == 2:
        if not shape.is_box():
            raise InputError("2D counting needs a box shape")
        (x0, y0), (x1, y1) = shape.bounds()
        return X.transfer(x1 - x0 + 1).count(y1 - y0 + 1)
    lo, hi = _interval_hull(shape)
    if len(shape) == hi - lo + 1:
        return X.dfa.count(hi - lo + 1)
    # distinct projections: determinize over the symbols kept by the shape
    dfa = X.dfa
    layer = {frozenset([dfa.start]): 1}
    for t in range(lo, hi + 1):
        nxt: dict[frozenset, int] = {}
        if (t,) in shape:
            for S, k in layer.items():
                for c in range(dfa.nsym):
                    T = frozenset(dfa.delta[q][c] for q in S) - {DEAD}
                    if T:
                        nxt[T] = nxt.get(T, 0) + k
        else:
            for S, k in layer.items():
                T = frozenset(q2 for q in S for q2 in dfa.delta[q]) - {DEAD}
                if T:
                    nxt[T] = nxt.get(T, 0) + k
        layer = nxt
    return sum(layer.values())


def language(X: ShiftPresentation, shape: FiniteShape, cap: int = ENUMERATION_CAP) -> set[Pattern]:
    """pi_shape(X) as a set of patterns (enumeration refused beyond ``cap``)."""
    if shape.dim != X.dim:
        raise InputError("shape and shift have different dimensions")
    if X.dim == 2:
        return _language_2d(X, shape, cap)
    if len(shape) == 0:
        return {Pattern(shape, ())}
    lo, hi = _interval_hull(shape)
    dfa = X.dfa
    out: set[Pattern] = set()
    stack = [(lo, frozenset([dfa.start]), ())]
    while stack:
        t, S, vals = stack.pop()
        if t > hi:
            out.add(Pattern(shape, X.decode(vals)))
            if len(out) > cap:
                raise InstanceTooLarge(f"more than {cap} patterns")
            continue
        if (t,) in shape:
            for c in range(dfa.nsym):
                T = frozenset(dfa.delta[q][c] for q in S) - {DEAD}
                if T:
                    stack.append((t + 1, T, vals + (c,)))
        else:
            T = frozenset(q2 for q in S for q2 in dfa.delta[q]) - {DEAD}
            if T:
                stack.append((t + 1, T, vals))
    return out


def _language_2d(X: ShiftPresentation, shape: FiniteShape, cap: int) -> set[Pattern]:
    if not shape.is_box():
        raise InputError("2D enumeration needs a box shape")
    (x0, y0), (x1, y1) = shape.bounds()
    tr = X.transfer(x1 - x0 + 1)
    height = y1 - y0 + 1
    if tr.count(height) > cap:
        raise InstanceTooLarge(f"more than {cap} patterns")
    succ = [np.nonzero(tr.compat[i])[0].tolist() for i in range(tr.nrows)]
    out = set()
    stack = [(i,) for i in range(tr.nrows)]
    while stack:
        seq = stack.pop()
        if len(seq) == height:
            d = {}
            for dy, r in enumerate(seq):
                for dx, s in enumerate(tr.rows[r]):
                    d[(x0 + dx, y0 + dy)] = X.alphabet.symbols[s]
            out.add(Pattern.from_dict(d, dim=2))
            continue
        for j in succ[seq[-1]]:
            stack.append(seq + (j,))
    return out


def cylinder_entourage_classes(X: ShiftPresentation, omega: FiniteShape, F: FiniteShape) -> int:
    """Number of classes of W(omega)^(F) on X, i.e. |pi_{-F + omega}(X)|."""
    if len(omega) == 0 or len(F) == 0:
        raise InputError("omega and F must be nonempty")
    return count_language(X, lattice.shape_product(F.reflect(), omega))


def homoclinic(x, y) -> tuple[bool, FiniteShape | None]:
    """Whether x and y differ at finitely many sites, and that finite set."""
    if x.dim != y.dim:
        raise InputError("configurations of different dimensions")
    if x.dim == 2:
        L = tuple(lcm(a, b) for a, b in zip(x.period, y.period))
        if any(x.base(p) != y.base(p) for p in product(range(L[0]), range(L[1]))):
            return False, None
        pts = {p for p, _ in x.patch} | {p for p, _ in y.patch}
        return True, FiniteShape((p for p in pts if x[p] != y[p]), dim=2)
    ex, ey = _as_ep(x), _as_ep(y)
    lo, hi = min(ex.start, ey.start), max(ex.end, ey.end)
    Ll = lcm(len(ex.left), len(ey.left))
    Lr = lcm(len(ex.right), len(ey.right))
    if ex.window(lo - Ll, lo) != ey.window(lo - Ll, lo) or ex.window(hi, hi + Lr) != ey.window(hi, hi + Lr):
        return False, None
    return True, FiniteShape(((t,) for t in range(lo, hi) if ex[t] != ey[t]), dim=1)


def find_extension(X: ShiftPresentation, constraints: Mapping[int, str]) -> tuple[int, tuple[str, ...]] | None:
    """A word of L(X) on the hull of the constrained sites matching them, or None.

    Returns (start, word).
    """
    X._need_1d()
    if not constraints:
        return 0, ()
    cons = {as_point(t, 1)[0]: X.alphabet.index(v) for t, v in constraints.items()}
    lo, hi = min(cons), max(cons)
    dfa = X.dfa
    layers = [{dfa.start: None}]
    for t in range(lo, hi + 1):
        nxt = {}
        syms = [cons[t]] if t in cons else range(dfa.nsym)
        for q in layers[-1]:
            for c in syms:
                r = dfa.delta[q][c]
                if r != DEAD and r not in nxt:
                    nxt[r] = (q, c)
        if not nxt:
            return None
        layers.append(nxt)
    q = min(layers[-1])
    word = []
    for layer in reversed(layers[1:]):
        q, c = layer[q]
        word.append(c)
    return lo, X.decode(reversed(word))


def _merge(patterns: Iterable[Pattern]) -> dict | None:
    out: dict = {}
    for p in patterns:
        for pt, v in p.mapping.items():
            if out.setdefault(pt[0], v) != v:
                return None
    return out


def extendable(X: ShiftPresentation, patterns: Iterable[Pattern]) -> bool:
    merged = _merge(patterns)
    return merged is not None and find_extension(X, merged) is not None


def joinable(X: ShiftPresentation, p: Pattern, q: Pattern) -> bool:
    """Is there a point of X restricting to p on shape(p) and to q on shape(q)?"""
    X._need_1d()
    if not p.shape.isdisjoint(q.shape):
        raise InputError("joinable needs patterns on disjoint shapes")
    return extendable(X, [p, q])


@dataclass(frozen=True)
class ExpansivenessEntourage:
    """The cylinder entourage W(window) = {(x, y) : x and y agree on window}."""

    window: FiniteShape

    def separate(self, x, y, horizon: Iterable[PointLike] | None = None):
        """A group element g with (gx, gy) outside the entourage, or None.

        With window {0} this means x(-g) != y(-g). Candidates are the patch
        sites plus one common period of the periodic parts, scanned nearest to
        the origin first.
        """
        d = x.dim
        if d == 1:
            ex, ey = _as_ep(x), _as_ep(y)
            lo, hi = min(ex.start, ey.start), max(ex.end, ey.end)
            Ll = lcm(len(ex.left), len(ey.left))
            Lr = lcm(len(ex.right), len(ey.right))
            sites = [(t,) for t in range(lo - Ll, hi + Lr)]
        else:
            L = [lcm(a, b) for a, b in zip(x.period, y.period)]
            sites = list(product(range(L[0]), range(L[1]))) + [p for p, _ in x.patch] + [p for p, _ in y.patch]
        allowed = None if horizon is None else {as_point(g, d) for g in horizon}
        cands = set()
        for s in sites:
            for w in self.window.points:
                g = tuple(wi - si for wi, si in zip(w, s))
                if allowed is None or g in allowed:
                    cands.add(g)
        for g in sorted(cands, key=lambda g: (sum(abs(c) for c in g), g)):
            gx, gy = shift_apply(g, x), shift_apply(g, y)
            if any(gx[w] != gy[w] for w in self.window.points):
                return g if d == 2 else g[0]
        return None

    def to_json(self) -> dict:
        return {"kind": "W(Omega)", "window": self.window.to_json()}


def expansiveness_entourage(X: ShiftPresentation) -> ExpansivenessEntourage:
    return ExpansivenessEntourage(FiniteShape([(0,) * X.dim], dim=X.dim))

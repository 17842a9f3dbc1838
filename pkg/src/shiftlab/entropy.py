"""Topological entropy of shift spaces.

For a subshift the cylinder entourage W(Omega) is an equivalence relation, so
the separated, spanning and cover numbers at a box F all equal the number of
patterns on -F + Omega. Entropy is the growth rate of those counts; in one
dimension it is also the log of a Perron root, and in two dimensions it is
bracketed by strip transfer matrices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .automata import perron_root
from .errors import HypothesisError, InputError, TheoremViolation
from .irreducibility import specification_subset, strong_irreducibility
from .lattice import FiniteShape, FolnerBoxSequence
from .relations import FiniteDynSystem, Relation
from .shifts import ShiftPresentation, count_language, cylinder_entourage_classes

CROSSCHECK_N = 32
CROSSCHECK_TOL = 0.05
STRICT_MARGIN = 1e-9


@dataclass
class EntropyReport:
    """An entropy value (nats) or an interval, with the counting trace behind it.

    ``trace`` holds (n, count, log count / |box(n)|) triples.
    """

    method: str  # perron | pattern_limit | strip_bounds
    value: float | None = None
    interval: tuple[float, float] | None = None
    trace: list = field(default_factory=list)
    net: FolnerBoxSequence | None = None
    extra: dict = field(default_factory=dict)

    @property
    def lo(self) -> float:
        return self.value if self.interval is None else self.interval[0]

    @property
    def hi(self) -> float:
        return self.value if self.interval is None else self.interval[1]

    def to_json(self) -> dict:
        out: dict = {"method": self.method}
        if self.value is not None:
            out["value"] = self.value
            out["value_log2"] = self.value / math.log(2)
        if self.interval is not None:
            out["interval"] = list(self.interval)
            out["width"] = self.interval[1] - self.interval[0]
        out["trace"] = [{"n": n, "count": str(c), "rate": r} for n, c, r in self.trace]
        if self.net is not None:
            out["net"] = self.net.to_json()
        out.update(self.extra)
        return out


def _rate(count: int, size: int) -> float:
    return math.log(count) / size


def entropy_exact(X: ShiftPresentation, check_n: int = CROSSCHECK_N) -> EntropyReport:
    """log of the Perron root of a right-resolving presentation of X (d = 1).

    The result is compared with log N(check_n) / check_n; the comparison is
    reported rather than enforced, since shifts whose word counts grow
    polynomially converge to their entropy only like log(n) / n.
    """
    if X.dim != 1:
        raise InputError("exact entropy is available for one-dimensional shifts")
    # the higher block graph of an SFT is right-resolving; sofic graphs need the DFA
    m = X.graph.adjacency() if X.kind == "sft" else X.dfa.matrix()
    root = perron_root(m)
    value = math.log(root.value) if root.value > 0 else float("-inf")
    n_count = X.dfa.count(check_n)
    rate = _rate(n_count, check_n)
    diff = rate - value
    return EntropyReport(
        "perron", value=value, trace=[(check_n, n_count, rate)],
        extra={"crosscheck": {"n": check_n, "rate": rate, "difference": diff,
                              "within_tolerance": abs(diff) <= CROSSCHECK_TOL},
               "perron": {"root": root.value, "lo": root.lo, "hi": root.hi, "iterations": root.iterations}},
    )


def entropy_pattern_limit(X: ShiftPresentation, net: FolnerBoxSequence) -> EntropyReport:
    """Trace of log N(box(n)) / n^d along a box sequence, with an enclosing interval.

    Box counts are submultiplicative, so every trace entry is an upper bound
    and the minimum is reported. The lower end is the exact value for d = 1
    and the strip lower bound for d = 2.
    """
    if net.dim != X.dim:
        raise InputError("net and shift have different dimensions")
    trace = []
    for n in net.sizes:
        c = count_language(X, net.box(n))
        trace.append((n, c, _rate(c, n ** X.dim)))
    hi = min(r for _, _, r in trace)
    if X.dim == 1:
        ex = entropy_exact(X)
        lo = math.log(ex.extra["perron"]["lo"]) if ex.extra["perron"]["lo"] > 0 else 0.0
        return EntropyReport("pattern_limit", interval=(min(lo, hi), hi), trace=trace, net=net)
    strips = strip_bounds(X, net.sizes)
    lo = strips.interval[0]
    hi = min(hi, strips.interval[1])
    return EntropyReport("pattern_limit", interval=(lo, hi), trace=trace, net=net,
                         extra={"strips": strips.extra["strips"]})


def strip_bounds(X: ShiftPresentation, widths: Sequence[int]) -> EntropyReport:
    """Entropy bounds for a 2D SFT from strip transfer matrices.

    With rho_W the Perron root of the width-W row transfer matrix, locally
    admissible W x H patterns number about rho_W^H, so log(rho_W) / W is an
    upper bound. When some symbol occurs in no forbidden pattern, strips of
    width W separated by k - 1 columns of that symbol (k the widest forbidden
    pattern) glue freely, so log(rho_W) / (W + k - 1) is a lower bound.
    """
    if X.dim != 2:
        raise InputError("strip bounds are for 2D shifts")
    k = max((p.normalized().shape.bounds()[1][0] + 1 for p in X.forbidden), default=1)
    rows = []
    for W in widths:
        tr = X.transfer(W)
        rho = tr.perron.value
        logr = math.log(rho) if rho > 0 else float("-inf")
        upper = logr / W
        lower = logr / (W + k - 1) if X.safe_symbol is not None else None
        rows.append({"width": W, "rows": tr.nrows, "log_rho": logr, "upper": upper, "lower": lower})
    lows = [r["lower"] for r in rows if r["lower"] is not None]
    lo = max(lows) if lows else 0.0
    hi = min(r["upper"] for r in rows)
    return EntropyReport("strip_bounds", interval=(lo, hi),
                         trace=[(r["width"], r["rows"], r["upper"]) for r in rows],
                         extra={"strips": rows, "separator_width": k - 1, "safe_symbol": X.safe_symbol})


@dataclass
class QuantitiesRow:
    n: int
    sep: int
    spa: int
    cov: int

    def rates(self) -> tuple[float, float, float]:
        return tuple(_rate(v, self.n) for v in (self.sep, self.spa, self.cov))


def entropy_quantities(X: ShiftPresentation, omega: FiniteShape, net: FolnerBoxSequence) -> dict:
    """sep, spa and cov of W(omega) on box(n) for each n in the net, with their rates.

    W(omega) is an equivalence entourage, so a set of class representatives
    is simultaneously maximal separated, minimal spanning and a minimal cover:
    all three equal the class count at every n.
    """
    if X.dim != 1 or net.dim != 1:
        raise InputError("entropy_quantities is for one-dimensional shifts")
    rows = []
    for n in net.sizes:
        k = cylinder_entourage_classes(X, omega, net.box(n))
        rows.append(QuantitiesRow(n, k, k, k))
    table = [{"n": r.n, "sep": r.sep, "spa": r.spa, "cov": r.cov,
              "hsep": r.rates()[0], "hspa": r.rates()[1], "hcov": r.rates()[2]} for r in rows]
    tail = [t["hsep"] for t in table[len(table) // 2:]]
    return {"omega": omega.to_json(), "table": table, "limsup_tail": max(tail) if tail else None}


def periodic_point_system(X: ShiftPresentation, period: int) -> tuple[FiniteDynSystem, list[tuple[str, ...]]]:
    """The points of X of period dividing ``period``, with the shift as one permutation.

    Points are listed by their word on 0..period-1; the shift sends x to 1x,
    whose word is the rotation x(-1) x(0) ... x(period-2).
    """
    X._need_1d()
    words = []
    for w in product(range(len(X.alphabet)), repeat=period):
        # w^infinity is a point iff some vertex set is carried into itself by w
        if X.graph.infinite_past(w):
            words.append(X.decode(w))
    index = {w: i for i, w in enumerate(words)}
    perm = [index[w[-1:] + w[:-1]] for w in words]
    return FiniteDynSystem(len(words), {"s": perm}, kind="z"), words


def cylinder_relation(words: Sequence[tuple[str, ...]], omega: FiniteShape) -> Relation:
    """W(omega) restricted to periodic points given by their period words."""
    n = len(words)
    p = len(words[0]) if words else 1
    pairs = [(i, j) for i in range(n) for j in range(n)
             if all(words[i][t % p] == words[j][t % p] for (t,) in omega.points)]
    return Relation.from_pairs(n, pairs)


def strict_drop_check(X: ShiftPresentation, Y: ShiftPresentation) -> dict:
    """Check htop(Y) < htop(X) for a proper subshift Y of a strongly irreducible X."""
    if X.dim != 1 or Y.dim != 1:
        raise InputError("strict_drop_check is for one-dimensional shifts")
    missing = X.missing_from(Y)
    if missing is not None:
        raise HypothesisError(f"Y is not contained in X (Y has the word {''.join(missing)})")
    extra = Y.missing_from(X)
    if extra is None:
        raise HypothesisError("Y equals X")
    cert = strong_irreducibility(X)
    if not cert.strongly_irreducible:
        raise HypothesisError("X is not certified strongly irreducible")
    hx, hy = entropy_exact(X).value, entropy_exact(Y).value
    margin = hx - hy
    report = {"h_X": hx, "h_Y": hy, "margin": margin, "word_of_X_not_in_Y": X.alphabet.join(extra),
              "delta": cert.delta.to_json()}
    if not margin > STRICT_MARGIN:
        raise TheoremViolation(f"entropy of a proper subshift did not drop (margin {margin:.3g})")
    report["passed"] = True
    return report


def positivity_bound_check(X: ShiftPresentation, lam: FiniteShape) -> dict:
    """Check htop(X) >= log 2 / |Lambda| for a certified specification set Lambda."""
    if X.dim != 1:
        raise InputError("positivity_bound_check is for one-dimensional shifts")
    symbols = count_language(X, FiniteShape([0]))
    if symbols < 2:
        raise HypothesisError("X must have more than one point")
    cert = strong_irreducibility(X)
    if not cert.strongly_irreducible:
        raise HypothesisError("X is not certified strongly irreducible")
    certified = specification_subset(FiniteShape([0]), cert.delta)
    if not certified.pointset <= lam.pointset:
        raise HypothesisError(f"Lambda is not certified (certified set is {certified.to_json()})")
    h = entropy_exact(X).value
    bound = math.log(2) / len(lam)
    if h < bound:
        raise TheoremViolation(f"entropy {h} is below log 2 / |Lambda| = {bound}")
    return {"h": h, "bound": bound, "lambda": lam.to_json(), "passed": True}

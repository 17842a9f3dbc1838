"""The acting group Z^d (d = 1 or 2): points, finite shapes and box Folner sequences.

Group elements are integer tuples. One-dimensional points may also be given as
plain ints wherever a point is expected; they are normalised to 1-tuples.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence, Union

from .errors import InputError

Point = tuple
PointLike = Union[int, Sequence[int]]


def as_point(p: PointLike, dim: int | None = None) -> Point:
    """Normalise ``p`` to a tuple of ints, checking the dimension if given."""
    if isinstance(p, int):
        pt = (p,)
    else:
        pt = tuple(int(c) for c in p)
    if not 1 <= len(pt) <= 2:
        raise InputError(f"only Z and Z^2 are supported, got point {p!r}")
    if dim is not None and len(pt) != dim:
        raise InputError(f"dimension mismatch: point {pt} in Z^{dim}")
    return pt


def add(p: Point, q: Point) -> Point:
    return tuple(a + b for a, b in zip(p, q))


def neg(p: Point) -> Point:
    return tuple(-a for a in p)


@dataclass(frozen=True)
class FiniteShape:
    """A finite subset of Z^d, stored sorted so equality is structural."""

    points: tuple
    dim: int

    def __init__(self, points: Iterable[PointLike] = (), dim: int | None = None):
        pts = [as_point(p) for p in points]
        if dim is None:
            if not pts:
                raise InputError("cannot infer the dimension of an empty shape")
            dim = len(pts[0])
        for p in pts:
            if len(p) != dim:
                raise InputError(f"dimension mismatch: {p} in a shape of Z^{dim}")
        object.__setattr__(self, "points", tuple(sorted(set(pts))))
        object.__setattr__(self, "dim", dim)

    @classmethod
    def interval(cls, lo: int, hi: int) -> "FiniteShape":
        """The integer interval {lo, ..., hi} (inclusive) in Z."""
        return cls(((i,) for i in range(lo, hi + 1)), dim=1)

    @classmethod
    def box(cls, n: int, dim: int = 1) -> "FiniteShape":
        """{0, ..., n-1}^dim."""
        return cls(product(range(n), repeat=dim), dim=dim)

    @classmethod
    def rect(cls, width: int, height: int) -> "FiniteShape":
        return cls(product(range(width), range(height)), dim=2)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @cached_property
    def pointset(self) -> frozenset:
        return frozenset(self.points)

    def __contains__(self, p) -> bool:
        return as_point(p) in self.pointset

    def __repr__(self) -> str:
        return f"FiniteShape({self.to_json()})"

    def bounds(self) -> tuple[Point, Point]:
        """Componentwise (min, max) corners of the shape."""
        if not self.points:
            raise InputError("empty shape has no bounds")
        lo = tuple(min(p[i] for p in self.points) for i in range(self.dim))
        hi = tuple(max(p[i] for p in self.points) for i in range(self.dim))
        return lo, hi

    def hull(self) -> "FiniteShape":
        """Smallest box (interval when d = 1) containing the shape."""
        lo, hi = self.bounds()
        return FiniteShape(product(*(range(a, b + 1) for a, b in zip(lo, hi))), dim=self.dim)

    def is_box(self) -> bool:
        return bool(self.points) and len(self.hull()) == len(self)

    def reflect(self) -> "FiniteShape":
        """{-g : g in shape}; the group inverse written additively."""
        return FiniteShape((neg(p) for p in self.points), dim=self.dim)

    def union(self, other: "FiniteShape") -> "FiniteShape":
        _check_dims(self, other)
        return FiniteShape(self.points + other.points, dim=self.dim)

    def intersection(self, other: "FiniteShape") -> "FiniteShape":
        _check_dims(self, other)
        return FiniteShape(set(self.points) & set(other.points), dim=self.dim)

    def difference(self, other: "FiniteShape") -> "FiniteShape":
        _check_dims(self, other)
        return FiniteShape(set(self.points) - set(other.points), dim=self.dim)

    def isdisjoint(self, other: "FiniteShape") -> bool:
        return set(self.points).isdisjoint(other.points)

    def to_json(self):
        if self.dim == 1:
            return [p[0] for p in self.points]
        return [list(p) for p in self.points]


def _check_dims(a: FiniteShape, b: FiniteShape) -> None:
    if a.dim != b.dim:
        raise InputError(f"dimension mismatch: Z^{a.dim} vs Z^{b.dim}")


def translate(shape: FiniteShape, g: PointLike) -> FiniteShape:
    """The translate g + shape."""
    g = as_point(g, shape.dim)
    return FiniteShape((add(g, p) for p in shape.points), dim=shape.dim)


def shape_product(E: FiniteShape, F: FiniteShape) -> FiniteShape:
    """The sumset E + F = {e + f}, i.e. the product set EF of the group."""
    _check_dims(E, F)
    return FiniteShape((add(e, f) for e in E.points for f in F.points), dim=E.dim)


def shape_difference(E: FiniteShape, F: FiniteShape) -> FiniteShape:
    """E - F = {e - f}, the product set E F^{-1}."""
    return shape_product(E, F.reflect())


def folner_defect(E: FiniteShape, F: FiniteShape) -> Fraction:
    """|EF \\ F| / |F| as an exact fraction."""
    if not F.points:
        raise InputError("folner_defect needs a nonempty F")
    EF = shape_product(E, F)
    return Fraction(len(set(EF.points) - set(F.points)), len(F))


@dataclass(frozen=True)
class FolnerBoxSequence:
    """The box net n -> {0, ..., n-1}^d for a strictly increasing list of sizes."""

    dim: int
    sizes: tuple

    def __init__(self, dim: int, sizes: Iterable[int]):
        sizes = tuple(int(n) for n in sizes)
        if dim not in (1, 2):
            raise InputError("only Z and Z^2 are supported")
        if not sizes or any(n < 1 for n in sizes):
            raise InputError("box sizes must be positive")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise InputError("box sizes must be strictly increasing")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def upto(cls, n: int, dim: int = 1, step: int = 1) -> "FolnerBoxSequence":
        return cls(dim, range(step, n + 1, step))

    def box(self, n: int) -> FiniteShape:
        return FiniteShape.box(n, self.dim)

    def __iter__(self):
        return iter(self.sizes)

    def to_json(self) -> dict:
        return {"dim": self.dim, "sizes": list(self.sizes)}

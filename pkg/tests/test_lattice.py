from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftlab.errors import InputError
from shiftlab.lattice import (
    FiniteShape,
    FolnerBoxSequence,
    folner_defect,
    shape_difference,
    shape_product,
    translate,
)

points_1d = st.lists(st.integers(-6, 6), min_size=1, max_size=6)
points_2d = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=5)


def test_interval_and_box():
    assert FiniteShape.interval(-1, 1).to_json() == [-1, 0, 1]
    assert len(FiniteShape.box(3, dim=2)) == 9
    assert FiniteShape.rect(2, 3).bounds() == ((0, 0), (1, 2))
    assert FiniteShape([3, 0, 3]).to_json() == [0, 3]


def test_dimension_errors():
    with pytest.raises(InputError):
        FiniteShape([])
    with pytest.raises(InputError):
        FiniteShape([(0, 0), 1])
    with pytest.raises(InputError):
        shape_product(FiniteShape([0]), FiniteShape([(0, 0)]))
    with pytest.raises(InputError):
        FolnerBoxSequence(1, [3, 2])


def test_box_defect_values():
    # {0, 1} + box(n) adds exactly one point to box(n)
    E = FiniteShape([0, 1])
    assert folner_defect(E, FiniteShape.box(4)) == Fraction(1, 4)
    # a 2D box grows by one column and one row plus the corner
    E2 = FiniteShape([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert folner_defect(E2, FiniteShape.box(5, dim=2)) == Fraction(11, 25)


def test_folner_sequence_defect_vanishes():
    E = FiniteShape.interval(-2, 2)
    net = FolnerBoxSequence.upto(200, step=50)
    defects = [folner_defect(E, net.box(n)) for n in net]
    assert defects == sorted(defects, reverse=True)
    assert defects[-1] == Fraction(4, 200)


@given(points_1d, points_1d)
def test_product_is_commutative_and_sized(a, b):
    A, B = FiniteShape(a), FiniteShape(b)
    AB = shape_product(A, B)
    assert AB == shape_product(B, A)
    assert max(len(A), len(B)) <= len(AB) <= len(A) * len(B)


@given(points_2d, points_2d)
def test_difference_matches_definition(a, b):
    A, B = FiniteShape(a), FiniteShape(b)
    expected = {(x[0] - y[0], x[1] - y[1]) for x in A for y in B}
    assert set(shape_difference(A, B)) == expected


@given(points_1d, st.integers(-10, 10))
def test_translate_and_reflect(a, g):
    A = FiniteShape(a)
    assert translate(translate(A, g), -g) == A
    assert A.reflect().reflect() == A
    assert len(translate(A, g)) == len(A)


@given(points_1d, points_1d)
def test_set_operations(a, b):
    A, B = FiniteShape(a), FiniteShape(b)
    assert set(A.union(B)) == set(A) | set(B)
    assert set(A.intersection(B)) == set(A) & set(B)
    assert A.isdisjoint(B) == (not set(A) & set(B))
    assert A.hull().is_box()

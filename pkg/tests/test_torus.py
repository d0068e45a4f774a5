from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from isocomm.torus import TorusShape, coord_of, l1_norm, rank_of, shift_ranks, torus_add, torus_sub


def test_rank_of_examples():
    shape = TorusShape((3, 4))
    assert rank_of((0, 0), shape) == 0
    assert rank_of((2, 3), shape) == 11
    # row-major enumeration of all 12 cells
    enumeration = list(product(range(3), range(4)))
    assert enumeration.index((1, 2)) == 6
    assert rank_of((1, 2), shape) == 6


def test_coord_of_examples():
    shape = TorusShape((3, 4))
    assert coord_of(0, shape) == (0, 0)
    assert coord_of(11, shape) == (2, 3)
    assert coord_of(6, shape) == (1, 2)


def test_torus_add_examples():
    assert torus_add((0, 0), (0, 0), TorusShape((3, 3))) == (0, 0)
    assert torus_add((2, 2), (1, 1), TorusShape((3, 3))) == (0, 0)
    assert torus_add((0, 1), (-1, 2), TorusShape((3, 4))) == (2, 3)


def test_l1_norm_examples():
    assert l1_norm((0, 0, 0)) == 0
    assert l1_norm((1, 1, 1)) == 3
    assert l1_norm((-3, 0, 7)) == 10


@pytest.mark.parametrize("bad", [(3, 0), (0, 4), (-1, 0)])
def test_rank_of_out_of_bounds(bad):
    with pytest.raises(ValueError):
        rank_of(bad, TorusShape((3, 4)))


@pytest.mark.parametrize("rank", [-1, 12, 100])
def test_coord_of_out_of_range(rank):
    with pytest.raises(ValueError):
        coord_of(rank, TorusShape((3, 4)))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        torus_add((0, 0), (1, 0, 0), TorusShape((3, 3)))
    with pytest.raises(ValueError):
        rank_of((0, 0, 0), TorusShape((3, 3)))


def test_shape_validation_and_parse():
    assert TorusShape.parse("4x4x4").dims == (4, 4, 4)
    assert TorusShape.parse("3,2").dims == (3, 2)
    assert TorusShape((3, 4)).size == 12
    assert str(TorusShape((2, 5))) == "2x5"
    for dims in [(), (0, 3), (-2,)]:
        with pytest.raises(ValueError):
            TorusShape(dims)
    with pytest.raises(ValueError):
        TorusShape.parse("4xq")


shapes = st.lists(st.integers(1, 6), min_size=1, max_size=4).map(lambda ds: TorusShape(tuple(ds)))


@given(shapes, st.data())
def test_rank_coord_round_trip(shape, data):
    rank = data.draw(st.integers(0, shape.size - 1))
    coord = coord_of(rank, shape)
    assert all(0 <= c < p for c, p in zip(coord, shape.dims))
    assert rank_of(coord, shape) == rank


@given(shapes, st.data())
def test_add_then_sub_is_identity(shape, data):
    r = tuple(data.draw(st.integers(0, p - 1)) for p in shape.dims)
    c = tuple(data.draw(st.integers(-20, 20)) for _ in shape.dims)
    moved = torus_add(r, c, shape)
    assert all(0 <= x < p for x, p in zip(moved, shape.dims))
    assert torus_sub(moved, c, shape) == r


@given(shapes, st.data())
def test_shift_ranks_matches_scalar(shape, data):
    c = tuple(data.draw(st.integers(-7, 7)) for _ in shape.dims)
    want = [rank_of(torus_add(coord_of(r, shape), c, shape), shape) for r in range(shape.size)]
    assert np.array_equal(shift_ranks(shape, c), want)

import math
import time

import pytest

from isocomm.schedule import AdditiveBasis, SearchSpaceExceeded, find_min_additive_basis, is_additive_basis

from oracles import covers


def test_known_small_examples():
    b3 = find_min_additive_basis([1, 2, 3])
    b7 = find_min_additive_basis(range(1, 8))
    b8 = find_min_additive_basis(range(1, 9))
    assert (len(b3), len(b7), len(b8)) == (2, 3, 4)
    assert b3.vectors == ((1,), (2,))
    assert b7.vectors == ((1,), (2,), (4,))
    for b, n in ((b3, 3), (b7, 7), (b8, 8)):
        assert covers(b.vectors, range(1, n + 1))


def test_known_witnesses_for_one_to_eight():
    targets = range(1, 9)
    assert covers([1, 2, 3, 6], targets) and covers([1, 2, 4, 8], targets)
    assert is_additive_basis([1, 2, 3, 6], targets) and is_additive_basis([1, 2, 4, 8], targets)
    # no three integers suffice: 2^3 - 1 = 7 < 8 distinct sums
    assert not any(covers(list(c), targets) for c in __import__("itertools").combinations(range(1, 9), 3))


def test_lexicographic_tie_break():
    assert find_min_additive_basis(range(1, 9)).vectors == ((1,), (2,), (3,), (4,))


@pytest.mark.parametrize("n", range(1, 13))
def test_size_bounds_for_prefix_sets(n):
    b = find_min_additive_basis(range(1, n + 1))
    assert math.ceil(math.log2(n + 1)) <= len(b) <= n
    assert covers(b.vectors, range(1, n + 1))


def test_two_dimensional_moore():
    targets = [(x, y) for x in (-1, 0, 1) for y in (-1, 0, 1) if (x, y) != (0, 0)]
    b = find_min_additive_basis(targets)
    assert covers(b.vectors, targets)
    # 8 targets need at least 4 vectors; exhaustive search shows 4 works
    assert len(b) == 4


def test_negative_one_dimensional():
    b = find_min_additive_basis([-3, -1, 2])
    assert covers(b.vectors, [-3, -1, 2])
    assert len(b) == 2


def test_zero_target_needs_nothing():
    assert find_min_additive_basis([0]).vectors == ()
    assert AdditiveBasis(()).decompose(0) == ()
    assert AdditiveBasis(()).decompose(1) is None


def test_decompose():
    b = AdditiveBasis(((1,), (2,), (4,)))
    assert sum(v[0] for v in b.decompose(7)) == 7
    assert b.decompose(8) is None


def test_duplicate_vectors_are_not_a_basis():
    assert not is_additive_basis([1, 1], [2])


def test_search_space_guard():
    with pytest.raises(SearchSpaceExceeded):
        find_min_additive_basis(range(1, 9), max_basis_size=3)
    with pytest.raises(SearchSpaceExceeded):
        find_min_additive_basis(range(1, 200), max_candidates=1000)


def test_mixed_dimensions_rejected():
    with pytest.raises(ValueError):
        find_min_additive_basis([(1,), (1, 2)])


def test_fast_enough():
    start = time.perf_counter()
    for n in (3, 7, 8):
        find_min_additive_basis(range(1, n + 1))
    assert time.perf_counter() - start < 10

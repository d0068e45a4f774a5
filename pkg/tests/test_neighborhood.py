import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from isocomm import TorusShape
from isocomm.neighborhood import (
    BlockSizeMap,
    Neighborhood,
    gen_irregular_sizes,
    gen_moore,
    gen_octant,
    gen_shales,
    metrics,
    parse_spec,
    validate,
)
from isocomm.trie import trie_dim_order

from conftest import random_neighborhood
from oracles import brute_D, brute_direct_rounds, brute_V, brute_W


def test_validate_examples():
    assert validate(gen_moore(2, 1), TorusShape((4, 4))).ok
    with pytest.raises(ValueError):
        validate(gen_moore(2, 1), TorusShape((3, 2, 2)))
    report = validate(Neighborhood.of([(5, 0)]), TorusShape((3, 3)))
    assert not report.ok
    assert len(report.warnings) == 1
    assert "aliases 2" in report.warnings[0]


def test_neighborhood_construction_errors():
    with pytest.raises(ValueError):
        Neighborhood(2, ())
    with pytest.raises(ValueError):
        Neighborhood(2, ((1, 0), (1,)))
    with pytest.raises(ValueError):
        Neighborhood(0, ((),))


def test_json_round_trip(tmp_path):
    n = Neighborhood.of([(1, 0), (0, 0), (1, 0), (-2, 3)])
    path = tmp_path / "n.json"
    path.write_text(n.to_json())
    assert Neighborhood.load(path) == n
    assert parse_spec(str(path)) == n
    with pytest.raises(ValueError):
        Neighborhood.from_json('{"offsets": [[1]]}')


def test_moore_sizes():
    assert gen_moore(2, 1).s == 8
    assert gen_moore(3, 1).s == 26
    assert gen_moore(3, 3).s == 342
    assert gen_moore(4, 1).s == 80
    assert gen_moore(5, 1).s == 242


def test_moore_row_order():
    n = gen_moore(2, 1)
    assert n.offsets == ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def test_octant():
    n = gen_octant(3, 1)
    expected = {(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)}
    assert n.s == 7 and set(n.offsets) == expected
    assert gen_octant(3, 3).s == 63
    assert gen_octant(1, 1).offsets == ((1,),)


def test_shales():
    assert gen_shales(3, [3, 7]).s == 1396
    assert gen_shales(1, [2]).offsets == ((-2,), (2,))
    assert gen_shales(2, [1]).offsets == gen_moore(2, 1).offsets
    for radii in ([], [3, 3], [7, 3], [0, 2]):
        with pytest.raises(ValueError):
            gen_shales(2, radii)


@pytest.mark.parametrize("gen,args", [(gen_moore, (0, 1)), (gen_moore, (2, 0)), (gen_octant, (1, -1))])
def test_generator_argument_errors(gen, args):
    with pytest.raises(ValueError):
        gen(*args)


def test_irregular_sizes():
    sizes = gen_irregular_sizes(gen_moore(3, 1), 512)
    assert set(sizes.sizes) == {1, 512, 512**2}
    assert sizes.total() == 6 * 512**2 + 12 * 512 + 8
    assert set(gen_irregular_sizes(gen_moore(3, 1), 1).sizes) == {1}
    n = gen_moore(2, 1)
    by_offset = dict(zip(n.offsets, gen_irregular_sizes(n, 4).sizes))
    assert by_offset[(1, 1)] == 1 and by_offset[(-1, 1)] == 1
    assert by_offset[(0, 1)] == 4 and by_offset[(-1, 0)] == 4
    with pytest.raises(ValueError):
        gen_irregular_sizes(Neighborhood.of([(2, 1)]), 4)
    with pytest.raises(ValueError):
        gen_irregular_sizes(n, 0)


def test_block_size_map():
    assert BlockSizeMap.uniform(3, 5).sizes == (5, 5, 5)
    assert BlockSizeMap.uniform(3, 5).is_uniform
    assert not BlockSizeMap((1, 2)).is_uniform
    with pytest.raises(ValueError):
        BlockSizeMap((1, -1))


def test_parse_spec():
    assert parse_spec("moore:d=3,r=1") == gen_moore(3, 1)
    assert parse_spec("octant:d=3,r=3") == gen_octant(3, 3)
    assert parse_spec("shales:d=3,r=3,7") == gen_shales(3, [3, 7])
    for bad in ("moore:d=3", "cube:d=2,r=1", "moore:d=x,r=1", "no-such-file.json", "moore:3,r=1"):
        with pytest.raises(ValueError):
            parse_spec(bad)


def test_metrics_examples():
    assert metrics(gen_moore(3, 1)).D == 6
    m = metrics(gen_moore(2, 1))
    assert (m.V, m.W, m.direct_rounds) == (12, 8, 4)
    # 1396 offsets at Chebyshev distance 3 or 7 use every value -7..7 in each dimension
    shales = gen_shales(3, [3, 7])
    assert metrics(shales).D == 42
    assert brute_direct_rounds(shales.offsets) == 42
    assert metrics(shales).direct_rounds == 42


@pytest.mark.parametrize("d,r", [(d, r) for d in range(1, 4) for r in range(1, 4)] + [(4, 1), (5, 1)])
def test_moore_counts_and_rounds(d, r):
    n = gen_moore(d, r)
    assert n.s == (2 * r + 1) ** d - 1
    assert metrics(n).D == 2 * r * d


def test_metrics_against_brute_force():
    rng = random.Random(3)
    for _ in range(200):
        n = random_neighborhood(rng)
        m = metrics(n)
        assert m.D == brute_D(n.offsets)
        assert m.V == brute_V(n.offsets)
        assert m.W == brute_W(n.offsets, trie_dim_order(n.offsets))
        assert m.direct_rounds == brute_direct_rounds(n.offsets)
        assert m.direct_volume == sum(sum(1 for x in c if x) for c in n.offsets)


def test_duplicates_count_in_volume():
    n = Neighborhood.of([(2, 0), (2, 0), (0, 0)])
    m = metrics(n)
    assert m.V == 4
    assert m.W == 2


offset_lists = st.integers(1, 4).flatmap(
    lambda d: st.lists(st.tuples(*[st.integers(-5, 5)] * d), min_size=1, max_size=30)
)


@settings(max_examples=200)
@given(offset_lists)
def test_metric_inequalities(offsets):
    m = metrics(Neighborhood.of(offsets))
    assert 0 <= m.W <= m.V
    assert m.direct_rounds <= m.D <= m.V
    assert m.direct_volume <= m.V


def test_generators_deterministic():
    for gen, args in [(gen_moore, (3, 2)), (gen_octant, (3, 2)), (gen_shales, (2, [1, 3]))]:
        assert gen(*args).offsets == gen(*args).offsets


def test_dim_order_prefers_shared_coordinates():
    # dimension 1 has one value (shared by all), dimension 0 has three
    offsets = [(1, 5), (2, 5), (3, 5)]
    assert trie_dim_order(offsets) == (1, 0)
    assert trie_dim_order(list(itertools.product([-1, 0, 1], repeat=2))) == (0, 1)

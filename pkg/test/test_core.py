import itertools

import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers, permutations, sets
from supportclasses import all_grid_colorings, grid_from_rows

import gmpy2
from gmpy2 import mpz

from gridramsey import (BLUE, RED, Certificate, CertificateKind,
                        GridBuilder, GridColoring, GridSubgraph, InputError,
                        ThreeGraphColoring, bipartite_mask, bipartite_to_grid,
                        find_blue_star, find_mono_clique_in_grid,
                        find_red_k4, find_red_rectangle, grid_edge_count,
                        grid_to_bipartite, pair_rank, triple_count,
                        triple_rank, triple_unrank)


def test_triple_rank():
    assert triple_rank(5, (2, 3, 4)) == 9
    assert triple_rank(5, (4, 2, 3)) == 9
    assert triple_rank(3, (0, 1, 2)) == 0
    assert [triple_unrank(5, r) for r in range(4)] == [(0, 1, 2), (0, 1, 3),
                                                       (0, 2, 3), (1, 2, 3)]
    pytest.raises(InputError, lambda: triple_rank(5, (0, 1, 5)))
    pytest.raises(InputError, lambda: triple_rank(5, (0, 1, 1)))
    pytest.raises(InputError, lambda: triple_rank(5, (0, 1)))
    pytest.raises(InputError, lambda: triple_unrank(4, 4))


@given(sets(integers(min_value=0, max_value=200), min_size=3, max_size=3))
def test_triple_rank_is_colex(s):
    t = tuple(sorted(s))
    r = triple_rank(201, t)
    assert triple_unrank(201, r) == t
    assert r == int(gmpy2.comb(t[2], 3) + gmpy2.comb(t[1], 2) + t[0])


def test_pair_rank():
    assert [pair_rank(i, j) for j in range(4) for i in range(j)] == \
        list(range(6))
    assert pair_rank(3, 1) == pair_rank(1, 3)
    pytest.raises(InputError, lambda: pair_rank(2, 2))


def test_counts():
    assert triple_count(5) == 10
    assert triple_count(2) == 0
    assert grid_edge_count(3, 2) == 9
    assert grid_edge_count(4, 4) == 48
    assert GridColoring.all_red(4, 4).red_count() == 48
    assert GridColoring.all_blue(4, 4).red_count() == 0


def test_grid_accessors():
    g = grid_from_rows(3, 2, horizontal=[(1, 3, 2)], vertical=[(2, 1, 2)])

    assert g.horizontal(1, 3, 2) == RED
    assert g.horizontal(3, 1, 2) == RED
    assert g.horizontal(1, 3, 1) == BLUE
    assert g.vertical(2, 2, 1) == RED
    assert g.color((1, 2), (3, 2)) == RED
    assert g.color((2, 1), (2, 2)) == RED
    assert g.color((1, 1), (2, 1)) == BLUE
    assert g.red_count() == 2
    assert g.horizontal_red_count() == 1 and g.vertical_red_count() == 1
    assert list(g.red_edges()) == [('h', 1, 3, 2), ('v', 2, 1, 2)]
    assert len(list(g.edges())) == g.edge_count() == 9
    assert g.row_mask(2) == (mpz(4), mpz(0), mpz(1))
    assert g.row_mask(2, BLUE) == (mpz(2), mpz(5), mpz(2))
    assert repr(g) == 'GridColoring(3x2, 2 red of 9)'

    pytest.raises(InputError, lambda: g.color((1, 1), (2, 2)))
    pytest.raises(InputError, lambda: g.horizontal(1, 1, 1))
    pytest.raises(InputError, lambda: g.horizontal(1, 4, 1))
    pytest.raises(InputError, lambda: g.vertical(1, 1, 3))
    pytest.raises(InputError, lambda: g.edge_color(('d', 1, 2, 1)))
    pytest.raises(InputError, lambda: GridColoring.all_red(0, 3))
    with pytest.raises(AttributeError):
        g.width = 4


def test_grid_builder():
    b = GridBuilder(2, 2)
    b.set_edge(('h', 1, 2, 1))
    b.set_edge(('h', 1, 2, 1), BLUE)
    b.set_edge(('v', 1, 1, 2))
    g = b.freeze(GridSubgraph)

    assert isinstance(g, GridSubgraph)
    assert g.has_edge((1, 1), (1, 2))
    assert not g.has_edge((1, 1), (2, 1))
    assert g.row_density() == 0.0 and g.col_density() == 0.5
    pytest.raises(InputError, lambda: b.set_horizontal(1, 3, 1))
    pytest.raises(InputError, lambda: b.set_vertical(1, 2, 2))
    pytest.raises(InputError, lambda: b.set_edge(('x', 1, 2, 1)))


@settings(max_examples=50)
@given(integers(min_value=0, max_value=(1 << 18) - 1))
def test_grid_bits(bits):
    g = GridColoring.from_bits(4, 3, bits)
    assert g.to_bits() == bits
    assert g.red_count() == gmpy2.popcount(bits)
    assert g == GridColoring.from_edges(4, 3, g.red_edges())
    assert hash(g) == hash(GridColoring.from_edges(4, 3, g.red_edges()))


@settings(max_examples=30)
@given(integers(min_value=0, max_value=(1 << 18) - 1),
       permutations([1, 2, 3, 4]), permutations([1, 2, 3]))
def test_grid_permute(bits, cols, rows):
    g = GridColoring.from_bits(4, 3, bits)
    h = g.permute(cols, rows)

    assert h.red_count() == g.red_count()
    for x, x2 in itertools.combinations(range(1, 5), 2):
        for y in range(1, 4):
            assert (g.horizontal(x, x2, y)
                    == h.horizontal(cols[x - 1], cols[x2 - 1], rows[y - 1]))
    assert (find_red_rectangle(g) is None) == (find_red_rectangle(h) is None)


def test_grid_subgrid():
    g = grid_from_rows(4, 3, horizontal=[(2, 4, 1), (1, 2, 3)],
                       vertical=[(4, 1, 3), (3, 2, 3)])
    s = g.subgrid([2, 4], [1, 3])

    assert (s.width, s.height) == (2, 2)
    assert list(s.red_edges()) == [('h', 1, 2, 1), ('v', 2, 1, 2)]
    assert g.subgrid(range(1, 5), range(1, 4)) == g
    pytest.raises(InputError, lambda: g.subgrid([5], [1]))
    pytest.raises(InputError, lambda: g.permute([1, 1, 2, 3], [1, 2, 3]))


def test_three_graph():
    t = ThreeGraphColoring.from_triples(5, [(0, 1, 2), (4, 2, 1)])

    assert t.N == 5 and t.red_count() == 2
    assert t.is_red(2, 0, 1) and t.is_red(1, 2, 4)
    assert not t.is_red(0, 1, 3)
    assert t.color(0, 1, 2) == RED
    assert list(t.red_triples()) == [(0, 1, 2), (1, 2, 4)]
    assert t.link(1)[2] == mpz(0b10001)
    assert t.link(1, BLUE)[2] == mpz(0b01000)
    assert t.link(1)[1] == 0
    assert t.recolor(blue=[(0, 1, 2)]).red_count() == 1
    assert t.recolor(red=[0, 1]).red_count() == 3
    assert t == ThreeGraphColoring.from_bits(5, t.red)
    assert ThreeGraphColoring.all_red(5).red_count() == 10

    pytest.raises(InputError, lambda: t.link(5))
    pytest.raises(InputError, lambda: ThreeGraphColoring(3, 2))
    pytest.raises(InputError, lambda: ThreeGraphColoring(4, 1, mask=2))
    with pytest.raises(AttributeError):
        t.red = 0


def test_bipartite_mask():
    m = bipartite_mask(2, 2)

    # every triple of 4 vertices meets both sides
    assert m == gmpy2.bit_mask(4)
    m = bipartite_mask(3, 2)
    assert gmpy2.popcount(m) == 3 * 1 + 2 * 3
    assert not m.bit_test(triple_rank(5, (0, 1, 2)))
    assert m.bit_test(triple_rank(5, (0, 3, 4)))


def test_grid_to_bipartite():
    g = grid_from_rows(3, 2, horizontal=[(1, 3, 2)], vertical=[(2, 1, 2)])
    t = grid_to_bipartite(g)

    assert list(t.red_triples()) == [(0, 2, 4), (1, 3, 4)]
    assert t.mask == bipartite_mask(3, 2)
    assert bipartite_to_grid(t, 3) == g
    pytest.raises(InputError, lambda: bipartite_to_grid(t, 5))


def check_correspondence(g):
    width = g.width
    columns = gmpy2.bit_mask(width)
    rows = gmpy2.bit_mask(width + g.height) ^ columns
    t = grid_to_bipartite(g)
    assert bipartite_to_grid(t, width) == g

    rect, k4 = find_red_rectangle(g), find_red_k4(t)
    assert (rect is None) == (k4 is None)
    if k4 is not None:
        assert sum(v < width for v in k4.vertices) == 2
        quad = [x - 1 for x in rect.columns] + \
            [width + y - 1 for y in rect.rows]
        assert all(t.is_red(*tr) for tr in itertools.combinations(quad, 3))
    for n in (2, 3):
        in_grid = find_mono_clique_in_grid(g, BLUE, n) is not None
        in_bip = (find_blue_star(t, n, leaves=columns) is not None
                  or find_blue_star(t, n, leaves=rows) is not None)
        assert in_grid == in_bip


@pytest.mark.parametrize('width,height', [(2, 2), (3, 2), (2, 3)])
def test_correspondence_exhaustive(width, height):
    for g in all_grid_colorings(width, height):
        check_correspondence(g)


@pytest.mark.slow
def test_correspondence_exhaustive_3x3():
    for g in all_grid_colorings(3, 3):
        check_correspondence(g)


def test_certificate():
    c = Certificate('RedRectangle', [(1, 1), (2, 1), (1, 2), (2, 2)])

    assert c.kind is CertificateKind.RedRectangle
    assert c.kind.on_grid and c.kind.color == RED
    assert c.columns == (1, 2) and c.rows == (1, 2)
    assert len(c.asserted()) == 4
    assert Certificate.from_json(c.to_json()) == c
    assert c.to_json()['colors-checked'] == 4

    s = Certificate(CertificateKind.BlueStar, [1, 2, 3], center=0)
    assert s.asserted() == [(0, 1, 2), (0, 1, 3), (0, 2, 3)]
    assert Certificate.from_json(s.to_json()) == s
    assert 'center=0' in repr(s)

    pytest.raises(InputError, lambda: Certificate('BlueStar', [1, 2]))
    pytest.raises(InputError, lambda: Certificate('RedK4', [0, 1, 2, 3],
                                                  center=4))
    pytest.raises(ValueError, lambda: Certificate('Pentagon', []))
    pytest.raises(InputError, lambda: Certificate.from_json({'kind': 'X'}))
    pytest.raises(InputError, lambda: Certificate.from_json({}))

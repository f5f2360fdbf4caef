import itertools

import pytest
from supportclasses import grid_from_rows

from gmpy2 import mpz

from gridramsey import (GridColoring, InputError, InvariantError,
                        ParamSchedule, build_layered, find_red_k4,
                        find_red_rectangle, layer_coloring, local_context,
                        marking_report, neighbourhood, triple_level,
                        triple_rank)


def dense_schedule(N=8):
    return ParamSchedule.desk(16, N, p_thin=0.5, p_union=0.9)


def test_triple_level():
    assert triple_level(0, 1, 2) == 2
    assert triple_level(4, 5, 6) == 2
    assert triple_level(0, 4, 5) == 3
    assert triple_level(1, 0, 7) == 3
    pytest.raises(InputError, lambda: triple_level(1, 1, 2))

    # no triple has level 1
    assert min(triple_level(*t)
               for t in itertools.combinations(range(16), 3)) == 2


def test_neighbourhood():
    assert neighbourhood(0, 1) == mpz(0b10)
    assert neighbourhood(5, 3) == mpz(0b1111)
    assert neighbourhood(1, 3) == mpz(0b11110000)
    assert neighbourhood(0, 3, N=4) == 0
    pytest.raises(InputError, lambda: neighbourhood(0, 0))


def test_layer_coloring():
    h = grid_from_rows(4, 4, horizontal=[(1, 2, 3), (1, 3, 2)],
                       vertical=[(1, 3, 4), (2, 1, 2)])
    chi = layer_coloring(h, 2)

    # (1,3,2) crosses bit 1 among the columns; (2,1,2) joins two zero rows
    assert list(chi.red_triples()) == [(0, 1, 2), (0, 2, 3)]
    assert layer_coloring(h, 1).red_count() == 0


def test_build_layered_given_layers():
    empty = GridColoring.all_blue(4, 4)
    full = GridColoring.all_red(4, 4)
    params = ParamSchedule.desk(16, 4)

    chi, state = build_layered(params, 0, layers=[empty, empty])
    assert chi.red_count() == 0 and state.t == 2 and not state.marked

    # a red rectangle in a layer gives a 2+2 red K4 with four least triples
    chi, state = build_layered(params, 0, layers=[empty, full])
    assert state.ambiguous == 1
    assert state.chi_prime.red_count() == 4
    assert state.marked_levels((0, 1, 2)) == frozenset({2})
    assert find_red_k4(chi) is None

    pytest.raises(InputError, lambda: build_layered(params, 0,
                                                    layers=[empty]))
    pytest.raises(InputError, lambda: build_layered(
        params, 0, layers=[empty, GridColoring.all_blue(4, 3)]))
    pytest.raises(InputError,
                  lambda: build_layered(ParamSchedule.desk(16, 6), 0))


def test_build_layered_ambiguity_without_rectangle(monkeypatch):
    empty = GridColoring.all_blue(4, 4)
    full = GridColoring.all_red(4, 4)
    params = ParamSchedule.desk(16, 4)
    monkeypatch.setattr('gridramsey.layered.find_red_rectangle',
                        lambda h: None)

    with pytest.raises(InvariantError):
        build_layered(params, 0, layers=[empty, full])

    with local_context(strict_marking=False):
        chi, state = build_layered(params, 0, layers=[empty, full])
    assert state.ambiguous == 1
    assert find_red_k4(chi) is None


def test_build_layered_complete_layers():
    N = 16
    chi, state = build_layered(ParamSchedule.desk(16, N), 0,
                               layers=[GridColoring.all_red(N, N)] * 4)

    assert state.chi_prime.red_count() == 560
    assert find_red_k4(chi) is None
    split = 0
    for quad in itertools.combinations(range(N), 4):
        triples = list(itertools.combinations(quad, 3))
        assert any(state.marked_levels(tr) for tr in triples)
        assert not all(chi.is_red(*tr) for tr in triples)
        levels = {triple_level(*tr) for tr in triples}
        split += len(levels) == 1
    assert state.ambiguous == split > 0


@pytest.mark.parametrize('seed', [0, 1])
def test_build_layered(seed):
    params = dense_schedule()
    chi, state = build_layered(params, seed)

    assert state.N == 8 and state.t == 3
    assert find_red_k4(chi) is None
    assert chi.red & ~state.chi_prime.red == 0
    for level in range(1, 4):
        assert find_red_rectangle(state.layer(level)) is None
        assert state.chi_level(level).red & ~state.chi_prime.red == 0
    for rank, levels in state.marked.items():
        assert state.chi_prime.red.bit_test(rank)
        assert not chi.red.bit_test(rank)
        assert levels
    assert state.chi_prime.red_count() - chi.red_count() == len(state.marked)
    assert state.ambiguous == 0
    doc = state.to_json()
    assert doc['marked'] == len(state.marked) and len(doc['layers']) == 3


@pytest.mark.parametrize('seed', range(3))
def test_build_layered_strict_at_16(seed):
    chi, state = build_layered(dense_schedule(16), seed)

    assert state.t == 4 and state.ambiguous == 0
    assert find_red_k4(chi) is None
    assert chi.red_count() == state.chi_prime.red_count() - len(state.marked)


@pytest.mark.slow
@pytest.mark.parametrize('N', [16, 32, 64, 128])
def test_build_layered_sweep(N):
    params = dense_schedule(16) if N == 16 else ParamSchedule.desk(N, N)
    for seed in range(20):
        chi, state = build_layered(params, seed)
        assert state.ambiguous == 0
        assert find_red_k4(chi) is None, seed


def test_marking_report():
    params = dense_schedule()
    chi, state = build_layered(params, 3)
    rep = marking_report(state, 0, 2, p_union=params.p_union)

    assert rep.leaves == (2, 3)
    assert set(rep.graphs) == {3}
    assert rep.union <= {(2, 3)}
    assert 0 <= rep.density <= 1
    assert rep.expected_density == pytest.approx(3 * 0.9)
    for v, v2 in rep.union:
        w = [w for w in range(8)
             if w not in (0, v, v2)
             and state.chi_level(3).is_red(w, 0, v)
             and state.chi_level(3).is_red(w, 0, v2)
             and state.chi_level(3).is_red(w, v, v2)]
        assert w
    assert rep.to_json()['leaves'] == 2

    pytest.raises(InputError, lambda: marking_report(state, 8, 1))
    pytest.raises(InputError, lambda: marking_report(state, 0, 4))

    rank = triple_rank(8, (0, 1, 2))
    assert state.marked_levels((0, 1, 2)) == state.marked.get(rank,
                                                              frozenset())

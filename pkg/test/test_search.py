import io

import pytest

from gridramsey import (BLUE, RED, Clique2Ramsey, DecisionProblem,
                        GridColoring, GridRamsey, HyperVsStar, InputError,
                        InvariantError, Ramsey2Entry, Ramsey2Table,
                        SearchBudget, SearchBudgetExceeded, SetColoring,
                        Solver, ThreeGraphColoring, bound_consistency,
                        decide_good_coloring, dump_ramsey2_cache,
                        load_ramsey2_cache, ramsey2_table, ramsey_value,
                        set_coloring_ramsey)
from gridramsey.search import second_path

# value masks: bit 0 is BLUE, bit 1 is RED
B, R = 1 << BLUE, 1 << RED


# ---------------------------------------------------------------------------
# Solver
# ---------------------------------------------------------------------------

def test_solver_propagation():
    cons = [((0, B),), ((0, R), (1, R))]
    s = Solver((2, 2), cons)
    assert s.solve() == [RED, BLUE]
    assert s.nodes >= 1

    assert Solver((2, 2), [((0, B | R),)]).solve() is None
    assert Solver((2,), [()]).solve() is None
    assert Solver((3,), [((0, 0b011),)]).solve() == [2]
    assert Solver((), []).solve() == []


def test_solver_symmetry():
    # forbid (0, 0); the swap keeps only assignments no larger than their image
    cons = [((0, 1), (1, 1))]
    assert Solver((2, 2), cons, symmetries=[(1, 0)]).solve() == [0, 1]
    assert Solver((2, 2), cons, order=(1, 0)).solve() == [1, 0]


def test_solver_errors():
    pytest.raises(InputError, lambda: Solver((2, 0), []))
    pytest.raises(InputError, lambda: Solver((2, 2), [], order=(0, 0)))


def test_solver_budget():
    s = Solver((2,) * 30, [], budget=SearchBudget(node_limit=5))
    with pytest.raises(SearchBudgetExceeded) as exc:
        s.solve()
    assert exc.value.nodes == 6


# ---------------------------------------------------------------------------
# families and decisions
# ---------------------------------------------------------------------------

@pytest.mark.parametrize('make', [
    lambda: GridRamsey(0),
    lambda: Clique2Ramsey(0, 3),
    lambda: SetColoring(3, 2, 2),
    lambda: SetColoring(0, 2, 1),
    lambda: HyperVsStar('K6', 2),
    lambda: HyperVsStar('K4', 0),
    lambda: GridRamsey(2).at(0),
])
def test_family_errors(make):
    pytest.raises(InputError, make)


def test_grid_encoding():
    enc = GridRamsey(2).at(2).encode()

    assert len(enc.variables) == 4
    assert enc.space == 16
    assert len(enc.constraints) == 5
    assert len(enc.symmetries) == 2
    assert sorted(enc.symmetries[0]) == [0, 1, 2, 3]


@pytest.mark.parametrize('path', ['naive', 'pruned', 'plain'])
def test_grid_ramsey_2(path):
    res = decide_good_coloring(GridRamsey(2).at(1), path)
    assert res.sat and res.path == path
    assert isinstance(res.witness, GridColoring)
    assert res.witness.edge_count() == 0

    res = decide_good_coloring(GridRamsey(2).at(2), path)
    assert res.status == 'unsat' and res.witness is None


@pytest.mark.parametrize('path', ['naive', 'pruned', 'plain'])
def test_clique2_witness(path):
    res = decide_good_coloring(Clique2Ramsey(3, 3).at(5), path)

    assert res.sat
    w = res.witness
    assert w.vertex_count == 5
    assert Clique2Ramsey(3, 3).check(5, w)
    assert sorted(len([v for v in range(5) if v != u
                       and w.label(min(u, v), max(u, v)) == RED])
                  for u in range(5)) == [2] * 5

    assert not decide_good_coloring(Clique2Ramsey(3, 3).at(6), path).sat


def test_hyper_witness():
    res = decide_good_coloring(HyperVsStar('K4', 2).at(3))
    assert isinstance(res.witness, ThreeGraphColoring)
    assert res.witness.red_count() == 1


def test_decide_errors():
    big = Clique2Ramsey(3, 4).at(8)
    pytest.raises(InputError, lambda: decide_good_coloring(big, 'naive'))
    pytest.raises(InputError,
                  lambda: decide_good_coloring(big, 'magic'))
    with pytest.raises(SearchBudgetExceeded):
        decide_good_coloring(big, budget=SearchBudget(node_limit=1))


class _Liar(Clique2Ramsey):
    def check(self, N, witness):
        return False


def test_decide_rechecks_witness():
    with pytest.raises(InvariantError):
        decide_good_coloring(_Liar(3, 3).at(4))


def test_second_path():
    assert second_path(Clique2Ramsey(3, 3).at(6)) == 'naive'
    assert second_path(Clique2Ramsey(3, 4).at(8)) == 'plain'
    assert isinstance(GridRamsey(3).at(2), DecisionProblem)


# ---------------------------------------------------------------------------
# Ramsey values
# ---------------------------------------------------------------------------

def test_grid_ramsey_value():
    res = ramsey_value(GridRamsey(2), 4, cross_check=True)

    assert res.value == 2 and res.exact
    assert res.paths == ('pruned', 'naive')
    assert list(res.witnesses) == [1]
    assert str(res) == '2'


@pytest.mark.parametrize('n', range(2, 7))
def test_clique2_trivial_column(n):
    res = ramsey_value(Clique2Ramsey(2, n), 8, cross_check=True)
    assert res.value == n


def test_clique2_three_three():
    res = ramsey_value(Clique2Ramsey(3, 3), 8, cross_check=True)
    assert res.value == 6
    assert sorted(res.witnesses) == [1, 2, 3, 4, 5]

    res = ramsey_value(Clique2Ramsey(3, 3), 8, path='plain',
                       cross_check=True)
    assert res.value == 6 and res.paths == ('plain', 'pruned')


@pytest.mark.slow
def test_clique2_three_four():
    budget = SearchBudget(node_limit=100_000_000,
                          time_limit_ms=3_600_000)
    res = ramsey_value(Clique2Ramsey(3, 4), 10, cross_check=True,
                       budget=budget, start=8)
    assert res.value == 9
    assert res.paths == ('pruned', 'plain')


@pytest.mark.parametrize('pattern,value', [('K4', 4), ('K4-e', 4),
                                           ('K5', 5)])
def test_hyper_vs_star(pattern, value):
    res = ramsey_value(HyperVsStar(pattern, 2), 6, cross_check=True)
    assert res.value == value


def test_hyper_vs_star_single_leaf():
    # a star with one leaf has no triples, so it is present once N >= 2
    assert ramsey_value(HyperVsStar('K4', 1), 4).value == 2


def test_ramsey_value_lower_only():
    res = ramsey_value(Clique2Ramsey(3, 3), 4)

    assert res.value is None and not res.exact
    assert res.lower == 5
    assert str(res) == '>= 5'
    pytest.raises(InputError, lambda: ramsey_value(Clique2Ramsey(3, 3), 2,
                                                   start=3))
    pytest.raises(InputError, lambda: ramsey_value(Clique2Ramsey(3, 3), 2,
                                                   start=0))


def test_set_coloring():
    res = set_coloring_ramsey(3, 2, 1, 8, cross_check=True)
    assert res.value == ramsey_value(Clique2Ramsey(3, 3), 8).value == 6

    w = res.witnesses[5]
    assert all(len(lab) == 1 for lab in w.labels)
    assert SetColoring(3, 2, 1).check(5, w)


def test_set_coloring_two_of_three():
    # the edges missing a given color must meet every triangle
    res = set_coloring_ramsey(3, 3, 2, 6, cross_check=True)
    assert res.value == 5
    assert SetColoring(3, 3, 2).palettes == ((0, 1), (0, 2), (1, 2))


def test_bound_consistency():
    doc = bound_consistency(6, 3, 2, 1)
    assert doc['log2_bound'] == pytest.approx(1.5)
    assert doc['log2_value'] == pytest.approx(2.584962500721156)
    assert doc['consistent'] is False

    assert bound_consistency(6, 3, 2, 1, C0=2)['consistent'] is True
    assert bound_consistency(6, 3, 3, 1) is None


# ---------------------------------------------------------------------------
# r(K_r, K_n) table
# ---------------------------------------------------------------------------

def test_ramsey2_table(tmp_path):
    cache = tmp_path / 'r2.cache'
    t = ramsey2_table(3, 3, cache=str(cache))

    assert dict(t) == {(2, 2): 2, (2, 3): 3, (3, 2): 3, (3, 3): 6}
    assert t.entries[3, 2].path == 'symmetry'
    assert t.indeterminate() == []

    lines = cache.read_text().splitlines()
    assert lines[0] == '# gridramsey ramsey2 v1'
    assert lines[-1].split()[:3] == ['3', '3', '6']

    again = ramsey2_table(3, 3, cache=str(cache))
    assert dict(again) == dict(t)


def test_ramsey2_cache_indeterminate(tmp_path):
    cache = tmp_path / 'r2.cache'
    cache.write_text('# gridramsey ramsey2 v1\n'
                     '# comment\n'
                     '2 2 2 pruned 10\n'
                     '3 3 ? pruned 10\n')
    with open(cache) as fp:
        t = load_ramsey2_cache(fp)
    assert t.indeterminate() == [(3, 3)]
    assert (3, 3) not in t and len(t) == 1
    pytest.raises(KeyError, lambda: t[3, 3])

    t = ramsey2_table(3, 3, cache=str(cache))
    assert t[3, 3] == 6
    assert t.entries[2, 2].node_limit == 10


def test_ramsey2_cache_dump(tmp_path):
    t = Ramsey2Table([Ramsey2Entry(2, 4, 4, 'pruned', 100),
                      Ramsey2Entry(3, 4, None, 'pruned', 100)])
    path = tmp_path / 'out'
    with open(path, 'w') as fp:
        dump_ramsey2_cache(t, fp)
    assert path.read_text().splitlines()[1:] == ['2 4 4 pruned 100',
                                                 '3 4 ? pruned 100']
    with open(path) as fp:
        assert dict(load_ramsey2_cache(fp)) == {(2, 4): 4}


@pytest.mark.parametrize('text', [
    'nonsense\n',
    '# gridramsey ramsey2 v1\n2 2 2 pruned\n',
    '# gridramsey ramsey2 v1\n2 x 2 pruned 10\n',
])
def test_ramsey2_cache_errors(text):
    pytest.raises(InputError, lambda: load_ramsey2_cache(io.StringIO(text)))


def test_ramsey2_table_errors():
    pytest.raises(InputError, lambda: ramsey2_table(1, 3))

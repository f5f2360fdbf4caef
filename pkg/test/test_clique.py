import itertools
import time

import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers, lists

import gmpy2
from gmpy2 import mpz

from gridramsey import (BudgetTracker, InputError, SearchBudget,
                        SearchBudgetExceeded, find_clique, local_context,
                        max_clique)
from gridramsey.clique import colour_bound, iter_cliques


def adjacency(n, edges):
    adj = [mpz(0)] * n
    for a, b in edges:
        adj[a] = adj[a].bit_set(b)
        adj[b] = adj[b].bit_set(a)
    return adj


def complete(n):
    return adjacency(n, itertools.combinations(range(n), 2))


PENTAGON = adjacency(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])


def test_search_budget():
    b = SearchBudget()
    assert b.node_limit == 5_000_000 and b.time_limit_ms == 600_000

    with local_context(node_limit=10):
        assert SearchBudget().node_limit == 10
    assert SearchBudget(node_limit=3).node_limit == 3
    pytest.raises(InputError, lambda: SearchBudget(node_limit=0))
    with pytest.raises(AttributeError):
        b.node_limit = 5


def test_budget_tracker():
    t = BudgetTracker(SearchBudget(node_limit=3))
    t.tick()
    t.tick(2)
    assert t.nodes == 3
    with pytest.raises(SearchBudgetExceeded) as exc:
        t.tick()
    assert exc.value.nodes == 4
    assert exc.value.elapsed_ms >= 0

    t = BudgetTracker(SearchBudget(time_limit_ms=1))
    time.sleep(0.01)
    with pytest.raises(SearchBudgetExceeded):
        t.tick(1024)


def test_find_clique():
    assert find_clique(complete(5), 5) == (0, 1, 2, 3, 4)
    assert find_clique(complete(5), 3) == (0, 1, 2)
    assert find_clique(complete(5), 3, cand=0b11010) == (1, 3, 4)
    assert find_clique(complete(5), 0) == ()
    assert find_clique(complete(5), 6) is None
    assert find_clique(PENTAGON, 2) == (0, 1)
    assert find_clique(PENTAGON, 3) is None
    assert list(iter_cliques(PENTAGON, 2)) == [(0, 1), (0, 4), (1, 2),
                                               (2, 3), (3, 4)]
    pytest.raises(InputError, lambda: find_clique(PENTAGON, -1))
    pytest.raises(InputError, lambda: list(iter_cliques(PENTAGON, 0)))


def test_find_clique_budget():
    with pytest.raises(SearchBudgetExceeded):
        find_clique(complete(12), 12, budget=SearchBudget(node_limit=5))

    shared = BudgetTracker(SearchBudget(node_limit=100))
    find_clique(complete(6), 3, budget=shared)
    first = shared.nodes
    find_clique(complete(6), 3, budget=shared)
    assert shared.nodes == 2 * first


def test_max_clique():
    assert max_clique(PENTAGON) == (0, 1)
    assert max_clique(complete(4)) == (0, 1, 2, 3)
    assert max_clique([mpz(0)] * 3) == (0,)
    assert max_clique([]) == ()
    assert colour_bound(PENTAGON, gmpy2.bit_mask(5)) == 3


@settings(max_examples=60)
@given(integers(min_value=1, max_value=9),
       lists(integers(min_value=0, max_value=80), max_size=30),
       integers(min_value=1, max_value=5))
def test_find_clique_matches_brute_force(n, raw, k):
    edges = {(a % n, b % n) for a, b in zip(raw[::2], raw[1::2])
             if a % n != b % n}
    adj = adjacency(n, edges)
    expected = None
    for vs in itertools.combinations(range(n), k):
        if all(adj[a].bit_test(b) for a, b in itertools.combinations(vs, 2)):
            expected = vs
            break
    assert find_clique(adj, k) == expected
    assert colour_bound(adj, gmpy2.bit_mask(n)) >= len(max_clique(adj))

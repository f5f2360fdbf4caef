"""Exact clique search on bitset adjacency.

Graphs are sequences ``adj`` of `mpz` masks, ``adj[v]`` being the
neighbourhood of ``v`` (no self loops).  The search walks candidates in
ascending order, so the first clique reported is the lexicographically
smallest one; a greedy colouring of the candidate set bounds each branch.

Every search runs under a `SearchBudget`.  Running out of nodes or time
raises `SearchBudgetExceeded`, which callers must keep distinct from a
negative answer.
"""

import logging
import time

import gmpy2
from gmpy2 import mpz

from .bits import count
from .context import get_context
from .exceptions import InputError, SearchBudgetExceeded

__all__ = ['SearchBudget', 'BudgetTracker', 'find_clique', 'iter_cliques',
           'max_clique', 'colour_bound']

log = logging.getLogger(__name__)


class SearchBudget:
    """SearchBudget(node_limit=None, time_limit_ms=None)

    Limits on branch-and-bound nodes and wall-clock milliseconds.  Missing
    values come from the active context.
    """

    __slots__ = ('node_limit', 'time_limit_ms')

    def __init__(self, node_limit=None, time_limit_ms=None):
        ctx = get_context()
        node_limit = ctx.node_limit if node_limit is None else node_limit
        time_limit_ms = (ctx.time_limit_ms if time_limit_ms is None
                         else time_limit_ms)
        if node_limit <= 0 or time_limit_ms <= 0:
            raise InputError("search budget limits must be positive")
        object.__setattr__(self, 'node_limit', int(node_limit))
        object.__setattr__(self, 'time_limit_ms', time_limit_ms)

    def __setattr__(self, name, value):
        raise AttributeError("SearchBudget is immutable")

    def tracker(self):
        return BudgetTracker(self)

    def __repr__(self):
        return (f'SearchBudget(node_limit={self.node_limit}, '
                f'time_limit_ms={self.time_limit_ms})')


class BudgetTracker:
    """Counts nodes against a budget; one tracker per logical search.

    A tracker can be shared by several sub-searches (one per row, one per
    centre ...) so that the budget covers the whole operation.
    """

    def __init__(self, budget=None):
        self.budget = budget if budget is not None else SearchBudget()
        self.nodes = 0
        self._start = time.perf_counter()
        self._deadline = self._start + self.budget.time_limit_ms / 1000.0

    @property
    def elapsed_ms(self):
        return (time.perf_counter() - self._start) * 1000.0

    def tick(self, n=1):
        self.nodes += n
        if self.nodes > self.budget.node_limit:
            raise SearchBudgetExceeded(
                f"node limit {self.budget.node_limit} exhausted",
                nodes=self.nodes, elapsed_ms=self.elapsed_ms)
        if not self.nodes & 1023 and time.perf_counter() > self._deadline:
            raise SearchBudgetExceeded(
                f"time limit {self.budget.time_limit_ms} ms exhausted",
                nodes=self.nodes, elapsed_ms=self.elapsed_ms)


def _as_tracker(budget):
    if isinstance(budget, BudgetTracker):
        return budget
    return BudgetTracker(budget)


def colour_bound(adj, cand):
    """Number of colours a greedy sequential colouring of *cand* uses.

    This is an upper bound on the clique number of the induced subgraph.
    """
    colours = 0
    rest = mpz(cand)
    while rest:
        colours += 1
        avail = rest
        while avail:
            v = avail.bit_scan1(0)
            rest = rest.bit_clear(v)
            avail = avail.bit_clear(v) & ~adj[v]
    return colours


def find_clique(adj, k, cand=None, budget=None):
    """Return the lexicographically first *k*-clique as a sorted tuple, or None.

    *cand* restricts the search to a vertex mask (all vertices by default).
    *budget* is a `SearchBudget` or a shared `BudgetTracker`.
    """
    if k < 0:
        raise InputError("clique size must be non-negative")
    tracker = _as_tracker(budget)
    if cand is None:
        cand = gmpy2.bit_mask(len(adj))
    cand = mpz(cand)
    if k == 0:
        return ()
    if count(cand) < k:
        return None
    found = _extend(adj, k, (), cand, tracker)
    return None if found is None else tuple(found)


def _extend(adj, k, chosen, cand, tracker):
    tracker.tick()
    need = k - len(chosen)
    if need == 0:
        return chosen
    if count(cand) < need:
        return None
    if need > 2 and colour_bound(adj, cand) < need:
        return None
    while cand:
        if count(cand) < need:
            return None
        v = cand.bit_scan1(0)
        cand = cand.bit_clear(v)
        found = _extend(adj, k, chosen + (v,), cand & adj[v], tracker)
        if found is not None:
            return found
    return None


def iter_cliques(adj, k, cand=None, budget=None):
    """Yield every *k*-clique inside *cand* in lexicographic order."""
    if k < 1:
        raise InputError("clique size must be positive")
    tracker = _as_tracker(budget)
    if cand is None:
        cand = gmpy2.bit_mask(len(adj))
    yield from _walk(adj, k, (), mpz(cand), tracker)


def _walk(adj, k, chosen, cand, tracker):
    tracker.tick()
    need = k - len(chosen)
    if need == 0:
        yield chosen
        return
    while cand and count(cand) >= need:
        v = cand.bit_scan1(0)
        cand = cand.bit_clear(v)
        yield from _walk(adj, k, chosen + (v,), cand & adj[v], tracker)


def max_clique(adj, cand=None, budget=None):
    """Return a maximum clique (lexicographically first among maximum ones)."""
    tracker = _as_tracker(budget)
    if cand is None:
        cand = gmpy2.bit_mask(len(adj))
    cand = mpz(cand)
    best = ()
    size = colour_bound(adj, cand)
    # descend from the colouring bound; the first size that succeeds is optimal
    while size > 0:
        found = find_clique(adj, size, cand, tracker)
        if found is not None:
            best = found
            break
        size -= 1
    log.debug("max clique of size %d after %d nodes", len(best),
              tracker.nodes)
    return best

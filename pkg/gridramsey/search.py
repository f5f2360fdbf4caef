"""Exact Ramsey values of small instances.

Each problem family describes, for a size ``N``, a finite-domain constraint
problem: one variable per edge (or triple) of the host structure, and one
constraint per copy of a forbidden structure.  A constraint lists
``(variable, mask)`` pairs and is violated when every listed variable holds
a value whose bit is set in its mask.  A *good* coloring violates no
constraint; the Ramsey value is the least ``N`` without one.

Three code paths decide an instance:

``'naive'``
    enumerate every coloring (at most ``2**22`` of them);
``'pruned'``
    backtracking with counter-based unit propagation and lex-leader pruning
    under transpositions of vertices (rows and columns for grids);
``'plain'``
    the same backtracking with symmetry pruning off and the variable order
    reversed, used as the second opinion when enumeration is infeasible.
"""

import collections.abc
import dataclasses
import itertools
import logging
import math
import os

import gmpy2
from gmpy2 import mpz

from .bits import iter_bits
from .bounds import set_coloring_log2_bound
from .clique import BudgetTracker, SearchBudget, find_clique
from .core import BLUE, RED, GridBuilder, ThreeGraphColoring, pair_rank
from .exceptions import InputError, InvariantError, SearchBudgetExceeded
from .verify import (find_blue_star, find_mono_clique_in_grid, find_red_k4,
                     find_red_k4_minus_e, find_red_k5, find_red_rectangle)

__all__ = ['Solver', 'Encoding', 'EdgeColoring', 'GridRamsey',
           'Clique2Ramsey', 'SetColoring', 'HyperVsStar', 'DecisionProblem',
           'DecisionResult', 'decide_good_coloring', 'RamseyValue',
           'ramsey_value', 'set_coloring_ramsey', 'bound_consistency',
           'Ramsey2Entry', 'Ramsey2Table', 'ramsey2_table',
           'load_ramsey2_cache', 'dump_ramsey2_cache', 'NAIVE_LIMIT', 'PATHS']

log = logging.getLogger(__name__)

NAIVE_LIMIT = 1 << 22
PATHS = ('naive', 'pruned', 'plain')

_VALUE = 0
_DOMAIN = 1

_R = 1 << RED
_B = 1 << BLUE


# ---------------------------------------------------------------------------
# the backtracking engine
# ---------------------------------------------------------------------------

class Solver:
    """Solver(sizes, constraints, order=None, symmetries=(), budget=None)

    Variable ``v`` ranges over ``range(sizes[v])``; *constraints* are
    sequences of ``(variable, value_mask)`` pairs as described in the module
    docstring.  *order* is the static branching order, which is also the
    order used to compare assignments lexicographically.  Each entry of
    *symmetries* is a permutation of the variables that maps the constraint
    set onto itself; assignments that are not lexicographically smallest
    under one of them are pruned.

    A solver is single-use: call `solve` once.
    """

    def __init__(self, sizes, constraints, order=None, symmetries=(),
                 budget=None):
        self.sizes = tuple(int(s) for s in sizes)
        n = len(self.sizes)
        if any(s < 1 for s in self.sizes):
            raise InputError("every variable needs a non-empty domain")
        self.order = tuple(range(n)) if order is None else tuple(order)
        if sorted(self.order) != list(range(n)):
            raise InputError("order is not a permutation of the variables")
        self.symmetries = tuple(tuple(p) for p in symmetries)
        self.tracker = (budget if isinstance(budget, BudgetTracker)
                        else BudgetTracker(budget))
        self.dom = [int(gmpy2.bit_mask(s)) for s in self.sizes]
        self.value = [None] * n
        self.occ = [[] for _ in range(n)]
        self.cons = []
        self.trail = []
        self.empty = False
        for c in constraints:
            c = tuple((v, int(m) & self.dom[v]) for v, m in c)
            if any(m == 0 for _, m in c):
                continue
            if not c:
                self.empty = True
                continue
            idx = len(self.cons)
            self.cons.append(c)
            for v, m in c:
                self.occ[v].append((idx, m))
        self.bad = [0] * len(self.cons)
        self.dead = [0] * len(self.cons)

    @property
    def nodes(self):
        return self.tracker.nodes

    def solve(self):
        """Return a list of values satisfying every constraint, or None."""
        if self.empty:
            return None
        pending = []
        for c in self.cons:
            if len(c) == 1:
                v, m = c[0]
                if not self._restrict(v, m, pending):
                    return None
        queued = {v for v, _ in pending}
        for v, d in enumerate(self.dom):
            if v not in queued and gmpy2.popcount(d) == 1:
                pending.append((v, gmpy2.bit_scan1(d)))
        if not self._assign(pending) or not self._symmetry_ok():
            return None
        return self._search()

    def _search(self):
        self.tracker.tick()
        v = self._next_var()
        if v is None:
            return list(self.value)
        for val in tuple(iter_bits(self.dom[v])):
            mark = len(self.trail)
            if self._assign([(v, val)]) and self._symmetry_ok():
                found = self._search()
                if found is not None:
                    return found
            self._undo(mark)
        return None

    def _next_var(self):
        value = self.value
        for v in self.order:
            if value[v] is None:
                return v
        return None

    def _restrict(self, v, mask, pending):
        old = self.dom[v]
        new = old & ~mask
        if new == old:
            return True
        self.trail.append((_DOMAIN, v, old))
        self.dom[v] = new
        if not new:
            return False
        if self.value[v] is None and gmpy2.popcount(new) == 1:
            pending.append((v, gmpy2.bit_scan1(new)))
        return True

    def _assign(self, pending):
        value, dom, bad, dead = self.value, self.dom, self.bad, self.dead
        while pending:
            v, val = pending.pop()
            cur = value[v]
            if cur is not None:
                if cur != val:
                    return False
                continue
            if not dom[v] >> val & 1:
                return False
            value[v] = val
            self.trail.append((_VALUE, v, val))
            bit = 1 << val
            ok = True
            for c, mask in self.occ[v]:
                if not mask & bit:
                    dead[c] += 1
                    continue
                bad[c] += 1
                if dead[c] or not ok:
                    continue
                left = len(self.cons[c]) - bad[c]
                if left == 0:
                    ok = False
                elif left == 1:
                    # one unassigned variable left: it must leave its mask
                    for u, m in self.cons[c]:
                        if value[u] is None:
                            ok = self._restrict(u, m, pending)
                            break
            if not ok:
                return False
        return True

    def _undo(self, mark):
        trail = self.trail
        while len(trail) > mark:
            kind, v, x = trail.pop()
            if kind == _VALUE:
                bit = 1 << x
                for c, mask in self.occ[v]:
                    if mask & bit:
                        self.bad[c] -= 1
                    else:
                        self.dead[c] -= 1
                self.value[v] = None
            else:
                self.dom[v] = x

    def _symmetry_ok(self):
        value = self.value
        for perm in self.symmetries:
            for v in self.order:
                a = value[v]
                b = value[perm[v]]
                if a is None or b is None or a < b:
                    break
                if a > b:
                    return False
        return True


def _naive(enc, tracker):
    sizes = enc.sizes
    n = len(sizes)
    if all(s == 2 for s in sizes):
        terms = []
        for c in enc.constraints:
            care = want = 0
            for v, m in c:
                m &= 3
                if m == 0:
                    break
                if m == 3:
                    continue
                care |= 1 << v
                if m & 2:
                    want |= 1 << v
            else:
                terms.append((care, want))
        terms.sort(key=lambda t: gmpy2.popcount(t[0]))
        for x in range(1 << n):
            tracker.tick()
            for care, want in terms:
                if x & care == want:
                    break
            else:
                return [x >> v & 1 for v in range(n)]
        return None
    for values in itertools.product(*(range(s) for s in sizes)):
        tracker.tick()
        for c in enc.constraints:
            if all(m >> values[v] & 1 for v, m in c):
                break
        else:
            return list(values)
    return None


# ---------------------------------------------------------------------------
# problem families
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class Encoding:
    """Constraint form of one instance; ``variables[v]`` labels variable v."""

    variables: tuple
    sizes: tuple
    constraints: tuple
    symmetries: tuple

    @property
    def space(self):
        """Number of complete assignments."""
        return math.prod(self.sizes)


class EdgeColoring:
    """Labels on the pairs of K_N, indexed by colex pair rank.

    A label is a single color, or a frozenset of colors for set colorings.
    """

    __slots__ = ('vertex_count', 'labels')

    def __init__(self, N, labels):
        labels = tuple(labels)
        if len(labels) != N * (N - 1) // 2:
            raise InputError("one label per pair of K_N required")
        self.vertex_count = N
        self.labels = labels

    def label(self, i, j):
        return self.labels[pair_rank(i, j)]

    def color_class(self, color):
        """Adjacency masks of the pairs whose label is or contains *color*."""
        N = self.vertex_count
        adj = [mpz(0) for _ in range(N)]
        for j in range(N):
            for i in range(j):
                lab = self.labels[pair_rank(i, j)]
                hit = color in lab if isinstance(lab, frozenset) else lab == color
                if hit:
                    adj[i] = adj[i].bit_set(j)
                    adj[j] = adj[j].bit_set(i)
        return adj

    def __eq__(self, other):
        if not isinstance(other, EdgeColoring):
            return NotImplemented
        return (self.vertex_count, self.labels) == (other.vertex_count,
                                                    other.labels)

    def __hash__(self):
        return hash((self.vertex_count, self.labels))

    def __repr__(self):
        return f'EdgeColoring({self.vertex_count}, {self.labels!r})'


def _pairs(N):
    return [(i, j) for j in range(N) for i in range(j)]


def _vertex_swaps(items, index, relabel, N):
    """Variable permutations induced by the transpositions of ``range(N)``."""
    perms = []
    for a, b in itertools.combinations(range(N), 2):
        swap = {a: b, b: a}
        perms.append(tuple(index[relabel(it, lambda v: swap.get(v, v))]
                           for it in items))
    return perms


def _sorted_relabel(item, f):
    return tuple(sorted(f(v) for v in item))


class _Family:
    """Shared plumbing: ``at(N)`` binds a size."""

    name = ''

    def at(self, N):
        return DecisionProblem(self, N)


@dataclasses.dataclass(frozen=True)
class GridRamsey(_Family):
    """Red rectangle or blue K_n in a 2-coloring of the N x N grid."""

    n: int
    name = 'gr'

    def __post_init__(self):
        if self.n < 1:
            raise InputError("n must be at least 1")

    def encode(self, N):
        edges = [('h', x, x2, y) for y in range(1, N + 1)
                 for x, x2 in itertools.combinations(range(1, N + 1), 2)]
        edges += [('v', x, y, y2) for x in range(1, N + 1)
                  for y, y2 in itertools.combinations(range(1, N + 1), 2)]
        # (largest coordinate, row-major)
        edges.sort(key=lambda e: ((max(e[2], e[3]), e[3], e[1], e[2], 0)
                                  if e[0] == 'h' else
                                  (max(e[1], e[3]), e[2], e[1], e[3], 1)))
        index = {e: i for i, e in enumerate(edges)}
        cons = []
        for x, x2 in itertools.combinations(range(1, N + 1), 2):
            for y, y2 in itertools.combinations(range(1, N + 1), 2):
                cons.append(((index['h', x, x2, y], _R),
                             (index['h', x, x2, y2], _R),
                             (index['v', x, y, y2], _R),
                             (index['v', x2, y, y2], _R)))
        for line in range(1, N + 1):
            for S in itertools.combinations(range(1, N + 1), self.n):
                pairs = list(itertools.combinations(S, 2))
                cons.append(tuple((index['h', a, b, line], _B)
                                  for a, b in pairs))
                cons.append(tuple((index['v', line, a, b], _B)
                                  for a, b in pairs))

        def swap_cols(e, f):
            kind, p, q, r = e
            if kind == 'h':
                p, q = sorted((f(p - 1) + 1, f(q - 1) + 1))
                return kind, p, q, r
            return kind, f(p - 1) + 1, q, r

        def swap_rows(e, f):
            kind, p, q, r = e
            if kind == 'h':
                return kind, p, q, f(r - 1) + 1
            q, r = sorted((f(q - 1) + 1, f(r - 1) + 1))
            return kind, p, q, r

        syms = (_vertex_swaps(edges, index, swap_cols, N)
                + _vertex_swaps(edges, index, swap_rows, N))
        return Encoding(tuple(edges), (2,) * len(edges), tuple(cons),
                        tuple(syms))

    def witness(self, N, enc, values):
        b = GridBuilder(N, N)
        for e, val in zip(enc.variables, values):
            if val == RED:
                b.set_edge(e, RED)
        return b.freeze()

    def check(self, N, witness):
        return (find_red_rectangle(witness) is None
                and find_mono_clique_in_grid(witness, BLUE, self.n) is None)


@dataclasses.dataclass(frozen=True)
class Clique2Ramsey(_Family):
    """Red K_r or blue K_n in a 2-coloring of K_N."""

    r: int
    n: int
    name = 'r2'

    def __post_init__(self):
        if self.r < 1 or self.n < 1:
            raise InputError("r and n must be at least 1")

    def encode(self, N):
        pairs = _pairs(N)
        index = {p: i for i, p in enumerate(pairs)}
        cons = []
        for size, mask in ((self.r, _R), (self.n, _B)):
            for S in itertools.combinations(range(N), size):
                cons.append(tuple((index[p], mask)
                                  for p in itertools.combinations(S, 2)))
        syms = _vertex_swaps(pairs, index, _sorted_relabel, N)
        return Encoding(tuple(pairs), (2,) * len(pairs), tuple(cons),
                        tuple(syms))

    def witness(self, N, enc, values):
        return EdgeColoring(N, values)

    def check(self, N, witness):
        return (find_clique(witness.color_class(RED), self.r) is None
                and find_clique(witness.color_class(BLUE), self.n) is None)


@dataclasses.dataclass(frozen=True)
class SetColoring(_Family):
    """Each edge of K_N gets s of r colors; forbid a K_n inside one color."""

    n: int
    r: int
    s: int
    name = 'setcolor'

    def __post_init__(self):
        if not self.r > self.s >= 1:
            raise InputError("set coloring needs r > s >= 1")
        if self.n < 1:
            raise InputError("n must be at least 1")

    @property
    def palettes(self):
        return tuple(itertools.combinations(range(self.r), self.s))

    def encode(self, N):
        pairs = _pairs(N)
        index = {p: i for i, p in enumerate(pairs)}
        pal = self.palettes
        cons = []
        for c in range(self.r):
            mask = sum(1 << i for i, p in enumerate(pal) if c in p)
            for S in itertools.combinations(range(N), self.n):
                cons.append(tuple((index[p], mask)
                                  for p in itertools.combinations(S, 2)))
        syms = _vertex_swaps(pairs, index, _sorted_relabel, N)
        return Encoding(tuple(pairs), (len(pal),) * len(pairs), tuple(cons),
                        tuple(syms))

    def witness(self, N, enc, values):
        pal = self.palettes
        return EdgeColoring(N, [frozenset(pal[v]) for v in values])

    def check(self, N, witness):
        return all(find_clique(witness.color_class(c), self.n) is None
                   for c in range(self.r))


_PATTERNS = {
    'K4': (4, find_red_k4),
    'K5': (5, find_red_k5),
    'K4-e': (4, find_red_k4_minus_e),
}


@dataclasses.dataclass(frozen=True)
class HyperVsStar(_Family):
    """Red *pattern* or blue star S_n in a 2-coloring of K_N^(3).

    *pattern* is ``'K4'``, ``'K5'`` or ``'K4-e'`` (a 4-set with at least
    three red triples).
    """

    pattern: str
    n: int
    name = 'hyperstar'

    def __post_init__(self):
        if self.pattern not in _PATTERNS:
            raise InputError(f"pattern must be one of {sorted(_PATTERNS)}")
        if self.n < 1:
            raise InputError("n must be at least 1")

    def encode(self, N):
        triples = [(i, j, k) for k in range(N) for j in range(k)
                   for i in range(j)]
        index = {t: r for r, t in enumerate(triples)}
        size, _ = _PATTERNS[self.pattern]
        cons = []
        for Q in itertools.combinations(range(N), size):
            inside = [index[t] for t in itertools.combinations(Q, 3)]
            if self.pattern == 'K4-e':
                for three in itertools.combinations(inside, 3):
                    cons.append(tuple((v, _R) for v in three))
            else:
                cons.append(tuple((v, _R) for v in inside))
        for u in range(N):
            rest = [v for v in range(N) if v != u]
            for L in itertools.combinations(rest, self.n):
                cons.append(tuple((index[tuple(sorted((u, a, b)))], _B)
                                  for a, b in itertools.combinations(L, 2)))
        syms = _vertex_swaps(triples, index, _sorted_relabel, N)
        return Encoding(tuple(triples), (2,) * len(triples), tuple(cons),
                        tuple(syms))

    def witness(self, N, enc, values):
        bits = mpz(0)
        for rank, val in enumerate(values):
            if val == RED:
                bits = bits.bit_set(rank)
        return ThreeGraphColoring.from_bits(N, bits)

    def check(self, N, witness):
        _, finder = _PATTERNS[self.pattern]
        return finder(witness) is None and find_blue_star(witness,
                                                          self.n) is None


@dataclasses.dataclass(frozen=True)
class DecisionProblem:
    """One family at one size: is there a good coloring at ``N``?"""

    family: _Family
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise InputError("N must be positive")

    def encode(self):
        return self.family.encode(self.N)


@dataclasses.dataclass(frozen=True)
class DecisionResult:
    """``status`` is ``'sat'`` (``witness`` is a good coloring) or ``'unsat'``."""

    problem: DecisionProblem
    status: str
    witness: object
    path: str
    nodes: int
    elapsed_ms: float

    @property
    def sat(self):
        return self.status == 'sat'


def _solve(enc, path, tracker):
    if path == 'naive':
        if enc.space > NAIVE_LIMIT:
            raise InputError(
                f"naive enumeration of {enc.space} colorings is infeasible")
        return _naive(enc, tracker)
    if path == 'pruned':
        return Solver(enc.sizes, enc.constraints, symmetries=enc.symmetries,
                      budget=tracker).solve()
    if path == 'plain':
        order = range(len(enc.sizes) - 1, -1, -1)
        return Solver(enc.sizes, enc.constraints, order=order,
                      budget=tracker).solve()
    raise InputError(f"path must be one of {PATHS}")


def decide_good_coloring(problem, path='pruned', budget=None):
    """Decide *problem* exactly and return a `DecisionResult`.

    Running out of budget raises `SearchBudgetExceeded`.  A witness that
    fails re-verification raises `InvariantError`.
    """
    tracker = budget if isinstance(budget, BudgetTracker) else BudgetTracker(budget)
    start_nodes = tracker.nodes
    enc = problem.encode()
    values = _solve(enc, path, tracker)
    nodes = tracker.nodes - start_nodes
    if values is None:
        log.debug("%s at N=%d: unsat via %s (%d nodes)", problem.family,
                  problem.N, path, nodes)
        return DecisionResult(problem, 'unsat', None, path, nodes,
                              tracker.elapsed_ms)
    witness = problem.family.witness(problem.N, enc, values)
    if not problem.family.check(problem.N, witness):
        raise InvariantError(f"{path} witness for {problem} fails "
                             f"re-verification")
    log.debug("%s at N=%d: sat via %s (%d nodes)", problem.family,
              problem.N, path, nodes)
    return DecisionResult(problem, 'sat', witness, path, nodes,
                          tracker.elapsed_ms)


def second_path(problem):
    """The independent path used to cross-check ``'pruned'``."""
    if problem.encode().space <= NAIVE_LIMIT:
        return 'naive'
    return 'plain'


# ---------------------------------------------------------------------------
# Ramsey values
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class RamseyValue:
    """Least N without a good coloring, or only ``lower`` when none was found.

    ``witnesses[N]`` is the good coloring found at each size below the
    value.
    """

    family: _Family
    value: int
    lower: int
    paths: tuple
    nodes: int
    witnesses: dict = dataclasses.field(default_factory=dict, repr=False)

    @property
    def exact(self):
        return self.value is not None

    def __str__(self):
        return str(self.value) if self.exact else f'>= {self.lower}'


def ramsey_value(family, nmax, path='pruned', cross_check=False,
                 budget=None, start=1):
    """Scan ``N = start .. nmax`` for the first size without a good coloring.

    *start* lets the caller skip sizes already known to admit a good
    coloring.  With *cross_check* every size is also decided on
    `second_path` and any disagreement raises `InvariantError`.
    """
    if nmax < start or start < 1:
        raise InputError("need 1 <= start <= nmax")
    if isinstance(budget, BudgetTracker):
        budget = budget.budget
    budget = budget if budget is not None else SearchBudget()
    paths = (path,)
    nodes = 0
    witnesses = {}
    for N in range(start, nmax + 1):
        p = family.at(N)
        res = decide_good_coloring(p, path, budget.tracker())
        nodes += res.nodes
        if cross_check:
            other = second_path(p) if path == 'pruned' else 'pruned'
            paths = (path, other)
            res2 = decide_good_coloring(p, other, budget.tracker())
            nodes += res2.nodes
            if res2.status != res.status:
                raise InvariantError(
                    f"{family} at N={N}: {path} says {res.status}, "
                    f"{other} says {res2.status}")
        if not res.sat:
            log.info("%s = %d (%s)", family, N, '/'.join(paths))
            return RamseyValue(family, N, N, paths, nodes, witnesses)
        witnesses[N] = res.witness
    log.info("%s >= %d", family, nmax + 1)
    return RamseyValue(family, None, nmax + 1, paths, nodes, witnesses)


def set_coloring_ramsey(n, r, s, nmax, path='pruned', cross_check=False,
                        budget=None):
    """``R(n; r, s)`` by exact search; only a lower bound past *nmax*."""
    return ramsey_value(SetColoring(n, r, s), nmax, path, cross_check,
                        budget)


def bound_consistency(value, n, r, s, C0=1):
    """Compare an exact ``R(n; r, s)`` with the set-coloring upper bound.

    Returns a dict with both log2 values and ``consistent`` (value at most
    the bound); None if the bound does not apply to (n, r, s).
    """
    try:
        bound = set_coloring_log2_bound(n, r, s, C0)
    except InputError:
        return None
    lv = gmpy2.log2(gmpy2.mpfr(value))
    return {'value': value, 'log2_value': float(lv),
            'log2_bound': float(bound), 'consistent': bool(lv <= bound)}


# ---------------------------------------------------------------------------
# r(K_r, K_n) table and its cache
# ---------------------------------------------------------------------------

_CACHE_HEADER = '# gridramsey ramsey2 v1'


@dataclasses.dataclass(frozen=True)
class Ramsey2Entry:
    """``value`` None means the search ran out of budget."""

    r: int
    n: int
    value: int
    path: str
    node_limit: int


class Ramsey2Table(collections.abc.Mapping):
    """Known values ``{(r, n): r(K_r, K_n)}``; indeterminate entries are
    kept in `entries` but are not keys."""

    def __init__(self, entries=()):
        self.entries = {(e.r, e.n): e for e in entries}

    def __getitem__(self, key):
        e = self.entries[key]
        if e.value is None:
            raise KeyError(key)
        return e.value

    def __iter__(self):
        return (k for k, e in sorted(self.entries.items())
                if e.value is not None)

    def __len__(self):
        return sum(1 for e in self.entries.values() if e.value is not None)

    def indeterminate(self):
        return sorted(k for k, e in self.entries.items() if e.value is None)


def dump_ramsey2_cache(table, fp):
    fp.write(_CACHE_HEADER + '\n')
    for (r, n), e in sorted(table.entries.items()):
        value = '?' if e.value is None else e.value
        fp.write(f'{r} {n} {value} {e.path} {e.node_limit}\n')


def load_ramsey2_cache(fp):
    """Read a cache written by `dump_ramsey2_cache`."""
    lines = iter(fp)
    head = next(lines, '').strip()
    if head != _CACHE_HEADER:
        raise InputError(f"not a ramsey2 cache: {head!r}")
    entries = []
    for lineno, line in enumerate(lines, 2):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        fields = line.split()
        if len(fields) != 5:
            raise InputError(f"line {lineno}: expected 5 fields")
        try:
            r, n, limit = int(fields[0]), int(fields[1]), int(fields[4])
            value = None if fields[2] == '?' else int(fields[2])
        except ValueError:
            raise InputError(f"line {lineno}: malformed entry") from None
        entries.append(Ramsey2Entry(r, n, value, fields[3], limit))
    return Ramsey2Table(entries)


def ramsey2_table(max_r, max_n, cache=None, path='pruned', budget=None):
    """Compute ``r(K_r, K_n)`` for ``2 <= r <= max_r``, ``2 <= n <= max_n``.

    Each entry is scanned from the largest value already known for
    ``(r-1, n)`` or ``(r, n-1)`` up to ``C(r+n-2, r-1)``.  Entries that run
    out of budget are recorded as indeterminate.  *cache* names a file that
    is read when present and rewritten afterwards.
    """
    if max_r < 2 or max_n < 2:
        raise InputError("max_r and max_n must be at least 2")
    if isinstance(budget, BudgetTracker):
        budget = budget.budget
    budget = budget if budget is not None else SearchBudget()
    known = {}
    if cache is not None and os.path.exists(cache):
        with open(cache) as fp:
            known = dict(load_ramsey2_cache(fp).entries)
    out = {}
    for r in range(2, max_r + 1):
        for n in range(2, max_n + 1):
            old = known.get((r, n))
            if old is not None and old.value is not None:
                out[r, n] = old
                continue
            if r > n and (n, r) in out and out[n, r].value is not None:
                out[r, n] = Ramsey2Entry(r, n, out[n, r].value, 'symmetry',
                                         out[n, r].node_limit)
                continue
            start = max([1] + [out[k].value for k in ((r - 1, n), (r, n - 1))
                               if k in out and out[k].value is not None])
            top = int(gmpy2.comb(r + n - 2, r - 1))
            try:
                res = ramsey_value(Clique2Ramsey(r, n), top, path,
                                   budget=budget, start=start)
                value = res.value
            except SearchBudgetExceeded as exc:
                log.warning("r(%d, %d) indeterminate: %s", r, n, exc)
                value = None
            out[r, n] = Ramsey2Entry(r, n, value, path, budget.node_limit)
    table = Ramsey2Table(out.values())
    if cache is not None:
        with open(cache, 'w') as fp:
            dump_ramsey2_cache(table, fp)
    return table

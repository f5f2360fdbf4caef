"""Bit-layered 3-graph coloring without a red K4^(3).

Vertices are ``0 .. N-1`` with ``N = 2^t``.  The level of a triple is one
plus the highest bit on which its vertices do not all agree; level ``l``
triples split into two vertices on one side of bit ``l-1`` and one on the
other.  Vertices with a 0 on that bit play the grid's columns, vertices with
a 1 play its rows, and each level is colored from an independent
rectangle-free grid subgraph.  The union may contain red K4^(3); in every
such clique the triple of least level is *marked* and turned blue.

A rectangle in a layer gives a red K4^(3) whose four triples all have that
layer's level.  Only supplied layers may contain one; such a clique marks
its colex-smallest triple and is counted as ambiguous.
"""

import dataclasses
import itertools
import logging

import gmpy2
from gmpy2 import mpz

from .bits import above, iter_bits
from .construct import build_grid_lower
from .context import get_context
from .core import ThreeGraphBuilder, ThreeGraphColoring, triple_rank
from .exceptions import InputError, InvariantError
from .streams import derive_seed
from .verify import find_red_rectangle

__all__ = ['triple_level', 'neighbourhood', 'layer_coloring', 'LayerState',
           'build_layered', 'MarkingReport', 'marking_report']

log = logging.getLogger(__name__)


def triple_level(i, j, k):
    """Level of the triple {i, j, k}: highest disagreeing bit, 1-based."""
    if i == j or j == k or i == k:
        raise InputError("triple has repeated elements")
    return int((i ^ j) | (i ^ k)).bit_length()


def neighbourhood(v, level, N=None):
    """Mask of the vertices that disagree with *v* on bit ``level-1`` and
    agree with it on every higher bit."""
    if level < 1:
        raise InputError("levels start at 1")
    b = level - 1
    start = ((v >> b) ^ 1) << b
    if N is not None and start >= N:
        return mpz(0)
    return gmpy2.bit_mask(1 << b) << start


def _power_of_two(N):
    if N < 2 or N & (N - 1):
        raise InputError(f"N = {N} is not a power of two >= 2")
    return N.bit_length() - 1


def layer_coloring(h, level):
    """Color the level-*level* triples from the grid subgraph *h*.

    A vertical triple {x, y, y2} is red iff (x, y) ~ (x, y2) is in *h*; a
    horizontal triple {x, x2, y} is red iff (x, y) ~ (x2, y) is in *h*.
    Edges of *h* whose vertices do not form a level-*level* triple are
    ignored.
    """
    N = h.width
    b = level - 1
    out = ThreeGraphBuilder(N)

    def ok(zeros, ones):
        top = zeros[0] >> (b + 1)
        return (all(not (z >> b) & 1 and z >> (b + 1) == top for z in zeros)
                and all((o >> b) & 1 and o >> (b + 1) == top for o in ones))

    for kind, p, q, r in h.red_edges():
        if kind == 'h':
            x, x2, y = p - 1, q - 1, r - 1
            if ok((x, x2), (y,)):
                out.set((x, x2, y))
        else:
            x, y, y2 = p - 1, q - 1, r - 1
            if ok((x,), (y, y2)):
                out.set((x, y, y2))
    return out.freeze()


@dataclasses.dataclass(frozen=True)
class LayerState:
    """Everything `build_layered` produced on the way to its coloring.

    ``marked`` maps the colex rank of each marked triple to the set of
    levels that marked it.
    """

    N: int
    t: int
    layers: tuple
    chi_layers: tuple
    chi_prime: ThreeGraphColoring
    marked: dict
    ambiguous: int = 0
    reports: tuple = ()

    def layer(self, level):
        return self.layers[level - 1]

    def chi_level(self, level):
        return self.chi_layers[level - 1]

    def marked_levels(self, triple):
        return self.marked.get(triple_rank(self.N, triple), frozenset())

    def to_json(self):
        return {'N': self.N, 't': self.t,
                'red_prime': self.chi_prime.red_count(),
                'marked': len(self.marked),
                'ambiguous': self.ambiguous,
                'layers': [r.to_json() for r in self.reports]}


def build_layered(params, seed, layers=None):
    """Return ``(chi, state)`` for ``N = params.N = 2^t``.

    *layers*, if given, supplies the t grid subgraphs instead of building
    them with `build_grid_lower` from per-layer seeds.
    """
    N = params.N
    t = _power_of_two(N)
    reports = []
    degenerate = frozenset()
    if layers is None:
        built = []
        for level in range(1, t + 1):
            res = build_grid_lower(params, derive_seed(seed, 'layer', level))
            built.append(res.h)
            reports.append(res.report)
        layers = built
    else:
        layers = list(layers)
        if len(layers) != t:
            raise InputError(f"expected {t} layers, got {len(layers)}")
        for h in layers:
            if h.width != N or h.height != N:
                raise InputError("every layer must be an N x N grid")
        degenerate = frozenset(level for level, h in enumerate(layers, 1)
                               if find_red_rectangle(h) is not None)
    chi_layers = [layer_coloring(h, level)
                  for level, h in enumerate(layers, 1)]
    red = mpz(0)
    for c in chi_layers:
        red |= c.red
    chi_prime = ThreeGraphColoring(N, red)
    marked, ambiguous = _mark(chi_prime, degenerate,
                              get_context().strict_marking)
    chi = chi_prime.recolor(blue=marked)
    log.info("layered coloring N=%d: %d red before marking, %d marked",
             N, chi_prime.red_count(), len(marked))
    state = LayerState(N, t, tuple(layers), tuple(chi_layers), chi_prime,
                       {r: frozenset(v) for r, v in marked.items()},
                       ambiguous, tuple(reports))
    return chi, state


def _mark(chi_prime, degenerate, strict):
    """Mark the least-level triple of every red K4 of *chi_prime*.

    Returns the marks and the number of cliques whose least level was
    shared by several triples.  Sharing is accepted at the *degenerate*
    levels, whose layers contain a rectangle; elsewhere it raises when
    *strict* is set.
    """
    L = chi_prime.pair_links
    N = chi_prime.vertex_count
    marked = {}
    ambiguous = 0
    for a in range(N):
        for b in range(a + 1, N):
            lab = L[a][b] & above(b)
            for c in iter_bits(lab):
                for d in iter_bits(lab & L[a][c] & L[b][c] & above(c)):
                    # combinations of a sorted 4-set come out in colex order
                    triples = list(itertools.combinations((a, b, c, d), 3))
                    levels = [triple_level(*tr) for tr in triples]
                    low = min(levels)
                    at_low = [k for k, lv in enumerate(levels) if lv == low]
                    if len(at_low) > 1:
                        if strict and low not in degenerate:
                            raise InvariantError(
                                f"red K4 on {(a, b, c, d)} has {len(at_low)} "
                                f"triples of least level {low}")
                        ambiguous += 1
                    pick = at_low[0]
                    rest = {lv for k, lv in enumerate(levels) if k != pick}
                    if len(rest) != 1 and strict:
                        raise InvariantError(
                            f"companions of the marked triple in "
                            f"{(a, b, c, d)} span levels {sorted(rest)}")
                    rank = triple_rank(N, triples[pick])
                    marked.setdefault(rank, set()).add(max(rest))
    return marked, ambiguous


@dataclasses.dataclass(frozen=True)
class MarkingReport:
    """Marked graphs seen from centre ``u`` on the leaves ``N_level(u)``.

    ``graphs[l2]`` is the edge list of the level-``l2`` marked graph and
    ``union`` the edge set of their union.
    """

    u: int
    level: int
    leaves: tuple
    graphs: dict
    union: frozenset
    expected_density: float

    @property
    def density(self):
        n = len(self.leaves)
        pairs = n * (n - 1) // 2
        return len(self.union) / pairs if pairs else 0.0

    def to_json(self):
        return {'u': self.u, 'level': self.level, 'leaves': len(self.leaves),
                'edges': {str(k): len(v) for k, v in self.graphs.items()},
                'union': len(self.union), 'density': self.density,
                'expected_density': self.expected_density}


def marking_report(state, u, level, p_union=None):
    """Build the marked graphs on the leaves ``N_level(u)`` for each higher level.

    Leaves v, v2 are joined at level l2 iff some w makes {w, u, v},
    {w, u, v2} and {w, v, v2} all red in the level-l2 coloring.
    *p_union*, when given, sets ``expected_density = t·p_union``.
    """
    if not 0 <= u < state.N:
        raise InputError(f"vertex {u} outside range({state.N})")
    if not 1 <= level <= state.t:
        raise InputError(f"level {level} outside 1..{state.t}")
    leaves = tuple(iter_bits(neighbourhood(u, level, state.N)))
    graphs = {}
    union = set()
    for l2 in range(level + 1, state.t + 1):
        L = state.chi_level(l2).pair_links
        Lu = L[u]
        edges = []
        for v, v2 in itertools.combinations(leaves, 2):
            if Lu[v] & Lu[v2] & L[v][v2]:
                edges.append((v, v2))
        graphs[l2] = edges
        union.update(edges)
    expected = state.t * p_union if p_union is not None else float('nan')
    return MarkingReport(u, level, leaves, graphs, frozenset(union),
                         expected)

"""Grids, 3-graph colorings and the grid / bipartite 3-graph correspondence.

Conventions
-----------

* Colors are ``RED = 1`` and ``BLUE = 0`` everywhere.
* Grid vertices are 1-indexed pairs ``(x, y)``: ``x`` is the column
  (``1 <= x <= width``) and ``y`` the row (``1 <= y <= height``).  Two
  vertices are adjacent iff they share exactly one coordinate.
* 3-graph vertices are ``0 .. N-1``.  Triples are stored in a bitmap indexed
  by colex rank, ``rank({i<j<k}) = C(k,3) + C(j,2) + C(i,1)``.

Everything here is immutable once built; `GridBuilder` and
`ThreeGraphBuilder` are the mutable, single-threaded way to make one.
"""

import enum
import functools
import itertools

import gmpy2
from gmpy2 import mpz, xmpz

from .bits import iter_bits, count
from .exceptions import InputError

__all__ = ['RED', 'BLUE', 'triple_rank', 'triple_unrank', 'pair_rank',
           'triple_count', 'grid_edge_count', 'GridColoring', 'GridSubgraph',
           'GridBuilder', 'ThreeGraphColoring', 'ThreeGraphBuilder',
           'bipartite_mask', 'grid_to_bipartite', 'bipartite_to_grid',
           'CertificateKind', 'Certificate']

RED = 1
BLUE = 0


def _c3(k):
    return k * (k - 1) * (k - 2) // 6


def _c2(k):
    return k * (k - 1) // 2


def _rank3(i, j, k):
    # i < j < k, unchecked
    return k * (k - 1) * (k - 2) // 6 + j * (j - 1) // 2 + i


def triple_count(N):
    return int(gmpy2.comb(N, 3))


def triple_rank(N, t):
    """Colex rank of the 3-subset *t* of ``range(N)``.

    >>> triple_rank(5, (2, 3, 4))
    9
    """
    try:
        i, j, k = sorted(int(v) for v in t)
    except (TypeError, ValueError):
        raise InputError(f"{t!r} is not a 3-subset") from None
    if i < 0 or k >= N:
        raise InputError(f"{tuple(t)!r} is not a subset of range({N})")
    if i == j or j == k:
        raise InputError(f"{tuple(t)!r} has repeated elements")
    return _rank3(i, j, k)


def triple_unrank(N, rank):
    """Inverse of `triple_rank`: the sorted triple with colex rank *rank*."""
    if not 0 <= rank < triple_count(N):
        raise InputError(f"rank {rank} out of range for N={N}")
    return _unrank3(rank)


def _unrank3(rank):
    k = int(gmpy2.iroot(mpz(6 * rank), 3)[0]) + 2
    while _c3(k) > rank:
        k -= 1
    rank -= _c3(k)
    j = int(gmpy2.isqrt(2 * rank)) + 1
    while _c2(j) > rank:
        j -= 1
    return rank - _c2(j), j, k


def pair_rank(i, j):
    """Colex rank of the pair {i, j}."""
    if i == j:
        raise InputError("pair has repeated elements")
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def grid_edge_count(m, n):
    """Edge count of the m x n grid: m·C(n,2) + n·C(m,2)."""
    return m * _c2(n) + n * _c2(m)


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------

def _check_dims(width, height):
    if width < 1 or height < 1:
        raise InputError(f"grid dimensions must be positive, got "
                         f"{width}x{height}")


class GridColoring:
    """A red/blue coloring of the width x height grid graph.

    Internally each row keeps, for every column, the bitmask of columns it is
    joined to by a red horizontal edge, and each column keeps the same for
    rows and vertical edges.  Bit positions are 0-based.
    """

    __slots__ = ('width', 'height', '_rows', '_cols', '__dict__')

    def __init__(self, width, height, rows, cols):
        _check_dims(width, height)
        object.__setattr__(self, 'width', width)
        object.__setattr__(self, 'height', height)
        object.__setattr__(self, '_rows',
                           tuple(tuple(mpz(m) for m in r) for r in rows))
        object.__setattr__(self, '_cols',
                           tuple(tuple(mpz(m) for m in c) for c in cols))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # -- construction helpers ------------------------------------------------

    @classmethod
    def all_red(cls, width, height):
        _check_dims(width, height)
        full_c = gmpy2.bit_mask(width)
        full_r = gmpy2.bit_mask(height)
        rows = [[full_c.bit_clear(x) for x in range(width)]
                for _ in range(height)]
        cols = [[full_r.bit_clear(y) for y in range(height)]
                for _ in range(width)]
        return cls(width, height, rows, cols)

    @classmethod
    def all_blue(cls, width, height):
        _check_dims(width, height)
        return cls(width, height, [[0] * width for _ in range(height)],
                   [[0] * height for _ in range(width)])

    @classmethod
    def from_edges(cls, width, height, red_edges):
        """Build from ``('h', x, x2, y)`` / ``('v', x, y, y2)`` tuples."""
        b = GridBuilder(width, height)
        for e in red_edges:
            b.set_edge(e, RED)
        return b.freeze(cls)

    @classmethod
    def from_bits(cls, width, height, bits):
        """Edge ``i`` of `edge_list` is red iff bit ``i`` of *bits* is set."""
        b = GridBuilder(width, height)
        bits = mpz(bits)
        for pos in iter_bits(bits):
            b.set_edge(_edge_list(width, height)[pos], RED)
        return b.freeze(cls)

    def to_bits(self):
        out = xmpz(0)
        for pos, e in enumerate(_edge_list(self.width, self.height)):
            if self.edge_color(e) == RED:
                out[pos] = 1
        return mpz(out)

    # -- queries ---------------------------------------------------------------

    def _check_col(self, x):
        if not 1 <= x <= self.width:
            raise InputError(f"column {x} outside 1..{self.width}")

    def _check_row(self, y):
        if not 1 <= y <= self.height:
            raise InputError(f"row {y} outside 1..{self.height}")

    def horizontal(self, x, x2, y):
        """Color of the horizontal edge (x, y) ~ (x2, y)."""
        self._check_col(x)
        self._check_col(x2)
        self._check_row(y)
        if x == x2:
            raise InputError("a horizontal edge needs two distinct columns")
        return RED if self._rows[y - 1][x - 1].bit_test(x2 - 1) else BLUE

    def vertical(self, x, y, y2):
        """Color of the vertical edge (x, y) ~ (x, y2)."""
        self._check_col(x)
        self._check_row(y)
        self._check_row(y2)
        if y == y2:
            raise InputError("a vertical edge needs two distinct rows")
        return RED if self._cols[x - 1][y - 1].bit_test(y2 - 1) else BLUE

    def color(self, u, v):
        """Color of the edge between grid vertices *u* and *v*."""
        (x, y), (x2, y2) = u, v
        if y == y2 and x != x2:
            return self.horizontal(x, x2, y)
        if x == x2 and y != y2:
            return self.vertical(x, y, y2)
        raise InputError(f"{u} and {v} are not adjacent in the grid")

    def edge_color(self, edge):
        kind, a, b, c = edge
        if kind == 'h':
            return self.horizontal(a, b, c)
        if kind == 'v':
            return self.vertical(a, b, c)
        raise InputError(f"unknown edge kind {kind!r}")

    def row_red(self, y):
        """Per-column red-neighbour masks of row *y* (0-based bits)."""
        return self._rows[y - 1]

    def col_red(self, x):
        """Per-row red-neighbour masks of column *x* (0-based bits)."""
        return self._cols[x - 1]

    def row_mask(self, y, color=RED):
        """Adjacency masks of the *color* graph inside row *y*."""
        red = self._rows[y - 1]
        if color == RED:
            return red
        full = gmpy2.bit_mask(self.width)
        return tuple((full ^ m).bit_clear(x) for x, m in enumerate(red))

    def col_mask(self, x, color=RED):
        """Adjacency masks of the *color* graph inside column *x*."""
        red = self._cols[x - 1]
        if color == RED:
            return red
        full = gmpy2.bit_mask(self.height)
        return tuple((full ^ m).bit_clear(y) for y, m in enumerate(red))

    @functools.cached_property
    def horizontal_rows(self):
        """``{(x, x2): mask of rows y}`` with (x,y)~(x2,y) red, 0-based keys."""
        out = {}
        for y, row in enumerate(self._rows):
            for x, m in enumerate(row):
                for x2 in iter_bits(m, x + 1):
                    out[x, x2] = out.get((x, x2), mpz(0)).bit_set(y)
        return out

    def edges(self):
        """All edges in canonical order: rows 1..height, then columns."""
        return iter(_edge_list(self.width, self.height))

    def red_edges(self):
        for y, row in enumerate(self._rows, 1):
            for x, m in enumerate(row):
                for x2 in iter_bits(m, x + 1):
                    yield ('h', x + 1, x2 + 1, y)
        for x, col in enumerate(self._cols, 1):
            for y, m in enumerate(col):
                for y2 in iter_bits(m, y + 1):
                    yield ('v', x, y + 1, y2 + 1)

    def edge_count(self):
        return grid_edge_count(self.width, self.height)

    def red_count(self):
        total = sum(count(m) for r in self._rows for m in r)
        total += sum(count(m) for c in self._cols for m in c)
        return total // 2

    def horizontal_red_count(self):
        return sum(count(m) for r in self._rows for m in r) // 2

    def vertical_red_count(self):
        return sum(count(m) for c in self._cols for m in c) // 2

    def subgrid(self, cols, rows):
        """The coloring induced on the given columns and rows (1-based).

        Column ``j`` of the result is ``cols[j-1]`` of *self*, and likewise
        for rows.
        """
        cols, rows = list(cols), list(rows)
        for x in cols:
            self._check_col(x)
        for y in rows:
            self._check_row(y)
        b = GridBuilder(len(cols), len(rows))
        for j, y in enumerate(rows, 1):
            for i, x in enumerate(cols, 1):
                for i2 in range(i + 1, len(cols) + 1):
                    if self._rows[y - 1][x - 1].bit_test(cols[i2 - 1] - 1):
                        b.set_horizontal(i, i2, j)
        for i, x in enumerate(cols, 1):
            for j, y in enumerate(rows, 1):
                for j2 in range(j + 1, len(rows) + 1):
                    if self._cols[x - 1][y - 1].bit_test(rows[j2 - 1] - 1):
                        b.set_vertical(i, j, j2)
        return b.freeze(type(self))

    def permute(self, col_perm, row_perm):
        """Relabel columns by *col_perm* and rows by *row_perm*.

        Both are sequences of new 1-based labels indexed by old label - 1.
        """
        if sorted(col_perm) != list(range(1, self.width + 1)):
            raise InputError("col_perm is not a permutation")
        if sorted(row_perm) != list(range(1, self.height + 1)):
            raise InputError("row_perm is not a permutation")
        b = GridBuilder(self.width, self.height)
        for kind, a, c, d in self.red_edges():
            if kind == 'h':
                b.set_edge(('h', col_perm[a - 1], col_perm[c - 1],
                            row_perm[d - 1]), RED)
            else:
                b.set_edge(('v', col_perm[a - 1], row_perm[c - 1],
                            row_perm[d - 1]), RED)
        return b.freeze(type(self))

    def __eq__(self, other):
        if not isinstance(other, GridColoring):
            return NotImplemented
        return (self.width, self.height, self._rows, self._cols) == \
            (other.width, other.height, other._rows, other._cols)

    def __hash__(self):
        return hash((self.width, self.height, self._rows, self._cols))

    def __repr__(self):
        return (f'{type(self).__name__}({self.width}x{self.height}, '
                f'{self.red_count()} red of {self.edge_count()})')


class GridSubgraph(GridColoring):
    """A spanning subgraph H of the width x height grid; present edges are "red"."""

    def has_edge(self, u, v):
        return self.color(u, v) == RED

    def row_density(self):
        """Fraction of horizontal slots present."""
        slots = self.height * _c2(self.width)
        return self.horizontal_red_count() / slots if slots else 0.0

    def col_density(self):
        slots = self.width * _c2(self.height)
        return self.vertical_red_count() / slots if slots else 0.0


@functools.lru_cache(maxsize=64)
def _edge_list(width, height):
    edges = []
    for y in range(1, height + 1):
        for x, x2 in itertools.combinations(range(1, width + 1), 2):
            edges.append(('h', x, x2, y))
    for x in range(1, width + 1):
        for y, y2 in itertools.combinations(range(1, height + 1), 2):
            edges.append(('v', x, y, y2))
    return tuple(edges)


class GridBuilder:
    """Mutable grid under construction, backed by `xmpz` bit rows."""

    def __init__(self, width, height):
        _check_dims(width, height)
        self.width = width
        self.height = height
        self._rows = [[xmpz(0) for _ in range(width)] for _ in range(height)]
        self._cols = [[xmpz(0) for _ in range(height)] for _ in range(width)]

    def set_horizontal(self, x, x2, y, color=RED):
        if x == x2 or not (1 <= x <= self.width and 1 <= x2 <= self.width
                           and 1 <= y <= self.height):
            raise InputError(f"bad horizontal edge {(x, x2, y)}")
        bit = 1 if color == RED else 0
        row = self._rows[y - 1]
        row[x - 1][x2 - 1] = bit
        row[x2 - 1][x - 1] = bit

    def set_vertical(self, x, y, y2, color=RED):
        if y == y2 or not (1 <= x <= self.width and 1 <= y <= self.height
                           and 1 <= y2 <= self.height):
            raise InputError(f"bad vertical edge {(x, y, y2)}")
        bit = 1 if color == RED else 0
        col = self._cols[x - 1]
        col[y - 1][y2 - 1] = bit
        col[y2 - 1][y - 1] = bit

    def set_edge(self, edge, color=RED):
        kind, a, b, c = edge
        if kind == 'h':
            self.set_horizontal(a, b, c, color)
        elif kind == 'v':
            self.set_vertical(a, b, c, color)
        else:
            raise InputError(f"unknown edge kind {kind!r}")

    def freeze(self, cls=GridColoring):
        return cls(self.width, self.height, self._rows, self._cols)


# ---------------------------------------------------------------------------
# 3-graphs
# ---------------------------------------------------------------------------

class ThreeGraphColoring:
    """A red/blue coloring of K_N^(3) stored as a colex-ranked red bitmap.

    *mask*, when given, is the bitmap of triples that belong to the host
    3-graph (for instance B^(3)(a,b)); triples outside it are blue for
    storage purposes and never take part in a blue witness.
    """

    __slots__ = ('vertex_count', 'red', 'mask', '__dict__')

    def __init__(self, vertex_count, red, mask=None):
        if vertex_count < 0:
            raise InputError("vertex count must be non-negative")
        red = mpz(red)
        full = gmpy2.bit_mask(triple_count(vertex_count))
        if red < 0 or red & ~full:
            raise InputError("red bitmap longer than C(N,3)")
        if mask is not None:
            mask = mpz(mask)
            if red & ~mask:
                raise InputError("red triples outside the host mask")
        object.__setattr__(self, 'vertex_count', vertex_count)
        object.__setattr__(self, 'red', red)
        object.__setattr__(self, 'mask', mask)

    def __setattr__(self, name, value):
        raise AttributeError("ThreeGraphColoring is immutable")

    @classmethod
    def all_red(cls, N):
        return cls(N, gmpy2.bit_mask(triple_count(N)))

    @classmethod
    def all_blue(cls, N):
        return cls(N, 0)

    @classmethod
    def from_triples(cls, N, red_triples, mask=None):
        b = ThreeGraphBuilder(N)
        for t in red_triples:
            b.set(t, RED)
        return b.freeze(mask)

    @classmethod
    def from_bits(cls, N, bits, mask=None):
        return cls(N, bits, mask)

    @property
    def N(self):
        return self.vertex_count

    @property
    def domain(self):
        """Bitmap of triples of the host 3-graph."""
        if self.mask is None:
            return gmpy2.bit_mask(triple_count(self.vertex_count))
        return self.mask

    def is_red(self, i, j, k):
        return self.red.bit_test(triple_rank(self.vertex_count, (i, j, k)))

    def color(self, i, j, k):
        return RED if self.is_red(i, j, k) else BLUE

    def in_domain(self, i, j, k):
        if self.mask is None:
            triple_rank(self.vertex_count, (i, j, k))
            return True
        return self.mask.bit_test(triple_rank(self.vertex_count, (i, j, k)))

    def red_count(self):
        return count(self.red)

    def red_triples(self):
        """Red triples in colex order."""
        for r in iter_bits(self.red):
            yield _unrank3(r)

    @functools.cached_property
    def pair_links(self):
        """``links[a][b]``: mask of c with {a, b, c} red (symmetric)."""
        N = self.vertex_count
        links = [[xmpz(0) for _ in range(N)] for _ in range(N)]
        for i, j, k in self.red_triples():
            links[i][j][k] = 1
            links[j][i][k] = 1
            links[i][k][j] = 1
            links[k][i][j] = 1
            links[j][k][i] = 1
            links[k][j][i] = 1
        return tuple(tuple(mpz(m) for m in row) for row in links)

    @functools.cached_property
    def domain_links(self):
        """``links[a][b]``: mask of c with {a, b, c} in the host 3-graph."""
        N = self.vertex_count
        full = gmpy2.bit_mask(N)
        if self.mask is None:
            return tuple(tuple(full.bit_clear(a).bit_clear(b) if a != b
                               else mpz(0) for b in range(N))
                         for a in range(N))
        links = [[xmpz(0) for _ in range(N)] for _ in range(N)]
        for r in iter_bits(self.mask):
            i, j, k = _unrank3(r)
            links[i][j][k] = links[j][i][k] = 1
            links[i][k][j] = links[k][i][j] = 1
            links[j][k][i] = links[k][j][i] = 1
        return tuple(tuple(mpz(m) for m in row) for row in links)

    def link(self, u, color=RED):
        """Adjacency masks of the *color* link graph of vertex *u*.

        Entry ``v`` is the mask of ``w`` with {u, v, w} of that color (and in
        the host 3-graph); entry ``u`` itself is empty.
        """
        if not 0 <= u < self.vertex_count:
            raise InputError(f"vertex {u} outside range({self.vertex_count})")
        red = self.pair_links[u]
        if color == RED:
            return red
        dom = self.domain_links[u]
        return tuple(dom[v] & ~red[v] for v in range(self.vertex_count))

    def recolor(self, blue=(), red=()):
        """Copy with the given triples recoloured (ranks or triples)."""
        bits = xmpz(self.red)
        for t in blue:
            bits[t if isinstance(t, int) else
                 triple_rank(self.vertex_count, t)] = 0
        for t in red:
            bits[t if isinstance(t, int) else
                 triple_rank(self.vertex_count, t)] = 1
        return ThreeGraphColoring(self.vertex_count, mpz(bits), self.mask)

    def __eq__(self, other):
        if not isinstance(other, ThreeGraphColoring):
            return NotImplemented
        return (self.vertex_count, self.red, self.mask) == \
            (other.vertex_count, other.red, other.mask)

    def __hash__(self):
        return hash((self.vertex_count, self.red, self.mask))

    def __repr__(self):
        return (f'ThreeGraphColoring(N={self.vertex_count}, '
                f'{self.red_count()} red of {count(self.domain)})')


class ThreeGraphBuilder:
    def __init__(self, N):
        self.vertex_count = N
        self._bits = xmpz(0)

    def set(self, triple, color=RED):
        self._bits[triple_rank(self.vertex_count, triple)] = \
            1 if color == RED else 0

    def set_rank(self, rank, color=RED):
        self._bits[rank] = 1 if color == RED else 0

    def freeze(self, mask=None):
        return ThreeGraphColoring(self.vertex_count, mpz(self._bits), mask)


def bipartite_mask(a, b):
    """Bitmap of the triples of B^(3)(a, b) on vertices 0 .. a+b-1.

    Side one is ``0 .. a-1``, side two ``a .. a+b-1``.
    """
    N = a + b
    out = xmpz(gmpy2.bit_mask(triple_count(N)))
    # triples inside 0..a-1 are exactly the colex ranks below C(a,3)
    out[0:triple_count(a)] = 0
    for i, j, k in itertools.combinations(range(a, N), 3):
        out[_rank3(i, j, k)] = 0
    return mpz(out)


def grid_to_bipartite(g):
    """Map a coloring of the a x b grid to a coloring of B^(3)(a, b).

    Horizontal (x,y)~(x2,y) goes to {x, x2, a+y}; vertical (x,y)~(x,y2)
    goes to {x, a+y, a+y2} (all shifted to 0-based vertices).
    """
    a, b = g.width, g.height
    out = ThreeGraphBuilder(a + b)
    for kind, p, q, r in g.red_edges():
        if kind == 'h':
            out.set((p - 1, q - 1, a + r - 1))
        else:
            out.set((p - 1, a + q - 1, a + r - 1))
    return out.freeze(bipartite_mask(a, b))


def bipartite_to_grid(t, a, cls=GridColoring):
    """Inverse of `grid_to_bipartite`; only bipartite triples are read."""
    b = t.vertex_count - a
    if a < 1 or b < 1:
        raise InputError(f"cannot split {t.vertex_count} vertices as {a}+{b}")
    g = GridBuilder(a, b)
    for i, j, k in t.red_triples():
        left = sum(1 for v in (i, j, k) if v < a)
        if left == 2:
            g.set_horizontal(i + 1, j + 1, k - a + 1)
        elif left == 1:
            g.set_vertical(i + 1, j - a + 1, k - a + 1)
    return g.freeze(cls)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

class CertificateKind(enum.Enum):
    RedRectangle = 'RedRectangle'
    RedSubgrid = 'RedSubgrid'
    BlueClique = 'BlueClique'
    RedClique = 'RedClique'
    RedK4 = 'RedK4'
    RedK5 = 'RedK5'
    RedK4MinusE = 'RedK4MinusE'
    BlueStar = 'BlueStar'

    @property
    def on_grid(self):
        return self in _GRID_KINDS

    @property
    def color(self):
        return BLUE if self in (CertificateKind.BlueClique,
                                CertificateKind.BlueStar) else RED


_GRID_KINDS = frozenset({CertificateKind.RedRectangle,
                         CertificateKind.RedSubgrid,
                         CertificateKind.BlueClique,
                         CertificateKind.RedClique})


class Certificate:
    """A re-checkable witness.

    Grid kinds carry ``(x, y)`` vertices.  ``RedRectangle`` lists
    ``(x,y), (x2,y), (x,y2), (x2,y2)``; ``RedSubgrid`` lists every vertex of
    the subgrid, columns outer.  3-graph kinds carry vertex numbers;
    ``BlueStar`` also has a ``center``.
    """

    __slots__ = ('kind', 'vertices', 'center')

    def __init__(self, kind, vertices, center=None):
        kind = CertificateKind(kind)
        if kind.on_grid:
            vertices = tuple((int(x), int(y)) for x, y in vertices)
        else:
            vertices = tuple(int(v) for v in vertices)
        if (center is None) != (kind is not CertificateKind.BlueStar):
            raise InputError("only BlueStar certificates have a center")
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'vertices', vertices)
        object.__setattr__(self, 'center',
                           None if center is None else int(center))

    def __setattr__(self, name, value):
        raise AttributeError("Certificate is immutable")

    @property
    def columns(self):
        return tuple(sorted({x for x, _ in self.vertices}))

    @property
    def rows(self):
        return tuple(sorted({y for _, y in self.vertices}))

    def asserted(self):
        """The edges (grid) or triples (3-graph) the witness asserts."""
        k = self.kind
        if k in (CertificateKind.RedRectangle, CertificateKind.RedSubgrid,
                 CertificateKind.BlueClique, CertificateKind.RedClique):
            return [(u, v) for u, v in itertools.combinations(self.vertices, 2)
                    if (u[0] == v[0]) != (u[1] == v[1])]
        if k is CertificateKind.BlueStar:
            return [(self.center, v, w)
                    for v, w in itertools.combinations(self.vertices, 2)]
        if k is CertificateKind.RedK4MinusE:
            return list(itertools.combinations(self.vertices, 3))
        return list(itertools.combinations(self.vertices, 3))

    def to_json(self):
        doc = {'kind': self.kind.value,
               'vertices': [list(v) if isinstance(v, tuple) else v
                            for v in self.vertices],
               'colors-checked': len(self.asserted())}
        if self.center is not None:
            doc['center'] = self.center
        return doc

    @classmethod
    def from_json(cls, doc):
        try:
            kind = CertificateKind(doc['kind'])
            verts = doc['vertices']
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"malformed certificate document: {exc}") from None
        if kind.on_grid:
            verts = [tuple(v) for v in verts]
        return cls(kind, verts, doc.get('center'))

    def __eq__(self, other):
        if not isinstance(other, Certificate):
            return NotImplemented
        return (self.kind, self.vertices, self.center) == \
            (other.kind, other.vertices, other.center)

    def __hash__(self):
        return hash((self.kind, self.vertices, self.center))

    def __repr__(self):
        extra = '' if self.center is None else f', center={self.center}'
        return f'Certificate({self.kind.value}, {list(self.vertices)}{extra})'

"""Exact witness finders and certificate checking.

Every finder returns a `Certificate` or ``None``.  ``None`` always means the
structure does not exist; budgeted finders raise `SearchBudgetExceeded`
instead of guessing.  Witnesses are the lexicographically first ones in the
order documented on each finder.
"""

import itertools
import logging

import gmpy2
from gmpy2 import mpz

from .bits import iter_bits, above, count, first
from .clique import BudgetTracker, find_clique
from .core import (RED, BLUE, GridColoring, ThreeGraphColoring, Certificate,
                   CertificateKind as K)
from .exceptions import InputError

__all__ = ['find_red_rectangle', 'find_red_subgrid', 'find_mono_clique_in_grid',
           'find_red_k4', 'find_red_k5', 'find_red_k4_minus_e',
           'find_blue_star', 'check_certificate', 'count_red_k4',
           'count_red_k4_minus_e', 'naive_red_rectangle', 'naive_mono_clique',
           'naive_red_k4', 'naive_red_k5', 'naive_red_k4_minus_e',
           'naive_blue_star']

log = logging.getLogger(__name__)


def _tracker(budget):
    return budget if isinstance(budget, BudgetTracker) else BudgetTracker(budget)


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

def find_red_rectangle(g):
    """Return the first red rectangle of *g* in (x, x', y, y') order.

    For each column pair the rows carrying the red horizontal edge are
    intersected with both columns' vertical red masks.
    """
    hrows = g.horizontal_rows
    cols = [g.col_red(x) for x in range(1, g.width + 1)]
    for x in range(g.width):
        for x2 in range(x + 1, g.width):
            rows = hrows.get((x, x2))
            if rows is None or count(rows) < 2:
                continue
            cx, cx2 = cols[x], cols[x2]
            for y in iter_bits(rows):
                m = rows & cx[y] & cx2[y] & above(y)
                if m:
                    y2 = first(m)
                    return Certificate(K.RedRectangle,
                                       [(x + 1, y + 1), (x2 + 1, y + 1),
                                        (x + 1, y2 + 1), (x2 + 1, y2 + 1)])
    return None


def find_red_subgrid(g, cols, rows, budget=None):
    """Return the first red cols x rows subgrid inside *g*, or None.

    Column sets are walked in lexicographic order; for each, the rows in
    which the chosen columns span a red clique are searched for a *rows*-set
    that is a red clique in every chosen column.
    """
    if cols < 1 or rows < 1:
        raise InputError("subgrid dimensions must be positive")
    if cols > g.width or rows > g.height:
        return None
    tracker = _tracker(budget)
    row_masks = [g.row_red(y) for y in range(1, g.height + 1)]
    col_masks = [g.col_red(x) for x in range(1, g.width + 1)]
    n = g.height

    def walk(chosen, cand, live):
        tracker.tick()
        if len(chosen) == cols:
            adj = [gmpy2.bit_mask(n) for _ in range(n)]
            for x in chosen:
                adj = [a & c for a, c in zip(adj, col_masks[x])]
            found = find_clique(adj, rows, live, tracker)
            return None if found is None else (chosen, found)
        for x in iter_bits(cand):
            # rows y in which x is red-joined to every chosen column
            keep = live
            for y in iter_bits(live):
                if any(not row_masks[y][x].bit_test(c) for c in chosen):
                    keep = keep.bit_clear(y)
            if count(keep) < rows:
                continue
            res = walk(chosen + (x,), cand & above(x), keep)
            if res is not None:
                return res
        return None

    res = walk((), gmpy2.bit_mask(g.width), gmpy2.bit_mask(n))
    if res is None:
        return None
    xs, ys = res
    return Certificate(K.RedSubgrid,
                       [(x + 1, y + 1) for x in xs for y in ys])


def find_mono_clique_in_grid(g, color, k, budget=None):
    """Return a monochromatic *k*-clique of color *color* in *g*, or None.

    Cliques of the grid graph sit inside one row or one column, so rows
    1..height are searched first, then columns 1..width.
    """
    if k < 1:
        raise InputError("clique size must be at least 1")
    if color not in (RED, BLUE):
        raise InputError(f"unknown color {color!r}")
    kind = K.RedClique if color == RED else K.BlueClique
    if k == 1:
        return Certificate(kind, [(1, 1)])
    tracker = _tracker(budget)
    if k <= g.width:
        for y in range(1, g.height + 1):
            found = find_clique(g.row_mask(y, color), k, budget=tracker)
            if found is not None:
                return Certificate(kind, [(x + 1, y) for x in found])
    if k <= g.height:
        for x in range(1, g.width + 1):
            found = find_clique(g.col_mask(x, color), k, budget=tracker)
            if found is not None:
                return Certificate(kind, [(x, y + 1) for y in found])
    return None


# ---------------------------------------------------------------------------
# 3-graphs
# ---------------------------------------------------------------------------

def find_red_k4(t):
    """First red K4^(3) in lexicographic order of (a, b, c, d)."""
    L = t.pair_links
    N = t.vertex_count
    for a in range(N):
        for b in range(a + 1, N):
            lab = L[a][b] & above(b)
            for c in iter_bits(lab):
                m = lab & L[a][c] & L[b][c] & above(c)
                if m:
                    return Certificate(K.RedK4, [a, b, c, first(m)])
    return None


def find_red_k5(t):
    """First red K5^(3) in lexicographic order."""
    L = t.pair_links
    N = t.vertex_count
    for a in range(N):
        for b in range(a + 1, N):
            lab = L[a][b] & above(b)
            if count(lab) < 3:
                continue
            for c in iter_bits(lab):
                abc = lab & L[a][c] & L[b][c] & above(c)
                if count(abc) < 2:
                    continue
                for d in iter_bits(abc):
                    m = abc & L[a][d] & L[b][d] & L[c][d] & above(d)
                    if m:
                        return Certificate(K.RedK5, [a, b, c, d, first(m)])
    return None


def find_red_k4_minus_e(t):
    """First 4-set (lexicographic) spanning at least three red triples."""
    L = t.pair_links
    N = t.vertex_count
    for a in range(N):
        for b in range(a + 1, N):
            lab = L[a][b]
            for c in range(b + 1, N):
                up = above(c)
                A, B, C = lab & up, L[a][c] & up, L[b][c] & up
                if lab.bit_test(c):
                    m = (A & B) | (A & C) | (B & C)
                else:
                    m = A & B & C
                if m:
                    return Certificate(K.RedK4MinusE, [a, b, c, first(m)])
    return None


def find_blue_star(t, n, budget=None, leaves=None):
    """Return the first blue star S_n (centre ascending, leaves lex-first).

    Only triples of the host 3-graph count as blue.  *leaves*, a vertex mask,
    optionally restricts where leaves may lie.
    """
    if n < 1:
        raise InputError("star size must be at least 1")
    N = t.vertex_count
    if N < n + 1:
        return None
    tracker = _tracker(budget)
    allowed = gmpy2.bit_mask(N) if leaves is None else mpz(leaves)
    for u in range(N):
        cand = allowed.bit_clear(u)
        if count(cand) < n:
            continue
        adj = t.link(u, BLUE)
        if n == 1:
            # a single leaf needs no triple
            found = (first(cand),)
        else:
            found = find_clique(adj, n, cand, tracker)
        if found is not None:
            return Certificate(K.BlueStar, found, center=u)
    return None


def _per_first_three(t, full):
    L = t.pair_links
    N = t.vertex_count
    total = 0
    for a in range(N):
        for b in range(a + 1, N):
            lab = L[a][b]
            for c in range(b + 1, N):
                up = above(c)
                A, B, C = lab & up, L[a][c] & up, L[b][c] & up
                if full:
                    if lab.bit_test(c):
                        total += count(A & B & C)
                elif lab.bit_test(c):
                    total += count((A & B) | (A & C) | (B & C))
                else:
                    total += count(A & B & C)
    return total


def count_red_k4(t):
    """Number of 4-sets whose four triples are all red."""
    return _per_first_three(t, True)


def count_red_k4_minus_e(t):
    """Number of 4-sets with at least three red triples."""
    return _per_first_three(t, False)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def check_certificate(cert, against):
    """True iff everything *cert* asserts holds in *against*.

    A grid certificate against a 3-graph coloring (or the reverse) raises
    `InputError`.  Certificates naming vertices outside the coloring, or of
    the wrong shape, are simply false.
    """
    if not isinstance(cert, Certificate):
        raise InputError("not a certificate")
    if cert.kind.on_grid:
        if not isinstance(against, GridColoring):
            raise InputError(f"{cert.kind.value} needs a grid coloring")
        return _check_grid(cert, against)
    if not isinstance(against, ThreeGraphColoring):
        raise InputError(f"{cert.kind.value} needs a 3-graph coloring")
    return _check_three(cert, against)


def _check_grid(cert, g):
    vs = cert.vertices
    if len(set(vs)) != len(vs) or not vs:
        return False
    if any(not (1 <= x <= g.width and 1 <= y <= g.height) for x, y in vs):
        return False
    kind = cert.kind
    if kind is K.RedRectangle:
        if len(vs) != 4:
            return False
        (x, y), (x2, y_), (x_, y2), (x2_, y2_) = vs
        if not (x == x_ and x2 == x2_ and y == y_ and y2 == y2_
                and x != x2 and y != y2):
            return False
    elif kind is K.RedSubgrid:
        xs, ys = cert.columns, cert.rows
        if len(vs) != len(xs) * len(ys):
            return False
    else:
        for (x, y), (x2, y2) in itertools.combinations(vs, 2):
            if (x == x2) == (y == y2):
                return False
    want = kind.color
    return all(g.color(u, v) == want for u, v in cert.asserted())


def _check_three(cert, t):
    vs = cert.vertices
    N = t.vertex_count
    pts = vs if cert.center is None else vs + (cert.center,)
    if len(set(pts)) != len(pts) or any(not 0 <= v < N for v in pts):
        return False
    kind = cert.kind
    sizes = {K.RedK4: 4, K.RedK5: 5, K.RedK4MinusE: 4}
    if kind in sizes and len(vs) != sizes[kind]:
        return False
    triples = cert.asserted()
    if kind is K.RedK4MinusE:
        return sum(1 for tr in triples if t.is_red(*tr)) >= 3
    if kind is K.BlueStar:
        if not vs:
            return False
        return all(t.in_domain(*tr) and not t.is_red(*tr) for tr in triples)
    return all(t.is_red(*tr) for tr in triples)


# ---------------------------------------------------------------------------
# naive reference finders
# ---------------------------------------------------------------------------

def naive_red_rectangle(g):
    for x, x2 in itertools.combinations(range(1, g.width + 1), 2):
        for y, y2 in itertools.combinations(range(1, g.height + 1), 2):
            if (g.horizontal(x, x2, y) == RED and g.horizontal(x, x2, y2) == RED
                    and g.vertical(x, y, y2) == RED
                    and g.vertical(x2, y, y2) == RED):
                return Certificate(K.RedRectangle,
                                   [(x, y), (x2, y), (x, y2), (x2, y2)])
    return None


def naive_mono_clique(g, color, k):
    """Search every k-set of grid vertices, ignoring row/column structure."""
    verts = [(x, y) for y in range(1, g.height + 1)
             for x in range(1, g.width + 1)]
    kind = K.RedClique if color == RED else K.BlueClique
    for vs in itertools.combinations(verts, k):
        ok = True
        for (x, y), (x2, y2) in itertools.combinations(vs, 2):
            if (x == x2) == (y == y2) or g.color((x, y), (x2, y2)) != color:
                ok = False
                break
        if ok:
            return Certificate(kind, vs)
    return None


def _naive_sets(t, size, test):
    for vs in itertools.combinations(range(t.vertex_count), size):
        reds = sum(1 for tr in itertools.combinations(vs, 3) if t.is_red(*tr))
        if test(reds):
            return vs
    return None


def naive_red_k4(t):
    vs = _naive_sets(t, 4, lambda r: r == 4)
    return None if vs is None else Certificate(K.RedK4, vs)


def naive_red_k5(t):
    vs = _naive_sets(t, 5, lambda r: r == 10)
    return None if vs is None else Certificate(K.RedK5, vs)


def naive_red_k4_minus_e(t):
    vs = _naive_sets(t, 4, lambda r: r >= 3)
    return None if vs is None else Certificate(K.RedK4MinusE, vs)


def naive_blue_star(t, n, leaves=None):
    N = t.vertex_count
    for u in range(N):
        others = [v for v in range(N) if v != u
                  and (leaves is None or mpz(leaves).bit_test(v))]
        for ls in itertools.combinations(others, n):
            if all(t.in_domain(u, v, w) and not t.is_red(u, v, w)
                   for v, w in itertools.combinations(ls, 2)):
                return Certificate(K.BlueStar, ls, center=u)
    return None

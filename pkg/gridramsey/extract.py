"""Constructive upper bounds: turn any grid coloring into a certificate.

`extract_grid` follows the rectangle-versus-clique argument: every column
of a tall enough grid holds a red K_r or a blue K_n; columns with the same
red row vector are grouped, and inside a group either two columns share two
red rows (a rectangle) or the rows act as colors of a complete graph on the
columns, one of which is missing from some n-clique (a blue K_n).

`iterate_subgrid` and `general_grid_extract` run the supersaturation
iteration that finds a red b x a subgrid or a blue K_n.
"""

import dataclasses
import itertools
import logging

import gmpy2
from gmpy2 import mpfr

from .bits import count, iter_bits
from .clique import BudgetTracker, find_clique, iter_cliques
from .context import mpfr_context
from .core import RED, BLUE, Certificate, CertificateKind as K
from .exceptions import InputError, PreconditionError
from .verify import (check_certificate, find_mono_clique_in_grid,
                     find_red_rectangle)

__all__ = ['ExtractionTrace', 'Extraction', 'extract_grid',
           'es_clique_missing_color', 'SubgridOutcome', 'iterate_subgrid',
           'GeneralSchedule', 'general_grid_extract']

log = logging.getLogger(__name__)


def _tracker(budget):
    return budget if isinstance(budget, BudgetTracker) else BudgetTracker(budget)


@dataclasses.dataclass
class ExtractionTrace:
    """How an extraction reached its result.

    ``column_outcomes[x]`` is ``('red', rows)`` or ``('blue', rows)``;
    ``pair_coloring[x, x2]`` is the index into ``group_key`` of the single
    red row of that column pair, or None when the pair has no red row.
    """

    column_outcomes: dict = dataclasses.field(default_factory=dict)
    group_key: tuple = None
    group: tuple = ()
    pair_coloring: dict = dataclasses.field(default_factory=dict)
    final_step: str = ''
    final: object = None
    iterations: list = dataclasses.field(default_factory=list)
    notes: list = dataclasses.field(default_factory=list)

    def to_json(self):
        return {
            'column_outcomes': {str(x): [k, list(rows)] for x, (k, rows)
                                in self.column_outcomes.items()},
            'group_key': None if self.group_key is None else list(self.group_key),
            'group': list(self.group),
            'pair_coloring': {f'{x},{x2}': c for (x, x2), c
                              in self.pair_coloring.items()},
            'final_step': self.final_step,
            'final': self.final,
            'iterations': self.iterations,
            'notes': self.notes,
        }


@dataclasses.dataclass(frozen=True)
class Extraction:
    """``outcome`` is ``'found'``, ``'none'`` or ``'hypothesis-not-met'``."""

    certificate: Certificate
    trace: ExtractionTrace
    outcome: str = 'found'


# ---------------------------------------------------------------------------
# the missing-color clique
# ---------------------------------------------------------------------------

def es_clique_missing_color(h, r, n, order=None, budget=None):
    """Find n vertices and a color in ``range(r)`` absent from all their pairs.

    *h* maps pairs ``(i, j)``, ``i < j`` of ``range(order)`` to a color in
    ``range(r)`` or None; None pairs, and pairs missing from *h*, carry no
    color.  The lexicographically first n-set that misses some color is
    returned as ``(color, vertices)`` with the smallest color it misses;
    None if there is no such set.
    """
    if r < 1:
        raise InputError("need at least one color")
    if order is None:
        order = 1 + max((j for _, j in h), default=-1)
    if order < n:
        raise InputError(f"only {order} vertices for a clique of size {n}")
    tracker = _tracker(budget)
    full = gmpy2.bit_mask(order)
    colored = [[0] * order for _ in range(r)]
    for (i, j), c in h.items():
        if c is None:
            continue
        if not 0 <= c < r:
            raise InputError(f"color {c} outside range({r})")
        colored[c][i] |= 1 << j
        colored[c][j] |= 1 << i
    best = None
    for c in range(r):
        # independent sets of the color-c graph are cliques of its complement
        comp = [(full & ~colored[c][v]).bit_clear(v) for v in range(order)]
        found = find_clique(comp, n, budget=tracker)
        if found is not None and (best is None or found < best[1]):
            best = (c, found)
    return best


# ---------------------------------------------------------------------------
# N x M grid: red rectangle or blue K_n
# ---------------------------------------------------------------------------

def extract_grid(g, r, n, budget=None, table=None):
    """Return an `Extraction` with a blue K_n or a red rectangle of *g*.

    *table*, a mapping ``{(r, n): r(K_r, K_n)}``, is used to check that the
    grid is tall enough; without it the caller vouches for the height.
    """
    if r < 1 or n < 1:
        raise InputError("r and n must be positive")
    if table is not None and (r, n) in table and g.height < table[r, n]:
        raise PreconditionError(
            f"height {g.height} below r(K_{r}, K_{n}) = {table[r, n]}")
    tracker = _tracker(budget)
    trace = ExtractionTrace()

    vectors = {}
    for x in range(1, g.width + 1):
        red = find_clique(g.col_mask(x, RED), r, budget=tracker)
        if red is not None:
            rows = tuple(y + 1 for y in red)
            trace.column_outcomes[x] = ('red', rows)
            vectors[x] = rows
            continue
        blue = find_clique(g.col_mask(x, BLUE), n, budget=tracker)
        if blue is None:
            raise PreconditionError(
                f"column {x} has neither a red K_{r} nor a blue K_{n}",
                column=x)
        rows = tuple(y + 1 for y in blue)
        trace.column_outcomes[x] = ('blue', rows)
        trace.final_step = 'blue-column'
        trace.final = {'column': x, 'rows': list(rows)}
        return Extraction(Certificate(K.BlueClique, [(x, y) for y in rows]),
                          trace)

    groups = {}
    for x, rows in vectors.items():
        groups.setdefault(rows, []).append(x)
    key = min(groups, key=lambda k: (-len(groups[k]), k))
    group = tuple(groups[key])
    trace.group_key, trace.group = key, group
    log.debug("largest group %s holds %d of %d columns", key, len(group),
              g.width)

    for i, x in enumerate(group):
        row = [g.row_red(y)[x - 1] for y in key]
        for x2 in group[i + 1:]:
            red_rows = [k for k, m in enumerate(row) if m.bit_test(x2 - 1)]
            if len(red_rows) >= 2:
                y, y2 = key[red_rows[0]], key[red_rows[1]]
                trace.final_step = 'rectangle'
                trace.final = {'columns': [x, x2], 'rows': [y, y2]}
                return Extraction(Certificate(
                    K.RedRectangle, [(x, y), (x2, y), (x, y2), (x2, y2)]),
                    trace)
            trace.pair_coloring[x, x2] = red_rows[0] if red_rows else None

    if len(group) >= n:
        h = {(group.index(x), group.index(x2)): c
             for (x, x2), c in trace.pair_coloring.items()}
        found = es_clique_missing_color(h, r, n, len(group), tracker)
        if found is not None:
            c, members = found
            y = key[c]
            cols = [group[v] for v in members]
            trace.final_step = 'es-clique'
            trace.final = {'row': y, 'columns': cols}
            return Extraction(Certificate(K.BlueClique,
                                          [(x, y) for x in cols]), trace)

    trace.notes.append('missing-color clique not found; exhaustive search')
    cert = find_red_rectangle(g)
    if cert is None:
        cert = find_mono_clique_in_grid(g, BLUE, n, tracker)
    trace.final_step = 'exhaustive'
    if cert is None:
        return Extraction(None, trace, 'none')
    trace.final = cert.to_json()
    return Extraction(cert, trace)


# ---------------------------------------------------------------------------
# supersaturation step
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class SubgridOutcome:
    """Result of `iterate_subgrid`.

    ``kind`` is ``'hub'`` (column ``hub`` is red to every column of
    ``neighbours`` on ``rows``), ``'blue'`` (``certificate`` holds a blue
    K_n) or ``'hypothesis-not-met'`` (``counts`` explains why).
    """

    kind: str
    hub: int = None
    rows: tuple = ()
    neighbours: tuple = ()
    certificate: Certificate = None
    counts: dict = None

    def check(self, g):
        """Re-verify the returned structure against *g*."""
        if self.kind == 'blue':
            return check_certificate(self.certificate, g)
        if self.kind != 'hub':
            return True
        for x in (self.hub,) + self.neighbours:
            for y, y2 in itertools.combinations(self.rows, 2):
                if g.vertical(x, y, y2) != RED:
                    return False
        return all(g.horizontal(self.hub, x, y) == RED
                   for x in self.neighbours for y in self.rows)


def _all_vertical_red(g):
    full = gmpy2.bit_mask(g.height)
    return all(m == full.bit_clear(y) for x in range(1, g.width + 1)
               for y, m in enumerate(g.col_red(x)))


def iterate_subgrid(g, a, n, n_prime, budget=None):
    """One supersaturation step on a grid whose vertical edges are all red.

    Columns are joined in an auxiliary graph when they share at least *a*
    red horizontal rows, the edge being labelled by the first *a* of them.
    A column with at least *n_prime* equally labelled neighbours is a hub.
    Failing that, a greedy independent set of the auxiliary graph is
    searched row by row for a blue K_n, then every column is.
    """
    if not 1 <= a <= g.height:
        raise InputError(f"need 1 <= a <= {g.height}, got a = {a}")
    if n < 1 or n_prime < 1:
        raise InputError("n and n_prime must be positive")
    if not _all_vertical_red(g):
        raise PreconditionError("vertical edges are not all red")
    tracker = _tracker(budget)
    N = g.width
    hrows = g.horizontal_rows
    labels = {}
    adj = [0] * N
    for (x, x2), rows in hrows.items():
        if count(rows) >= a:
            labels[x, x2] = tuple(y + 1 for y in itertools.islice(
                iter_bits(rows), a))
            adj[x] |= 1 << x2
            adj[x2] |= 1 << x

    best = 0
    for x in range(N):
        by_label = {}
        for x2 in iter_bits(adj[x]):
            lab = labels[min(x, x2), max(x, x2)]
            by_label.setdefault(lab, []).append(x2 + 1)
        for lab in sorted(by_label):
            nbrs = by_label[lab]
            best = max(best, len(nbrs))
            if len(nbrs) >= n_prime:
                return SubgridOutcome('hub', x + 1, lab, tuple(nbrs))

    indep = 0
    for x in range(N):
        if not adj[x] & indep:
            indep |= 1 << x
    for y in range(1, g.height + 1):
        found = find_clique(g.row_mask(y, BLUE), n, indep, tracker)
        if found is not None:
            return SubgridOutcome('blue', certificate=Certificate(
                K.BlueClique, [(x + 1, y) for x in found]))
    cert = find_mono_clique_in_grid(g, BLUE, n, tracker)
    if cert is not None:
        return SubgridOutcome('blue', certificate=cert)
    counts = {'aux_edges': len(labels), 'independent': count(indep),
              'max_label_degree': best, 'n_prime': n_prime}
    log.debug("supersaturation step failed: %s", counts)
    return SubgridOutcome('hypothesis-not-met', counts=counts)


# ---------------------------------------------------------------------------
# general grids
# ---------------------------------------------------------------------------

class GeneralSchedule:
    """Row counts ``r_i = a x^(2^(i-1) - 1)`` and column counts ``N_i``.

    ``x = n^(1 / (2^b - 1))``; ``log2 N_1 = 0`` and
    ``N_{i+1} = 2^(C n r_i^2 / r_{i+1} log2(r_{i+1} / r_i)) (N_i + 1)``;
    the grid size is ``n^(r_b^2) N_b``.  The column counts are kept as
    base-2 logarithms.  ``invariant_ok`` records whether every ratio
    ``r_{i+1} / r_i`` lies in ``[2, sqrt(n)]``; it is not enforced.
    """

    def __init__(self, a, b, n, C=1.0):
        if a < 2 or b < 2:
            raise InputError("a and b must be at least 2")
        if n < 2:
            raise InputError("n must be at least 2")
        self.a, self.b, self.n, self.C = a, b, n, C
        with mpfr_context():
            self.x = mpfr(n) ** (mpfr(1) / (2 ** b - 1))
            self.r = tuple(int(gmpy2.rint(a * self.x ** (2 ** (i - 1) - 1)))
                           for i in range(1, b + 1))
            logs = [mpfr(0)]
            for i in range(b - 1):
                ri, rj = self.r[i], self.r[i + 1]
                step = C * n * ri * ri / mpfr(rj) * gmpy2.log2(mpfr(rj) / ri)
                prev = logs[-1]
                logs.append(step + prev + gmpy2.log2(1 + gmpy2.exp2(-prev)))
            self.log2_N_steps = tuple(logs)
            self.log2_N = self.r[-1] ** 2 * gmpy2.log2(mpfr(n)) + logs[-1]
            root = gmpy2.sqrt(mpfr(n))
            self.invariant_ok = all(
                2 <= mpfr(self.r[i + 1]) / self.r[i] <= root
                for i in range(b - 1))
        if not self.invariant_ok:
            log.warning("schedule a=%d b=%d n=%d: row ratios %s leave "
                        "[2, sqrt(n)]", a, b, n, self.r)

    def column_target(self, i):
        """``N_i`` as an int, or None when it does not fit in 62 bits."""
        lg = self.log2_N_steps[i - 1]
        if lg > 62:
            return None
        return int(gmpy2.floor(gmpy2.exp2(lg)))

    def to_json(self):
        return {'a': self.a, 'b': self.b, 'n': self.n, 'C': self.C,
                'x': float(self.x), 'r': list(self.r),
                'log2_N_steps': [float(v) for v in self.log2_N_steps],
                'log2_N': float(self.log2_N),
                'invariant_ok': self.invariant_ok}


def general_grid_extract(g, schedule, n, budget=None):
    """Find a red b x a subgrid (b columns, a rows) or a blue K_n in *g*.

    Every column's red K_{r_b} copies are pooled and the row set shared by
    the most columns is kept (ties to the smallest row set).  Then
    `iterate_subgrid` runs b - 1 times, each hub being set aside; the hubs
    and one remaining column span the red subgrid.  When a step's column
    target exceeds what is left, the step asks only for the columns still
    needed.
    """
    tracker = _tracker(budget)
    trace = ExtractionTrace()
    rb = schedule.r[-1]
    if not schedule.invariant_ok:
        trace.notes.append('schedule ratio invariant fails')

    support = {}
    for x in range(1, g.width + 1):
        found_red = False
        for rows in iter_cliques(g.col_mask(x, RED), rb, budget=tracker):
            found_red = True
            support.setdefault(tuple(y + 1 for y in rows), []).append(x)
        if found_red:
            trace.column_outcomes[x] = ('red', ())
            continue
        blue = find_clique(g.col_mask(x, BLUE), n, budget=tracker)
        if blue is not None:
            rows = tuple(y + 1 for y in blue)
            trace.column_outcomes[x] = ('blue', rows)
            trace.final_step = 'blue-column'
            return Extraction(Certificate(K.BlueClique,
                                          [(x, y) for y in rows]), trace)
        trace.column_outcomes[x] = ('none', ())
    if not support:
        trace.final_step = 'pigeonhole'
        return Extraction(None, trace, 'hypothesis-not-met')

    key = min(support, key=lambda k: (-len(support[k]), k))
    cols, rows = tuple(support[key]), key
    trace.group_key, trace.group = key, cols
    aside = []
    for i in range(schedule.b, 1, -1):
        needed = i - 1
        target = schedule.column_target(i - 1)
        if target is None or target > len(cols) - 1:
            trace.notes.append(f'step {i}: column target lowered to {needed}')
            target = needed
        sub = g.subgrid(cols, rows)
        res = iterate_subgrid(sub, schedule.r[i - 2], n, target, tracker)
        trace.iterations.append({'step': i, 'columns': len(cols),
                                 'rows': list(rows), 'target': target,
                                 'kind': res.kind})
        if res.kind == 'blue':
            cert = Certificate(K.BlueClique,
                               [(cols[x - 1], rows[y - 1])
                                for x, y in res.certificate.vertices])
            trace.final_step = 'blue-iteration'
            return Extraction(cert, trace)
        if res.kind != 'hub':
            trace.final_step = 'hypothesis-not-met'
            trace.final = res.counts
            return Extraction(None, trace, 'hypothesis-not-met')
        aside.append(cols[res.hub - 1])
        rows = tuple(rows[y - 1] for y in res.rows)
        cols = tuple(cols[x - 1] for x in res.neighbours)

    xs = sorted(aside + [cols[0]])
    trace.final_step = 'subgrid'
    trace.final = {'columns': xs, 'rows': list(rows)}
    if len(xs) == 2 and len(rows) == 2:
        (x, x2), (y, y2) = xs, rows
        cert = Certificate(K.RedRectangle,
                           [(x, y), (x2, y), (x, y2), (x2, y2)])
    else:
        cert = Certificate(K.RedSubgrid, [(x, y) for x in xs for y in rows])
    return Extraction(cert, trace)

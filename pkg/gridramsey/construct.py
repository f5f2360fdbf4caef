"""Randomized constructions.

* the local-lemma condition checker and the G^(3)(N, p) sampler,
* the mod-3 coloring, which never contains a red K5^(3),
* the rectangle-free random grid subgraph: a set family, random
  bipartitions, coupled graphs and exact thinning.

All randomness is drawn from `streams.substream` so every object depends
only on the master seed and its own labels.
"""

import collections
import dataclasses
import itertools
import logging

import gmpy2
from gmpy2 import mpfr, mpq, mpz, xmpz

from .bits import iter_bits, count, nth_bit, above
from .context import get_context, mpfr_context
from .core import (GridBuilder, GridColoring, GridSubgraph,
                   ThreeGraphBuilder, ThreeGraphColoring, pair_rank,
                   triple_count)
from .exceptions import (ConstructionError, InputError, InvariantError,
                         SearchBudgetExceeded)
from .params import ParamSchedule, Tolerances
from .streams import substream
from .verify import (count_red_k4_minus_e, find_blue_star,
                     find_red_k4_minus_e, find_red_rectangle)

__all__ = ['LLLReport', 'check_lll_condition', 'lll_parameters',
           'LLLSample', 'sample_lll_candidate', 'Mod3Coloring', 'build_mod3',
           'mod3_double_count_check', 'mod3_blue_star_bound', 'SetFamily',
           'sample_set_family', 'Bipartitions', 'sample_bipartitions',
           'CoupledGraphs', 'sample_coupled_graphs', 'column_candidates',
           'StageReport', 'GridLowerResult', 'build_grid_lower',
           'random_grid']

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# local lemma
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class LLLReport:
    passed: bool
    margin_first: object
    margin_second: object
    log_stars: object

    def __bool__(self):
        return self.passed

    def to_json(self):
        return {'passed': self.passed,
                'margin_first': float(self.margin_first),
                'margin_second': float(self.margin_second),
                'log_stars': float(self.log_stars)}


def _check_lll_args(n, N, p, closed=False):
    if n < 3:
        raise InputError("n must be at least 3")
    if N < n + 1:
        raise InputError("N must be at least n + 1")
    if closed:
        if not 0 <= p <= 1:
            raise InputError("p must lie in [0, 1]")
    elif not 0 < p <= 1:
        raise InputError("p must lie in (0, 1)")


def check_lll_condition(n, N, p):
    """Evaluate both local-lemma inequalities in the natural-log domain.

    With ``|T| = N·C(N-1, n)`` stars, ``x = 3p^3`` and ``y = 1/|T|``::

        x (1-x)^(9N) (1-y)^|T|           >= p^3
        y (1-x)^(2 n^2 N) (1-y)^|T|      >= (1-p)^C(n,2)

    Returns an `LLLReport` whose margins are log(left) - log(right).
    """
    _check_lll_args(n, N, p)
    ninf = mpfr('-inf')
    with mpfr_context():
        p = mpfr(p)
        x = 3 * p ** 3
        log_T = (gmpy2.log(mpfr(N)) + gmpy2.lngamma(mpfr(N))
                 - gmpy2.lngamma(mpfr(n + 1)) - gmpy2.lngamma(mpfr(N - n)))
        if x >= 1:
            return LLLReport(False, ninf, ninf, log_T)
        y = gmpy2.exp(-log_T)
        log1x = gmpy2.log1p(-x)
        # |T|·log(1-y), which tends to -1 for huge |T|
        tail = gmpy2.exp(log_T) * gmpy2.log1p(-y)
        left1 = gmpy2.log(x) + 9 * N * log1x + tail
        right1 = 3 * gmpy2.log(p)
        left2 = -log_T + 2 * n * n * N * log1x + tail
        right2 = (n * (n - 1) // 2) * gmpy2.log1p(-p)
        m1, m2 = left1 - right1, left2 - right2
    passed = bool(m1 >= 0 and m2 >= 0)
    log.debug("LLL n=%d N=%d: margins %s %s", n, N, m1, m2)
    return LLLReport(passed, m1, m2, log_T)


def lll_parameters(n):
    """``N = 10^-3 n^2 / ln(n)^2`` (at least n + 1) and ``p = 4 ln(n) / n``."""
    if n < 3:
        raise InputError("n must be at least 3")
    with mpfr_context():
        L = gmpy2.log(mpfr(n))
        N = int(gmpy2.floor(mpfr(n) ** 2 / (1000 * L * L)))
        p = min(mpfr(1), 4 * L / n)
    return max(N, n + 1), p


@dataclasses.dataclass(frozen=True)
class LLLSample:
    coloring: ThreeGraphColoring
    red_k4_minus_e: int
    k4_minus_e_witness: object
    blue_star_status: str
    blue_star_witness: object

    @property
    def good(self):
        return (self.red_k4_minus_e == 0 and self.blue_star_status == 'none')

    def to_json(self):
        return {
            'red_k4_minus_e': self.red_k4_minus_e,
            'k4_minus_e_witness': (None if self.k4_minus_e_witness is None
                                   else self.k4_minus_e_witness.to_json()),
            'blue_star': self.blue_star_status,
            'blue_star_witness': (None if self.blue_star_witness is None
                                  else self.blue_star_witness.to_json()),
        }


def sample_lll_candidate(n, N, p, seed, budget=None):
    """Sample G^(3)(N, p) and look for red K4-e and blue S_n witnesses."""
    _check_lll_args(n, N, p, closed=True)
    stream = substream(seed, 'lll')
    red = stream.subset(gmpy2.bit_mask(triple_count(N)), p)
    t = ThreeGraphColoring(N, red)
    try:
        star = find_blue_star(t, n, budget)
        status = 'none' if star is None else 'found'
    except SearchBudgetExceeded:
        star, status = None, 'indeterminate'
    return LLLSample(t, count_red_k4_minus_e(t), find_red_k4_minus_e(t),
                     status, star)


# ---------------------------------------------------------------------------
# mod 3
# ---------------------------------------------------------------------------

class Mod3Coloring:
    """A Z/3 edge labelling ``phi`` of K_N and the 3-graph coloring it induces.

    A triple is red iff its three pair labels sum to 1 mod 3.
    """

    __slots__ = ('vertex_count', 'phi', 'chi')

    def __init__(self, N, phi):
        if N < 3:
            raise InputError("N must be at least 3")
        phi = tuple(int(v) % 3 for v in phi)
        if len(phi) != N * (N - 1) // 2:
            raise InputError("phi must label every pair of K_N")
        b = ThreeGraphBuilder(N)
        rank = 0
        for k in range(2, N):
            for j in range(1, k):
                pjk = phi[pair_rank(j, k)]
                for i in range(j):
                    if (phi[pair_rank(i, j)] + phi[pair_rank(i, k)] + pjk) % 3 == 1:
                        b.set_rank(rank)
                    rank += 1
        self.vertex_count = N
        self.phi = phi
        self.chi = b.freeze()

    @classmethod
    def from_pairs(cls, N, labels, default=0):
        """Build from a mapping ``{(i, j): value}``; missing pairs get *default*."""
        phi = [default] * (N * (N - 1) // 2)
        for (i, j), v in labels.items():
            phi[pair_rank(i, j)] = v
        return cls(N, phi)

    def label(self, i, j):
        return self.phi[pair_rank(i, j)]


def build_mod3(N, seed):
    """Uniform i.i.d. labels in {0, 1, 2} for the pairs of K_N."""
    if N < 3:
        raise InputError("N must be at least 3")
    stream = substream(seed, 'mod3')
    return Mod3Coloring(N, [stream.below(3) for _ in range(N * (N - 1) // 2)])


def mod3_double_count_check(phi, vertices):
    """Sum over the ten triples of five vertices of their label sums, mod 3.

    Every pair is counted three times, so the result is always 0.  *phi* is
    a `Mod3Coloring` or a sequence of labels indexed by `pair_rank`.
    """
    vs = tuple(vertices)
    if len(vs) != 5 or len(set(vs)) != 5:
        raise InputError("need five distinct vertices")
    label = phi.label if isinstance(phi, Mod3Coloring) else \
        (lambda i, j: phi[pair_rank(i, j)])
    total = 0
    for i, j, k in itertools.combinations(vs, 3):
        total += label(i, j) + label(i, k) + label(j, k)
    return total % 3


def mod3_blue_star_bound(n):
    """log2 of ``N·C(N-1, n)·(2/3)^C(n,2)`` at ``N = floor((3/2)^(n/2))``.

    A negative value means the expected number of blue S_n is below one.
    """
    if n < 1:
        raise InputError("n must be positive")
    with mpfr_context():
        N = int(gmpy2.floor(mpfr(1.5) ** (mpfr(n) / 2)))
        if N < n + 1:
            return N, mpfr('-inf')
        val = (gmpy2.log2(mpfr(N)) + gmpy2.log2(mpfr(gmpy2.comb(N - 1, n)))
               + (n * (n - 1) // 2) * gmpy2.log2(mpfr(2) / 3))
    return N, val


# ---------------------------------------------------------------------------
# set family and bipartitions
# ---------------------------------------------------------------------------

class SetFamily:
    """Sets ``U_0 .. U_{T-1}`` of ``range(N)`` stored as element masks."""

    def __init__(self, N, sets, attempts=1):
        self.N = N
        self.sets = tuple(mpz(s) for s in sets)
        self.attempts = attempts
        member = [xmpz(0) for _ in range(N)]
        for i, s in enumerate(self.sets):
            for y in iter_bits(s):
                member[y][i] = 1
        # member[y]: mask of the indices i with y in U_i
        self.member = tuple(mpz(m) for m in member)
        self.degrees = tuple(count(m) for m in self.member)

    @property
    def T(self):
        return len(self.sets)

    def common(self, y, y2):
        """Mask of indices i with both y and y2 in U_i."""
        return self.member[y] & self.member[y2]

    @property
    def pair_counts(self):
        """Sparse ``{(y, y2): count}`` of co-membership, y < y2."""
        out = {}
        for y in range(self.N):
            my = self.member[y]
            for y2 in range(y + 1, self.N):
                c = count(my & self.member[y2])
                if c:
                    out[y, y2] = c
        return out

    def max_pair(self):
        best, where = 0, None
        for key, c in self.pair_counts.items():
            if c > best:
                best, where = c, key
        return best, where


def sample_set_family(params, seed, attempt_cap=None):
    """Resample a family until every degree and pair count is in range."""
    cap = attempt_cap or get_context().attempt_cap
    full = gmpy2.bit_mask(params.N)
    diag = {}
    for attempt in range(1, cap + 1):
        sets = [substream(seed, 'sets', attempt, i).subset(full,
                                                          params.membership)
                for i in range(params.T)]
        fam = SetFamily(params.N, sets, attempt)
        low = [y for y, d in enumerate(fam.degrees)
               if not params.deg_lo <= d <= params.deg_hi]
        worst, where = fam.max_pair()
        if not low and worst <= params.pair_cap:
            log.debug("set family accepted after %d attempts", attempt)
            return fam
        diag = {'attempts': attempt,
                'degree_histogram': dict(sorted(
                    collections.Counter(fam.degrees).items())),
                'bad_degrees': len(low),
                'worst_pair': where, 'worst_pair_count': worst}
        log.debug("set family attempt %d rejected: %s", attempt, diag)
    raise ConstructionError(f"no admissible set family in {cap} attempts",
                            diag)


class Bipartitions:
    """Partitions ``P_i ⊔ Q_i`` of ``range(N)``, one per set index.

    ``parts[i]`` is the element mask of ``P_i``; ``sides[x]`` is the mask of
    indices i with x in ``P_i``, so ``D(x, x2) = sides[x] ^ sides[x2]``.
    """

    def __init__(self, N, parts, attempts=1):
        self.N = N
        self.parts = tuple(mpz(p) & gmpy2.bit_mask(N) for p in parts)
        self.attempts = attempts
        sides = [xmpz(0) for _ in range(N)]
        for i, p in enumerate(self.parts):
            for x in iter_bits(p):
                sides[x][i] = 1
        self.sides = tuple(mpz(s) for s in sides)

    @property
    def T(self):
        return len(self.parts)

    def other(self, i):
        """Element mask of ``Q_i``."""
        return gmpy2.bit_mask(self.N) & ~self.parts[i]

    def split(self, x, x2):
        """``D(x, x2)``: mask of the i separating x and x2."""
        return self.sides[x] ^ self.sides[x2]

    def split_at(self, x, x2, y, family):
        """``|D(x, x2)(y)|``."""
        return count(self.split(x, x2) & family.member[y])


def sample_bipartitions(T, N, tolerances, seed, family=None,
                        attempt_cap=None):
    """Fair-coin bipartitions resampled until both split properties hold.

    Property (a) asks ``|D(x,x2)|`` to lie within ``(1/2 ± epsilon)·T`` for
    every pair; property (b), checked when *family* is given, asks
    ``|D(x,x2)(y)|`` to lie in the tolerance window for every row y.
    """
    if T < 1 or N < 1:
        raise InputError("T and N must be positive")
    if tolerances is None:
        tolerances = Tolerances()
    cap = attempt_cap or get_context().attempt_cap
    lo_a = (0.5 - tolerances.epsilon) * T
    hi_a = (0.5 + tolerances.epsilon) * T
    diag = {}
    for attempt in range(1, cap + 1):
        parts = [substream(seed, 'partition', attempt, i).bits(N)
                 for i in range(T)]
        bip = Bipartitions(N, parts, attempt)
        bad = _first_bad_pair(bip, lo_a, hi_a, tolerances, family)
        if bad is None:
            log.debug("bipartitions accepted after %d attempts", attempt)
            return bip
        diag = {'attempts': attempt, 'worst_pair': bad[0],
                'property': bad[1], 'value': bad[2]}
        log.debug("bipartition attempt %d rejected: %s", attempt, diag)
    raise ConstructionError(f"no admissible bipartitions in {cap} attempts",
                            diag)


def _first_bad_pair(bip, lo_a, hi_a, tol, family):
    for x in range(bip.N):
        for x2 in range(x + 1, bip.N):
            D = bip.split(x, x2)
            d = count(D)
            if not lo_a <= d <= hi_a:
                return (x, x2), 'a', d
            if family is None:
                continue
            for y, m in enumerate(family.member):
                dy = count(D & m)
                if not tol.split_lo <= dy <= tol.split_hi:
                    return (x, x2, y), 'b', dy
    return None


# ---------------------------------------------------------------------------
# coupled graphs
# ---------------------------------------------------------------------------

class CoupledGraphs:
    """The graphs ``A_i`` (with complements ``B_i``), both masks and indices.

    ``A[i][y]`` is the neighbourhood of y in ``A_i`` (empty unless y is in
    ``U_i``).  ``row_mask`` is a graph on columns, consulted for horizontal
    edges; ``col_mask`` is a graph on rows, consulted for vertical edges.
    ``row_index[x, x2]`` is the chosen ``i`` in ``D(x, x2)`` or None when the
    pair is never split.
    """

    def __init__(self, family, A, row_mask, col_mask, row_index):
        self.family = family
        self.A = tuple(tuple(mpz(m) for m in a) for a in A)
        self.row_mask = tuple(mpz(m) for m in row_mask)
        self.col_mask = tuple(mpz(m) for m in col_mask)
        self.row_index = dict(row_index)

    def B(self, i, y):
        """Neighbourhood of y in ``B_i``."""
        U = self.family.sets[i]
        if not U.bit_test(y):
            return mpz(0)
        return (U & ~self.A[i][y]).bit_clear(y)

    def in_A(self, i, y, y2):
        return self.A[i][y].bit_test(y2)

    def check(self, bipartitions):
        """Raise `InvariantError` unless A_i, B_i and the indices are sound."""
        for i, U in enumerate(self.family.sets):
            for y in iter_bits(U):
                a, b = self.A[i][y], self.B(i, y)
                if a & b or (a | b) != U.bit_clear(y):
                    raise InvariantError(f"A_{i} and B_{i} do not split U_{i}")
        for (x, x2), i in self.row_index.items():
            if i is not None and not bipartitions.split(x, x2).bit_test(i):
                raise InvariantError(f"row index of {(x, x2)} not separating")


def _random_graph(stream_of, universe, p):
    """Symmetric adjacency over ``universe`` with independent edges."""
    N = universe.bit_length()
    adj = [xmpz(0) for _ in range(N)]
    for y in iter_bits(universe):
        for y2 in iter_bits(stream_of(y).subset(universe & above(y), p)):
            adj[y][y2] = 1
            adj[y2][y] = 1
    return adj


def sample_coupled_graphs(params, family, bipartitions, seed):
    """Draw every ``A_i``, both masks and the row indices."""
    N = params.N
    full = gmpy2.bit_mask(N)
    A = []
    for i, U in enumerate(family.sets):
        adj = _random_graph(lambda y, i=i: substream(seed, 'A', i, y), U, 0.5)
        A.append([adj[y] if y < len(adj) else 0 for y in range(N)])
    row_mask = _random_graph(lambda x: substream(seed, 'rowmask', x), full,
                             params.row_mask_density)
    col_mask = _random_graph(lambda y: substream(seed, 'colmask', y), full,
                             params.col_mask_density)
    row_index = {}
    for x in range(N):
        for x2 in range(x + 1, N):
            D = bipartitions.split(x, x2)
            if not D:
                row_index[x, x2] = None
                continue
            pick = substream(seed, 'rowindex', x, x2).below(count(D))
            row_index[x, x2] = nth_bit(D, pick)
    return CoupledGraphs(family, A, row_mask, col_mask, row_index)


# ---------------------------------------------------------------------------
# the grid construction
# ---------------------------------------------------------------------------

def column_candidates(family, bipartitions, coupled, y, y2):
    """Columns whose candidate graph contains the vertical pair (y, y2).

    Returns ``(mask, m)`` where m is the number of sets containing both
    rows.  A column x qualifies iff for every such ``U_i`` either x is in
    ``P_i`` and the pair is in ``A_i``, or x is in ``Q_i`` and the pair is in
    ``B_i``; its probability of qualifying is exactly ``2^-m``.
    """
    common = family.common(y, y2)
    cand = gmpy2.bit_mask(family.N)
    for i in iter_bits(common):
        P = bipartitions.parts[i]
        if coupled.in_A(i, y, y2):
            cand &= P
            if cand & bipartitions.other(i):
                raise InvariantError("candidate column outside P_i")
        else:
            cand &= bipartitions.other(i)
            if cand & P:
                raise InvariantError("candidate column outside Q_i")
    return cand, count(common)


@dataclasses.dataclass
class StageReport:
    """What happened while building one grid subgraph."""

    family_attempts: int = 0
    bipartition_attempts: int = 0
    policy: str = 'clamp'
    column_pairs: int = 0
    column_candidates: int = 0
    column_edges: int = 0
    row_pairs: int = 0
    unsplit_pairs: int = 0
    row_edges: int = 0
    clamped_columns: list = dataclasses.field(default_factory=list)
    clamped_rows: list = dataclasses.field(default_factory=list)
    zero_support_rows: int = 0
    max_common: int = 0
    density_rows: float = 0.0
    density_cols: float = 0.0

    @property
    def flags(self):
        return len(self.clamped_columns) + len(self.clamped_rows)

    def to_json(self):
        doc = dataclasses.asdict(self)
        doc['clamped_columns'] = [list(e) for e in self.clamped_columns]
        doc['clamped_rows'] = [list(e) for e in self.clamped_rows]
        doc['flags'] = self.flags
        return doc


@dataclasses.dataclass(frozen=True)
class GridLowerResult:
    h: GridSubgraph
    report: StageReport
    family: SetFamily
    bipartitions: Bipartitions
    coupled: CoupledGraphs


def _keep_probability(p_thin, pre, policy, where, report_list):
    keep = p_thin / pre
    if keep > 1:
        if policy == 'abort':
            raise ConstructionError(
                f"pre-thinning probability {pre} below p_thin at {where}",
                {'edge': where, 'pre': float(pre)})
        report_list.append(where)
        return mpq(1)
    if keep * pre != p_thin:
        raise InvariantError(f"thinning law violated at {where}")
    return keep


def build_grid_lower(params, seed, family=None, bipartitions=None,
                     coupled=None):
    """Build a random spanning subgraph H of the N x N grid with no rectangle.

    Each vertical pair (y, y2) that survives the column mask is placed in
    the columns returned by `column_candidates` and thinned to ``p_thin``;
    each horizontal pair (x, x2) that survives the row mask is placed in the
    rows of ``U_i`` for ``i = row_index[x, x2]`` and thinned the same way.
    Rows of one horizontal pair share a single ``U_i`` whose pairs are
    split between the two columns by ``A_i`` and ``B_i``, so at most one of
    the two vertical edges of any would-be rectangle is present.
    """
    if not isinstance(params, ParamSchedule):
        raise InputError("params must be a ParamSchedule")
    policy = get_context().thinning_policy
    N = params.N
    if family is None:
        family = sample_set_family(params, seed)
    if bipartitions is None:
        bipartitions = sample_bipartitions(params.T, N, params.tolerances(),
                                           seed, family)
    if coupled is None:
        coupled = sample_coupled_graphs(params, family, bipartitions, seed)
    report = StageReport(family_attempts=family.attempts,
                         bipartition_attempts=bipartitions.attempts,
                         policy=policy)
    p_thin = mpq(params.p_thin)
    b = GridBuilder(N, N)

    for y in range(N):
        for y2 in iter_bits(coupled.col_mask[y], y + 1):
            report.column_pairs += 1
            cand, m = column_candidates(family, bipartitions, coupled, y, y2)
            if m > params.pair_cap:
                raise InvariantError(f"rows {(y, y2)} share {m} sets")
            report.max_common = max(report.max_common, m)
            report.column_candidates += count(cand)
            keep = _keep_probability(p_thin, mpq(1, 2 ** m), policy,
                                     (y + 1, y2 + 1), report.clamped_columns)
            stream = substream(seed, 'columns', y, y2)
            for x in iter_bits(cand):
                if stream.bernoulli(keep):
                    b.set_vertical(x + 1, y + 1, y2 + 1)
                    report.column_edges += 1

    for x in range(N):
        for x2 in iter_bits(coupled.row_mask[x], x + 1):
            report.row_pairs += 1
            i = coupled.row_index.get((x, x2))
            if i is None:
                report.unsplit_pairs += 1
                continue
            D = bipartitions.split(x, x2)
            d = count(D)
            U = family.sets[i]
            stream = substream(seed, 'rows', x, x2)
            for y in range(N):
                dy = count(D & family.member[y])
                if dy == 0:
                    report.zero_support_rows += 1
                    continue
                keep = _keep_probability(p_thin, mpq(dy, d), policy,
                                         (x + 1, x2 + 1, y + 1),
                                         report.clamped_rows)
                if U.bit_test(y) and stream.bernoulli(keep):
                    b.set_horizontal(x + 1, x2 + 1, y + 1)
                    report.row_edges += 1

    h = b.freeze(GridSubgraph)
    _check_grid_lower(h, coupled)
    report.density_rows = h.row_density()
    report.density_cols = h.col_density()
    log.info("grid construction N=%d: %d vertical, %d horizontal edges, "
             "%d flags", N, report.column_edges, report.row_edges,
             report.flags)
    return GridLowerResult(h, report, family, bipartitions, coupled)


def _check_grid_lower(h, coupled):
    cert = find_red_rectangle(h)
    if cert is not None:
        raise InvariantError(f"constructed grid contains {cert}")
    for kind, a, c, d in h.red_edges():
        if kind == 'h' and not coupled.row_mask[a - 1].bit_test(c - 1):
            raise InvariantError(f"horizontal edge {(a, c, d)} not in RowMask")
        if kind == 'v' and not coupled.col_mask[c - 1].bit_test(d - 1):
            raise InvariantError(f"vertical edge {(a, c, d)} not in ColMask")


# ---------------------------------------------------------------------------
# uniform random colorings
# ---------------------------------------------------------------------------

def random_grid(width, height, p, seed, cls=GridColoring):
    """Color every edge of the width x height grid red independently with
    probability *p*.  Each row and each column has its own substream."""
    if not 0 <= p <= 1:
        raise InputError("p must lie in [0, 1]")
    b = GridBuilder(width, height)
    for y in range(1, height + 1):
        stream = substream(seed, 'random-row', y)
        for x, x2 in itertools.combinations(range(1, width + 1), 2):
            if stream.bernoulli(p):
                b.set_horizontal(x, x2, y)
    for x in range(1, width + 1):
        stream = substream(seed, 'random-col', x)
        for y, y2 in itertools.combinations(range(1, height + 1), 2):
            if stream.bernoulli(p):
                b.set_vertical(x, y, y2)
    return b.freeze(cls)

"""z-tests of the distributional claims made by the constructions.

Every `StatEntry` names the claim it tests in its ``anchor``; a
`StatReport` refuses entries without one.  Entries pass when ``|z|`` stays
below the report's threshold, which is the context's ``z_threshold``
Bonferroni-corrected for the number of entries in the report.
"""

import dataclasses
import itertools
import math

import gmpy2
import mpmath

from .construct import build_mod3
from .context import get_context
from .core import BLUE
from .exceptions import InputError
from .streams import derive_seed, substream

__all__ = ['StatEntry', 'StatReport', 'bonferroni_threshold',
           'stat_marginals', 'stat_blue_star_rate', 'edge_correlations']

MIN_MARGINAL_SAMPLES = 30


def bonferroni_threshold(z, m):
    """Two-sided threshold for *m* tests at the family-wise level of |z|."""
    if m < 1:
        raise InputError("need at least one test")
    if m == 1:
        return float(z)
    with mpmath.workdps(30):
        alpha = mpmath.erfc(mpmath.mpf(z) / mpmath.sqrt(2))
        return float(mpmath.sqrt(2) * mpmath.erfinv(1 - alpha / m))


@dataclasses.dataclass(frozen=True)
class StatEntry:
    """One observed statistic against its expected value.

    ``stderr`` is the standard error of ``observed`` under the claim; a zero
    standard error makes ``z`` 0 on an exact match and infinite otherwise.
    """

    anchor: str
    claim: str
    observed: float
    expected: float
    stderr: float
    samples: int
    extra: dict = dataclasses.field(default_factory=dict)

    @property
    def z(self):
        diff = self.observed - self.expected
        if self.stderr == 0:
            return 0.0 if math.isclose(diff, 0.0, abs_tol=1e-12) else math.inf
        return diff / self.stderr

    @property
    def p_value(self):
        """Two-sided normal tail probability of ``z``."""
        z = self.z
        if math.isinf(z):
            return 0.0
        with mpmath.workdps(30):
            return float(mpmath.erfc(abs(mpmath.mpf(z)) / mpmath.sqrt(2)))

    def to_json(self):
        z = self.z
        return {'anchor': self.anchor, 'claim': self.claim,
                'observed': self.observed, 'expected': self.expected,
                'stderr': self.stderr, 'samples': self.samples,
                'z': None if math.isinf(z) else z,
                'p_value': self.p_value, 'extra': dict(self.extra)}


class StatReport:
    """StatReport(entries, z_threshold=None)

    *z_threshold* defaults to the active context's.
    """

    def __init__(self, entries, z_threshold=None):
        entries = tuple(entries)
        for e in entries:
            if not isinstance(e, StatEntry):
                raise InputError(f"{e!r} is not a StatEntry")
            if not e.anchor or not e.anchor.strip():
                raise InputError(f"entry {e.claim!r} has no anchor")
        self.entries = entries
        self.z_threshold = (get_context().z_threshold if z_threshold is None
                            else float(z_threshold))

    @property
    def threshold(self):
        if not self.entries:
            return self.z_threshold
        return bonferroni_threshold(self.z_threshold, len(self.entries))

    def entry_passed(self, entry):
        return abs(entry.z) <= self.threshold

    @property
    def passed(self):
        return all(self.entry_passed(e) for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not self.entry_passed(e)]

    def to_json(self):
        return {'threshold': self.threshold,
                'z_threshold': self.z_threshold,
                'passed': self.passed,
                'entries': [dict(e.to_json(), passed=self.entry_passed(e))
                            for e in self.entries]}

    def format(self):
        lines = [f'threshold |z| <= {self.threshold:.4f}']
        for e in self.entries:
            z = e.z
            mark = 'pass' if self.entry_passed(e) else 'FAIL'
            lines.append(f'{mark}  z={z:+.3f}  observed={e.observed:.6g}  '
                         f'expected={e.expected:.6g}  n={e.samples}  '
                         f'[{e.anchor}] {e.claim}')
        return '\n'.join(lines)


def _bernoulli_stderr(p, k):
    return math.sqrt(p * (1 - p) / k) if k else 0.0


def _slots(g, axis):
    w, h = g.width, g.height
    rows = h * w * (w - 1) // 2
    cols = w * h * (h - 1) // 2
    if axis == 'rows':
        return g.horizontal_red_count(), rows
    if axis == 'cols':
        return g.vertical_red_count(), cols
    return g.horizontal_red_count() + g.vertical_red_count(), rows + cols


def edge_correlations(samples, pairs=20, seed=0):
    """Sample correlation of randomly chosen pairs of edge slots.

    Returns ``(max_abs_r, max_abs_z)`` with ``z = r·sqrt(m)`` for *m*
    samples; slots that never vary are skipped.
    """
    if not samples:
        return 0.0, 0.0
    g0 = samples[0]
    edges = list(g0.edges())
    if len(edges) < 2:
        return 0.0, 0.0
    stream = substream(seed, 'correlation')
    vectors = {}
    worst = 0.0
    m = len(samples)
    for _ in range(pairs):
        a = stream.below(len(edges))
        b = stream.below(len(edges) - 1)
        if b >= a:
            b += 1
        for i in (a, b):
            if i not in vectors:
                vectors[i] = [1 if s.edge_color(edges[i]) != BLUE else 0
                              for s in samples]
        r = _pearson(vectors[a], vectors[b])
        worst = max(worst, abs(r))
    return worst, worst * math.sqrt(m)


def _pearson(u, v):
    m = len(u)
    mu, mv = sum(u) / m, sum(v) / m
    su = sum((x - mu) ** 2 for x in u)
    sv = sum((y - mv) ** 2 for y in v)
    if su == 0 or sv == 0:
        return 0.0
    return sum((x - mu) * (y - mv) for x, y in zip(u, v)) / math.sqrt(su * sv)


def stat_marginals(samples, p, axis='both', anchor='grid marginal law',
                   pairs=20, seed=0):
    """Pooled edge density of grid subgraph *samples* against *p*.

    *axis* selects horizontal (``'rows'``), vertical (``'cols'``) or all
    edges.  The entry's ``extra`` carries the pairwise correlation screen.
    """
    samples = list(samples)
    if len(samples) < MIN_MARGINAL_SAMPLES:
        raise InputError(f"need at least {MIN_MARGINAL_SAMPLES} samples, "
                         f"got {len(samples)}")
    if not 0 <= p <= 1:
        raise InputError("p must lie in [0, 1]")
    if axis not in ('rows', 'cols', 'both'):
        raise InputError(f"unknown axis {axis!r}")
    present = total = 0
    for g in samples:
        e, k = _slots(g, axis)
        present += e
        total += k
    if total == 0:
        raise InputError("samples have no edge slots")
    observed = present / total
    max_r, max_z = edge_correlations(samples, pairs, seed)
    return StatEntry(anchor, f'{axis} edge density equals p', observed,
                     float(p), _bernoulli_stderr(p, total), len(samples),
                     {'edges': present, 'slots': total,
                      'max_abs_correlation': max_r,
                      'max_correlation_z': max_z})


def stat_blue_star_rate(n, runs, seed=0, N=None,
                        anchor='mod-3 blue star probability'):
    """Frequency with which the star centred at 0 on leaves 1..n is blue.

    Each run draws an independent mod-3 labelling of K_N, ``N`` defaulting
    to ``max(3, n + 1)``; the expected rate is ``(2/3)^C(n,2)``.
    """
    if n < 1:
        raise InputError("n must be positive")
    if runs < 1:
        raise InputError("need at least one run")
    N = max(3, n + 1) if N is None else N
    if N < n + 1:
        raise InputError(f"N = {N} leaves no room for {n} leaves")
    expected = float(gmpy2.mpq(2, 3) ** (n * (n - 1) // 2))
    hits = 0
    for run in range(runs):
        chi = build_mod3(N, derive_seed(seed, 'star', run)).chi
        if all(not chi.is_red(0, a, b)
               for a, b in itertools.combinations(range(1, n + 1), 2)):
            hits += 1
    return StatEntry(anchor, f'fixed S_{n} is blue', hits / runs, expected,
                     _bernoulli_stderr(expected, runs), runs,
                     {'hits': hits, 'N': N})

"""Parameter schedules for the randomized grid construction.

The asymptotic settings are expressed as functions of ``n`` with logarithms
to base 2.  `ParamSchedule.from_formulas` evaluates them literally;
`ParamSchedule.desk` is a preset that keeps the same shapes but uses a
smaller power of the logarithm so that instances with ``N`` around 64 are
feasible.  Every field can be overridden by keyword.
"""

import dataclasses
import math

import gmpy2
from gmpy2 import mpfr

from .context import mpfr_context
from .exceptions import InputError

__all__ = ['ParamSchedule', 'Tolerances', 'layer_count']


def layer_count(N):
    """Number of bit layers needed to tell apart ``N`` vertices."""
    if N < 2:
        return 1
    return (N - 1).bit_length()


@dataclasses.dataclass(frozen=True)
class Tolerances:
    """Acceptance windows used when resampling bipartitions.

    ``epsilon`` bounds how far each |D(x,x')| may stray from T/2 (as a
    fraction of T); ``split_lo``/``split_hi`` bound |D(x,x')(y)|.
    """

    epsilon: float = 0.1
    split_lo: float = float('-inf')
    split_hi: float = float('inf')

    def __post_init__(self):
        if not 0 <= self.epsilon <= 0.5:
            raise InputError("epsilon must lie in [0, 1/2]")
        if self.split_lo > self.split_hi:
            raise InputError("split window is empty")


_FIELDS = ('n', 'N', 'T', 'membership', 'deg_lo', 'deg_hi', 'pair_cap',
           'p_thin', 'p_union', 'p_col', 'p_row', 't', 'epsilon',
           'sigma_width')


@dataclasses.dataclass(frozen=True)
class ParamSchedule:
    """Every quantity the grid and layered constructions need.

    ``p_col`` and ``p_row`` are the final marginal edge probabilities of
    vertical and horizontal edges.  The column and row masks are drawn with
    densities ``p_col / p_thin`` and ``p_row / p_thin``, which both equal
    ``p_union`` unless the marginals were overridden.
    """

    n: int
    N: int
    T: int
    membership: float
    deg_lo: float
    deg_hi: float
    pair_cap: int
    p_thin: float
    p_union: float
    p_col: float
    p_row: float
    t: int
    epsilon: float = 0.1
    sigma_width: float = 3.0

    def __post_init__(self):
        if self.n < 1 or self.N < 1 or self.T < 1 or self.t < 1:
            raise InputError("n, N, T and t must be positive")
        if self.pair_cap < 1:
            raise InputError("pair_cap must be at least 1")
        if self.deg_lo > self.deg_hi:
            raise InputError("deg_lo must not exceed deg_hi")
        if not 0 <= self.membership <= 1:
            raise InputError("membership must lie in [0, 1]")
        for name in ('p_thin', 'p_union', 'p_col', 'p_row'):
            if not 0 < getattr(self, name) <= 1:
                raise InputError(f"{name} must lie in (0, 1]")
        if self.p_col > self.p_thin or self.p_row > self.p_thin:
            raise InputError("p_col and p_row must not exceed p_thin")
        if not 0 <= self.epsilon <= 0.5:
            raise InputError("epsilon must lie in [0, 1/2]")

    # -- presets -------------------------------------------------------------

    @classmethod
    def from_formulas(cls, n, N, log_power=10, **overrides):
        """Evaluate the asymptotic formulas at *n* (logs base 2).

        ``T = n^(1/2) L^k`` with ``L = log n`` and ``k = log_power``; each
        element joins each set with probability ``n^(-1/2)``; degrees must
        lie in ``[L^k / 2, 3 L^k / 2]``; pairs share at most ``L / 4`` sets;
        ``p_thin = n^(-5/8)``, ``p_union = n^(-1/8)`` and ``t = log N``.
        """
        if n < 2:
            raise InputError("n must be at least 2")
        with mpfr_context(64):
            L = gmpy2.log2(mpfr(n))
            Lk = L ** log_power
            base = {
                'n': n, 'N': N,
                'T': int(gmpy2.ceil(gmpy2.sqrt(mpfr(n)) * Lk)),
                'membership': float(mpfr(n) ** -0.5),
                'deg_lo': float(Lk / 2),
                'deg_hi': float(Lk * 3 / 2),
                'pair_cap': max(1, int(gmpy2.floor(L / 4))),
                'p_thin': float(mpfr(n) ** mpfr(-0.625)),
                'p_union': float(mpfr(n) ** mpfr(-0.125)),
                't': layer_count(N),
            }
        return cls._finish(base, overrides)

    @classmethod
    def desk(cls, n=64, N=64, **overrides):
        """Desk-scale preset.

        ``k = 1.5``, ``pair_cap = 8``, degree window ``[L^k / 4, 2 L^k]`` and
        ``epsilon = 1/4``: at ``n = 64`` the literal window and ``epsilon``
        reject almost every sample.  ``p_thin`` is lowered to
        ``2^-pair_cap`` when needed so that every column edge can be thinned
        exactly.
        """
        pair_cap = overrides.pop('pair_cap', 8)
        sched = cls.from_formulas(n, N, log_power=1.5, pair_cap=pair_cap)
        base = sched.as_dict()
        del base['p_col'], base['p_row']
        Lk = sched.deg_lo * 2
        base['deg_lo'] = Lk / 4
        base['deg_hi'] = Lk * 2
        base['epsilon'] = 0.25
        base['p_thin'] = min(base['p_thin'], 2.0 ** -pair_cap)
        return cls._finish(base, overrides)

    @classmethod
    def _finish(cls, base, overrides):
        unknown = set(overrides) - set(_FIELDS)
        if unknown:
            raise InputError(f"unknown schedule fields: {sorted(unknown)}")
        vals = dict(base)
        vals.update(overrides)
        vals.setdefault('p_col', vals['p_thin'] * vals['p_union'])
        vals.setdefault('p_row', vals['p_thin'] * vals['p_union'])
        return cls(**vals)

    def replace(self, **overrides):
        unknown = set(overrides) - set(_FIELDS)
        if unknown:
            raise InputError(f"unknown schedule fields: {sorted(unknown)}")
        return dataclasses.replace(self, **overrides)

    def as_dict(self):
        return dataclasses.asdict(self)

    # -- derived quantities ---------------------------------------------------

    @property
    def col_mask_density(self):
        return self.p_col / self.p_thin

    @property
    def row_mask_density(self):
        return self.p_row / self.p_thin

    def split_window(self):
        """Acceptance window for |D(x,x')(y)|: binomial mean ± sigma_width·σ."""
        w = self.sigma_width
        lo = self.deg_lo / 2 - w * math.sqrt(self.deg_lo) / 2
        hi = self.deg_hi / 2 + w * math.sqrt(self.deg_hi) / 2
        return lo, hi

    def tolerances(self):
        lo, hi = self.split_window()
        return Tolerances(self.epsilon, lo, hi)

"""Asymptotic bound formulas evaluated in the log2 domain.

The constants in these bounds are not known numerically.  `bound_tables`
takes them from the caller (every constant defaults to 1) and evaluates
each formula as a base-2 logarithm in `mpfr` at the active context
precision.  The result is a comparison table; no row claims that its
constant is correct.

    >>> from gridramsey.bounds import set_coloring_log2_bound
    >>> float(set_coloring_log2_bound(10, 4, 3))
    5.0
"""

import dataclasses

import gmpy2
from gmpy2 import mpfr, mpq

from .context import mpfr_context
from .exceptions import InputError

__all__ = ['DEFAULT_CONSTANTS', 'BoundRow', 'BoundTable', 'bound_tables',
           'set_coloring_log2_bound', 'grid_exponent']

DEFAULT_CONSTANTS = {
    'c': 1,          # lower constants of the K4 / grid bounds
    'c_prime': 1,    # upper constants of the K4 / grid bounds
    'C0': 1,         # set-coloring bound
    'c_s': 1,        # K_s lower bound, s >= 5
    'c_s_prime': 1,  # K_s upper bound, s >= 5
}


def _constants(constants):
    out = dict(DEFAULT_CONSTANTS)
    if constants:
        unknown = set(constants) - set(DEFAULT_CONSTANTS)
        if unknown:
            raise InputError(f"unknown constants: {sorted(unknown)}")
        out.update(constants)
    for name, value in out.items():
        if not value > 0:
            raise InputError(f"constant {name} must be positive")
    return out


def set_coloring_log2_bound(n, r, s, C0=1):
    """log2 of ``2^(C0 n (r-s)^2 / r log2(r/(r-s)))``.

    Valid for ``n >= 3`` and ``r > s >= r/2 >= 1``; the first inequality
    that fails is named in the `InputError`.
    """
    if n < 3:
        raise InputError("set-coloring bound needs n >= 3")
    if not r > s:
        raise InputError("set-coloring bound needs r > s")
    if not 2 * s >= r:
        raise InputError("set-coloring bound needs s >= r/2")
    if not r >= 2:
        raise InputError("set-coloring bound needs r/2 >= 1")
    with mpfr_context():
        factor = mpq(n * (r - s) ** 2, r)
        return mpfr(C0) * mpfr(factor) * gmpy2.log2(mpfr(mpq(r, r - s)))


def grid_exponent(b):
    """Exponent ``1 - 1/(2^b - 1)`` of n in the upper bound for a x b red subgrids."""
    if b < 2:
        raise InputError("grid exponent needs b >= 2")
    return 1 - mpq(1, 2 ** b - 1)


@dataclasses.dataclass(frozen=True)
class BoundRow:
    """One evaluated bound.

    ``side`` is ``'lower'``, ``'upper'`` or ``'exponent'``; ``log2_value``
    is the base-2 logarithm of the bound (for an exponent row, the exponent
    itself).
    """

    name: str
    quantity: str
    side: str
    formula: str
    log2_value: object

    def to_json(self):
        return {'name': self.name, 'quantity': self.quantity,
                'side': self.side, 'formula': self.formula,
                'log2_value': float(self.log2_value)}


class BoundTable:
    """Ordered collection of `BoundRow`, addressable by row name."""

    def __init__(self, params, rows):
        self.params = dict(params)
        self.rows = tuple(rows)
        self._by_name = {r.name: r for r in self.rows}

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def __contains__(self, name):
        return name in self._by_name

    def __getitem__(self, name):
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"no bound row {name!r}") from None

    def to_json(self):
        return {'params': {k: (v if isinstance(v, (int, str, type(None)))
                               else float(v))
                           for k, v in self.params.items()},
                'rows': [r.to_json() for r in self.rows]}

    def format(self):
        """Plain-text table, one row per bound."""
        head = ('name', 'side', 'log2 value', 'formula')
        body = [(r.name, r.side, f'{float(r.log2_value):.6g}', r.formula)
                for r in self.rows]
        widths = [max(len(line[i]) for line in [head] + body)
                  for i in range(3)]
        lines = []
        for line in [head] + body:
            cells = [line[i].ljust(widths[i]) for i in range(3)]
            lines.append('  '.join(cells + [line[3]]).rstrip())
        return '\n'.join(lines)


def bound_tables(n, r=None, s=None, a=None, b=None, constants=None,
                 clique=5):
    """Evaluate every bound at *n* and return a `BoundTable`.

    Rows for the set-coloring bound appear when *r* and *s* are given, rows
    for the a x b subgrid bounds when *b* (and optionally *a*, default *b*) is
    given.  *clique* is the size ``s >= 5`` used for the K_s^(3) rows.
    """
    if n < 2:
        raise InputError("bounds need n >= 2")
    if clique < 5:
        raise InputError("K_s rows need s >= 5")
    k = _constants(constants)
    rows = []
    with mpfr_context():
        N = mpfr(n)
        L = gmpy2.log2(N)
        lg = gmpy2.log2
        c, cp = mpfr(k['c']), mpfr(k['c_prime'])
        two_thirds = mpfr(mpq(2, 3))
        k4_upper = cp * N ** two_thirds * L

        def row(name, quantity, side, formula, value):
            rows.append(BoundRow(name, quantity, side, formula, value))

        row('k4e-star-lower', 'r(K4-e, S_n)', 'lower', 'c n^2 / log^2 n',
            lg(c) + 2 * L - 2 * lg(L))
        row('k4e-star-upper', 'r(K4-e, S_n)', 'upper', "c' n^2 / log n",
            lg(cp) + 2 * L - lg(L))
        row('k4-star-lower', 'r(K4, S_n)', 'lower', '2^(c log^2 n)',
            c * L * L)
        row('k4-star-upper', 'r(K4, S_n)', 'upper',
            "2^(c' n^(2/3) log n)", k4_upper)
        row('grid22-lower', 'gr(G22, K_n)', 'lower', '2^(c log^2 n)',
            c * L * L)
        row('grid22-upper', 'gr(G22, K_n)', 'upper',
            "2^(c' n^(2/3) log n)", k4_upper)
        row('k4-star-via-grid', 'r(K4, S_n)', 'upper',
            '2 gr(G22, K_n)', 1 + k4_upper)
        row('k5e-star-via-grid', 'r(K5-e, S_n)', 'upper',
            '2 gr(G32, K_n)', 1 + k4_upper)
        row('clique-star-lower', f'r(K{clique}, S_n)', 'lower',
            '2^(c_s n)', mpfr(k['c_s']) * N)
        row('clique-star-upper', f'r(K{clique}, S_n)', 'upper',
            "2^(c'_s n)", mpfr(k['c_s_prime']) * N)
        row('clique-star-explicit', f'r(K{clique}, S_n)', 'upper',
            '(2s)^(s n)', clique * N * lg(mpfr(2 * clique)))
        row('mod3-size', 'r(K5, S_n)', 'lower', '(3/2)^(n/2)',
            N / 2 * lg(mpfr(mpq(3, 2))))

        if b is not None:
            if a is None:
                a = b
            if not a >= b >= 2:
                raise InputError("grid rows need a >= b >= 2")
            e = grid_exponent(b)
            row('grid-exponent', f'gr(G{a}{b}, K_n)', 'exponent',
                '1 - 1/(2^b - 1)', mpfr(e))
            row('grid-lower', f'gr(G{a}{b}, K_n)', 'lower', '2^(c log^2 n)',
                c * L * L)
            row('grid-upper', f'gr(G{a}{b}, K_n)', 'upper',
                "2^(c' n^(1 - 1/(2^b - 1)) log n)", cp * N ** mpfr(e) * L)

        if r is not None or s is not None:
            if r is None or s is None:
                raise InputError("set-coloring rows need both r and s")
            row('set-coloring-upper', f'R({n}; {r}, {s})', 'upper',
                '2^(C0 n (r-s)^2 / r log(r / (r-s)))',
                set_coloring_log2_bound(n, r, s, k['C0']))

    params = {'n': n, 'r': r, 's': s, 'a': a, 'b': b, 'clique': clique}
    params.update(k)
    return BoundTable(params, rows)

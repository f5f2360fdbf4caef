"""Seeded random substreams.

Every random object in a construction draws from its own
`gmpy2.random_state`, derived from the master seed and a tuple of labels by
hashing.  The labels name the stage and the indexed object (``'sets', i``,
``'columns', y, y2`` ...), so results do not depend on evaluation order and
independent pieces can be generated in any order or in parallel.
"""

import hashlib

import gmpy2
from gmpy2 import mpfr, mpz

__all__ = ['derive_seed', 'substream', 'Stream']


def derive_seed(seed, *labels):
    """Return a 64-bit integer seed for the substream named by *labels*."""
    h = hashlib.blake2b(digest_size=8, person=b'gridramsey')
    h.update(repr(int(seed)).encode())
    for label in labels:
        h.update(b'/')
        h.update(repr(label).encode())
    return int.from_bytes(h.digest(), 'big')


class Stream:
    """A thin wrapper around `gmpy2.random_state` with the draws we need."""

    __slots__ = ('state',)

    def __init__(self, seed):
        self.state = gmpy2.random_state(seed)

    def uniform(self):
        """Uniform `mpfr` in [0, 1)."""
        return gmpy2.mpfr_random(self.state)

    def bernoulli(self, p):
        """True with probability *p*; *p* may be float, mpq or mpfr."""
        if p >= 1:
            return True
        if p <= 0:
            return False
        return gmpy2.mpfr_random(self.state) < mpfr(p)

    def below(self, n):
        """Uniform integer in [0, n)."""
        return int(gmpy2.mpz_random(self.state, n))

    def bits(self, count):
        """An `mpz` whose low *count* bits are independent fair coins."""
        if count <= 0:
            return mpz(0)
        return gmpy2.mpz_urandomb(self.state, count)

    def subset(self, universe, p):
        """Bitmask keeping each set bit of *universe* with probability *p*."""
        out = mpz(0)
        pos = universe.bit_scan1(0) if universe else None
        while pos is not None:
            if self.bernoulli(p):
                out = out.bit_set(pos)
            pos = universe.bit_scan1(pos + 1)
        return out


def substream(seed, *labels):
    """Return a fresh `Stream` for (*seed*, *labels*)."""
    return Stream(derive_seed(seed, *labels))

"""Small helpers for bitsets stored as gmpy2 integers.

Vertex sets, adjacency rows and triple bitmaps are all `mpz` values; bit
``v`` set means element ``v`` is present.
"""

import gmpy2
from gmpy2 import mpz

__all__ = ['EMPTY', 'iter_bits', 'bits_of', 'mask_of', 'count', 'nth_bit',
           'above', 'first']

EMPTY = mpz(0)


def iter_bits(mask, start=0):
    """Yield the positions of the set bits of *mask*, ascending."""
    mask = mpz(mask)
    pos = mask.bit_scan1(start) if mask else None
    while pos is not None:
        yield pos
        pos = mask.bit_scan1(pos + 1)


def bits_of(mask):
    return tuple(iter_bits(mask))


def mask_of(positions):
    m = mpz(0)
    for p in positions:
        m = m.bit_set(p)
    return m


def count(mask):
    return int(gmpy2.popcount(mask))


def first(mask):
    """Lowest set bit of *mask*, or None."""
    return mask.bit_scan1(0) if mask else None


def above(v):
    """Mask of all positions strictly greater than *v*, ANDed in by callers."""
    return ~gmpy2.bit_mask(v + 1)


def nth_bit(mask, k):
    """Position of the *k*-th (0-based) set bit of *mask*."""
    pos = mask.bit_scan1(0) if mask else None
    for _ in range(k):
        if pos is None:
            break
        pos = mask.bit_scan1(pos + 1)
    if pos is None:
        raise IndexError("bit index out of range")
    return pos

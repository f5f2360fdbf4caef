"""Portable text format for colorings and JSON for certificates.

A coloring is written as a header line followed by one line per red edge::

    grid 3 2          3graph 5
    h 1 2 1           t 0 1 2
    v 3 1 2           t 1 3 4

and terminated by a blank line (or end of input).  Lines starting with ``#``
are comments.  Grid edges are ``h x x' y`` and ``v x y y'``.
"""

import io
import json

from .core import (GridColoring, GridSubgraph, ThreeGraphColoring,
                   GridBuilder, ThreeGraphBuilder, Certificate, RED)
from .exceptions import InputError

__all__ = ['dump_coloring', 'dumps_coloring', 'load_coloring',
           'loads_coloring', 'dump_certificate', 'load_certificate']


def dump_coloring(obj, fp):
    """Write *obj* (grid or 3-graph coloring) to the text stream *fp*."""
    if isinstance(obj, GridColoring):
        fp.write(f'grid {obj.width} {obj.height}\n')
        for kind, a, b, c in obj.red_edges():
            fp.write(f'{kind} {a} {b} {c}\n')
    elif isinstance(obj, ThreeGraphColoring):
        fp.write(f'3graph {obj.vertex_count}\n')
        for i, j, k in obj.red_triples():
            fp.write(f't {i} {j} {k}\n')
    else:
        raise InputError(f"cannot serialize {type(obj).__name__}")
    fp.write('\n')


def dumps_coloring(obj):
    buf = io.StringIO()
    dump_coloring(obj, buf)
    return buf.getvalue()


def _ints(fields, lineno):
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise InputError(f"line {lineno}: expected integers, got "
                         f"{' '.join(fields)!r}") from None


def load_coloring(fp, subgraph=False):
    """Read one coloring from the text stream *fp*.

    Reading stops at the first blank line after the header, so several
    colorings can share a file.  With *subgraph* true a grid is returned as a
    `GridSubgraph`.
    """
    header = None
    builder = None
    for lineno, raw in enumerate(fp, 1):
        line = raw.strip()
        if line.startswith('#'):
            continue
        if not line:
            if header is None:
                continue
            break
        fields = line.split()
        if header is None:
            header = fields[0]
            if header == 'grid' and len(fields) == 3:
                m, n = _ints(fields[1:], lineno)
                builder = GridBuilder(m, n)
            elif header == '3graph' and len(fields) == 2:
                builder = ThreeGraphBuilder(_ints(fields[1:], lineno)[0])
            else:
                raise InputError(f"line {lineno}: bad header {line!r}")
            continue
        tag = fields[0]
        if len(fields) != 4:
            raise InputError(f"line {lineno}: expected 4 fields, got {line!r}")
        vals = _ints(fields[1:], lineno)
        if header == 'grid' and tag in ('h', 'v'):
            builder.set_edge((tag, *vals), RED)
        elif header == '3graph' and tag == 't':
            builder.set(vals, RED)
        else:
            raise InputError(f"line {lineno}: unexpected record {tag!r} "
                             f"in a {header} file")
    if builder is None:
        raise InputError("no coloring header found")
    if header == 'grid':
        return builder.freeze(GridSubgraph if subgraph else GridColoring)
    return builder.freeze()


def loads_coloring(text, subgraph=False):
    return load_coloring(io.StringIO(text), subgraph=subgraph)


def dump_certificate(cert, fp):
    """Write *cert* (or ``None``) as a JSON document."""
    json.dump(None if cert is None else cert.to_json(), fp)
    fp.write('\n')


def load_certificate(fp):
    try:
        doc = json.load(fp)
    except json.JSONDecodeError as exc:
        raise InputError(f"certificate is not valid JSON: {exc}") from None
    return None if doc is None else Certificate.from_json(doc)

"""Run-time configuration contexts.

A `context` holds the knobs shared by searches, constructions and
experiments.  `get_context` returns the active one, `set_context` installs
another and `local_context` temporarily installs a modified copy:

    >>> from gridramsey import get_context, local_context
    >>> get_context().attempt_cap
    50
    >>> with local_context(attempt_cap=5) as ctx:
    ...     ctx.attempt_cap
    5
    >>> get_context().attempt_cap
    50

Contexts are mutable; changing the object returned by `get_context` changes
the active configuration until another context is installed.  The active
context is stored in a `contextvars.ContextVar`, so threads and asyncio
tasks each see their own.
"""

import contextvars

import gmpy2

from .exceptions import InputError

__all__ = ['context', 'get_context', 'set_context', 'local_context']

_POLICIES = ('clamp', 'abort')

_DEFAULTS = {
    'node_limit': 5_000_000,
    'time_limit_ms': 600_000,
    'attempt_cap': 50,
    'thinning_policy': 'clamp',
    'strict_marking': True,
    'z_threshold': 3.0,
    'jobs': 1,
    'precision': 256,
}


class context:
    """context(ctx=None, /, **kwargs) -> context

    Create a configuration context.  Fields not given are copied from *ctx*
    when supplied, otherwise taken from the defaults.  Unknown keywords
    raise `ValueError`.  Used in a ``with`` statement the context becomes
    active for the duration of the block.
    """

    __slots__ = tuple(_DEFAULTS) + ('_tokens',)

    def __init__(self, *args, **kwargs):
        if len(args) > 1:
            raise InputError("context() takes at most 1 positional argument")
        base = args[0] if args else None
        if base is not None and not isinstance(base, context):
            raise InputError("context() argument must be a context")
        for name, default in _DEFAULTS.items():
            object.__setattr__(self, name,
                               getattr(base, name) if base else default)
        object.__setattr__(self, '_tokens', [])
        for name, value in kwargs.items():
            if name not in _DEFAULTS:
                raise InputError(f"unknown context field {name!r}")
            setattr(self, name, value)

    def __setattr__(self, name, value):
        if name not in _DEFAULTS:
            raise AttributeError(f"context has no field {name!r}")
        object.__setattr__(self, name, _validate(name, value))

    def copy(self):
        """Return an independent copy of this context."""
        return context(self)

    def as_dict(self):
        return {name: getattr(self, name) for name in _DEFAULTS}

    def __eq__(self, other):
        if not isinstance(other, context):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __repr__(self):
        fields = ', '.join(f'{k}={v!r}' for k, v in self.as_dict().items())
        return f'context({fields})'

    def __enter__(self):
        self._tokens.append(_active.set(self))
        return self

    def __exit__(self, *exc):
        _active.reset(self._tokens.pop())
        return False


def _validate(name, value):
    if name in ('node_limit', 'time_limit_ms', 'attempt_cap', 'jobs',
                'precision'):
        if isinstance(value, bool) or not isinstance(value, int):
            raise InputError(f"{name} must be an integer")
        if value < 1:
            raise InputError(f"{name} must be positive")
    elif name == 'thinning_policy':
        if value not in _POLICIES:
            raise InputError(f"thinning_policy must be one of {_POLICIES}")
    elif name == 'strict_marking':
        value = bool(value)
    elif name == 'z_threshold':
        value = float(value)
        if not value > 0:
            raise InputError("z_threshold must be positive")
    return value


_active = contextvars.ContextVar('gridramsey_context', default=None)


def get_context():
    """Return a reference to the active context."""
    ctx = _active.get()
    if ctx is None:
        ctx = context()
        _active.set(ctx)
    return ctx


def set_context(ctx):
    """Make *ctx* the active context."""
    if not isinstance(ctx, context):
        raise InputError("set_context() requires a context")
    _active.set(ctx)


def local_context(*args, **kwargs):
    """local_context(ctx=None, /, **kwargs) -> context

    Return a copy of *ctx* (or of the active context) with *kwargs* applied,
    ready to be used as a ``with`` block.
    """
    base = args[0] if args else get_context()
    if len(args) > 1:
        raise InputError("local_context() takes at most 1 positional argument")
    return context(base, **kwargs)


def mpfr_context(precision=None):
    """Copy of gmpy2's active context at *precision* bits.

    The default is ``get_context().precision``.
    """
    if precision is None:
        precision = get_context().precision
    return gmpy2.context(gmpy2.get_context(), precision=precision)

import concurrent.futures
import contextvars
import warnings

import pytest

import gmpy2

import gridramsey
from gridramsey import (InputError, context, get_context, local_context,
                        set_context)
from gridramsey.context import mpfr_context


def test_context_defaults():
    ctx = context()

    assert (ctx.node_limit == 5_000_000 and ctx.time_limit_ms == 600_000
            and ctx.attempt_cap == 50 and ctx.thinning_policy == 'clamp'
            and ctx.strict_marking and ctx.z_threshold == 3.0
            and ctx.jobs == 1 and ctx.precision == 256)


def test_context_copy():
    ctx = context(attempt_cap=7)
    ctx2 = context(ctx, jobs=3)

    assert ctx2.attempt_cap == 7 and ctx2.jobs == 3
    assert ctx.copy() == ctx
    assert ctx.copy() is not ctx
    assert ctx != ctx2
    assert repr(ctx).startswith('context(node_limit=')


def test_context_validation():
    pytest.raises(InputError, lambda: context(spam=1))
    pytest.raises(InputError, lambda: context(node_limit=0))
    pytest.raises(InputError, lambda: context(node_limit=1.5))
    pytest.raises(InputError, lambda: context(jobs=True))
    pytest.raises(InputError, lambda: context(thinning_policy='ignore'))
    pytest.raises(InputError, lambda: context(z_threshold=0))
    pytest.raises(InputError, lambda: context(1))
    pytest.raises(InputError, lambda: context(context(), context()))

    ctx = context()
    with pytest.raises(AttributeError):
        ctx.spam = 1
    ctx.strict_marking = 0
    assert ctx.strict_marking is False

    # InputError is also a ValueError
    pytest.raises(ValueError, lambda: context(attempt_cap=-1))


def test_local_context():
    assert get_context().attempt_cap == 50
    with local_context(attempt_cap=5) as ctx:
        assert get_context() is ctx
        assert ctx.attempt_cap == 5
        with local_context(jobs=2):
            assert get_context().attempt_cap == 5
            assert get_context().jobs == 2
        assert get_context().jobs == 1
    assert get_context().attempt_cap == 50

    base = context(precision=64)
    with local_context(base, jobs=4) as ctx:
        assert ctx.precision == 64 and ctx.jobs == 4
    assert base.jobs == 1


def test_set_context():
    set_context(context(attempt_cap=9))
    assert get_context().attempt_cap == 9

    get_context().attempt_cap = 11
    assert get_context().attempt_cap == 11

    pytest.raises(InputError, lambda: set_context({'attempt_cap': 1}))


def test_context_threads():
    set_context(context(attempt_cap=3))

    def read():
        return get_context().attempt_cap

    with concurrent.futures.ThreadPoolExecutor(max_workers=1) as ex:
        copied = ex.submit(contextvars.copy_context().run, read).result()
    assert copied == 3


def test_version():
    assert gridramsey.version() == gridramsey.__version__


def test_mpfr_context():
    outer = gmpy2.get_context().precision

    with local_context(precision=80):
        with mpfr_context() as ctx:
            assert ctx.precision == 80
            assert gmpy2.get_context().precision == 80
    with mpfr_context(64):
        assert gmpy2.get_context().precision == 64
    assert gmpy2.get_context().precision == outer


def test_mpfr_work_without_deprecation():
    with warnings.catch_warnings():
        warnings.simplefilter("error", DeprecationWarning)
        gridramsey.bound_tables(16)
        gridramsey.check_lll_condition(10 ** 6,
                                       *gridramsey.lll_parameters(10 ** 6))
        gridramsey.ParamSchedule.desk(16, 16)
        gridramsey.GeneralSchedule(2, 2, 64)

"""Command line interface: ``gridramsey <command> ...``.

Exit codes: 0 found / success, 1 none (also a failed statistical test or a
construction that gave up), 2 search budget exhausted, 3 hard invariant
failure, 4 invalid input.
"""

import argparse
import dataclasses
import json
import logging
import sys

from . import __version__
from .bounds import bound_tables
from .clique import SearchBudget
from .construct import (build_grid_lower, build_mod3, check_lll_condition,
                        lll_parameters, sample_lll_candidate)
from .context import local_context
from .core import BLUE, GridColoring, bipartite_to_grid, grid_to_bipartite
from .exceptions import (ConstructionError, InputError, InvariantError,
                         PreconditionError, SearchBudgetExceeded)
from .experiment import load_config, run_experiment
from .extract import GeneralSchedule, extract_grid, general_grid_extract
from .layered import build_layered
from .params import ParamSchedule
from .search import (Clique2Ramsey, GridRamsey, HyperVsStar, SetColoring,
                     ramsey2_table, ramsey_value)
from .stats import StatReport, stat_blue_star_rate, stat_marginals
from .streams import derive_seed
from .textio import (dump_certificate, dump_coloring, load_certificate,
                     load_coloring)
from .verify import (check_certificate, find_blue_star,
                     find_mono_clique_in_grid, find_red_k4,
                     find_red_k4_minus_e, find_red_k5, find_red_rectangle)

__all__ = ['main', 'build_parser']

log = logging.getLogger(__name__)

EXIT_FOUND = 0
EXIT_NONE = 1
EXIT_BUDGET = 2
EXIT_INVARIANT = 3
EXIT_INPUT = 4


def _key_values(items, conv=None):
    out = {}
    for item in items or ():
        key, sep, value = item.partition('=')
        if not sep:
            raise InputError(f"expected key=value, got {item!r}")
        if conv is not None:
            value = conv(value)
        else:
            try:
                value = int(value)
            except ValueError:
                value = float(value)
        out[key.strip()] = value
    return out


def _budget(args):
    return SearchBudget(args.budget_nodes, args.budget_ms)


def _params(args):
    overrides = _key_values(args.param)
    if args.schedule == 'formulas':
        return ParamSchedule.from_formulas(args.n, args.N, **overrides)
    return ParamSchedule.desk(args.n, args.N, **overrides)


def _emit(obj, args):
    if args.out:
        with open(args.out, 'w') as fp:
            dump_coloring(obj, fp)
    else:
        dump_coloring(obj, sys.stdout)


def _print_json(doc):
    json.dump(doc, sys.stdout, indent=2, sort_keys=True, default=str)
    sys.stdout.write('\n')


def _write_report(doc, args):
    log.info("report: %s", doc)
    if args.report:
        with open(args.report, 'w') as fp:
            json.dump(doc, fp, indent=2, sort_keys=True, default=str)
            fp.write('\n')


def _read_coloring(path):
    with open(path) as fp:
        return load_coloring(fp)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_construct(args):
    what = args.what
    if what == 'lllcheck':
        N, p = lll_parameters(args.n)
        if args.N_set:
            N = args.N
        if args.p is not None:
            p = args.p
        rep = check_lll_condition(args.n, N, p)
        _print_json(dict(rep.to_json(), n=args.n, N=N, p=float(p)))
        return EXIT_FOUND if rep.passed else EXIT_NONE
    if what == 'gridlower':
        res = build_grid_lower(_params(args), args.seed)
        _emit(res.h, args)
        _write_report(res.report.to_json(), args)
    elif what == 'layered':
        chi, state = build_layered(_params(args), args.seed)
        _emit(chi, args)
        _write_report(state.to_json(), args)
    elif what == 'mod3':
        chi = build_mod3(args.N, args.seed).chi
        _emit(chi, args)
        _write_report({'N': args.N, 'red': chi.red_count()}, args)
    else:
        p = args.p if args.p is not None else lll_parameters(args.n)[1]
        sample = sample_lll_candidate(args.n, args.N, p, args.seed,
                                      _budget(args))
        _emit(sample.coloring, args)
        _write_report(sample.to_json(), args)
        if sample.blue_star_status == 'indeterminate':
            return EXIT_BUDGET
        return EXIT_FOUND if sample.good else EXIT_NONE
    return EXIT_FOUND


_GRID_KINDS = ('rectangle', 'clique')
_THREE_KINDS = ('k4', 'k5', 'k4e', 'star')


def cmd_verify(args):
    obj = _read_coloring(args.file)
    if args.kind == 'certificate':
        if not args.certificate:
            raise InputError("verify certificate needs --certificate")
        with open(args.certificate) as fp:
            cert = load_certificate(fp)
        if cert is None:
            raise InputError("certificate file holds no certificate")
        ok = check_certificate(cert, obj)
        _print_json({'certificate': cert.to_json(), 'valid': ok})
        return EXIT_FOUND if ok else EXIT_NONE
    budget = _budget(args)
    kind = args.kind
    if isinstance(obj, GridColoring) != (kind in _GRID_KINDS):
        raise InputError(f"{kind} does not apply to this coloring")
    if kind == 'rectangle':
        cert = find_red_rectangle(obj)
    elif kind == 'clique':
        cert = find_mono_clique_in_grid(obj, args.color, args.n, budget)
    elif kind == 'k4':
        cert = find_red_k4(obj)
    elif kind == 'k5':
        cert = find_red_k5(obj)
    elif kind == 'k4e':
        cert = find_red_k4_minus_e(obj)
    else:
        cert = find_blue_star(obj, args.n, budget)
    if cert is None:
        print('NONE')
        return EXIT_NONE
    dump_certificate(cert, sys.stdout)
    return EXIT_FOUND


def cmd_extract(args):
    g = _read_coloring(args.file)
    if not isinstance(g, GridColoring):
        raise InputError("extraction needs a grid coloring")
    budget = _budget(args)
    if args.what == 'grid':
        table = None
        if args.cache:
            table = ramsey2_table(max(args.r, 2), max(args.n, 2),
                                  cache=args.cache, budget=budget)
        ext = extract_grid(g, args.r, args.n, budget, table)
    else:
        schedule = GeneralSchedule(args.a, args.b, args.n, args.C)
        ext = general_grid_extract(g, schedule, args.n, budget)
    cert = ext.certificate
    if cert is not None and not check_certificate(cert, g):
        raise InvariantError(f"extracted {cert} does not verify")
    _print_json({'outcome': ext.outcome,
                 'certificate': None if cert is None else cert.to_json(),
                 'trace': ext.trace.to_json()})
    return EXIT_FOUND if cert is not None else EXIT_NONE


def cmd_search(args):
    budget = _budget(args)
    if args.family == 'r2table':
        table = ramsey2_table(args.r, args.n, cache=args.cache,
                              path=args.path, budget=budget)
        for (r, n), e in sorted(table.entries.items()):
            value = '?' if e.value is None else e.value
            print(f'r({r},{n}) = {value}')
        return EXIT_BUDGET if table.indeterminate() else EXIT_FOUND
    if args.family == 'gr':
        fam = GridRamsey(args.n)
    elif args.family == 'r2':
        fam = Clique2Ramsey(args.r, args.n)
    elif args.family == 'setcolor':
        fam = SetColoring(args.n, args.r, args.s)
    else:
        fam = HyperVsStar(args.pattern, args.n)
    res = ramsey_value(fam, args.nmax, args.path, args.cross_check, budget)
    _print_json({'family': repr(fam), 'value': res.value,
                 'lower': res.lower, 'paths': list(res.paths),
                 'nodes': res.nodes})
    return EXIT_FOUND if res.exact else EXIT_NONE


def cmd_stats(args):
    if args.what == 'bluestar':
        entries = [stat_blue_star_rate(args.n, args.runs, args.seed)]
    else:
        params = _params(args)
        samples = [build_grid_lower(params, derive_seed(args.seed, 'sample',
                                                        i)).h
                   for i in range(args.runs)]
        entries = [stat_marginals(samples, params.p_row, 'rows',
                                  anchor='grid marginal law: rows'),
                   stat_marginals(samples, params.p_col, 'cols',
                                  anchor='grid marginal law: columns')]
    report = StatReport(entries)
    _print_json(report.to_json())
    return EXIT_FOUND if report.passed else EXIT_NONE


def cmd_map(args):
    obj = _read_coloring(args.file)
    if args.direction == 'grid2bip':
        if not isinstance(obj, GridColoring):
            raise InputError("grid2bip needs a grid coloring")
        _emit(grid_to_bipartite(obj), args)
    else:
        if isinstance(obj, GridColoring):
            raise InputError("bip2grid needs a 3-graph coloring")
        if args.a is None:
            raise InputError("bip2grid needs --a")
        _emit(bipartite_to_grid(obj, args.a), args)
    return EXIT_FOUND


def cmd_tables(args):
    table = bound_tables(args.n, args.r, args.s, args.a, args.b,
                         _key_values(args.const), args.clique)
    if args.json:
        _print_json(table.to_json())
    else:
        print(table.format())
    return EXIT_FOUND


def cmd_run(args):
    path = args.config_file or args.config
    if not path:
        raise InputError("run needs a config file")
    cfg = load_config(path)
    changes = {}
    if args.seed_set:
        changes['master_seed'] = args.seed
    if args.jobs is not None:
        changes['context'] = dict(cfg.context, jobs=args.jobs)
    if args.out_dir:
        changes['out_dir'] = args.out_dir
    cfg = dataclasses.replace(cfg, **changes)
    result = run_experiment(cfg)
    _print_json(result.report_json())
    if result.invariant_failures:
        return EXIT_INVARIANT
    if not result.report.passed:
        return EXIT_NONE
    return EXIT_FOUND


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _SetFlag(argparse.Action):
    """Store the value and remember that the option was given."""

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        setattr(namespace, self.dest + '_set', True)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='gridramsey',
        description='Constructions, certificates and exact search for '
                    'grid and hypergraph Ramsey problems.')
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    parser.add_argument('--config', help='experiment config file (run)')
    parser.add_argument('--seed', type=int, default=0, action=_SetFlag)
    parser.add_argument('--jobs', type=int, help='worker threads')
    parser.add_argument('--out-dir', help='artifact directory (run)')
    parser.add_argument('--budget-nodes', type=int, default=None)
    parser.add_argument('--budget-ms', type=int, default=None)
    sub = parser.add_subparsers(dest='command', required=True)

    def schedule_args(p):
        p.add_argument('--n', type=int, default=64)
        p.add_argument('--N', type=int, default=64, action=_SetFlag)
        p.add_argument('--schedule', choices=('desk', 'formulas'),
                       default='desk')
        p.add_argument('--param', action='append', metavar='FIELD=VALUE')

    p = sub.add_parser('construct', help='build a random coloring')
    p.add_argument('what', choices=('gridlower', 'layered', 'mod3', 'lll',
                                    'lllcheck'))
    schedule_args(p)
    p.add_argument('--p', type=float, default=None)
    p.add_argument('--out', help='coloring file (default stdout)')
    p.add_argument('--report', metavar='FILE',
                   help='write the construction report as JSON')
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser('verify', help='search a coloring for a structure')
    p.add_argument('kind',
                   choices=_GRID_KINDS + _THREE_KINDS + ('certificate',))
    p.add_argument('file')
    p.add_argument('--n', type=int, default=2)
    p.add_argument('--color', type=int, choices=(0, 1), default=BLUE)
    p.add_argument('--certificate', help='certificate file to check')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('extract', help='certificate from a grid coloring')
    p.add_argument('what', choices=('grid', 'general'))
    p.add_argument('file')
    p.add_argument('--r', type=int, default=2)
    p.add_argument('--n', type=int, default=3)
    p.add_argument('--a', type=int, default=2)
    p.add_argument('--b', type=int, default=2)
    p.add_argument('--C', type=float, default=1.0)
    p.add_argument('--cache', help='r(K_r, K_n) table cache')
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser('search', help='exact small Ramsey values')
    p.add_argument('family', choices=('gr', 'r2', 'setcolor', 'hyperstar',
                                      'r2table'))
    p.add_argument('--n', type=int, default=2)
    p.add_argument('--r', type=int, default=2)
    p.add_argument('--s', type=int, default=1)
    p.add_argument('--pattern', choices=('K4', 'K5', 'K4-e'), default='K4')
    p.add_argument('--nmax', type=int, default=10)
    p.add_argument('--path', choices=('naive', 'pruned', 'plain'),
                   default='pruned')
    p.add_argument('--cross-check', action='store_true')
    p.add_argument('--cache', help='ramsey2 table cache file')
    p.set_defaults(func=cmd_search)

    p = sub.add_parser('stats', help='statistical checks')
    p.add_argument('what', choices=('bluestar', 'marginals'))
    schedule_args(p)
    p.add_argument('--runs', type=int, default=100)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser('map', help='grid <-> bipartite 3-graph')
    p.add_argument('direction', choices=('grid2bip', 'bip2grid'))
    p.add_argument('file')
    p.add_argument('--a', type=int, help='size of the column side')
    p.add_argument('--out')
    p.set_defaults(func=cmd_map)

    p = sub.add_parser('tables', help='bound formulas')
    p.add_argument('which', choices=('bounds',))
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--r', type=int)
    p.add_argument('--s', type=int)
    p.add_argument('--a', type=int)
    p.add_argument('--b', type=int)
    p.add_argument('--clique', type=int, default=5)
    p.add_argument('--const', action='append', metavar='NAME=VALUE')
    p.add_argument('--json', action='store_true')
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser('run', help='run an experiment config')
    p.add_argument('config_file', nargs='?')
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ('seed', 'N'):
        if not hasattr(args, name + '_set'):
            setattr(args, name + '_set', False)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level,
                        format='%(levelname)s %(name)s: %(message)s')
    ctx = {}
    if args.jobs is not None:
        ctx['jobs'] = args.jobs
    try:
        with local_context(**ctx):
            return args.func(args)
    except SearchBudgetExceeded as exc:
        print(f'gridramsey: indeterminate: {exc}', file=sys.stderr)
        return EXIT_BUDGET
    except InvariantError as exc:
        print(f'gridramsey: invariant failed: {exc}', file=sys.stderr)
        return EXIT_INVARIANT
    except ConstructionError as exc:
        print(f'gridramsey: construction failed: {exc}', file=sys.stderr)
        return EXIT_NONE
    except PreconditionError as exc:
        print(f'gridramsey: precondition: {exc}', file=sys.stderr)
        return EXIT_INPUT
    except (InputError, OSError) as exc:
        print(f'gridramsey: {exc}', file=sys.stderr)
        return EXIT_INPUT

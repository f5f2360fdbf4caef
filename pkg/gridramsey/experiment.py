"""Seeded batch experiments.

An experiment is described by a line-oriented config file::

    # 100 desk-scale grid constructions
    task = construct.gridlower
    seeds = 100
    master_seed = 7
    schedule = desk
    n = 64
    N = 64
    param.pair_cap = 8
    out_dir = runs/gridlower

Keys are listed in `KEYS`; ``param.<field>`` overrides a field of the
`ParamSchedule`.  Unknown keys are errors.  Every seed gets its own derived
seed, seeds may run on several threads, and the summary is assembled in
seed order, so a run is reproducible from the config alone.
"""

import concurrent.futures
import contextvars
import csv
import dataclasses
import io
import json
import logging
import os

from .construct import (build_grid_lower, build_mod3, lll_parameters,
                        random_grid, sample_lll_candidate)
from .context import get_context, local_context
from .core import BLUE
from .exceptions import (GridRamseyError, InputError, InvariantError,
                         SearchBudgetExceeded)
from .extract import GeneralSchedule, extract_grid, general_grid_extract
from .layered import build_layered
from .params import ParamSchedule
from .search import (Clique2Ramsey, GridRamsey, HyperVsStar, SetColoring,
                     ramsey_value)
from .stats import (MIN_MARGINAL_SAMPLES, StatReport, stat_blue_star_rate,
                    stat_marginals)
from .streams import derive_seed
from .textio import dumps_coloring, load_coloring
from .verify import (check_certificate, find_blue_star,
                     find_mono_clique_in_grid, find_red_k4, find_red_k5,
                     find_red_rectangle)

__all__ = ['KEYS', 'TASKS', 'CSV_COLUMNS', 'ExperimentConfig',
           'parse_config', 'load_config', 'SeedSummary', 'ExperimentResult',
           'run_experiment']

log = logging.getLogger(__name__)

CSV_COLUMNS = ('seed', 'task', 'status', 'certificate', 'density_rows',
               'density_cols', 'edges', 'attempts', 'flags')

TASKS = ('construct.gridlower', 'construct.layered', 'construct.mod3',
         'construct.lll', 'verify.grid', 'verify.3graph', 'extract.grid',
         'extract.general', 'search.gr', 'search.r2', 'search.setcolor',
         'search.hyperstar', 'stats.bluestar')

_CONTEXT_KEYS = ('node_limit', 'time_limit_ms', 'attempt_cap',
                 'thinning_policy', 'strict_marking', 'z_threshold', 'jobs',
                 'precision')


def _bool(text):
    low = text.lower()
    if low in ('1', 'true', 'yes', 'on'):
        return True
    if low in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(text)


# key -> (converter, default, description)
KEYS = {
    'task': (str, None, 'pipeline to run, one of TASKS'),
    'seeds': (int, 1, 'number of seeds (at least 1)'),
    'master_seed': (int, 0, 'seed from which every run seed is derived'),
    'out_dir': (str, None, 'directory for artifacts; nothing written if unset'),
    'schedule': (str, 'desk', "'desk' or 'formulas'"),
    'n': (int, 64, 'clique / star size, or the schedule n'),
    'N': (int, 64, 'grid side or 3-graph order'),
    'r': (int, 2, 'red clique size (extract, search)'),
    's': (int, 1, 'colors per edge (search.setcolor)'),
    'a': (int, 2, 'rows of the red subgrid (extract.general)'),
    'b': (int, 2, 'columns of the red subgrid (extract.general)'),
    'C': (float, 1.0, 'iteration constant of the general schedule'),
    'pattern': (str, 'K4', "'K4', 'K5' or 'K4-e' (search.hyperstar)"),
    'nmax': (int, 10, 'largest size scanned by search tasks'),
    'width': (int, 64, 'grid width for extract.grid'),
    'height': (int, 3, 'grid height for extract.grid'),
    'density': (float, 0.5, 'red edge probability of random colorings'),
    'p': (float, None, 'triple probability for construct.lll'),
    'input': (str, None, 'coloring file for verify tasks'),
    'cross_check': (_bool, False, 'decide search tasks on two paths'),
    'node_limit': (int, None, 'context: search node budget'),
    'time_limit_ms': (int, None, 'context: search time budget'),
    'attempt_cap': (int, None, 'context: resampling cap'),
    'thinning_policy': (str, None, "context: 'clamp' or 'abort'"),
    'strict_marking': (_bool, None, 'context: raise on ambiguous marking'),
    'z_threshold': (float, None, 'context: statistical threshold'),
    'jobs': (int, None, 'context: worker threads'),
    'precision': (int, None, 'context: mpfr precision in bits'),
}

_SCHEDULE_FIELDS = {f.name for f in dataclasses.fields(ParamSchedule)}


@dataclasses.dataclass
class ExperimentConfig:
    """Parsed experiment settings; ``overrides`` holds ``param.*`` keys."""

    task: str
    seeds: int = 1
    master_seed: int = 0
    out_dir: str = None
    schedule: str = 'desk'
    n: int = 64
    N: int = 64
    r: int = 2
    s: int = 1
    a: int = 2
    b: int = 2
    C: float = 1.0
    pattern: str = 'K4'
    nmax: int = 10
    width: int = 64
    height: int = 3
    density: float = 0.5
    p: float = None
    input: str = None
    cross_check: bool = False
    overrides: dict = dataclasses.field(default_factory=dict)
    context: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        if self.task not in TASKS:
            raise InputError(f"unknown task {self.task!r}")
        if self.seeds < 1:
            raise InputError("seed count must be at least 1")
        if self.schedule not in ('desk', 'formulas'):
            raise InputError(f"unknown schedule {self.schedule!r}")
        unknown = set(self.overrides) - _SCHEDULE_FIELDS
        if unknown:
            raise InputError(f"unknown schedule fields: {sorted(unknown)}")
        unknown = set(self.context) - set(_CONTEXT_KEYS)
        if unknown:
            raise InputError(f"unknown context fields: {sorted(unknown)}")
        if self.task.startswith('verify') and not self.input:
            raise InputError(f"task {self.task} needs an input file")

    def params(self):
        if self.schedule == 'desk':
            return ParamSchedule.desk(self.n, self.N, **self.overrides)
        return ParamSchedule.from_formulas(self.n, self.N, **self.overrides)

    def run_seeds(self):
        return [derive_seed(self.master_seed, 'experiment', i)
                for i in range(self.seeds)]


def parse_config(text):
    """Parse ``key = value`` lines into an `ExperimentConfig`."""
    fields = {}
    overrides = {}
    ctx = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise InputError(f"line {lineno}: expected 'key = value'")
        if key.startswith('param.'):
            name = key[len('param.'):]
            if name not in _SCHEDULE_FIELDS:
                raise InputError(f"line {lineno}: unknown schedule field "
                                 f"{name!r}")
            overrides[name] = _number(value, lineno)
            continue
        if key not in KEYS:
            raise InputError(f"line {lineno}: unknown key {key!r}")
        conv = KEYS[key][0]
        try:
            converted = conv(value)
        except ValueError:
            raise InputError(f"line {lineno}: bad value {value!r} for "
                             f"{key}") from None
        if key in _CONTEXT_KEYS:
            ctx[key] = converted
        else:
            fields[key] = converted
    if 'task' not in fields:
        raise InputError("config has no task")
    return ExperimentConfig(overrides=overrides, context=ctx, **fields)


def _number(text, lineno):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    raise InputError(f"line {lineno}: {text!r} is not a number")


def load_config(path):
    with open(path) as fp:
        return parse_config(fp.read())


@dataclasses.dataclass
class SeedSummary:
    """One CSV row plus the artifacts of one seed.

    ``status`` is ``'ok'``, ``'found'``, ``'none'``, ``'indeterminate'``,
    ``'error'`` (a recoverable failure) or ``'invariant'`` (a
    deterministic claim failed).
    """

    index: int
    seed: int
    task: str
    status: str
    certificate: str = ''
    density_rows: float = 0.0
    density_cols: float = 0.0
    edges: int = 0
    attempts: int = 0
    flags: int = 0
    coloring: str = None
    certificate_json: dict = None
    sample: object = dataclasses.field(default=None, repr=False)
    detail: dict = dataclasses.field(default_factory=dict)

    def row(self):
        return {'seed': self.seed, 'task': self.task, 'status': self.status,
                'certificate': self.certificate,
                'density_rows': f'{self.density_rows:.6f}',
                'density_cols': f'{self.density_cols:.6f}',
                'edges': self.edges, 'attempts': self.attempts,
                'flags': self.flags}


@dataclasses.dataclass
class ExperimentResult:
    config: ExperimentConfig
    summaries: list
    report: StatReport
    values: dict = dataclasses.field(default_factory=dict)

    @property
    def invariant_failures(self):
        return sum(1 for s in self.summaries if s.status == 'invariant')

    def csv_text(self):
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator='\n')
        w.writeheader()
        for s in self.summaries:
            w.writerow(s.row())
        return buf.getvalue()

    def report_json(self):
        return {'task': self.config.task, 'seeds': self.config.seeds,
                'master_seed': self.config.master_seed,
                'values': self.values,
                'invariant_failures': self.invariant_failures,
                'statuses': _tally(s.status for s in self.summaries),
                'report': self.report.to_json()}


def _tally(items):
    out = {}
    for it in items:
        out[it] = out.get(it, 0) + 1
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# per-seed tasks
# ---------------------------------------------------------------------------

def _gridlower(cfg, i, seed):
    res = build_grid_lower(cfg.params(), seed)
    h = res.h
    return SeedSummary(i, seed, cfg.task, 'ok', '', h.row_density(),
                       h.col_density(), h.red_count(),
                       res.family.attempts + res.bipartitions.attempts,
                       res.report.flags, dumps_coloring(h), sample=h,
                       detail=res.report.to_json())


def _layered(cfg, i, seed):
    chi, state = build_layered(cfg.params(), seed)
    cert = find_red_k4(chi)
    status = 'ok' if cert is None else 'invariant'
    return SeedSummary(i, seed, cfg.task, status,
                       '' if cert is None else cert.kind.name,
                       edges=chi.red_count(), flags=state.ambiguous,
                       coloring=dumps_coloring(chi),
                       certificate_json=None if cert is None else cert.to_json(),
                       detail=state.to_json())


def _mod3(cfg, i, seed):
    m = build_mod3(cfg.N, seed)
    cert = find_red_k5(m.chi)
    status = 'ok' if cert is None else 'invariant'
    return SeedSummary(i, seed, cfg.task, status,
                       '' if cert is None else cert.kind.name,
                       edges=m.chi.red_count(), coloring=dumps_coloring(m.chi),
                       certificate_json=None if cert is None else cert.to_json())


def _lll(cfg, i, seed):
    p = cfg.p if cfg.p is not None else lll_parameters(cfg.n)[1]
    sample = sample_lll_candidate(cfg.n, cfg.N, p, seed)
    if sample.blue_star_status == 'indeterminate':
        status = 'indeterminate'
    else:
        status = 'ok' if sample.good else 'none'
    witness = sample.k4_minus_e_witness or sample.blue_star_witness
    return SeedSummary(i, seed, cfg.task, status,
                       '' if witness is None else witness.kind.name,
                       edges=sample.coloring.red_count(),
                       flags=sample.red_k4_minus_e,
                       coloring=dumps_coloring(sample.coloring),
                       certificate_json=(None if witness is None
                                         else witness.to_json()),
                       detail=sample.to_json())


def _extraction_summary(cfg, i, seed, g, ext):
    cert = ext.certificate
    if cert is not None and not check_certificate(cert, g):
        status = 'invariant'
    else:
        status = 'found' if cert is not None else ext.outcome
    return SeedSummary(i, seed, cfg.task, status,
                       '' if cert is None else cert.kind.name,
                       edges=g.red_count(), coloring=dumps_coloring(g),
                       certificate_json=None if cert is None else cert.to_json(),
                       detail=ext.trace.to_json())


def _extract_grid(cfg, i, seed):
    g = random_grid(cfg.width, cfg.height, cfg.density, seed)
    return _extraction_summary(cfg, i, seed, g,
                               extract_grid(g, cfg.r, cfg.n))


def _extract_general(cfg, i, seed):
    g = random_grid(cfg.N, cfg.N, cfg.density, seed)
    schedule = GeneralSchedule(cfg.a, cfg.b, cfg.n, cfg.C)
    return _extraction_summary(cfg, i, seed, g,
                               general_grid_extract(g, schedule, cfg.n))


def _verify(cfg, i, seed):
    with open(cfg.input) as fp:
        obj = load_coloring(fp)
    if cfg.task == 'verify.grid':
        cert = (find_red_rectangle(obj)
                or find_mono_clique_in_grid(obj, BLUE, cfg.n))
    else:
        finder = find_red_k5 if cfg.pattern == 'K5' else find_red_k4
        cert = finder(obj) or find_blue_star(obj, cfg.n)
    return SeedSummary(i, seed, cfg.task,
                       'none' if cert is None else 'found',
                       '' if cert is None else cert.kind.name,
                       certificate_json=None if cert is None else cert.to_json())


_SEED_TASKS = {
    'construct.gridlower': _gridlower,
    'construct.layered': _layered,
    'construct.mod3': _mod3,
    'construct.lll': _lll,
    'extract.grid': _extract_grid,
    'extract.general': _extract_general,
}


def _run_one(fn, cfg, i, seed):
    try:
        return fn(cfg, i, seed)
    except InvariantError as exc:
        log.error("seed %d: invariant failed: %s", seed, exc)
        return SeedSummary(i, seed, cfg.task, 'invariant',
                           detail={'error': str(exc)})
    except SearchBudgetExceeded as exc:
        return SeedSummary(i, seed, cfg.task, 'indeterminate',
                           detail={'error': str(exc)})
    except GridRamseyError as exc:
        log.warning("seed %d: %s", seed, exc)
        return SeedSummary(i, seed, cfg.task, 'error',
                           detail={'error': str(exc)})


def _family(cfg):
    if cfg.task == 'search.gr':
        return GridRamsey(cfg.n)
    if cfg.task == 'search.r2':
        return Clique2Ramsey(cfg.r, cfg.n)
    if cfg.task == 'search.setcolor':
        return SetColoring(cfg.n, cfg.r, cfg.s)
    return HyperVsStar(cfg.pattern, cfg.n)


def _search(cfg):
    fam = _family(cfg)
    seed = cfg.run_seeds()[0]
    try:
        res = ramsey_value(fam, cfg.nmax, cross_check=cfg.cross_check)
    except SearchBudgetExceeded as exc:
        return (SeedSummary(0, seed, cfg.task, 'indeterminate',
                            detail={'error': str(exc)}),
                {'family': repr(fam), 'value': None, 'lower': None})
    except InvariantError as exc:
        return (SeedSummary(0, seed, cfg.task, 'invariant',
                            detail={'error': str(exc)}),
                {'family': repr(fam), 'value': None, 'lower': None})
    status = 'found' if res.exact else 'none'
    values = {'family': repr(fam), 'value': res.value, 'lower': res.lower,
              'paths': list(res.paths)}
    return SeedSummary(0, seed, cfg.task, status, str(res)), values


def _map_seeds(fn, cfg, jobs):
    seeds = cfg.run_seeds()
    if jobs <= 1:
        return [_run_one(fn, cfg, i, s) for i, s in enumerate(seeds)]
    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as ex:
        # each task runs in a copy of the caller's contextvars
        tasks = [ex.submit(contextvars.copy_context().run, _run_one, fn,
                           cfg, i, s) for i, s in enumerate(seeds)]
        results = [t.result() for t in tasks]
    return sorted(results, key=lambda s: s.index)


def run_experiment(cfg):
    """Run *cfg* and return an `ExperimentResult`; write artifacts when
    ``cfg.out_dir`` is set."""
    with local_context(**cfg.context):
        jobs = get_context().jobs
        values = {}
        entries = []
        if cfg.task.startswith('search.'):
            summary, values = _search(cfg)
            summaries = [summary]
        elif cfg.task == 'stats.bluestar':
            entry = stat_blue_star_rate(cfg.n, cfg.seeds, cfg.master_seed)
            entries.append(entry)
            summaries = [SeedSummary(0, cfg.master_seed, cfg.task, 'ok',
                                     detail=entry.to_json())]
        elif cfg.task.startswith('verify.'):
            summaries = [_run_one(_verify, cfg, 0, cfg.run_seeds()[0])]
        else:
            summaries = _map_seeds(_SEED_TASKS[cfg.task], cfg, jobs)
        if cfg.task == 'construct.gridlower':
            entries.extend(_marginal_entries(cfg, summaries))
        report = StatReport(entries)
    result = ExperimentResult(cfg, summaries, report, values)
    log.info("%s: %d seeds, %s, %d invariant failures", cfg.task,
             len(summaries), _tally(s.status for s in summaries),
             result.invariant_failures)
    if cfg.out_dir:
        _write_artifacts(result)
    return result


def _marginal_entries(cfg, summaries):
    samples = [s.sample for s in summaries if s.sample is not None]
    if len(samples) < MIN_MARGINAL_SAMPLES:
        return []
    params = cfg.params()
    return [stat_marginals(samples, params.p_row, 'rows',
                           anchor='grid marginal law: rows'),
            stat_marginals(samples, params.p_col, 'cols',
                           anchor='grid marginal law: columns')]


def _write_artifacts(result):
    cfg = result.config
    out = cfg.out_dir
    os.makedirs(out, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise InputError(f"{out} is not writable")
    for s in result.summaries:
        stem = os.path.join(out, f'seed-{s.index:05d}')
        if s.coloring is not None:
            with open(stem + '.txt', 'w') as fp:
                fp.write(s.coloring)
        if s.certificate_json is not None:
            with open(stem + '.cert.json', 'w') as fp:
                json.dump(s.certificate_json, fp, sort_keys=True)
                fp.write('\n')
        if s.detail:
            with open(stem + '.trace.json', 'w') as fp:
                json.dump(s.detail, fp, sort_keys=True, default=str)
                fp.write('\n')
    with open(os.path.join(out, 'summary.csv'), 'w', newline='') as fp:
        fp.write(result.csv_text())
    with open(os.path.join(out, 'report.json'), 'w') as fp:
        json.dump(result.report_json(), fp, indent=2, sort_keys=True,
                  default=str)
        fp.write('\n')

import json

import pytest

import gridramsey
from gridramsey import (Certificate, CertificateKind, GridColoring,
                        ThreeGraphColoring, dump_certificate, dump_coloring,
                        loads_coloring)
from gridramsey.cli import main


@pytest.fixture
def write_coloring(tmp_path):
    def write(obj, name='coloring.txt'):
        path = tmp_path / name
        with open(path, 'w') as fp:
            dump_coloring(obj, fp)
        return str(path)
    return write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(['--version'])
    assert exc.value.code == 0
    assert gridramsey.__version__ in capsys.readouterr().out


def test_search(capsys):
    code, out, _ = run(capsys, 'search', 'gr', '--n', 2, '--nmax', 4,
                       '--cross-check')
    assert code == 0
    doc = json.loads(out)
    assert doc['value'] == 2 and doc['paths'] == ['pruned', 'naive']

    code, out, _ = run(capsys, 'search', 'r2', '--r', 3, '--n', 3,
                       '--nmax', 4)
    assert code == 1
    assert json.loads(out)['lower'] == 5


def test_search_budget(capsys):
    code, _, err = run(capsys, '--budget-nodes', 1, 'search', 'r2',
                       '--r', 3, '--n', 4, '--nmax', 8)
    assert code == 2
    assert 'indeterminate' in err


def test_search_table(capsys, tmp_path):
    code, out, _ = run(capsys, 'search', 'r2table', '--r', 3, '--n', 3,
                       '--cache', tmp_path / 'r2.cache')
    assert code == 0
    assert out.splitlines() == ['r(2,2) = 2', 'r(2,3) = 3', 'r(3,2) = 3',
                                'r(3,3) = 6']


def test_invalid_input(capsys):
    assert run(capsys, 'search', 'r2', '--r', 0)[0] == 4
    assert run(capsys, 'verify', 'k4', '/nonexistent/coloring.txt')[0] == 4
    assert run(capsys, 'run')[0] == 4


def test_verify(capsys, write_coloring, tmp_path):
    red = write_coloring(GridColoring.all_red(2, 2))
    code, out, _ = run(capsys, 'verify', 'rectangle', red)
    assert code == 0
    assert json.loads(out)['kind'] == 'RedRectangle'

    blue = write_coloring(GridColoring.all_blue(2, 2), 'blue.txt')
    code, out, _ = run(capsys, 'verify', 'rectangle', blue)
    assert code == 1 and out.strip() == 'NONE'
    code, out, _ = run(capsys, 'verify', 'clique', blue, '--n', 2)
    assert code == 0 and json.loads(out)['kind'] == 'BlueClique'
    assert run(capsys, 'verify', 'k4', blue)[0] == 4

    cert = Certificate(CertificateKind.RedRectangle,
                       [(1, 1), (2, 1), (1, 2), (2, 2)])
    path = tmp_path / 'cert.json'
    with open(path, 'w') as fp:
        dump_certificate(cert, fp)
    code, out, _ = run(capsys, 'verify', 'certificate', red,
                       '--certificate', path)
    assert code == 0 and json.loads(out)['valid'] is True
    assert run(capsys, 'verify', 'certificate', blue, '--certificate',
               path)[0] == 1
    assert run(capsys, 'verify', 'certificate', blue)[0] == 4


def test_verify_3graph(capsys, write_coloring):
    path = write_coloring(ThreeGraphColoring.all_red(4))
    code, out, _ = run(capsys, 'verify', 'k4', path)
    assert code == 0 and json.loads(out)['kind'] == 'RedK4'
    assert run(capsys, 'verify', 'k5', path)[0] == 1
    code, out, _ = run(capsys, 'verify', 'k4e', path)
    assert code == 0 and json.loads(out)['kind'] == 'RedK4MinusE'

    path = write_coloring(ThreeGraphColoring.all_blue(4), 'blue.txt')
    code, out, _ = run(capsys, 'verify', 'star', path, '--n', 2)
    assert code == 0
    doc = json.loads(out)
    assert doc['kind'] == 'BlueStar' and doc['center'] == 0


def test_extract(capsys, write_coloring):
    path = write_coloring(GridColoring.all_blue(4, 3))
    code, out, _ = run(capsys, 'extract', 'grid', path, '--r', 2, '--n', 3)
    assert code == 0
    doc = json.loads(out)
    assert doc['outcome'] == 'found'
    assert doc['certificate']['kind'] == 'BlueClique'

    path = write_coloring(GridColoring.all_red(8, 8), 'red.txt')
    code, out, _ = run(capsys, 'extract', 'general', path, '--n', 3)
    assert code == 0
    assert json.loads(out)['certificate']['kind'] == 'RedRectangle'

    path = write_coloring(ThreeGraphColoring.all_red(4), 'hyper.txt')
    assert run(capsys, 'extract', 'grid', path)[0] == 4


def test_extract_precondition(capsys, write_coloring):
    path = write_coloring(GridColoring.all_blue(3, 2))
    code, _, err = run(capsys, 'extract', 'grid', path, '--r', 2, '--n', 3)
    assert code == 4
    assert 'precondition' in err


def test_construct(capsys, tmp_path):
    out = tmp_path / 'mod3.txt'
    code, _, _ = run(capsys, '--seed', 3, 'construct', 'mod3', '--N', 8,
                     '--out', out)
    assert code == 0
    chi = loads_coloring(out.read_text())
    assert isinstance(chi, ThreeGraphColoring) and chi.vertex_count == 8

    code, text, _ = run(capsys, '--seed', 3, 'construct', 'mod3', '--N', 8)
    assert code == 0 and loads_coloring(text) == chi

    code, text, _ = run(capsys, 'construct', 'gridlower', '--n', 16,
                        '--N', 16)
    assert code == 0
    assert isinstance(loads_coloring(text), GridColoring)


def test_construct_report(capsys, tmp_path):
    out, report = tmp_path / 'h.txt', tmp_path / 'report.json'
    code, _, _ = run(capsys, '--seed', 4, 'construct', 'gridlower', '--n', 16,
                     '--N', 16, '--out', out, '--report', report)
    assert code == 0

    doc = json.loads(report.read_text())
    res = gridramsey.build_grid_lower(gridramsey.ParamSchedule.desk(16, 16), 4)
    assert doc == json.loads(json.dumps(res.report.to_json()))
    assert {'family_attempts', 'bipartition_attempts', 'density_rows',
            'density_cols', 'flags'} <= set(doc)
    assert loads_coloring(out.read_text()) == res.h

    code, _, _ = run(capsys, 'construct', 'layered', '--n', 16, '--N', 8,
                     '--out', out, '--report', report)
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc['N'] == 8 and len(doc['layers']) == 3

    code, _, _ = run(capsys, 'construct', 'mod3', '--N', 6, '--report',
                     tmp_path / 'missing' / 'r.json')
    assert code == 4


def test_construct_lllcheck(capsys):
    code, out, _ = run(capsys, 'construct', 'lllcheck', '--n', 10 ** 6)
    assert code == 0
    assert json.loads(out)['n'] == 10 ** 6


def test_map_roundtrip(capsys, write_coloring, tmp_path):
    g = GridColoring.from_edges(3, 2, [('h', 1, 2, 1), ('v', 3, 1, 2)])
    path = write_coloring(g)
    bip = tmp_path / 'bip.txt'
    assert run(capsys, 'map', 'grid2bip', path, '--out', bip)[0] == 0
    code, out, _ = run(capsys, 'map', 'bip2grid', bip, '--a', 3)
    assert code == 0
    assert loads_coloring(out) == g

    assert run(capsys, 'map', 'bip2grid', bip)[0] == 4
    assert run(capsys, 'map', 'grid2bip', bip)[0] == 4


def test_tables(capsys):
    code, out, _ = run(capsys, 'tables', 'bounds', '--n', 10, '--r', 4,
                       '--s', 3, '--json')
    assert code == 0
    rows = json.loads(out)['rows']
    assert rows[-1]['name'] == 'set-coloring-upper'
    assert rows[-1]['log2_value'] == 5.0

    code, out, _ = run(capsys, 'tables', 'bounds', '--n', 16, '--const',
                       'c=2')
    assert code == 0 and out.startswith('name')
    assert run(capsys, 'tables', 'bounds', '--n', 16, '--const',
               'bogus=2')[0] == 4


def test_stats(capsys):
    code, out, _ = run(capsys, 'stats', 'bluestar', '--n', 1, '--runs', 5)
    assert code == 0 and json.loads(out)['passed'] is True


def test_run(capsys, tmp_path):
    cfg = tmp_path / 'exp.cfg'
    cfg.write_text('task = search.gr\nn = 2\nnmax = 4\n')
    code, out, _ = run(capsys, 'run', cfg)
    assert code == 0
    assert json.loads(out)['values']['value'] == 2

    out_dir = tmp_path / 'artifacts'
    code, out, _ = run(capsys, '--config', cfg, '--out-dir', out_dir,
                       '--seed', 9, 'run')
    assert code == 0
    report = json.loads((out_dir / 'report.json').read_text())
    assert report['master_seed'] == 9

import json

import numpy as np
import pandas as pd
import pytest

import cli
from cli import load_run_config, main, parse_assignment
from errors import ConfigError, EigensolverNotConverged

FAST = ['--set', 'n_points=401', '--set', 'n_samples=5']


def test_figure_defaults():
    config = load_run_config('fig1a')
    assert config.model == 'ohmic'
    assert len(config.c_values) == 21
    assert config.c_values[0] == -1.0 and config.c_values[10] == 0.0 and config.c_values[-1] == 1.0
    assert config.n_points == 4001
    assert load_run_config('fig1b').model == 'photon'
    assert load_run_config('fig2').c_values == [-1.0, -0.5, 0.0, 0.5, 1.0]


def test_parse_assignment():
    assert parse_assignment('alpha=2') == ('alpha', 2)
    assert parse_assignment('c_values=[-1, 0]') == ('c_values', [-1, 0])
    assert parse_assignment('model=photon') == ('model', 'photon')
    with pytest.raises(ConfigError):
        parse_assignment('alpha')


def test_config_precedence(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'alpha': 2.0, 'seed': 5, 'c_values': [0.5], 'command': 'fig1a'}))
    config = load_run_config('fig1a', str(path), ['alpha=3'], seed=9)
    assert config.alpha == 3.0
    assert config.seed == 9
    assert config.c_values == [0.5]


@pytest.mark.parametrize('assignment', ['bogus=1', 'n_points=abc', 'n_points=1', 'model=spin', 'workers=0',
                                        'seed=-5'])
def test_bad_assignments(assignment):
    with pytest.raises(ConfigError):
        load_run_config('measure', assignments=[assignment])


def test_nested_config_is_rejected(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'grid': {'n_points': 10}}))
    with pytest.raises(ConfigError):
        load_run_config('measure', str(path))


def test_negative_seed_is_a_config_error(capsys, monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(ConfigError):
        load_run_config('measure', seed=-1)
    assert main(['measure', '--seed', '-5'] + FAST) == 2
    assert 'seed' in capsys.readouterr().err
    assert not (tmp_path / 'measure.manifest.json').exists()


def test_exit_codes(capsys, monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    assert main(['measure', '--set', 'c=2']) == 2
    assert 'InvalidCorrelation' in capsys.readouterr().err
    assert main(['measure', '--set', 'bogus=1']) == 2
    assert main(['fig1b', '--set', 'model=ohmic', '--out', str(tmp_path)]) == 2

    def fail(*args, **kwargs):
        raise EigensolverNotConverged('no convergence')

    monkeypatch.setattr(cli, 'maximize_measure', fail)
    assert main(['measure'] + FAST) == 3
    assert 'EigensolverNotConverged' in capsys.readouterr().err


def test_measure_json_is_deterministic(capsys, monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    assert main(['measure'] + FAST) == 0
    first = capsys.readouterr().out
    assert main(['measure'] + FAST) == 0
    assert capsys.readouterr().out == first

    payload = json.loads(first)
    assert abs(payload['n_value'] - 0.75) < 1e-4
    assert payload['best_pair_id'].startswith('phi')
    assert payload['grid']['n_points'] == 401
    assert payload['seed'] == payload['parameters']['seed']


def test_measure_writes_manifest_without_out(capsys, monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    assert main(['measure', '--seed', '4'] + FAST) == 0
    payload = json.loads(capsys.readouterr().out)
    manifest = json.loads((tmp_path / 'measure.manifest.json').read_text())
    assert manifest['command'] == 'measure'
    assert manifest['seed'] == payload['seed'] == 4
    assert manifest['n_points'] == 401

    assert main(['measure', '--config', 'measure.manifest.json']) == 0
    assert json.loads(capsys.readouterr().out) == payload


def test_measure_photon_without_correlation(capsys, tmp_path):
    assert main(['measure', '--set', 'model=photon', '--out', str(tmp_path)] + FAST) == 0
    assert json.loads(capsys.readouterr().out)['n_value'] <= 1e-10
    assert (tmp_path / 'measure.manifest.json').exists()


def test_fig1a(tmp_path):
    assert main(['fig1a', '--set', 'c_values=[-1, 0]', '--out', str(tmp_path)] + FAST) == 0
    df = pd.read_csv(tmp_path / 'fig1a.csv')
    assert list(df.columns) == ['c', 'pair_id', 'measure']
    best = df[df.pair_id == 'best'].set_index('c')['measure']
    assert abs(best[-1.0] - 0.75) < 1e-4
    assert best[0.0] <= 1e-10
    samples = df[df.pair_id.str.startswith('sample_')]
    assert len(samples) == 10
    for c, group in samples.groupby('c'):
        assert group.measure.max() <= best[c] + 1e-10


def test_fig1b(tmp_path):
    assert main(['fig1b', '--set', 'k_values=[-1, 0]', '--out', str(tmp_path)] + FAST) == 0
    df = pd.read_csv(tmp_path / 'fig1b.csv')
    assert list(df.columns) == ['K', 'pair_id', 'measure', 'analytic_measure']
    best = df[df.pair_id == 'best'].set_index('K')
    assert abs(best.loc[-1.0, 'measure'] - 0.39347) < 1e-4
    assert abs(best.loc[-1.0, 'measure'] - best.loc[-1.0, 'analytic_measure']) < 1e-4
    assert best.loc[0.0, 'measure'] <= 1e-10


def test_fig2(tmp_path):
    assert main(['fig2', '--set', 'n_points=401', '--out', str(tmp_path)]) == 0
    df = pd.read_csv(tmp_path / 'fig2.csv')
    assert list(df.columns) == ['t', 'D_global_c=-1', 'D_global_c=-0.5', 'D_global_c=0',
                                'D_global_c=0.5', 'D_global_c=1', 'D_local_1', 'D_local_2']
    t = df.t.to_numpy()
    assert abs(df['D_global_c=-1'].iloc[-1] - 1.0) < 1e-10
    assert abs(df['D_local_1'][np.isclose(t, 1.0)].iloc[0] - 0.25) < 1e-10
    assert np.all(np.abs(df['D_local_2'][t <= 1.0] - 1.0) < 1e-12)
    assert np.all(np.diff(df['D_local_1']) <= 1e-12)
    assert np.all(np.diff(df['D_global_c=0']) <= 1e-12)


def test_fig3(tmp_path):
    assert main(['fig3', '--set', 'n_points=401', '--out', str(tmp_path)]) == 0
    dist = pd.read_csv(tmp_path / 'fig3_distribution.csv')
    dyn = pd.read_csv(tmp_path / 'fig3_dynamics.csv')
    assert list(dist.columns) == ['K', 'kind', 'omega1', 'omega2', 'value']
    assert list(dyn.columns) == ['K', 't', 't_scaled', 'D', 'D_numeric']

    line = dist[dist.K == -1.0]
    assert set(line.kind) == {'line'} and len(line) == 101
    assert np.allclose(line.omega1 + line.omega2, 1.0)
    assert set(dist[dist.K == 0.0].kind) == {'density'} and (dist.K == 0.0).sum() == 101 ** 2

    assert np.abs(dyn.D - dyn.D_numeric).max() < 1e-10
    anti = dyn[dyn.K == -1.0]
    assert abs(anti.D.iloc[-1] - 1.0) < 1e-10
    half = dyn[dyn.K == -0.5]
    assert abs(half.D.min() - np.exp(-0.5)) < 1e-10


def test_manifest_reproduces_csv(tmp_path):
    first = tmp_path / 'a'
    second = tmp_path / 'b'
    assert main(['fig2', '--set', 'n_points=201', '--set', 'alpha=0.8', '--out', str(first)]) == 0
    manifest = json.loads((first / 'fig2.manifest.json').read_text())
    assert manifest['command'] == 'fig2'
    assert manifest['alpha'] == 0.8
    assert main(['fig2', '--config', str(first / 'fig2.manifest.json'), '--out', str(second)]) == 0
    assert (first / 'fig2.csv').read_bytes() == (second / 'fig2.csv').read_bytes()


def test_explicit_c11_overrides_plate_strength(caplog):
    config = load_run_config('fig1b', assignments=['c11=2'])
    with caplog.at_level('WARNING', logger='cli'):
        env = cli.photon_env(config, -0.5)
    assert env.c11 == 2.0 and env.k_corr == -0.5
    assert 'plate_strength=1 ignored' in caplog.text

    caplog.clear()
    config = load_run_config('fig1b', assignments=['c11=1'])
    with caplog.at_level('WARNING', logger='cli'):
        cli.photon_env(config)
    assert caplog.text == ''

"""
Command-Line Front End
Regenerates the figure data (CSV plus a JSON run manifest) and evaluates
one-off measures.

Usage:
    python cli.py fig1a|fig1b|fig2|fig3|measure [--config PATH] [--set KEY=VALUE ...]
                  [--out DIR] [--seed N] [--workers N] [-v | -q]
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

import numpy as np
import pandas as pd

from blp import (TimeGrid, local_trajectory, maximize_measure, pair_measures,
                 trajectory)
from config import (ARTIFACT_VERSION, CSV_FLOAT_FORMAT, DEFAULT_N_POINTS,
                    DEFAULT_N_SAMPLES, DEFAULT_SEED, DEFAULT_WORKERS,
                    FIGURE_DEFAULTS, LOG_LEVEL)
from dephasing import MINUS_1Q, PLUS_1Q, InteractionSchedule, bell_candidate_pairs
from errors import ConfigError, LabError
from multimode import OhmicCorrelatedFields
from photon import (PhotonGaussianEnv, PlateSchedule, analytic_measure,
                    analytic_trace_distance, frequency_pdf, frequency_support,
                    maximizing_pair)

logger = logging.getLogger(__name__)

MODELS = ('ohmic', 'photon')
MANIFEST_ONLY_KEYS = {'command', 'artifact_version', 'grid_spacing'}


@dataclass
class RunConfig:
    model: str = 'ohmic'
    # ohmic fields
    alpha: float = 1.0
    omega_c: float = 1.0
    c: float = -1.0
    t1s: float = 0.0
    t1f: float = 1.0
    t2s: float = 1.0
    t2f: float = 2.0
    # photon pairs
    omega0: float = 1.0
    c11: Optional[float] = None
    k_corr: float = 0.0
    delta_n: float = 1.0
    plate_strength: float = 1.0
    T: float = 1.0
    # sweeps and sampling
    c_values: list = field(default_factory=lambda: [-1.0])
    k_values: list = field(default_factory=lambda: [0.0])
    n_density: int = 101
    n_sigma: float = 4.0
    n_points: int = DEFAULT_N_POINTS
    n_samples: int = DEFAULT_N_SAMPLES
    seed: int = DEFAULT_SEED
    workers: int = DEFAULT_WORKERS
    out: Optional[str] = None


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key, value):
    if key not in _FIELD_TYPES:
        raise ConfigError(f"unknown configuration key '{key}'")
    kind = _FIELD_TYPES[key]
    if value is None:
        if kind in (Optional[float], Optional[str]):
            return None
        raise ConfigError(f"'{key}' cannot be null")
    if isinstance(value, bool):
        raise ConfigError(f"'{key}' must not be a boolean")
    try:
        if kind is list:
            if not isinstance(value, list):
                value = [value]
            return [float(v) for v in value]
        if kind is int:
            if float(value) != int(float(value)):
                raise ValueError(value)
            return int(float(value))
        if kind in (float, Optional[float]):
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for '{key}': {value!r}") from None


def parse_assignment(text):
    """KEY=VALUE with VALUE read as JSON when possible."""
    key, sep, raw = text.partition('=')
    if not sep or not key.strip():
        raise ConfigError(f"expected KEY=VALUE, got '{text}'")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def load_run_config(command, config_path=None, assignments=(), seed=None, out=None, workers=None):
    """
    Assemble the run configuration: figure defaults, then the flat JSON
    config file, then --set assignments, then --seed/--out/--workers.
    """
    values = asdict(RunConfig())
    values.update(FIGURE_DEFAULTS.get(command, {}))

    if config_path:
        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {config_path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a flat JSON object")
        for key, value in data.items():
            if key in MANIFEST_ONLY_KEYS:
                continue
            if isinstance(value, dict):
                raise ConfigError(f"nested value for '{key}'; config must be flat")
            values[key] = _coerce(key, value)

    for text in assignments:
        key, value = parse_assignment(text)
        values[key] = _coerce(key, value)

    for key, value in (('seed', seed), ('out', out), ('workers', workers)):
        if value is not None:
            values[key] = _coerce(key, value)

    config = RunConfig(**{k: _coerce(k, v) for k, v in values.items()})
    if config.model not in MODELS:
        raise ConfigError(f"model must be one of {MODELS}, got '{config.model}'")
    if config.n_points < 2:
        raise ConfigError("n_points must be >= 2")
    if config.n_samples < 0:
        raise ConfigError("n_samples must be >= 0")
    if config.seed < 0:
        raise ConfigError(f"seed must be >= 0, got {config.seed}")
    if config.workers < 1:
        raise ConfigError("workers must be >= 1")
    if config.n_density < 2:
        raise ConfigError("n_density must be >= 2")
    return config


def _require_model(config, model, command):
    if config.model != model:
        raise ConfigError(f"{command} needs model={model}, got model={config.model}")


def _out_dir(config, default='.'):
    path = config.out or default
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"cannot create output directory {path}: {e}") from e
    if not os.access(path, os.W_OK):
        raise ConfigError(f"output directory {path} is not writable")
    return path


def ohmic_env(config, c=None):
    return OhmicCorrelatedFields(config.alpha, config.omega_c, config.c if c is None else c)


def ohmic_schedule(config):
    return InteractionSchedule(config.t1s, config.t1f, config.t2s, config.t2f)


def photon_env(config, k_corr=None):
    k = config.k_corr if k_corr is None else k_corr
    if config.c11 is not None:
        env = PhotonGaussianEnv(config.omega0, config.c11, k, config.delta_n)
        implied = env.plate_strength(config.T)
        if not np.isclose(implied, config.plate_strength):
            logger.warning("plate_strength=%g ignored; c11=%g gives %g",
                           config.plate_strength, config.c11, implied)
        return env
    return PhotonGaussianEnv.from_plate_strength(config.plate_strength, k, config.T,
                                                 config.delta_n, config.omega0)


def build_model(config):
    """Environment and schedule selected by config.model."""
    if config.model == 'ohmic':
        return ohmic_env(config), ohmic_schedule(config)
    return photon_env(config), PlateSchedule.of(config.T)


def write_csv(df, path):
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
    logger.info("wrote %s (%d rows)", path, len(df))


def write_manifest(config, command, grid, out_dir):
    manifest = asdict(config)
    manifest.update({
        'command': command,
        'artifact_version': ARTIFACT_VERSION,
        'grid_spacing': grid.spacing,
    })
    path = os.path.join(out_dir, f"{command}.manifest.json")
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(manifest, f, sort_keys=True, indent=2)
        f.write('\n')
    return path


def _measure_rows(value, result):
    rows = [(value, pid, v) for pid, v in result.candidate_values.items()]
    rows += [(value, f"sample_{i:04d}", v) for i, v in enumerate(result.per_pair_values)]
    rows.append((value, 'best', result.n_value))
    return rows


def cmd_fig1a(config):
    """Measure against c for the ohmic model: sampled pairs, Bell candidates, best."""
    _require_model(config, 'ohmic', 'fig1a')
    s = ohmic_schedule(config)
    grid = TimeGrid.spanning(s, config.n_points)
    rows = []
    for c in config.c_values:
        result = maximize_measure(ohmic_env(config, c), s, grid, config.n_samples,
                                  config.seed, workers=config.workers)
        logger.info("fig1a c=%g: measure %.6f (%s)", c, result.n_value, result.best_pair_id)
        rows += _measure_rows(c, result)
    df = pd.DataFrame(rows, columns=['c', 'pair_id', 'measure'])
    out_dir = _out_dir(config)
    write_csv(df, os.path.join(out_dir, 'fig1a.csv'))
    write_manifest(config, 'fig1a', grid, out_dir)
    return df


def cmd_fig1b(config):
    """Measure against K for the photon model, next to the closed form."""
    _require_model(config, 'photon', 'fig1b')
    s = PlateSchedule.of(config.T)
    grid = TimeGrid.spanning(s, config.n_points)
    frames = []
    for k in config.k_values:
        env = photon_env(config, k)
        result = maximize_measure(env, s, grid, config.n_samples, config.seed,
                                  workers=config.workers)
        logger.info("fig1b K=%g: measure %.6f (%s)", k, result.n_value, result.best_pair_id)
        part = pd.DataFrame(_measure_rows(k, result), columns=['K', 'pair_id', 'measure'])
        part['analytic_measure'] = analytic_measure(env, config.T)
        frames.append(part)
    df = pd.concat(frames, ignore_index=True)
    out_dir = _out_dir(config)
    write_csv(df, os.path.join(out_dir, 'fig1b.csv'))
    write_manifest(config, 'fig1b', grid, out_dir)
    return df


def cmd_fig2(config):
    """Global trace distance for each c and the two local trajectories."""
    _require_model(config, 'ohmic', 'fig2')
    s = ohmic_schedule(config)
    grid = TimeGrid.spanning(s, config.n_points)
    df = pd.DataFrame({'t': grid.times()})
    candidates = bell_candidate_pairs()
    for c in config.c_values:
        env = ohmic_env(config, c)
        values = pair_measures(env, s, grid, [pair for _, pair in candidates])
        pid, pair = candidates[int(np.argmax(values))]
        logger.info("fig2 c=%g: global curve for %s", c, pid)
        df[f"D_global_c={c:g}"] = trajectory(env, s, pair, grid).values
    local_env = ohmic_env(config, config.c_values[0] if config.c_values else config.c)
    for subsystem in (1, 2):
        traj = local_trajectory(local_env, s, (PLUS_1Q, MINUS_1Q), grid, subsystem)
        df[f"D_local_{subsystem}"] = traj.values
    out_dir = _out_dir(config)
    write_csv(df, os.path.join(out_dir, 'fig2.csv'))
    write_manifest(config, 'fig2', grid, out_dir)
    return df


def _distribution_rows(env, n_density, n_sigma):
    sigma = np.sqrt(env.c11)
    center = 0.5 * env.omega0
    axis = center + np.linspace(-n_sigma * sigma, n_sigma * sigma, n_density)
    if abs(env.k_corr) < 1.0:
        w1, w2 = np.meshgrid(axis, axis, indexing='ij')
        p = frequency_pdf(env, w1, w2)
        return pd.DataFrame({'kind': 'density', 'omega1': w1.ravel(),
                             'omega2': w2.ravel(), 'value': p.ravel()})
    support = frequency_support(env)
    w2 = center + support['slope'] * (axis - center)
    var = support['marginal_variance']
    marginal = np.exp(-0.5 * (axis - center) ** 2 / var) / np.sqrt(2.0 * np.pi * var)
    return pd.DataFrame({'kind': 'line', 'omega1': axis, 'omega2': w2, 'value': marginal})


def cmd_fig3(config):
    """Frequency distribution and trace-distance dynamics for each K."""
    _require_model(config, 'photon', 'fig3')
    s = PlateSchedule.of(config.T)
    grid = TimeGrid.spanning(s, config.n_points)
    dist_frames = []
    dyn_frames = []
    for k in config.k_values:
        env = photon_env(config, k)
        dist = _distribution_rows(env, config.n_density, config.n_sigma)
        dist.insert(0, 'K', k)
        dist_frames.append(dist)

        times = grid.times()
        dyn_frames.append(pd.DataFrame({
            'K': k,
            't': times,
            't_scaled': times * np.sqrt(env.c11) * abs(env.delta_n),
            'D': analytic_trace_distance(env, s, times),
            'D_numeric': trajectory(env, s, maximizing_pair(env), grid).values,
        }))
    distribution = pd.concat(dist_frames, ignore_index=True)
    dynamics = pd.concat(dyn_frames, ignore_index=True)
    out_dir = _out_dir(config)
    write_csv(distribution, os.path.join(out_dir, 'fig3_distribution.csv'))
    write_csv(dynamics, os.path.join(out_dir, 'fig3_dynamics.csv'))
    write_manifest(config, 'fig3', grid, out_dir)
    return distribution, dynamics


def _ket_payload(state):
    return [[float(z.real), float(z.imag)] for z in state.vector]


def cmd_measure(config):
    """One-off measure for the configured model, printed as JSON."""
    env, s = build_model(config)
    grid = TimeGrid.spanning(s, config.n_points)
    result = maximize_measure(env, s, grid, config.n_samples, config.seed,
                              workers=config.workers)
    payload = {
        'n_value': result.n_value,
        'best_pair_id': result.best_pair_id,
        'best_pair': [_ket_payload(result.best_pair[0]), _ket_payload(result.best_pair[1])],
        'parameters': asdict(config),
        'grid': {'t_start': grid.t_start, 't_end': grid.t_end,
                 'n_points': grid.n_points, 'spacing': grid.spacing},
        'seed': config.seed,
    }
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + '\n')
    write_manifest(config, 'measure', grid, _out_dir(config))
    return payload


COMMANDS = {
    'fig1a': cmd_fig1a,
    'fig1b': cmd_fig1b,
    'fig2': cmd_fig2,
    'fig3': cmd_fig3,
    'measure': cmd_measure,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='flat key-value JSON file (a manifest works too)')
    common.add_argument('--set', dest='assignments', action='append', default=[],
                        metavar='KEY=VALUE', help='override one configuration key')
    common.add_argument('--out', help='output directory')
    common.add_argument('--seed', type=int, help='seed for the random initial pairs')
    common.add_argument('--workers', type=int, help='processes used for pair sweeps')
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='count', default=0)
    verbosity.add_argument('-q', '--quiet', action='store_true')

    parser = argparse.ArgumentParser(
        prog='dephasing-lab',
        description='Two-qubit dephasing with correlated environments: figure data and measures.')
    sub = parser.add_subparsers(dest='command', required=True)
    for name, func in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=func.__doc__.splitlines()[0])
    return parser


def _setup_logging(args):
    if args.quiet:
        level = logging.ERROR
    elif args.verbose >= 2:
        level = logging.DEBUG
    elif args.verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, str(LOG_LEVEL).upper(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def main(argv=None):
    args = build_parser().parse_args(argv)
    _setup_logging(args)
    try:
        config = load_run_config(args.command, args.config, args.assignments,
                                 seed=args.seed, out=args.out, workers=args.workers)
        COMMANDS[args.command](config)
    except LabError as e:
        sys.stderr.write(f"{args.command}: {type(e).__name__}: {e}\n")
        return e.exit_code
    return 0


if __name__ == '__main__':
    sys.exit(main())

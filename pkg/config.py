"""
Configuration file for the dephasing laboratory
Supports reading overrides from environment variables.
"""
import os


def get_setting(name, default=None, cast=str):
    """Fetch DEPHASING_LAB_<name> from the environment with typed fallback."""
    val = os.getenv(f"DEPHASING_LAB_{name}")
    if val is None:
        return default
    try:
        return cast(val)
    except (TypeError, ValueError):
        return default


ARTIFACT_VERSION = '1.0.0'

LOG_LEVEL = get_setting('LOG_LEVEL', 'WARNING')

# Density matrix validation
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10
NORM_TOL = 1e-12
KAPPA_TOL = 1e-12

# Cyclic Jacobi eigensolver
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

# Adaptive Gauss-Kronrod quadrature
QUAD_TOL = 1e-10
QUAD_MAX_INTERVALS = 2000
QUAD_UPPER_CUTOFFS = 40.0  # upper limit in units of omega_c

# Riemann discretization used as brute-force oracle
DISCRETE_MODES = 2000
DISCRETE_OMEGA_MAX = 20.0  # in units of omega_c

# Sampling and time grids
DEFAULT_SEED = get_setting('SEED', 20101216, int)
DEFAULT_N_SAMPLES = get_setting('N_SAMPLES', 1000, int)
# 4000 intervals, so switch-on times of sequential windows fall on grid points
DEFAULT_N_POINTS = get_setting('N_POINTS', 4001, int)
DEFAULT_WORKERS = get_setting('WORKERS', 1, int)
# pairs diagonalized together; fixed so results do not depend on WORKERS
PAIR_CHUNK = 16

# CSV output
CSV_FLOAT_FORMAT = '%.12g'

# Per-command parameter defaults
FIGURE_DEFAULTS = {
    'fig1a': {
        'model': 'ohmic',
        'alpha': 1.0,
        'omega_c': 1.0,
        't1s': 0.0, 't1f': 1.0, 't2s': 1.0, 't2f': 2.0,
        'c_values': [round(-1.0 + 0.1 * i, 10) for i in range(21)],
    },
    'fig1b': {
        'model': 'photon',
        'omega0': 1.0,
        'delta_n': 1.0,
        'plate_strength': 1.0,
        'T': 1.0,
        'k_values': [round(-1.0 + 0.1 * i, 10) for i in range(21)],
    },
    'fig2': {
        'model': 'ohmic',
        'alpha': 1.0,
        'omega_c': 1.0,
        't1s': 0.0, 't1f': 1.0, 't2s': 1.0, 't2f': 2.0,
        'c_values': [-1.0, -0.5, 0.0, 0.5, 1.0],
        'n_samples': 0,
    },
    'fig3': {
        'model': 'photon',
        'omega0': 1.0,
        'delta_n': 1.0,
        'plate_strength': 1.0,
        'T': 1.0,
        'k_values': [-1.0, -0.5, 0.0],
        'n_density': 101,
        'n_sigma': 4.0,
        'n_samples': 0,
    },
    'measure': {
        'model': 'ohmic',
        'alpha': 1.0,
        'omega_c': 1.0,
        'c': -1.0,
        't1s': 0.0, 't1f': 1.0, 't2s': 1.0, 't2f': 2.0,
    },
}

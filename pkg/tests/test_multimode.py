import numpy as np
import pytest
from scipy.integrate import quad

from dephasing import InteractionSchedule, factorization_defect
from errors import InvalidCorrelation, InvalidParameter, QuadratureNotConverged
from multimode import (DiscreteModeEnvironment, OhmicCorrelatedFields,
                       adaptive_gauss_kronrod, decoherence_integral,
                       discrete_dephasing, gaussian_char2,
                       ohmic_quadrature_kappa, quadrature_dephasing, xi)

SEQUENTIAL = InteractionSchedule(0.0, 1.0, 1.0, 2.0)
CORRELATIONS = [-1.0, -0.5, 0.0, 0.5, 1.0]


def at_local_times(t1, t2):
    """Schedule on which the local times at t = max(t1, t2) are (t1, t2)."""
    return InteractionSchedule(0.0, t1, 0.0, t2), max(t1, t2)


def random_local_times(seed, n=100):
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, 3.0, size=(n, 2))


def test_xi_examples():
    assert xi(0.3, 2.0, 0.0) == 0
    assert abs(xi(1.0, np.pi, 1.0) - 2 / np.pi) < 1e-15


def test_xi_modulus():
    rng = np.random.default_rng(0)
    g, w, t = rng.uniform(0.1, 2, 3)
    assert abs(abs(xi(g, w, t)) ** 2 - 2 * g ** 2 * (1 - np.cos(w * t)) / w ** 2) < 1e-14


def test_gaussian_char2_examples():
    assert gaussian_char2(0, 0, 0.3) == 1
    x, y = 0.4 - 0.2j, -0.1 + 0.7j
    assert abs(gaussian_char2(x, x, -1.0) - 1) < 1e-15
    assert abs(gaussian_char2(x, y, -1.0) - np.exp(-0.5 * abs(x - y) ** 2)) < 1e-15
    assert gaussian_char2(x, 0, -1.0) == gaussian_char2(x, 0, 0.8)
    with pytest.raises(InvalidCorrelation):
        gaussian_char2(x, y, 1.2)


def test_invalid_environments():
    with pytest.raises(InvalidParameter):
        OhmicCorrelatedFields(alpha=0.0)
    with pytest.raises(InvalidCorrelation):
        OhmicCorrelatedFields(c=-1.5)
    with pytest.raises(InvalidParameter):
        DiscreteModeEnvironment([0.1, 0.2], [1.0])


def test_discrete_at_time_zero_is_identity():
    env = DiscreteModeEnvironment([0.2, 0.5, 0.1], [0.5, 1.0, 2.0], c=-0.6)
    f = discrete_dephasing(env, SEQUENTIAL, 0.0)
    assert f.as_tuple() == (1, 1, 1, 1)


def test_single_mode_without_correlation_factorizes():
    env = DiscreteModeEnvironment([0.7], [1.3], c=0.0)
    f = discrete_dephasing(env, *at_local_times(0.8, 1.9))
    assert factorization_defect(f) == pytest.approx((0, 0), abs=1e-15)


@pytest.mark.parametrize('c', CORRELATIONS)
def test_discrete_lambda_kappa_identity(c):
    env = DiscreteModeEnvironment.riemann(OhmicCorrelatedFields(c=c), n_modes=200)
    for t1, t2 in random_local_times(1, n=20):
        f = env.dephasing_functions(*at_local_times(t1, t2))
        assert abs(f.lambda12 * f.kappa12 - f.kappa1 ** 2 * f.kappa2 ** 2) < 1e-12


@pytest.mark.parametrize('c', CORRELATIONS)
def test_ohmic_lambda_kappa_identity(c):
    env = OhmicCorrelatedFields(alpha=0.8, omega_c=1.5, c=c)
    for t1 in np.linspace(0.0, 3.0, 10):
        for t2 in np.linspace(0.0, 3.0, 10):
            f = env.dephasing_functions(*at_local_times(t1, t2))
            assert abs(f.lambda12 * f.kappa12 - f.kappa1 ** 2 * f.kappa2 ** 2) < 1e-12


def test_ohmic_examples():
    env = OhmicCorrelatedFields(alpha=1.0, omega_c=1.0, c=-1.0)
    f = env.dephasing_functions(SEQUENTIAL, np.array([0.0, 1.0, 2.0]))
    assert np.abs(f.kappa1 - [1.0, 0.25, 0.25]).max() < 1e-15
    assert np.abs(f.kappa12 - [1.0, 0.25, 1.0]).max() < 1e-15


def test_ohmic_without_correlation_factorizes():
    f = OhmicCorrelatedFields(c=0.0).dephasing_functions(SEQUENTIAL, np.linspace(0, 2, 101))
    d1, d2 = factorization_defect(f)
    assert d1.max() < 1e-14
    assert d2.max() < 1e-14


def test_local_function_depends_on_own_arm_only():
    env = OhmicCorrelatedFields(c=0.3)
    fa = env.dephasing_functions(InteractionSchedule(0, 1, 1, 2), 1.5)
    fb = env.dephasing_functions(InteractionSchedule(0, 1, 0, 2), 1.5)
    assert fa.kappa1 == fb.kappa1
    assert fa.kappa2 != fb.kappa2


def test_kappa_nonincreasing_in_time():
    t = np.linspace(0, 3, 601)
    for s in (SEQUENTIAL, InteractionSchedule(0.5, 2.5, 0, 1)):
        f = OhmicCorrelatedFields(alpha=0.7, omega_c=2.0, c=0.4).dephasing_functions(s, t)
        assert np.all(np.diff(f.kappa1.real) <= 0)
        assert np.all(np.diff(f.kappa2.real) <= 0)


def test_kappa12_decreases_with_correlation():
    for t1, t2 in [(1.0, 0.4), (0.3, 1.7), (2.0, 1.0)]:
        values = [OhmicCorrelatedFields(c=c).dephasing_functions(*at_local_times(t1, t2)).kappa12.real
                  for c in CORRELATIONS]
        assert np.all(np.diff(values) < 0)


def test_adaptive_gauss_kronrod():
    value, err = adaptive_gauss_kronrod(np.sin, 0.0, np.pi, tol=1e-12)
    assert abs(value - 2.0) < 1e-12
    assert err <= 1e-12


def test_adaptive_gauss_kronrod_gives_up():
    with pytest.raises(QuadratureNotConverged):
        adaptive_gauss_kronrod(lambda x: np.sin(50 * x) ** 2, 0.0, 40.0, tol=1e-14, limit=9)


def test_decoherence_integral_of_other_spectral_density():
    def gaussian_cutoff(omega):
        return 0.5 * omega * np.exp(-omega ** 2)

    for tau in (0.3, 1.0, 2.5):
        expected, _ = quad(lambda w: gaussian_cutoff(w) * 2 * np.sin(0.5 * w * tau) ** 2 / w ** 2,
                           0, 10, epsabs=1e-13, limit=200)
        assert abs(decoherence_integral(gaussian_cutoff, tau, 10.0) - expected) < 1e-9
    assert decoherence_integral(gaussian_cutoff, 0.0, 10.0) == 0.0


def test_quadrature_of_ohmic_integral():
    f = ohmic_quadrature_kappa(OhmicCorrelatedFields(), 1.0, 0.0)
    assert abs(f.kappa1 - 0.25) < 1e-9
    assert abs(f.kappa2 - 1.0) < 1e-15


def test_quadrature_rejects_bad_correlation():
    with pytest.raises(InvalidCorrelation):
        quadrature_dephasing(OhmicCorrelatedFields().spectral_density, 2.0, 1.0, 1.0, 40.0)


@pytest.mark.parametrize('c', CORRELATIONS)
def test_closed_form_matches_quadrature(c):
    env = OhmicCorrelatedFields(alpha=1.0, omega_c=1.0, c=c)
    for t1, t2 in random_local_times(2):
        closed = env.dephasing_functions(*at_local_times(t1, t2))
        numeric = ohmic_quadrature_kappa(env, t1, t2)
        for a, b in zip(closed.as_tuple(), numeric.as_tuple()):
            assert abs(a - b) < 1e-8


@pytest.mark.parametrize('c', CORRELATIONS)
def test_discrete_modes_approach_continuum(c):
    env = OhmicCorrelatedFields(alpha=1.0, omega_c=1.0, c=c)
    discrete = DiscreteModeEnvironment.riemann(env)
    for t1, t2 in random_local_times(3):
        s, t = at_local_times(t1, t2)
        closed = env.dephasing_functions(s, t)
        brute = discrete.dephasing_functions(s, t)
        for a, b in zip(closed.as_tuple(), brute.as_tuple()):
            assert abs(a - b) <= 0.02 * abs(a)

"""
Correlated Multimode Fields Module
Two qubits dephased by two bosonic reservoirs whose modes share a two-mode
Gaussian state with covariance A = B = I, C = c I.

Three routes to the decoherence functions are provided and cross-check each
other: a product over discrete modes, adaptive quadrature of the continuum
limit, and the closed forms for an ohmic spectral density.
"""

import logging
from dataclasses import dataclass

import numpy as np

from config import (DISCRETE_MODES, DISCRETE_OMEGA_MAX, QUAD_MAX_INTERVALS,
                    QUAD_TOL, QUAD_UPPER_CUTOFFS)
from dephasing import DephasingFunctions, local_times
from errors import InvalidCorrelation, InvalidParameter, QuadratureNotConverged

logger = logging.getLogger(__name__)

# Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half) and weights
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss weights for the odd Kronrod nodes (0.949..., 0.741..., 0.405..., 0)
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_WEIGHTS = np.zeros(15)
_GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
_GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]
_GAUSS_WEIGHTS[7] = _WG[3]


def _check_correlation(c):
    if not np.isfinite(c) or abs(c) > 1.0:
        raise InvalidCorrelation(f"correlation c must satisfy |c| <= 1, got {c}")


@dataclass(frozen=True)
class OhmicCorrelatedFields:
    """Ohmic reservoirs J(w) = alpha w exp(-w/omega_c) with mode correlation c."""
    alpha: float = 1.0
    omega_c: float = 1.0
    c: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidParameter(f"alpha must be > 0, got {self.alpha}")
        if not self.omega_c > 0:
            raise InvalidParameter(f"omega_c must be > 0, got {self.omega_c}")
        _check_correlation(self.c)

    def spectral_density(self, omega):
        return ohmic_spectral_density(self, omega)

    def dephasing_functions(self, s, t):
        return ohmic_dephasing(self, s, t)


@dataclass(frozen=True, eq=False)
class DiscreteModeEnvironment:
    """Finite set of modes (g_k, omega_k) shared by both reservoirs."""
    couplings: np.ndarray
    frequencies: np.ndarray
    c: float = 0.0

    def __post_init__(self):
        g = np.atleast_1d(np.asarray(self.couplings, dtype=complex))
        w = np.atleast_1d(np.asarray(self.frequencies, dtype=float))
        if g.ndim != 1 or g.shape != w.shape or g.size == 0:
            raise InvalidParameter("need a nonempty list of (coupling, frequency) modes")
        if np.any(w <= 0):
            raise InvalidParameter("mode frequencies must be > 0")
        _check_correlation(self.c)
        object.__setattr__(self, 'couplings', g)
        object.__setattr__(self, 'frequencies', w)

    @classmethod
    def riemann(cls, env, n_modes=DISCRETE_MODES, omega_max=DISCRETE_OMEGA_MAX):
        """
        Discretize a spectral density on w_k = k dw, |g_k|^2 = J(w_k) dw,
        with dw = omega_max * omega_c / n_modes.
        """
        dw = omega_max * env.omega_c / n_modes
        omega = dw * np.arange(1, n_modes + 1)
        g = np.sqrt(env.spectral_density(omega) * dw)
        return cls(g, omega, env.c)

    @property
    def modes(self):
        return list(zip(self.couplings, self.frequencies))

    def dephasing_functions(self, s, t):
        return discrete_dephasing(self, s, t)


def ohmic_spectral_density(env, omega):
    omega = np.asarray(omega, dtype=float)
    return env.alpha * omega * np.exp(-omega / env.omega_c)


def xi(g, omega, t_local):
    """Displacement amplitude g (1 - exp(i w t)) / w of one mode."""
    return g * (1.0 - np.exp(1j * omega * t_local)) / omega


def gaussian_char2(x, y, c):
    """
    Characteristic function of the two-mode Gaussian state,
    exp[-(|x|^2 + |y|^2 + c (x y^* + x^* y)) / 2].
    """
    _check_correlation(c)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    cross = 2.0 * c * (x * y.conj()).real
    return np.exp(-0.5 * (np.abs(x) ** 2 + np.abs(y) ** 2 + cross))


def discrete_dephasing(env, s, t):
    """Decoherence functions as products over the discrete modes."""
    t1, t2 = local_times(s, t)
    g = env.couplings
    w = env.frequencies
    x1 = -2.0 * xi(g, w, np.asarray(t1)[..., None])
    x2 = -2.0 * xi(g, w, np.asarray(t2)[..., None])
    zero = np.zeros_like(x1)
    return DephasingFunctions(
        kappa1=np.prod(gaussian_char2(x1, zero, env.c), axis=-1),
        kappa2=np.prod(gaussian_char2(zero, x2, env.c), axis=-1),
        kappa12=np.prod(gaussian_char2(x1, x2, env.c), axis=-1),
        lambda12=np.prod(gaussian_char2(x1, -x2, env.c), axis=-1),
    )


def ohmic_log_factor(env, tau):
    """ln(1 + omega_c^2 tau^2); the ohmic decoherence integral is alpha/2 times this."""
    tau = np.asarray(tau, dtype=float)
    return np.log1p((env.omega_c * tau) ** 2)


def ohmic_dephasing(env, s, t):
    """
    Closed forms of the continuum limit for an ohmic spectral density

    kappa_i = (1 + w_c^2 t_i^2)^(-2 alpha), and for general c
    kappa12 = kappa1 kappa2 [(1 + w_c^2 t1^2)(1 + w_c^2 t2^2) / (1 + w_c^2 (t1 - t2)^2)]^(-2 alpha c),
    Lambda12 = kappa1^2 kappa2^2 / kappa12.
    """
    t1, t2 = local_times(s, t)
    l1 = ohmic_log_factor(env, t1)
    l2 = ohmic_log_factor(env, t2)
    l12 = ohmic_log_factor(env, np.subtract(t1, t2))
    a = env.alpha
    log_k12 = -2.0 * a * ((1.0 + env.c) * (l1 + l2) - env.c * l12)
    log_l12 = -2.0 * a * ((1.0 - env.c) * (l1 + l2) + env.c * l12)
    return DephasingFunctions(
        kappa1=np.exp(-2.0 * a * l1),
        kappa2=np.exp(-2.0 * a * l2),
        kappa12=np.exp(log_k12),
        lambda12=np.exp(log_l12),
    )


def _kronrod_panel(f, left, right):
    half = 0.5 * (right - left)
    values = f(0.5 * (right + left) + half * _NODES)
    kronrod = half * np.dot(_KRONROD_WEIGHTS, values)
    gauss = half * np.dot(_GAUSS_WEIGHTS, values)
    resasc = half * np.dot(_KRONROD_WEIGHTS, np.abs(values - kronrod / (2.0 * half)))
    err = abs(kronrod - gauss)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    return kronrod, err


def adaptive_gauss_kronrod(f, a, b, tol=QUAD_TOL, limit=QUAD_MAX_INTERVALS, min_intervals=8):
    """
    Adaptive Gauss-Kronrod quadrature; the panel with the largest error
    estimate is bisected until the summed estimate is below tol (absolute).

    Returns:
        tuple: (integral, error estimate)
    """
    edges = np.linspace(a, b, min_intervals + 1)
    panels = []
    for left, right in zip(edges[:-1], edges[1:]):
        value, err = _kronrod_panel(f, left, right)
        panels.append([left, right, value, err])

    while True:
        total = sum(p[2] for p in panels)
        err_total = sum(p[3] for p in panels)
        if err_total <= tol:
            logger.debug("quadrature converged on %d panels, error %.2e", len(panels), err_total)
            return total, err_total
        if len(panels) >= limit:
            raise QuadratureNotConverged(
                f"error estimate {err_total:.3e} above {tol:.1e} after {limit} panels")
        worst = max(range(len(panels)), key=lambda i: panels[i][3])
        left, right = panels[worst][0], panels[worst][1]
        mid = 0.5 * (left + right)
        panels[worst] = [left, mid, *_kronrod_panel(f, left, mid)]
        panels.append([mid, right, *_kronrod_panel(f, mid, right)])


def decoherence_integral(spectral_density, tau, upper, tol=QUAD_TOL):
    """
    int_0^upper J(w) (1 - cos w tau) / w^2 dw

    (1 - cos w tau) / w^2 is evaluated as (tau^2 / 2) sinc^2(w tau / 2 pi),
    which is regular at w = 0.
    """
    tau = float(abs(tau))
    if tau == 0.0:
        return 0.0

    def integrand(omega):
        return spectral_density(omega) * 0.5 * tau ** 2 * np.sinc(omega * tau / (2.0 * np.pi)) ** 2

    # resolve the oscillation: at least a couple of panels per period
    min_intervals = max(8, int(np.ceil(upper * tau / np.pi)))
    value, _ = adaptive_gauss_kronrod(integrand, 0.0, upper, tol=tol, min_intervals=min_intervals)
    return value


def quadrature_dephasing(spectral_density, c, t1, t2, upper, tol=QUAD_TOL):
    """Decoherence functions of the continuum limit for any spectral density."""
    _check_correlation(c)
    i1 = decoherence_integral(spectral_density, t1, upper, tol)
    i2 = decoherence_integral(spectral_density, t2, upper, tol)
    i12 = decoherence_integral(spectral_density, t1 - t2, upper, tol)
    return DephasingFunctions(
        kappa1=np.exp(-4.0 * i1),
        kappa2=np.exp(-4.0 * i2),
        kappa12=np.exp(-4.0 * ((1.0 + c) * (i1 + i2) - c * i12)),
        lambda12=np.exp(-4.0 * ((1.0 - c) * (i1 + i2) + c * i12)),
    )


def ohmic_quadrature_kappa(env, t1, t2, tol=QUAD_TOL):
    """Ohmic decoherence functions by quadrature, on [0, 40 omega_c]."""
    return quadrature_dephasing(env.spectral_density, env.c, t1, t2,
                                upper=QUAD_UPPER_CUTOFFS * env.omega_c, tol=tol)

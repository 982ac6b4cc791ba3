"""
Photon Pairs Through Birefringent Plates Module
Polarization qubits dephased by their own frequency degrees of freedom,
with a correlated Gaussian joint frequency distribution.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from dephasing import (PHI_MINUS, PHI_PLUS, PSI_MINUS, PSI_PLUS,
                       DephasingFunctions, InteractionSchedule, local_times)
from errors import (InvalidCorrelation, InvalidParameter, InvalidSchedule,
                    SingularCovariance)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhotonGaussianEnv:
    """
    Joint frequency distribution with means omega0/2, common variance c11
    and correlation coefficient k_corr; delta_n = n_V - n_H.
    """
    omega0: float = 1.0
    c11: float = 1.0
    k_corr: float = 0.0
    delta_n: float = 1.0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise InvalidParameter(f"omega0 must be > 0, got {self.omega0}")
        if not self.c11 > 0:
            raise InvalidParameter(f"c11 must be > 0, got {self.c11}")
        if not np.isfinite(self.k_corr) or abs(self.k_corr) > 1.0:
            raise InvalidCorrelation(f"correlation K must satisfy |K| <= 1, got {self.k_corr}")
        if not np.isfinite(self.delta_n):
            raise InvalidParameter(f"delta_n must be finite, got {self.delta_n}")

    @classmethod
    def from_plate_strength(cls, x, k_corr, T=1.0, delta_n=1.0, omega0=1.0):
        """Environment with C11 (delta_n T)^2 = x."""
        if not x > 0 or not T > 0 or delta_n == 0:
            raise InvalidParameter("need x > 0, T > 0 and delta_n != 0")
        return cls(omega0=omega0, c11=x / (delta_n * T) ** 2, k_corr=k_corr, delta_n=delta_n)

    def plate_strength(self, T):
        return self.c11 * (self.delta_n * T) ** 2

    @property
    def mean(self):
        return np.array([0.5 * self.omega0, 0.5 * self.omega0])

    @property
    def covariance(self):
        off = self.k_corr * self.c11
        return np.array([[self.c11, off], [off, self.c11]])

    def dephasing_functions(self, s, t):
        return photon_dephasing(self, s, t)


@dataclass(frozen=True)
class PlateSchedule(InteractionSchedule):
    """Two plates of equal length T, the second mounted after the first."""

    def __post_init__(self):
        super().__post_init__()
        len1 = self.t1_end - self.t1_start
        len2 = self.t2_end - self.t2_start
        # exact up to the rounding of start + T and start + 2T
        if not np.isclose(len1, len2, rtol=1e-12, atol=1e-15):
            raise InvalidSchedule(f"plate windows differ in length: {len1} vs {len2}")
        if self.t1_end != self.t2_start:
            raise InvalidSchedule("plate 2 must switch on when plate 1 switches off")
        if len1 <= 0:
            raise InvalidSchedule("plate length T must be > 0")

    @classmethod
    def of(cls, T, start=0.0):
        return cls(start, start + T, start + T, start + 2 * T)

    @property
    def T(self):
        return self.t1_end - self.t1_start


def g_fourier(env, tau1, tau2):
    """
    Characteristic function of the frequency distribution,
    G = exp[i omega0 (tau1 + tau2)/2 - C11 (tau1^2 + tau2^2 + 2 K tau1 tau2)/2].
    """
    tau1 = np.asarray(tau1, dtype=float)
    tau2 = np.asarray(tau2, dtype=float)
    phase = 0.5j * env.omega0 * (tau1 + tau2)
    decay = -0.5 * env.c11 * (tau1 ** 2 + tau2 ** 2 + 2.0 * env.k_corr * tau1 * tau2)
    return np.exp(phase + decay)


def photon_dephasing(env, s, t):
    """
    Decoherence functions of the plate setup, tau_i = delta_n t_i.

    Lambda12 kappa12 = kappa1^2 |kappa2|^2 here, which carries the phase
    exp(-i omega0 tau2) relative to kappa1^2 kappa2^2; the moduli agree.
    """
    t1, t2 = local_times(s, t)
    tau1 = env.delta_n * np.asarray(t1)
    tau2 = env.delta_n * np.asarray(t2)
    return DephasingFunctions(
        kappa1=g_fourier(env, tau1, 0.0),
        kappa2=g_fourier(env, 0.0, tau2),
        kappa12=g_fourier(env, tau1, tau2),
        lambda12=g_fourier(env, tau1, -tau2),
    )


def maximizing_pair(env):
    """(HH +- VV) pair for K <= 0, (HV +- VH) pair for K > 0."""
    if env.k_corr <= 0:
        return PHI_PLUS, PHI_MINUS
    return PSI_PLUS, PSI_MINUS


def analytic_trace_distance(env, s, t):
    """D(t) = exp[-(dn^2/2) C11 (t1^2 + t2^2 - 2|K| t1 t2)] for the maximizing pair."""
    t1, t2 = local_times(s, t)
    t1 = np.asarray(t1)
    t2 = np.asarray(t2)
    exponent = t1 ** 2 + t2 ** 2 - 2.0 * abs(env.k_corr) * t1 * t2
    value = np.exp(-0.5 * env.delta_n ** 2 * env.c11 * exponent)
    return float(value) if value.ndim == 0 else value


def plate_extrema(env, T):
    """
    Landmarks of the trace distance for sequential plates of length T

    Returns:
        dict: d1 (end of plate 1), d2 (maximum on plate 2), turning_t2 (|K| T)
    """
    x = env.plate_strength(T)
    k = abs(env.k_corr)
    return {
        'd1': float(np.exp(-0.5 * x)),
        'd2': float(np.exp(-0.5 * x * (1.0 - k ** 2))),
        'turning_t2': k * T,
    }


def analytic_measure(env, T):
    """N = D2 - D1 = exp(-x/2) [exp(x K^2 / 2) - 1], x = C11 (dn T)^2."""
    if not T > 0:
        raise InvalidParameter(f"plate length T must be > 0, got {T}")
    x = env.plate_strength(T)
    return float(np.exp(-0.5 * x) * np.expm1(0.5 * x * env.k_corr ** 2))


def frequency_pdf(env, omega1, omega2):
    """Bivariate normal density of (omega1, omega2); needs |K| < 1."""
    k = env.k_corr
    if abs(k) >= 1.0:
        raise SingularCovariance(f"no density for |K| = 1 (K = {k}); use g_fourier")
    u = np.asarray(omega1, dtype=float) - 0.5 * env.omega0
    v = np.asarray(omega2, dtype=float) - 0.5 * env.omega0
    one_minus = 1.0 - k ** 2
    quad = (u ** 2 + v ** 2 - 2.0 * k * u * v) / (env.c11 * one_minus)
    return np.exp(-0.5 * quad) / (2.0 * np.pi * env.c11 * np.sqrt(one_minus))


def frequency_support(env):
    """Line carrying all probability when |K| = 1."""
    if abs(env.k_corr) < 1.0:
        raise InvalidParameter("frequency_support is only defined for |K| = 1")
    center = 0.5 * env.omega0
    return {
        'center': (center, center),
        'slope': float(np.sign(env.k_corr)),
        'marginal_variance': env.c11,
    }


def numeric_g_fourier(env, tau1, tau2, n_sigma=8.0, n_grid=401):
    """
    Characteristic function by trapezoidal quadrature of frequency_pdf on a
    box of +-n_sigma standard deviations, using the same phase convention as
    g_fourier.
    """
    sigma = np.sqrt(env.c11)
    axis = 0.5 * env.omega0 + np.linspace(-n_sigma * sigma, n_sigma * sigma, n_grid)
    w1, w2 = np.meshgrid(axis, axis, indexing='ij')
    integrand = frequency_pdf(env, w1, w2) * np.exp(1j * (w1 * tau1 + w2 * tau2))
    return complex(trapezoid(trapezoid(integrand, axis, axis=1), axis))

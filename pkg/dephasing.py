"""
Two-Qubit Dephasing Map Module
Pure initial states, local interaction schedules, decoherence functions
(kappa1, kappa2, kappa12, Lambda12) and the dephasing map built from them.
"""

import logging
from dataclasses import dataclass
from typing import Any, Protocol

import numpy as np

from config import KAPPA_TOL, NORM_TOL
from errors import (InvalidDensityMatrix, InvalidParameter, InvalidSchedule,
                    InvalidState, MapNotPositive)
from qlinalg import DensityMatrix

logger = logging.getLogger(__name__)

SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class PureState2Q:
    """a|00> + b|01> + c|10> + d|11>"""
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ('a', 'b', 'c', 'd'):
            object.__setattr__(self, name, complex(getattr(self, name)))
        norm = abs(self.a) ** 2 + abs(self.b) ** 2 + abs(self.c) ** 2 + abs(self.d) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidState(f"state norm^2 is {norm:.15g}, expected 1")

    @classmethod
    def from_vector(cls, vector, normalize=False):
        vec = np.asarray(vector, dtype=complex).reshape(4)
        if normalize:
            vec = vec / np.linalg.norm(vec)
        return cls(*vec)

    @property
    def vector(self):
        return np.array([self.a, self.b, self.c, self.d], dtype=complex)

    def density(self):
        return DensityMatrix.from_ket(self.vector)


PHI_PLUS = PureState2Q(SQRT_HALF, 0, 0, SQRT_HALF)
PHI_MINUS = PureState2Q(SQRT_HALF, 0, 0, -SQRT_HALF)
PSI_PLUS = PureState2Q(0, SQRT_HALF, SQRT_HALF, 0)
PSI_MINUS = PureState2Q(0, SQRT_HALF, -SQRT_HALF, 0)

PLUS_1Q = np.array([SQRT_HALF, SQRT_HALF], dtype=complex)
MINUS_1Q = np.array([SQRT_HALF, -SQRT_HALF], dtype=complex)


def bell_candidate_pairs():
    """Known maximizing pairs, in fixed order, keyed by pair id."""
    return [
        ('phi+/phi-', (PHI_PLUS, PHI_MINUS)),
        ('phi-/phi+', (PHI_MINUS, PHI_PLUS)),
        ('psi+/psi-', (PSI_PLUS, PSI_MINUS)),
        ('psi-/psi+', (PSI_MINUS, PSI_PLUS)),
    ]


@dataclass(frozen=True)
class InteractionSchedule:
    """Switch-on and switch-off times of the interaction in each arm."""
    t1_start: float
    t1_end: float
    t2_start: float
    t2_end: float

    def __post_init__(self):
        times = (self.t1_start, self.t1_end, self.t2_start, self.t2_end)
        if not all(np.isfinite(times)):
            raise InvalidSchedule(f"schedule times must be finite: {times}")
        if min(times) < 0:
            raise InvalidSchedule(f"schedule times must be >= 0: {times}")
        if self.t1_start > self.t1_end or self.t2_start > self.t2_end:
            raise InvalidSchedule(f"each window needs start <= end: {times}")

    @classmethod
    def sequential(cls, T, start=0.0):
        """Plate 2 switches on when plate 1 switches off; both last T."""
        return cls(start, start + T, start + T, start + 2 * T)

    @property
    def span(self):
        return max(self.t1_end, self.t2_end)

    def local_times(self, t):
        return local_times(self, t)


def local_times(s, t):
    """
    Accumulated interaction time of each arm, t_i(t) = int_0^t chi_i.

    Works elementwise when t is an array.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise InvalidParameter("time must be >= 0")
    t1 = np.clip(t, s.t1_start, s.t1_end) - s.t1_start
    t2 = np.clip(t, s.t2_start, s.t2_end) - s.t2_start
    if t1.ndim == 0:
        return float(t1), float(t2)
    return t1, t2


@dataclass(frozen=True, eq=False)
class DephasingFunctions:
    """
    Coherence multipliers of the map at one time, or on a grid of times
    when the fields are arrays of a common shape.
    """
    kappa1: Any
    kappa2: Any
    kappa12: Any
    lambda12: Any

    def __post_init__(self):
        for name in ('kappa1', 'kappa2', 'kappa12', 'lambda12'):
            value = np.asarray(getattr(self, name), dtype=complex)
            if np.any(np.abs(value) > 1.0 + KAPPA_TOL):
                raise MapNotPositive(f"|{name}| exceeds 1 (max {np.abs(value).max():.15g})")
            object.__setattr__(self, name, value if value.ndim else complex(value))

    @classmethod
    def identity(cls):
        return cls(1.0, 1.0, 1.0, 1.0)

    def as_tuple(self):
        return self.kappa1, self.kappa2, self.kappa12, self.lambda12


class DecoherenceModel(Protocol):
    """Anything that maps (schedule, t) to the decoherence functions."""

    def dephasing_functions(self, s: InteractionSchedule, t) -> DephasingFunctions:
        ...


def coherence_matrix(f):
    """
    Schur multiplier M(f) of the map: Phi(rho) = M(f) * rho elementwise.

    Returns an array of shape (..., 4, 4) following the shape of the fields.
    """
    k1, k2, k12, l12 = (np.asarray(v, dtype=complex) for v in f.as_tuple())
    k1, k2, k12, l12 = np.broadcast_arrays(k1, k2, k12, l12)
    one = np.ones_like(k1)
    rows = [
        [one, k2, k1, k12],
        [k2.conj(), one, l12, k1],
        [k1.conj(), l12.conj(), one, k2],
        [k12.conj(), k1.conj(), k2.conj(), one],
    ]
    return np.stack([np.stack(row, axis=-1) for row in rows], axis=-2)


def apply_map(psi, f):
    """
    Evolve a pure initial state with a fixed set of decoherence functions

    Raises:
        MapNotPositive: the tuple does not give a valid density matrix
    """
    if np.ndim(f.kappa1) != 0:
        raise InvalidParameter("apply_map takes decoherence functions at a single time")
    vec = psi.vector
    rho = coherence_matrix(f) * np.outer(vec, vec.conj())
    try:
        return DensityMatrix.from_array(rho)
    except InvalidDensityMatrix as e:
        raise MapNotPositive(f"inconsistent decoherence functions: {e}") from e


def evolve_local(psi_local, kappa_i):
    """Single-qubit dephasing: populations kept, coherence times kappa_i."""
    vec = np.asarray(psi_local, dtype=complex).reshape(2)
    if abs(np.vdot(vec, vec).real - 1.0) > NORM_TOL:
        raise InvalidState("local state must be normalized")
    multiplier = np.array([[1.0, kappa_i], [np.conj(kappa_i), 1.0]], dtype=complex)
    return DensityMatrix.from_array(multiplier * np.outer(vec, vec.conj()))


def factorization_defect(f):
    """
    Distance of the map from a product of local maps

    Returns:
        tuple: (|kappa12 - kappa1 kappa2|, |Lambda12 - kappa1 kappa2^*|)
    """
    d1 = np.abs(np.asarray(f.kappa12) - np.asarray(f.kappa1) * np.asarray(f.kappa2))
    d2 = np.abs(np.asarray(f.lambda12) - np.asarray(f.kappa1) * np.conj(f.kappa2))
    if d1.ndim == 0:
        return float(d1), float(d2)
    return d1, d2


def is_product_map(f, tol=1e-10):
    d1, d2 = factorization_defect(f)
    return bool(np.all(d1 <= tol) and np.all(d2 <= tol))

"""
Dense Complex Linear Algebra Module
Small Hermitian matrices (2x2 and 4x4): density matrices, cyclic Jacobi
eigenvalues, trace distance and partial trace.

Basis order is |00>, |01>, |10>, |11> with subsystem 1 the leftmost factor.
"""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from config import (HERMITIAN_TOL, JACOBI_MAX_SWEEPS, JACOBI_TOL, PSD_TOL,
                    TRACE_TOL)
from errors import (DimensionMismatch, EigensolverNotConverged,
                    InvalidDensityMatrix, InvalidParameter, NonHermitianInput)

logger = logging.getLogger(__name__)

ALLOWED_DIMS = (2, 4)


def format_complex(z):
    """Render one entry as 're+imj' with 17 significant digits."""
    return f"{z.real:.17g}{z.imag:+.17g}j"


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
        if arr.shape[0] not in ALLOWED_DIMS:
            raise DimensionMismatch(f"dimension must be 2 or 4, got {arr.shape[0]}")
        arr.setflags(write=False)
        object.__setattr__(self, 'entries', arr)

    @property
    def dim(self):
        return self.entries.shape[0]

    def to_csv(self, path):
        """Debug dump, row-major, one matrix row per CSV line."""
        rows = [[format_complex(z) for z in row] for row in self.entries]
        pd.DataFrame(rows).to_csv(path, header=False, index=False, lineterminator='\n')


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    mat: ComplexMatrix

    def __post_init__(self):
        arr = self.mat.entries
        herm_err = np.abs(arr - arr.conj().T).max()
        if herm_err > HERMITIAN_TOL:
            raise InvalidDensityMatrix(f"not Hermitian (max deviation {herm_err:.3e})")
        tr = np.trace(arr)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidDensityMatrix(f"trace is {tr.real:.15g}, expected 1")
        lowest = hermitian_eigenvalues(arr)[0]
        if lowest < PSD_TOL:
            raise InvalidDensityMatrix(f"negative eigenvalue {lowest:.3e}")

    @classmethod
    def from_array(cls, arr):
        return cls(ComplexMatrix(arr))

    @classmethod
    def from_ket(cls, vector):
        vec = np.asarray(vector, dtype=complex)
        return cls.from_array(np.outer(vec, vec.conj()))

    @property
    def array(self):
        return self.mat.entries

    @property
    def dim(self):
        return self.mat.dim


def _as_array(m):
    if isinstance(m, DensityMatrix):
        return m.array
    if isinstance(m, ComplexMatrix):
        return m.entries
    return np.asarray(m, dtype=complex)


def _rotate(a, p, q, threshold):
    """
    Annihilate a[:, p, q] with one complex Jacobi rotation
    U = diag-phase * Givens, applied as A <- U^H A U, in every matrix of the
    stack where |a[:, p, q]| is above that matrix's threshold. The other
    matrices are left bit-for-bit unchanged.
    """
    apq = a[:, p, q]
    mag = np.abs(apq)
    active = mag > threshold
    if not active.any():
        return
    safe = np.where(active, mag, 1.0)
    phase = np.where(active, np.exp(1j * np.angle(apq)), 1.0)
    theta = (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe)
    t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    back = phase.conj()

    col_p = a[:, :, p].copy()
    col_q = a[:, :, q].copy()
    a[:, :, p] = c[:, None] * col_p - (s * back)[:, None] * col_q
    a[:, :, q] = s[:, None] * col_p + (c * back)[:, None] * col_q

    row_p = a[:, p, :].copy()
    row_q = a[:, q, :].copy()
    a[:, p, :] = c[:, None] * row_p - (s * phase)[:, None] * row_q
    a[:, q, :] = s[:, None] * row_p + (c * phase)[:, None] * row_q

    a[active, p, q] = 0.0
    a[active, q, p] = 0.0


def hermitian_eigenvalues(m, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """
    Eigenvalues of a Hermitian matrix, or of every matrix in a stack of
    shape (..., n, n), by cyclic Jacobi sweeps.

    Convergence is tracked per matrix against tol * max(1, max|m_k|); a
    matrix that has converged is not rotated again.

    Returns:
        np.ndarray: real eigenvalues sorted ascending along the last axis
    """
    arr = _as_array(m)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise DimensionMismatch(f"expected square matrices, got shape {arr.shape}")
    n = arr.shape[-1]
    lead = arr.shape[:-2]
    a = np.array(arr, dtype=complex).reshape(-1, n, n)
    if a.shape[0] == 0:
        return np.zeros(lead + (n,))

    herm_err = np.abs(a - a.conj().transpose(0, 2, 1)).max()
    if herm_err > HERMITIAN_TOL:
        raise NonHermitianInput(f"max |m - m^H| = {herm_err:.3e}")
    a = 0.5 * (a + a.conj().transpose(0, 2, 1))

    iu = np.triu_indices(n, 1)
    pairs = list(zip(*iu))
    threshold = tol * np.maximum(1.0, np.abs(a).reshape(a.shape[0], -1).max(axis=-1))
    for sweep in range(max_sweeps + 1):
        if pairs:
            off = np.abs(a[:, iu[0], iu[1]]).max(axis=-1)
        else:
            off = np.zeros(a.shape[0])
        todo = np.flatnonzero(off > threshold)
        if todo.size == 0:
            logger.debug("jacobi converged after %d sweeps on %d matrices", sweep, a.shape[0])
            break
        if sweep == max_sweeps:
            raise EigensolverNotConverged(
                f"off-diagonal {off.max():.3e} after {max_sweeps} sweeps "
                f"on {todo.size} of {a.shape[0]} matrices")
        sub = a[todo]
        sub_threshold = threshold[todo]
        for p, q in pairs:
            _rotate(sub, p, q, sub_threshold)
        a[todo] = sub

    eig = np.sort(np.diagonal(a, axis1=1, axis2=2).real, axis=-1)
    return eig.reshape(lead + (n,))


def _canonical_sign(delta):
    """Flip each matrix so its first nonzero real component is positive; X and -X map to the same matrix."""
    n = delta.shape[-1]
    flat = delta.reshape(-1, n * n)
    parts = np.concatenate([flat.real, flat.imag], axis=-1)
    first = np.argmax(parts != 0.0, axis=-1)
    sign = np.sign(parts[np.arange(parts.shape[0]), first])
    sign[sign == 0.0] = 1.0
    return (flat * sign[:, None]).reshape(delta.shape)


def trace_distance_array(delta):
    """Half the trace norm of each Hermitian matrix in a stack."""
    delta = np.asarray(delta, dtype=complex)
    return 0.5 * np.abs(hermitian_eigenvalues(_canonical_sign(delta))).sum(axis=-1)


def trace_distance(a, b):
    """D(a, b) = 1/2 tr|a - b| for two density matrices of equal dimension."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"cannot compare {a.dim}x{a.dim} with {b.dim}x{b.dim}")
    return float(trace_distance_array(a.array - b.array))


def partial_trace(rho, keep):
    """
    Reduced state of one qubit of a two-qubit density matrix

    Args:
        rho: 4x4 DensityMatrix
        keep: 1 to trace out subsystem 2, 2 to trace out subsystem 1
    """
    if rho.dim != 4:
        raise DimensionMismatch(f"partial trace needs a 4x4 state, got {rho.dim}x{rho.dim}")
    r = rho.array.reshape(2, 2, 2, 2)
    if keep == 1:
        reduced = np.einsum('abcb->ac', r)
    elif keep == 2:
        reduced = np.einsum('abad->bd', r)
    else:
        raise InvalidParameter(f"keep must be 1 or 2, got {keep!r}")
    return DensityMatrix.from_array(reduced)

"""
Trace Distance Dynamics and Non-Markovianity Module
Trace-distance trajectories of evolved state pairs, the measure as the total
increase of the trace distance, Haar sampling of initial pairs and the
maximization over pairs.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from config import DEFAULT_N_POINTS, DEFAULT_WORKERS, PAIR_CHUNK
from dephasing import PureState2Q, bell_candidate_pairs, coherence_matrix
from errors import InvalidParameter
from qlinalg import trace_distance_array

logger = logging.getLogger(__name__)

RANGE_TOL = 1e-10


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of n_points times on [t_start, t_end]."""
    t_start: float
    t_end: float
    n_points: int = DEFAULT_N_POINTS

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise InvalidParameter(f"n_points must be an integer >= 2, got {self.n_points}")
        if not self.t_end > self.t_start:
            raise InvalidParameter(f"need t_end > t_start, got [{self.t_start}, {self.t_end}]")
        if self.t_start < 0:
            raise InvalidParameter("grid must start at t >= 0")
        object.__setattr__(self, 'n_points', int(self.n_points))

    @classmethod
    def spanning(cls, s, n_points=DEFAULT_N_POINTS):
        """Grid from 0 to the last switch-off time of the schedule."""
        return cls(0.0, s.span, n_points)

    @property
    def spacing(self):
        return (self.t_end - self.t_start) / (self.n_points - 1)

    def times(self):
        return np.linspace(self.t_start, self.t_end, self.n_points)


@dataclass(frozen=True, eq=False)
class Trajectory:
    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n_points,):
            raise InvalidParameter(f"expected {self.grid.n_points} values, got shape {values.shape}")
        if values.size and (values.min() < -RANGE_TOL or values.max() > 1.0 + RANGE_TOL):
            raise InvalidParameter(f"trace distances outside [0, 1]: [{values.min()}, {values.max()}]")
        object.__setattr__(self, 'values', values)

    def measure(self):
        return measure_from_trajectory(self)


@dataclass(frozen=True, eq=False)
class MeasureResult:
    n_value: float
    best_pair: tuple
    best_pair_id: str
    per_pair_values: np.ndarray
    candidate_values: dict = field(default_factory=dict)


def _projector_difference(pair):
    a = pair[0].vector
    b = pair[1].vector
    return np.outer(a, a.conj()) - np.outer(b, b.conj())


def trajectory(model, s, pair, grid):
    """Trace distance of the evolved pair at every grid time."""
    f = model.dephasing_functions(s, grid.times())
    diffs = coherence_matrix(f) * _projector_difference(pair)
    return Trajectory(grid, trace_distance_array(diffs))


def local_trajectory(model, s, pair_local, grid, subsystem):
    """
    Trace distance of a single-qubit pair evolving under the local map of
    the given subsystem (1 or 2).
    """
    f = model.dephasing_functions(s, grid.times())
    if subsystem == 1:
        kappa = np.asarray(f.kappa1, dtype=complex)
    elif subsystem == 2:
        kappa = np.asarray(f.kappa2, dtype=complex)
    else:
        raise InvalidParameter(f"subsystem must be 1 or 2, got {subsystem!r}")
    a = np.asarray(pair_local[0], dtype=complex)
    b = np.asarray(pair_local[1], dtype=complex)
    delta = np.outer(a, a.conj()) - np.outer(b, b.conj())
    one = np.ones_like(kappa)
    multiplier = np.stack([np.stack([one, kappa], -1), np.stack([kappa.conj(), one], -1)], -2)
    return Trajectory(grid, trace_distance_array(multiplier * delta))


def measure_from_trajectory(traj):
    """Sum of the increases of the trace distance between grid points."""
    return float(np.maximum(np.diff(traj.values), 0.0).sum())


def haar_states(n, dim, rng):
    """n Haar-random kets: normalized vectors of i.i.d. complex Gaussians."""
    g = rng.standard_normal((n, dim, 2))
    z = g[..., 0] + 1j * g[..., 1]
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def sample_random_pairs(n, seed):
    """n pairs of independent Haar-random two-qubit pure states."""
    if n < 1:
        raise InvalidParameter(f"need at least one pair, got {n}")
    rng = np.random.default_rng(seed)
    kets = haar_states(2 * n, 4, rng).reshape(n, 2, 4)
    return [(PureState2Q.from_vector(a), PureState2Q.from_vector(b)) for a, b in kets]


def _chunk_measures(multiplier, deltas):
    diffs = multiplier[None] * deltas[:, None]
    values = trace_distance_array(diffs)
    return np.maximum(np.diff(values, axis=-1), 0.0).sum(axis=-1)


def _measure_chunk_job(model, s, grid, deltas):
    f = model.dephasing_functions(s, grid.times())
    return _chunk_measures(coherence_matrix(f), deltas)


def pair_measures(model, s, grid, pairs, workers=DEFAULT_WORKERS):
    """
    Measure of every pair, in input order

    Pairs are processed in chunks of fixed size; with workers > 1 the chunks
    run in a process pool. Chunking does not depend on workers, so results
    are identical for any worker count.
    """
    deltas = np.array([_projector_difference(p) for p in pairs], dtype=complex)
    chunks = [deltas[i:i + PAIR_CHUNK] for i in range(0, len(deltas), PAIR_CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            n = len(chunks)
            results = list(pool.map(_measure_chunk_job, [model] * n, [s] * n, [grid] * n, chunks))
    else:
        multiplier = coherence_matrix(model.dephasing_functions(s, grid.times()))
        results = []
        for i, chunk in enumerate(chunks):
            results.append(_chunk_measures(multiplier, chunk))
            logger.debug("chunk %d/%d done", i + 1, len(chunks))
    return np.concatenate(results) if results else np.zeros(0)


def maximize_measure(model, s, grid, n_samples, seed, candidates=None, workers=DEFAULT_WORKERS):
    """
    Maximize the measure over the Bell candidate pairs, any extra candidate
    pairs, and n_samples Haar-random pairs drawn with the given seed.
    """
    labelled = bell_candidate_pairs()
    for i, pair in enumerate(candidates or []):
        labelled.append((f"candidate_{i}", tuple(pair)))
    samples = sample_random_pairs(n_samples, seed) if n_samples > 0 else []
    logger.info("evaluating %d candidate and %d sampled pairs on %d times",
                len(labelled), len(samples), grid.n_points)

    pairs = [pair for _, pair in labelled] + samples
    values = pair_measures(model, s, grid, pairs, workers=workers)
    n_cand = len(labelled)
    ids = [pid for pid, _ in labelled] + [f"sample_{i:04d}" for i in range(len(samples))]
    best = int(np.argmax(values))
    return MeasureResult(
        n_value=max(float(values[best]), 0.0),
        best_pair=pairs[best],
        best_pair_id=ids[best],
        per_pair_values=values[n_cand:],
        candidate_values={pid: float(v) for (pid, _), v in zip(labelled, values[:n_cand])},
    )

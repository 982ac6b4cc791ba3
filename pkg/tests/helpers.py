import numpy as np

from qlinalg import DensityMatrix


def random_hermitian(rng, n):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (x + x.conj().T)


def random_density_array(rng, n, rank=None):
    """Random mixed state; rank 1 gives a pure state."""
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_density(rng, n, rank=None):
    return DensityMatrix.from_array(random_density_array(rng, n, rank))


def givens_unitary(rng, n, n_rotations=12):
    """Unitary composed of random complex Jacobi rotations and phases."""
    u = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, n)))
    for _ in range(n_rotations):
        p, q = sorted(rng.choice(n, size=2, replace=False))
        theta = rng.uniform(0, 2 * np.pi)
        phi = rng.uniform(0, 2 * np.pi)
        g = np.eye(n, dtype=complex)
        g[p, p] = np.cos(theta)
        g[q, q] = np.cos(theta)
        g[p, q] = -np.exp(-1j * phi) * np.sin(theta)
        g[q, p] = np.exp(1j * phi) * np.sin(theta)
        u = g @ u
    return u

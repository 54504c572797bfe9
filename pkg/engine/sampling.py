"""Deterministic point sets: low-discrepancy disk/sphere samples and polar grids."""

import numpy as np
from scipy.stats import norm, qmc


def halton_unit(n: int, dim: int, seed: int = 0) -> np.ndarray:
    """Scrambled Halton points in [0,1)^dim, reproducible from ``seed``."""
    if n <= 0:
        return np.empty((0, dim))
    sampler = qmc.Halton(d=dim, scramble=True, seed=seed)
    return sampler.random(n)


def halton_disk(n: int, radius: float = 1.0, center: complex = 0j, seed: int = 0) -> np.ndarray:
    """``n`` area-uniform low-discrepancy points in the open disk D(center, radius)."""
    u = halton_unit(n, 2, seed)
    rho = radius * np.sqrt(u[:, 0]) * (1.0 - 1e-12)
    return center + rho * np.exp(2j * np.pi * u[:, 1])


def halton_sphere(n: int, n_complex: int, seed: int = 0) -> np.ndarray:
    """``n`` points on the unit sphere of C^n_complex, shape (n_complex, n).

    Gaussian coordinates through the inverse normal CDF, then normalised; the image
    measure is the rotation-invariant one, i.e. the normalised Fubini-Study volume
    after projection to projective space.
    """
    u = halton_unit(n, 2 * n_complex, seed)
    g = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    x = g[:, :n_complex] + 1j * g[:, n_complex:]
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x.T


def polar_grid(r: float, n: int) -> np.ndarray:
    """n x n polar grid of the open disk of radius r (radii r*k/n, k < n)."""
    radii = r * np.arange(n) / n
    angles = 2 * np.pi * np.arange(n) / n
    grid = radii[:, None] * np.exp(1j * angles[None, :])
    return grid.ravel()


def cartesian_grid(r: float, pitch: float) -> np.ndarray:
    """Square grid of the given pitch restricted to the closed disk |z| <= r."""
    k = int(np.floor(r / pitch))
    axis = pitch * np.arange(-k, k + 1)
    z = (axis[None, :] + 1j * axis[:, None]).ravel()
    return z[np.abs(z) <= r]

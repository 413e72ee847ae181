"""Probe point sets on circles and spheres."""
from __future__ import annotations

import math

import numpy as np

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def circle_angles(count: int, offset: float = 0.0) -> np.ndarray:
    """``count`` equispaced angles ``2*pi*(j + offset)/count``."""
    return 2.0 * math.pi * (np.arange(count) + offset) / count


def circle_points(count: int, offset: float = 0.0) -> np.ndarray:
    t = circle_angles(count, offset)
    return np.column_stack([np.cos(t), np.sin(t)])


def fibonacci_sphere(count: int) -> np.ndarray:
    """Fibonacci lattice of ``count`` unit vectors in R^3."""
    i = np.arange(count, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / count
    rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = i * GOLDEN_ANGLE
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def random_directions(count: int, dim: int, seed: int) -> np.ndarray:
    """Seeded uniform random unit vectors (normalized Gaussians).

    The first ``k`` rows do not depend on ``count``, so a larger draw with the
    same seed always contains a smaller one.
    """
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, dim))
    return g / np.linalg.norm(g, axis=1)[:, None]


def sphere_probes(count: int, dim: int, seed: int = 0) -> np.ndarray:
    """Unit probe directions: equispaced angles in 2D, Fibonacci lattice in 3D,
    seeded Monte Carlo above."""
    if dim == 2:
        return circle_points(count)
    if dim == 3:
        return fibonacci_sphere(count)
    return random_directions(count, dim, seed)

"""Deterministic pairwise (tree) summation.

The tree shape depends only on the length of the summed axis, so rows of a
batch are reduced identically no matter how the batch was split.
"""
from __future__ import annotations

import numpy as np


def pairwise_sum(values, axis: int = -1) -> np.ndarray:
    """Sum ``values`` along ``axis`` with a fixed binary tree.

    Error grows like O(log n) ulps rather than O(n) for a running sum.
    """
    a = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    n = a.shape[-1]
    if n == 0:
        return np.zeros(a.shape[:-1])
    while n > 1:
        half = n // 2
        s = a[..., :half] + a[..., half:2 * half]
        if n % 2:
            s = np.concatenate([s, a[..., 2 * half:]], axis=-1)
        a = s
        n = a.shape[-1]
    return a[..., 0]


def pairwise_norm(vectors, axis: int = -1) -> np.ndarray:
    """Euclidean norm along ``axis`` using :func:`pairwise_sum`."""
    v = np.asarray(vectors, dtype=float)
    return np.sqrt(pairwise_sum(v * v, axis=axis))

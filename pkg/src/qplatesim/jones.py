"""2x2 polarization algebra shared by the homogeneous and patterned propagators."""

from __future__ import annotations

import numpy as np


def local_flip_matrix(alpha):
    """``R(alpha) sigma_z R(-alpha) = [[cos 2a, sin 2a], [sin 2a, -cos 2a]]``.

    Broadcasts over ``alpha``; the matrix occupies the last two axes.
    """
    alpha = np.asarray(alpha, dtype=float)
    c, s = np.cos(2 * alpha), np.sin(2 * alpha)
    return np.stack([np.stack([c, s], -1), np.stack([s, -c], -1)], -2)


def rotation_matrix(theta):
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def apply(mat, vx, vy):
    """Per-sample action of a (..., 2, 2) matrix field on ``(vx, vy)``."""
    return (
        mat[..., 0, 0] * vx + mat[..., 0, 1] * vy,
        mat[..., 1, 0] * vx + mat[..., 1, 1] * vy,
    )

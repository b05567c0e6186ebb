"""Continuous 6D rotation representation and conversions.

A 6D rotation is the first two columns of a rotation matrix, flattened
column by column: ``r = (c0x, c0y, c0z, c1x, c1y, c1z)``.  Conversion back
to a matrix Gram-Schmidt-orthonormalizes the two columns and completes the
third by cross product, so every non-degenerate 6-vector maps to a proper
rotation (orthonormal, det +1).
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateRotation, NotARotation

IDENTITY_6D = np.array([1.0, 0.0, 0.0, 0.0, 1.0, 0.0])

_DEGENERATE_TOL = 1e-12
_ORTHO_TOL = 1e-6


def rot6d_to_matrix(r) -> np.ndarray:
    """Convert a 6D rotation to a 3x3 rotation matrix.

    Raises DegenerateRotation when the first column is (near) zero or the
    two columns are colinear.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (6,):
        raise DegenerateRotation(f"expected 6 values, got shape {r.shape}")
    if not np.all(np.isfinite(r)):
        raise DegenerateRotation("non-finite 6D rotation input")
    a, b = r[:3], r[3:]
    na = np.linalg.norm(a)
    if na < _DEGENERATE_TOL:
        raise DegenerateRotation("first column is zero")
    c0 = a / na
    b_orth = b - np.dot(c0, b) * c0
    nb = np.linalg.norm(b_orth)
    if nb < _DEGENERATE_TOL:
        raise DegenerateRotation("columns are colinear")
    c1 = b_orth / nb
    c2 = np.cross(c0, c1)
    return np.stack([c0, c1, c2], axis=1)


def matrix_to_rot6d(m) -> np.ndarray:
    """Extract the 6D representation (first two columns) of a rotation matrix.

    Raises NotARotation if ``m`` is not orthonormal with det +1 within 1e-6.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise NotARotation(f"expected 3x3 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotARotation("non-finite matrix")
    err = np.abs(m.T @ m - np.eye(3)).max()
    if err > _ORTHO_TOL or abs(np.linalg.det(m) - 1.0) > _ORTHO_TOL:
        raise NotARotation(f"orthonormality error {err:.2e}")
    return m[:, :2].T.reshape(6).copy()


def project_rot6d(r) -> np.ndarray:
    """Project an arbitrary 6-vector onto the valid 6D rotation manifold."""
    return matrix_to_rot6d(rot6d_to_matrix(r))


def rotation_angle(m) -> float:
    """Geodesic angle (radians, in [0, pi]) of a rotation matrix."""
    m = np.asarray(m, dtype=float)
    cos = (np.trace(m) - 1.0) / 2.0
    sin = 0.5 * np.linalg.norm([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])
    return float(np.arctan2(sin, np.clip(cos, -1.0, 1.0)))


def axis_angle_matrix(axis, angle: float) -> np.ndarray:
    """Rotation matrix about a (not necessarily unit) axis by ``angle`` radians."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    x, y, z = axis
    k = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)

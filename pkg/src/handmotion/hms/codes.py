"""Categorical pose codes: distances, per-axis distances, palm orientations.

Buckets are right-open: a value exactly on a threshold falls into the upper
bucket.  Axis codes use the canonical frame (+x signer's left, +y up,
+z away from the body): negative x reads "right", positive y "above",
positive z "in front".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DISTANCE_LABELS = ["touching", "close", "medium", "spread", "wide"]

AXIS_DIRECTIONS = {
    "x": ("right", "left"),        # (negative delta, positive delta)
    "y": ("below", "above"),
    "z": ("behind", "in front"),
}

ORIENTATION_BY_AXIS = {
    "x": ("sideways", "sideways"),  # (negative coordinate, positive coordinate)
    "y": ("down", "up"),
    "z": ("in", "out"),
}

DEFAULT_THRESHOLDS = (0.02, 0.08, 0.20, 0.40)
ORIENTATION_THRESHOLD = 0.7

# Palm normal in the wrist's local frame; identity orientation = palm down.
PALM_NORMAL = {"left": (0.0, -1.0, 0.0), "right": (0.0, -1.0, 0.0)}


@dataclass(frozen=True)
class CodeThresholds:
    values: tuple = DEFAULT_THRESHOLDS

    def __post_init__(self):
        t = self.values
        if len(t) != 4 or not all(a < b for a, b in zip(t, t[1:])):
            raise ValueError("need 4 strictly increasing thresholds")


def magnitude_bucket(value: float, thresholds=DEFAULT_THRESHOLDS) -> int:
    """Index into DISTANCE_LABELS for a non-negative magnitude."""
    for i, t in enumerate(thresholds):
        if value < t:
            return i
    return len(thresholds)


def distance_code(p, q, thresholds=DEFAULT_THRESHOLDS) -> str:
    """Bucket the Euclidean distance between two points."""
    d = float(np.linalg.norm(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)))
    return DISTANCE_LABELS[magnitude_bucket(d, thresholds)]


def axis_code(delta: float, axis: str, thresholds=DEFAULT_THRESHOLDS) -> str:
    """Bucket a signed per-axis offset into a 9-level directional code.

    The center bucket is "touching"; other buckets carry the magnitude label
    plus the direction selected by the sign of ``delta``.
    """
    bucket = magnitude_bucket(abs(float(delta)), thresholds)
    if bucket == 0:
        return "touching"
    negative, positive = AXIS_DIRECTIONS[axis]
    direction = negative if delta < 0 else positive
    return f"{DISTANCE_LABELS[bucket]}/{direction}"


def palm_orientation(wrist_rotation, side: str,
                     threshold: float = ORIENTATION_THRESHOLD) -> str | None:
    """Palm orientation label, or None when no axis dominates.

    The palm normal is the wrist global rotation applied to the canonical
    local normal of that hand side; the label comes from the coordinate
    whose absolute value exceeds ``threshold``.
    """
    rot = np.asarray(wrist_rotation, dtype=float)
    normal = rot @ np.asarray(PALM_NORMAL[side], dtype=float)
    axis_i = int(np.argmax(np.abs(normal)))
    if abs(normal[axis_i]) <= threshold:
        return None
    axis = "xyz"[axis_i]
    negative, positive = ORIENTATION_BY_AXIS[axis]
    return negative if normal[axis_i] < 0 else positive

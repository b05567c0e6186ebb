"""Canonical 274-feature frame layout and feature subsets.

Per-frame layout (normative for the whole toolkit):

====================  ======  ==============================================
feature indices       blocks  content
====================  ======  ==============================================
0 .. 77               0-12    13 upper-body joint rotations, 6D each
78 .. 167             13-27   15 left-hand joint rotations, 6D each
168 .. 257            28-42   15 right-hand joint rotations, 6D each
258 .. 273            -       16 face coefficients (opaque passthrough)
====================  ======  ==============================================

Rotation block ``j`` (0 <= j < 43) occupies features ``[6j, 6j+6)`` and
drives the skeleton joint with the same index.
"""

from __future__ import annotations

import numpy as np

from .errors import LayoutMismatch
from .rotation import rot6d_to_matrix, project_rot6d

FRAME_SIZE = 274
NUM_BODY_JOINTS = 13
NUM_HAND_JOINTS = 15
NUM_ROTATION_BLOCKS = NUM_BODY_JOINTS + 2 * NUM_HAND_JOINTS  # 43
NUM_FACE_COEFFS = 16

BODY_BLOCKS = list(range(0, 13))
LEFT_HAND_BLOCKS = list(range(13, 28))
RIGHT_HAND_BLOCKS = list(range(28, 43))

# Body joint order inside the 13 upper-body blocks.
BODY_JOINT_NAMES = [
    "spine1", "spine2", "spine3", "neck", "head",
    "left_collar", "left_shoulder", "left_elbow", "left_wrist",
    "right_collar", "right_shoulder", "right_elbow", "right_wrist",
]

LEFT_WRIST_BLOCK = BODY_JOINT_NAMES.index("left_wrist")
RIGHT_WRIST_BLOCK = BODY_JOINT_NAMES.index("right_wrist")

# The six arm blocks refined by the stitcher.
ARM_BLOCKS = [
    BODY_JOINT_NAMES.index("left_shoulder"),
    BODY_JOINT_NAMES.index("left_elbow"),
    BODY_JOINT_NAMES.index("left_wrist"),
    BODY_JOINT_NAMES.index("right_shoulder"),
    BODY_JOINT_NAMES.index("right_elbow"),
    BODY_JOINT_NAMES.index("right_wrist"),
]

FACE_SLICE = slice(6 * NUM_ROTATION_BLOCKS, FRAME_SIZE)

SUBSET_KINDS = ("full_274", "arms_hands_216", "hands_180")


def block_slice(block: int) -> slice:
    """Feature slice of rotation block ``block``."""
    if not 0 <= block < NUM_ROTATION_BLOCKS:
        raise LayoutMismatch(f"rotation block {block} out of range")
    return slice(6 * block, 6 * block + 6)


def _block_features(blocks) -> list[int]:
    out: list[int] = []
    for b in blocks:
        out.extend(range(6 * b, 6 * b + 6))
    return out


def subset_indices(kind: str) -> list[int]:
    """Sorted feature indices kept by a subset kind."""
    if kind == "full_274":
        return list(range(FRAME_SIZE))
    if kind == "arms_hands_216":
        blocks = ARM_BLOCKS + LEFT_HAND_BLOCKS + RIGHT_HAND_BLOCKS
        return sorted(_block_features(blocks))
    if kind == "hands_180":
        return sorted(_block_features(LEFT_HAND_BLOCKS + RIGHT_HAND_BLOCKS))
    raise LayoutMismatch(f"unknown subset kind {kind!r}")


def subset_width(kind: str) -> int:
    return len(subset_indices(kind))


def select_subset(features: np.ndarray, kind: str) -> np.ndarray:
    """Reduce a (T, 274) feature array to the given subset's columns.

    ``full_274`` returns the input unchanged (same values, same dtype).
    """
    features = np.asarray(features)
    if features.ndim != 2 or features.shape[1] != FRAME_SIZE:
        raise LayoutMismatch(f"expected (T, {FRAME_SIZE}) features, got {features.shape}")
    if kind == "full_274":
        return features
    return features[:, subset_indices(kind)]


def validate_frame(values: np.ndarray) -> None:
    """Check one frame against the layout: 274 entries, valid rotation blocks."""
    values = np.asarray(values)
    if values.shape != (FRAME_SIZE,):
        raise LayoutMismatch(f"expected {FRAME_SIZE} features, got shape {values.shape}")
    for b in range(NUM_ROTATION_BLOCKS):
        rot6d_to_matrix(values[block_slice(b)])


def project_rotations(features: np.ndarray) -> np.ndarray:
    """Gram-Schmidt-project every rotation block of a (T, 274) array.

    Face coefficients pass through untouched.  Used to clean up raw model
    samples before any kinematic use.
    """
    features = np.asarray(features, dtype=float)
    out = features.copy()
    for t in range(out.shape[0]):
        for b in range(NUM_ROTATION_BLOCKS):
            sl = block_slice(b)
            out[t, sl] = project_rot6d(out[t, sl])
    return out


def rest_frame() -> np.ndarray:
    """Frame with identity rotations everywhere and zero face coefficients."""
    frame = np.zeros(FRAME_SIZE)
    for b in range(NUM_ROTATION_BLOCKS):
        frame[6 * b] = 1.0
        frame[6 * b + 4] = 1.0
    return frame

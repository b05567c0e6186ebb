"""Upper-body kinematic skeleton and forward kinematics.

The skeleton has 43 rotated joints matching the 43 rotation blocks of the
frame layout: 13 upper-body joints rooted at ``spine1``, then 15 left-hand
and 15 right-hand joints hanging off the wrists.  Named markers (head,
torso, chest, chin, shoulders, hands) are (joint, local offset) anchors
used by the pose-description rules.

Canonical frame: +x points toward the signer's left, +y up, +z away from
the body (the direction the signer faces).  The rest pose is a T-pose with
arms and fingers extended along +-x; offsets are meters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import IndexOutOfRange, LayoutMismatch, UnknownAnchor
from .features import (
    BODY_JOINT_NAMES,
    FRAME_SIZE,
    NUM_ROTATION_BLOCKS,
    block_slice,
)
from .rotation import rot6d_to_matrix


@dataclass
class Skeleton:
    """Topologically sorted joint tree with named marker anchors."""

    names: list[str]
    parents: list[int]                       # parent index per joint, root = -1
    offsets: np.ndarray                      # (J, 3) rest offsets, meters
    markers: dict = field(default_factory=dict)  # name -> (joint index, 3-offset)

    def __post_init__(self):
        self.offsets = np.asarray(self.offsets, dtype=float)
        j = len(self.names)
        if len(self.parents) != j or self.offsets.shape != (j, 3):
            raise LayoutMismatch("names/parents/offsets lengths disagree")
        for i, p in enumerate(self.parents):
            if i == 0 and p != -1:
                raise LayoutMismatch("joint 0 must be the root (parent -1)")
            if i > 0 and not 0 <= p < i:
                raise LayoutMismatch(f"joint {i} parent {p} not topologically sorted")

    @property
    def num_joints(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownAnchor(f"no joint named {name!r}") from None

    def require_canonical(self) -> None:
        if self.num_joints != NUM_ROTATION_BLOCKS:
            raise LayoutMismatch(
                f"skeleton has {self.num_joints} joints, layout expects {NUM_ROTATION_BLOCKS}")


def _local_rotations(frame: np.ndarray) -> np.ndarray:
    frame = np.asarray(frame, dtype=float)
    if frame.shape != (FRAME_SIZE,):
        raise LayoutMismatch(f"expected {FRAME_SIZE} features, got {frame.shape}")
    rots = np.empty((NUM_ROTATION_BLOCKS, 3, 3))
    for b in range(NUM_ROTATION_BLOCKS):
        rots[b] = rot6d_to_matrix(frame[block_slice(b)])
    return rots


def forward_kinematics(
    skeleton: Skeleton,
    frame: np.ndarray,
    root_rotation: np.ndarray | None = None,
    root_translation: np.ndarray | None = None,
) -> np.ndarray:
    """Joint world positions (J, 3) for one frame.

    position(j) = position(parent) + globalrot(parent) @ offset(j), with the
    root placed at ``root_translation`` under ``root_rotation``.
    """
    skeleton.require_canonical()
    local = _local_rotations(frame)
    pos, _ = _fk_arrays(skeleton, local, root_rotation, root_translation)
    return pos


def global_orientations(
    skeleton: Skeleton,
    frame: np.ndarray,
    root_rotation: np.ndarray | None = None,
) -> np.ndarray:
    """Global rotation (J, 3, 3) at every joint: local rotations composed root to joint."""
    skeleton.require_canonical()
    local = _local_rotations(frame)
    _, glob = _fk_arrays(skeleton, local, root_rotation, None)
    return glob


def global_orientation(skeleton: Skeleton, frame: np.ndarray, joint: int) -> np.ndarray:
    """Global rotation of one joint."""
    if not 0 <= joint < skeleton.num_joints:
        raise IndexOutOfRange(f"joint {joint} out of range")
    return global_orientations(skeleton, frame)[joint]


def _fk_arrays(skeleton, local, root_rotation, root_translation):
    j = skeleton.num_joints
    pos = np.zeros((j, 3))
    glob = np.empty((j, 3, 3))
    base = np.eye(3) if root_rotation is None else np.asarray(root_rotation, dtype=float)
    pos[0] = 0.0 if root_translation is None else np.asarray(root_translation, dtype=float)
    glob[0] = base @ local[0]
    for i in range(1, j):
        p = skeleton.parents[i]
        pos[i] = pos[p] + glob[p] @ skeleton.offsets[i]
        glob[i] = glob[p] @ local[i]
    return pos, glob


def marker_position(
    skeleton: Skeleton,
    name: str,
    positions: np.ndarray,
    orientations: np.ndarray,
) -> np.ndarray:
    """World position of a named marker given FK results for the frame."""
    if name not in skeleton.markers:
        raise UnknownAnchor(f"no marker named {name!r}")
    joint, offset = skeleton.markers[name]
    return positions[joint] + orientations[joint] @ np.asarray(offset, dtype=float)


# Hand joint layout: five finger chains of three joints each, rooted at the
# wrist, in the order index, middle, pinky, ring, thumb.
FINGER_ORDER = ["index", "middle", "pinky", "ring", "thumb"]

_FINGER_BASE = {
    "index": (0.095, 0.005, 0.030),
    "middle": (0.100, 0.006, 0.005),
    "pinky": (0.085, 0.002, -0.045),
    "ring": (0.095, 0.004, -0.020),
    "thumb": (0.025, -0.010, 0.040),
}
_FINGER_SEGMENTS = {
    "index": [(0.038, 0.0, 0.0), (0.025, 0.0, 0.0)],
    "middle": [(0.042, 0.0, 0.0), (0.028, 0.0, 0.0)],
    "pinky": [(0.030, 0.0, 0.0), (0.020, 0.0, 0.0)],
    "ring": [(0.038, 0.0, 0.0), (0.026, 0.0, 0.0)],
    "thumb": [(0.035, 0.0, 0.010), (0.030, 0.0, 0.005)],
}


def hand_joint_names(side: str) -> list[str]:
    names = []
    for finger in FINGER_ORDER:
        for seg in (1, 2, 3):
            names.append(f"{side}_{finger}{seg}")
    return names


def default_skeleton() -> Skeleton:
    """Bundled synthetic skeleton with anthropometric rest offsets (meters)."""
    names = list(BODY_JOINT_NAMES)
    parents = [-1]
    offsets = [(0.0, 0.0, 0.0)]

    def parent_of(name):
        return names.index(name)

    body_offsets = {
        "spine2": ("spine1", (0.0, 0.12, 0.0)),
        "spine3": ("spine2", (0.0, 0.13, 0.0)),
        "neck": ("spine3", (0.0, 0.15, 0.0)),
        "head": ("neck", (0.0, 0.11, 0.0)),
        "left_collar": ("spine3", (0.035, 0.09, 0.0)),
        "left_shoulder": ("left_collar", (0.135, 0.015, 0.0)),
        "left_elbow": ("left_shoulder", (0.27, 0.0, 0.0)),
        "left_wrist": ("left_elbow", (0.25, 0.0, 0.0)),
        "right_collar": ("spine3", (-0.035, 0.09, 0.0)),
        "right_shoulder": ("right_collar", (-0.135, 0.015, 0.0)),
        "right_elbow": ("right_shoulder", (-0.27, 0.0, 0.0)),
        "right_wrist": ("right_elbow", (-0.25, 0.0, 0.0)),
    }
    for name in BODY_JOINT_NAMES[1:]:
        parent, off = body_offsets[name]
        parents.append(parent_of(parent))
        offsets.append(off)

    for side, sign in (("left", 1.0), ("right", -1.0)):
        wrist = parent_of(f"{side}_wrist")
        for finger in FINGER_ORDER:
            bx, by, bz = _FINGER_BASE[finger]
            chain = [(sign * bx, by, bz)] + [
                (sign * sx, sy, sz) for sx, sy, sz in _FINGER_SEGMENTS[finger]
            ]
            prev = wrist
            for seg, off in enumerate(chain, start=1):
                names.append(f"{side}_{finger}{seg}")
                parents.append(prev)
                offsets.append(off)
                prev = len(names) - 1

    markers = {
        "head": (names.index("head"), (0.0, 0.08, 0.0)),
        "chin": (names.index("head"), (0.0, -0.02, 0.09)),
        "torso": (names.index("spine2"), (0.0, 0.0, 0.0)),
        "chest": (names.index("spine3"), (0.0, 0.02, 0.08)),
        "left_shoulder": (names.index("left_shoulder"), (0.0, 0.0, 0.0)),
        "right_shoulder": (names.index("right_shoulder"), (0.0, 0.0, 0.0)),
        "left_hand": (names.index("left_middle1"), (0.0, 0.0, 0.0)),
        "right_hand": (names.index("right_middle1"), (0.0, 0.0, 0.0)),
    }
    return Skeleton(names=names, parents=parents, offsets=np.array(offsets), markers=markers)


def load_skeleton(path) -> Skeleton:
    """Load a skeleton from a JSON file.

    Schema: ``{"joints": [{"name", "parent", "offset": [x,y,z]}, ...],
    "markers": {"name": {"joint": <joint name>, "offset": [x,y,z]}}}``.
    """
    obj = json.loads(Path(path).read_text())
    names = [j["name"] for j in obj["joints"]]
    parents = [int(j["parent"]) for j in obj["joints"]]
    offsets = np.array([j["offset"] for j in obj["joints"]], dtype=float)
    markers = {}
    for name, spec in obj.get("markers", {}).items():
        markers[name] = (names.index(spec["joint"]), tuple(spec.get("offset", (0, 0, 0))))
    return Skeleton(names=names, parents=parents, offsets=offsets, markers=markers)


def save_skeleton(path, skeleton: Skeleton) -> None:
    obj = {
        "joints": [
            {"name": n, "parent": p, "offset": list(map(float, o))}
            for n, p, o in zip(skeleton.names, skeleton.parents, skeleton.offsets)
        ],
        "markers": {
            name: {"joint": skeleton.names[j], "offset": list(map(float, off))}
            for name, (j, off) in skeleton.markers.items()
        },
    }
    Path(path).write_text(json.dumps(obj, indent=2))

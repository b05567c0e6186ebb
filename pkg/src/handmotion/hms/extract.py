"""Frame-level posecode extraction over a motion sequence.

Channels are keyed ``kind:hand[:anchor]`` with hands and anchors expressed
in dominant/non-dominant space (resolved against the signer's handedness):

- ``distance:dominant:torso``      Euclidean hand-to-anchor distance codes
- ``distance_x:dominant:torso``    per-axis signed distance codes (x, y, z)
- ``distance:dominant:nondominant``  hand-to-hand channels (one direction)
- ``orientation:dominant``         palm orientation codes (None = no label)

The ``neutral_space`` location resolves to the other hand; for one-handed
signs there is no other used hand, so the location contributes no channel
and the output never mentions the non-dominant hand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import UnknownAnchor
from ..motion import MotionSequence
from ..skeleton import Skeleton, _fk_arrays, _local_rotations, marker_position
from .codes import DEFAULT_THRESHOLDS, ORIENTATION_THRESHOLD, axis_code, distance_code, palm_orientation

HAND_KEYS = ("dominant", "nondominant")

# SignBank-style location tokens -> anchor names in dominant space.
LOCATION_ANCHORS = {
    "neutral_space": ["neutral_space"],
    "in_front": ["neutral_space"],
    "chest": ["torso"],
    "chest_level": ["torso"],
    "torso": ["torso"],
    "upper_face": ["head"],
    "face": ["head"],
    "head": ["head"],
    "chin": ["chin"],
    "mouth": ["chin"],
    "shoulder": ["nondominant_shoulder", "dominant_shoulder"],
    "shoulders": ["nondominant_shoulder", "dominant_shoulder"],
}


def anchors_for_locations(location_tokens) -> list[str]:
    """Deduplicated anchor list for a sequence of location tokens.

    Unknown tokens contribute nothing (dictionary vocabularies are open).
    """
    out: list[str] = []
    for token in location_tokens:
        for anchor in LOCATION_ANCHORS.get(token, []):
            if anchor not in out:
                out.append(anchor)
    return out


@dataclass
class PosecodeTable:
    """Raw per-frame code lists per channel, plus post-processed sequences."""

    motion_id: str = ""
    channels: dict = field(default_factory=dict)   # key -> list of per-frame codes
    processed: dict = field(default_factory=dict)  # key -> collapsed sequence

    def num_frames(self) -> int:
        return max((len(v) for v in self.channels.values()), default=0)


def _used_hands(mode: str) -> list[str]:
    if mode == "both":
        return ["dominant", "nondominant"]
    if mode in HAND_KEYS:
        return [mode]
    raise ValueError(f"unknown used_hands {mode!r}")


def extract_framecodes(
    motion: MotionSequence,
    skeleton: Skeleton,
    locations,
    used_hands: str = "both",
    thresholds=DEFAULT_THRESHOLDS,
    orientation_threshold: float = ORIENTATION_THRESHOLD,
) -> PosecodeTable:
    """Compute all per-frame posecode channels for a motion.

    ``locations`` is a list of anchor names in dominant space (see
    LOCATION_ANCHORS for the token mapping); ``used_hands`` is one of
    "dominant", "nondominant", "both".
    """
    motion.require_full()
    hands = _used_hands(used_hands)
    dom_side = motion.signer_handedness
    side_of = {"dominant": dom_side,
               "nondominant": "left" if dom_side == "right" else "right"}

    wrist_idx = {s: skeleton.index(f"{s}_wrist") for s in ("left", "right")}

    def marker_for(anchor: str) -> str:
        if anchor in HAND_KEYS:
            return f"{side_of[anchor]}_hand"
        if anchor in ("dominant_shoulder", "nondominant_shoulder"):
            hand = anchor.split("_")[0]
            return f"{side_of[hand]}_shoulder"
        return anchor

    # Resolve channels up front so unknown anchors fail fast.
    pair_channels = []  # (hand, anchor) in dominant space
    for hand in hands:
        for loc in locations:
            anchor = loc
            if loc == "neutral_space":
                other = "nondominant" if hand == "dominant" else "dominant"
                if other not in hands:
                    continue  # one-handed sign: no other hand to measure against
                if hand == "nondominant":
                    continue  # hand-to-hand kept in the dominant->nondominant direction
                anchor = other
            name = marker_for(anchor)
            if name not in skeleton.markers:
                raise UnknownAnchor(f"no marker named {name!r} for anchor {anchor!r}")
            if (hand, anchor) not in pair_channels:
                pair_channels.append((hand, anchor))

    table = PosecodeTable(motion_id=motion.id)
    for hand, anchor in pair_channels:
        base = f"{hand}:{anchor}"
        table.channels[f"distance:{base}"] = []
        for axis in "xyz":
            table.channels[f"distance_{axis}:{base}"] = []
    for hand in hands:
        table.channels[f"orientation:{hand}"] = []

    for t in range(motion.num_frames):
        local = _local_rotations(motion.features[t])
        pos, glob = _fk_arrays(skeleton, local, None, None)

        def point(anchor: str) -> np.ndarray:
            return marker_position(skeleton, marker_for(anchor), pos, glob)

        for hand, anchor in pair_channels:
            base = f"{hand}:{anchor}"
            p, q = point(hand), point(anchor)
            table.channels[f"distance:{base}"].append(distance_code(p, q, thresholds))
            delta = p - q
            for i, axis in enumerate("xyz"):
                table.channels[f"distance_{axis}:{base}"].append(
                    axis_code(delta[i], axis, thresholds))
        for hand in hands:
            rot = glob[wrist_idx[side_of[hand]]]
            table.channels[f"orientation:{hand}"].append(
                palm_orientation(rot, side_of[hand], orientation_threshold))
    return table

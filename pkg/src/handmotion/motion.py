"""Motion sequence container and its binary file format.

File format (little-endian throughout)::

    magic      4 bytes  b"HMF1"
    version    u32      1
    frame_count u32     > 0
    fps        f32      > 0
    handedness u8       0 = right, 1 = left
    feature_count u32   274 for full sequences
    payload    frame_count * feature_count * f32

Values are float32 on disk and float64 in memory; a sequence whose values
originated as float32 round-trips bit-exactly.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BadMagic, LayoutMismatch, TruncatedPayload, VersionUnsupported
from .features import FRAME_SIZE

MAGIC = b"HMF1"
VERSION = 1
_HEADER = struct.Struct("<4sIIfBI")

HANDEDNESS = ("right", "left")


@dataclass
class MotionSequence:
    """T frames of per-frame features plus capture metadata."""

    features: np.ndarray  # (T, width) float64
    fps: float
    signer_handedness: str = "right"
    id: str = ""

    def __post_init__(self):
        self.features = np.atleast_2d(np.asarray(self.features, dtype=float))
        if self.features.shape[0] == 0:
            raise LayoutMismatch("motion must have at least one frame")
        if not self.fps > 0:
            raise LayoutMismatch(f"fps must be positive, got {self.fps}")
        if self.signer_handedness not in HANDEDNESS:
            raise LayoutMismatch(f"unknown handedness {self.signer_handedness!r}")

    @property
    def num_frames(self) -> int:
        return self.features.shape[0]

    @property
    def width(self) -> int:
        return self.features.shape[1]

    def require_full(self) -> None:
        if self.width != FRAME_SIZE:
            raise LayoutMismatch(f"expected width {FRAME_SIZE}, got {self.width}")


def write_motion(path, motion: MotionSequence) -> None:
    """Write a motion sequence to ``path`` in the HMF1 container format."""
    path = Path(path)
    payload = np.ascontiguousarray(motion.features, dtype="<f4")
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        motion.num_frames,
        motion.fps,
        HANDEDNESS.index(motion.signer_handedness),
        motion.width,
    )
    path.write_bytes(header + payload.tobytes())


def read_motion(path, id: str | None = None) -> MotionSequence:
    """Read a motion sequence; ``id`` defaults to the file stem."""
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise TruncatedPayload(f"{path}: file shorter than header")
    magic, version, frame_count, fps, handedness, feature_count = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise BadMagic(f"{path}: expected {MAGIC!r}, found {magic!r}")
    if version != VERSION:
        raise VersionUnsupported(f"{path}: version {version}")
    if frame_count == 0:
        raise TruncatedPayload(f"{path}: frame count is zero")
    expected = frame_count * feature_count * 4
    payload = raw[_HEADER.size:]
    if len(payload) < expected:
        raise TruncatedPayload(f"{path}: payload {len(payload)} bytes, expected {expected}")
    values = np.frombuffer(payload[:expected], dtype="<f4").reshape(frame_count, feature_count)
    if handedness >= len(HANDEDNESS):
        raise TruncatedPayload(f"{path}: bad handedness byte {handedness}")
    return MotionSequence(
        features=values.astype(float),
        fps=float(fps),
        signer_handedness=HANDEDNESS[handedness],
        id=id if id is not None else path.stem,
    )


@dataclass
class ManifestRecord:
    """One dataset entry: a motion file plus its associated text ids."""

    id: str
    path: str
    text_ids: list = field(default_factory=list)
    split: str = "train"


def write_manifest(path, records: list[ManifestRecord]) -> None:
    path = Path(path)
    with path.open("w") as fh:
        for rec in records:
            fh.write(json.dumps({
                "id": rec.id, "path": rec.path,
                "text_ids": rec.text_ids, "split": rec.split,
            }) + "\n")


def read_manifest(path) -> list[ManifestRecord]:
    records = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        records.append(ManifestRecord(
            id=obj["id"], path=obj["path"],
            text_ids=list(obj.get("text_ids", [])),
            split=obj.get("split", "train"),
        ))
    return records

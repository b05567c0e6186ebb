"""Binary checkpoint container: config JSON + raw tensors + SHA-256 manifest.

Layout (little-endian)::

    magic      4 bytes  b"HMCK"
    version    u32      1
    header_len u64      byte length of the UTF-8 header JSON
    header     JSON     {"config": {...}, "tensors": [
                           {"name", "shape", "dtype", "offset", "nbytes",
                            "sha256"}, ...]}
    data       concatenated tensor payloads at the stated offsets

Tensors round-trip bit-exactly; every payload is verified against its
SHA-256 on load.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from .errors import BadMagic, TruncatedPayload, VersionUnsupported

MAGIC = b"HMCK"
VERSION = 1
_PREAMBLE = struct.Struct("<4sIQ")

_DTYPES = {"f32": "<f4", "f64": "<f8", "i64": "<i8"}
_DTYPE_NAMES = {np.dtype("<f4"): "f32", np.dtype("<f8"): "f64", np.dtype("<i8"): "i64"}


def save_checkpoint(path, config: dict, tensors: dict) -> None:
    """Write config and named tensors; float tensors stored as given dtype."""
    entries = []
    blobs = []
    offset = 0
    for name, array in tensors.items():
        array = np.ascontiguousarray(array)
        if array.dtype not in _DTYPE_NAMES:
            array = np.ascontiguousarray(array, dtype="<f4")
        blob = array.tobytes()
        entries.append({
            "name": name,
            "shape": list(array.shape),
            "dtype": _DTYPE_NAMES[array.dtype],
            "offset": offset,
            "nbytes": len(blob),
            "sha256": hashlib.sha256(blob).hexdigest(),
        })
        blobs.append(blob)
        offset += len(blob)
    header = json.dumps({"config": config, "tensors": entries},
                        ensure_ascii=False).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_PREAMBLE.pack(MAGIC, VERSION, len(header)))
        fh.write(header)
        for blob in blobs:
            fh.write(blob)


def load_checkpoint(path):
    """Read (config, tensors) from a checkpoint file, verifying hashes."""
    raw = Path(path).read_bytes()
    if len(raw) < _PREAMBLE.size:
        raise TruncatedPayload(f"{path}: shorter than preamble")
    magic, version, header_len = _PREAMBLE.unpack_from(raw)
    if magic != MAGIC:
        raise BadMagic(f"{path}: expected {MAGIC!r}, found {magic!r}")
    if version != VERSION:
        raise VersionUnsupported(f"{path}: version {version}")
    header_end = _PREAMBLE.size + header_len
    if len(raw) < header_end:
        raise TruncatedPayload(f"{path}: truncated header")
    header = json.loads(raw[_PREAMBLE.size:header_end].decode("utf-8"))
    data = raw[header_end:]
    tensors = {}
    for entry in header["tensors"]:
        blob = data[entry["offset"]:entry["offset"] + entry["nbytes"]]
        if len(blob) != entry["nbytes"]:
            raise TruncatedPayload(f"{path}: tensor {entry['name']} truncated")
        if hashlib.sha256(blob).hexdigest() != entry["sha256"]:
            raise TruncatedPayload(f"{path}: tensor {entry['name']} hash mismatch")
        tensors[entry["name"]] = np.frombuffer(
            blob, dtype=_DTYPES[entry["dtype"]]).reshape(entry["shape"]).copy()
    return header["config"], tensors

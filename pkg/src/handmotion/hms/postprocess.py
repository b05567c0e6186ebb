"""Temporal compaction of raw posecode lists.

Rules, applied per channel to the raw per-frame lists:

1. delete every run of fewer than ``min_run`` consecutive identical codes;
2. collapse the surviving runs into single codes (no two equal neighbors);
3. drop absent orientation codes (None);
4. remove the channel when nothing survives;
5. per distance feature: when two or more of its x/y/z channels still hold
   more than one distinct code, drop all three axis channels.

The raw lists are carried through unchanged, so the operation is
idempotent: reprocessing a processed table reproduces it.
"""

from __future__ import annotations

from itertools import groupby

from .extract import PosecodeTable

MIN_RUN = 4


def _compact(raw, min_run: int):
    runs = [(code, len(list(group))) for code, group in groupby(raw)]
    kept = [code for code, length in runs if length >= min_run]
    collapsed = [code for code, _ in groupby(kept)]
    return [c for c in collapsed if c is not None]


def postprocess(table: PosecodeTable, min_run: int = MIN_RUN) -> PosecodeTable:
    """Return a new table with ``processed`` sequences computed from raws."""
    out = PosecodeTable(motion_id=table.motion_id, channels=dict(table.channels))
    for key, raw in table.channels.items():
        seq = _compact(raw, min_run)
        if seq:
            out.processed[key] = seq

    # Axis-drop rule, per (hand, anchor) distance feature.
    bases = {key.split(":", 1)[1] for key in table.channels if key.startswith("distance:")}
    for base in bases:
        axis_keys = [f"distance_{axis}:{base}" for axis in "xyz"]
        multi = sum(1 for k in axis_keys if len(set(out.processed.get(k, []))) > 1)
        if multi >= 2:
            for k in axis_keys:
                out.processed.pop(k, None)
    return out

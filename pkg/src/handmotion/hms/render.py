"""Render a post-processed posecode table as the prompt text block."""

from __future__ import annotations

from .extract import PosecodeTable

DEFAULT_TERMS = {"dominant": "dominant", "nondominant": "non-dominant"}

_SECTION_ORDER = [
    ("hand_distances", "dominant"),
    ("hand_distances", "nondominant"),
    ("between_hands", None),
    ("orientations", None),
]


def _anchor_phrase(anchor: str, terms) -> str:
    if anchor in ("dominant", "nondominant"):
        return f"{terms[anchor]} hand"
    if anchor.endswith("_shoulder"):
        hand = anchor[: -len("_shoulder")]
        return f"{terms[hand]} shoulder"
    return anchor


def _codes_text(codes, axis_channel: bool) -> str:
    shown = ["aligned" if axis_channel and c == "touching" else c for c in codes]
    return "[" + ", ".join(shown) + "]"


def render_hms_block(table: PosecodeTable, handedness_terms=None) -> str:
    """Deterministic text block over the table's processed channels.

    Empty tables render to the empty string (no headers).
    """
    terms = dict(DEFAULT_TERMS)
    if handedness_terms:
        terms.update(handedness_terms)

    # Preserve extraction order of channels within each section.
    def channel_entries():
        for key in table.channels:
            if key in table.processed:
                yield key, table.processed[key]

    sections: dict[tuple, list[str]] = {}
    for key, codes in channel_entries():
        kind, rest = key.split(":", 1)
        if kind == "orientation":
            hand = rest
            line = f"- Palm orientation - {terms[hand]} hand: {_codes_text(codes, False)}"
            sections.setdefault(("orientations", None), []).append(line)
            continue
        hand, anchor = rest.split(":", 1)
        axis_channel = kind.startswith("distance_")
        if axis_channel:
            axis = kind.split("_", 1)[1]
            prefix = f"- Distance along {axis} axis from {terms[hand]} hand to {_anchor_phrase(anchor, terms)}"
        else:
            prefix = f"- Distance from {terms[hand]} hand to {_anchor_phrase(anchor, terms)}"
        line = f"{prefix}: {_codes_text(codes, axis_channel)}"
        if anchor in ("dominant", "nondominant"):
            sections.setdefault(("between_hands", None), []).append(line)
        else:
            sections.setdefault(("hand_distances", hand), []).append(line)

    headers = {
        ("hand_distances", "dominant"): f"{terms['dominant'].upper()} HAND DISTANCES:",
        ("hand_distances", "nondominant"): f"{terms['nondominant'].upper()} HAND DISTANCES:",
        ("between_hands", None): "DISTANCE BETWEEN HANDS:",
        ("orientations", None): "HAND ORIENTATIONS:",
    }
    parts = []
    for section in _SECTION_ORDER:
        lines = sections.get(section)
        if lines:
            parts.append(headers[section])
            parts.extend(lines)
    return "\n".join(parts)

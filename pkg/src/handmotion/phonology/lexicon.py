"""Attribute lexicon and attribute-line generation.

The lexicon maps linguistic tokens to one or more English phrasings; when
several exist, one is picked per record with a seeded RNG as light text
augmentation.  The bundled lexicon covers the tokens used by the bundled
fixtures plus a documented extension; it is a stand-in for a full
dictionary mapping and is meant to be extended per dataset.
"""

from __future__ import annotations

import json
import random
from importlib import resources

from ..errors import MissingLexiconEntry
from .records import PhonologyRecord

# Fixed emission order for tag lines.
TAG_ORDER = [
    "forearm_rotation", "one_handed", "double_handed", "two_handed",
    "nondominant_still", "handshape_change", "symmetric", "alternating",
]

# Inline phrases for facing-line targets ("... facing the chest").
FACING_TARGET_INLINE = {
    "chest": "the chest",
    "torso": "the torso",
    "upper_face": "the upper face",
    "face": "the face",
    "head": "the head",
    "chin": "the chin",
    "mouth": "the mouth",
    "shoulder": "the shoulder",
    "neutral_space": "the space in front of the person",
}

HAND_TERMS = {"dominant": "dominant", "nondominant": "non-dominant"}
PART_HAND_TERMS = {"dominant": "Dominant", "nondominant": "Subordinate"}


class AttributeLexicon:
    """token -> nonempty list of alternative English phrasings."""

    def __init__(self, entries: dict):
        self.entries = {}
        for token, alts in entries.items():
            if not alts:
                raise ValueError(f"lexicon entry {token!r} has no alternatives")
            self.entries[token] = list(alts)

    def phrasings(self, token: str) -> list:
        try:
            return self.entries[token]
        except KeyError:
            raise MissingLexiconEntry(token) from None

    def pick(self, token: str, rng: random.Random) -> str:
        return rng.choice(self.phrasings(token))

    def covers(self, token: str) -> bool:
        return token in self.entries


def bundled_lexicon() -> AttributeLexicon:
    """Load the lexicon shipped with the package (flat token namespace)."""
    raw = resources.files("handmotion.phonology").joinpath("assets/lexicon.json").read_text()
    sections = json.loads(raw)
    flat: dict = {}
    for section in sections.values():
        flat.update(section)
    return AttributeLexicon(flat)


def load_lexicon(path) -> AttributeLexicon:
    obj = json.loads(open(path).read())
    if any(isinstance(v, dict) for v in obj.values()):
        flat: dict = {}
        for section in obj.values():
            flat.update(section)
        return AttributeLexicon(flat)
    return AttributeLexicon(obj)


def _capitalize(text: str) -> str:
    return text[:1].upper() + text[1:] if text else text


def _phase_prefix(phase) -> str:
    return {"initial": "Initial ", "final": "Final "}.get(phase, "")


def attributes_to_lines(record: PhonologyRecord, lexicon: AttributeLexicon,
                        seed: int = 0) -> list:
    """English attribute lines for a record, one per populated attribute.

    The alternative chosen for each token is deterministic in ``seed``.
    """
    rng = random.Random(seed)
    lines: list = []

    for phase, shapes in (("Initial", record.handshape_initial),
                          ("Final", record.handshape_final)):
        for hand in ("dominant", "nondominant"):
            if hand in shapes:
                phrase = lexicon.pick(shapes[hand], rng)
                lines.append(f"- {phase} {HAND_TERMS[hand]} hand shape: {phrase}")

    loc_subject = "Dominant hand location" if record.one_handed else "Sign location"
    init, final = record.location_initial, record.location_final
    if init and final and init != final:
        lines.append(f"- Initial {loc_subject[0].lower() + loc_subject[1:]}: "
                     f"{lexicon.pick(init, rng)}")
        lines.append(f"- Final {loc_subject[0].lower() + loc_subject[1:]}: "
                     f"{lexicon.pick(final, rng)}")
    elif init or final:
        token = init or final
        lines.append(f"- {loc_subject}: {lexicon.pick(token, rng)}")

    for facing in record.facing_parts:
        part = lexicon.pick(facing.part, rng)
        if facing.target in ("dominant", "nondominant"):
            suffix = {"initial": " during the initial part of the motion",
                      "final": " during the final part of the motion"}.get(facing.phase, "")
            lines.append(
                f"- Location on the {HAND_TERMS[facing.target]} hand that the "
                f"{HAND_TERMS[facing.hand]} hand is facing{suffix}: {part}")
        else:
            target = FACING_TARGET_INLINE.get(facing.target, f"the {facing.target}")
            subject = PART_HAND_TERMS[facing.hand]
            prefix = _phase_prefix(facing.phase)
            head = f"{prefix}{subject.lower() if prefix else subject}"
            lines.append(f"- {_capitalize(head)} hand part facing {target}: {part}")

    for tag in TAG_ORDER:
        if tag in record.tags:
            lines.append(f"- {_capitalize(lexicon.pick(tag, rng))}")
    for tag in sorted(record.tags):
        if tag not in TAG_ORDER:
            lines.append(f"- {_capitalize(lexicon.pick(tag, rng))}")
    return lines

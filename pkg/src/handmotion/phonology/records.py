"""Dictionary phonology records: schema, parsing, serialization.

Record JSON schema::

    {
      "gloss_id": "HAPPY",
      "word_keywords": ["happy", "merry"],
      "handshape_initial": {"dominant": "flat", "nondominant": "flat"},
      "handshape_final": {"dominant": "round"},
      "location_initial": "chest",
      "location_final": "chest",
      "facing_parts": [
        {"hand": "dominant", "target": "chest", "part": "fingertips",
         "phase": null}
      ],
      "tags": ["double_handed", "symmetric"],
      "signer_handedness": "right"
    }

Unknown attribute tokens are preserved verbatim; the lexicon decides later
whether it can phrase them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import SchemaViolation

KNOWN_TAGS = {
    "one_handed", "double_handed", "two_handed", "symmetric", "alternating",
    "nondominant_still", "forearm_rotation", "handshape_change",
}

HAND_KEYS = ("dominant", "nondominant")
PHASES = (None, "initial", "final")


@dataclass
class FacingPart:
    hand: str            # whose part is facing
    target: str          # location token or the other hand ("dominant"/"nondominant")
    part: str            # part token
    phase: str | None = None


@dataclass
class PhonologyRecord:
    gloss_id: str
    word_keywords: list = field(default_factory=list)
    handshape_initial: dict = field(default_factory=dict)  # hand -> token
    handshape_final: dict = field(default_factory=dict)
    location_initial: str | None = None
    location_final: str | None = None
    facing_parts: list = field(default_factory=list)       # list[FacingPart]
    tags: set = field(default_factory=set)
    signer_handedness: str | None = None

    @property
    def one_handed(self) -> bool:
        return "one_handed" in self.tags

    def used_hands(self) -> str:
        return "dominant" if self.one_handed else "both"

    def location_tokens(self) -> list:
        out = []
        for loc in (self.location_initial, self.location_final):
            if loc and loc not in out:
                out.append(loc)
        return out

    def to_json(self) -> dict:
        obj: dict = {"gloss_id": self.gloss_id}
        if self.word_keywords:
            obj["word_keywords"] = list(self.word_keywords)
        if self.handshape_initial:
            obj["handshape_initial"] = dict(self.handshape_initial)
        if self.handshape_final:
            obj["handshape_final"] = dict(self.handshape_final)
        if self.location_initial is not None:
            obj["location_initial"] = self.location_initial
        if self.location_final is not None:
            obj["location_final"] = self.location_final
        if self.facing_parts:
            obj["facing_parts"] = [
                {"hand": f.hand, "target": f.target, "part": f.part, "phase": f.phase}
                for f in self.facing_parts
            ]
        if self.tags:
            obj["tags"] = sorted(self.tags)
        if self.signer_handedness is not None:
            obj["signer_handedness"] = self.signer_handedness
        return obj


def _require(cond: bool, path: str, msg: str) -> None:
    if not cond:
        raise SchemaViolation(path, msg)


def parse_record(obj) -> PhonologyRecord:
    """Parse and validate one record; raises SchemaViolation with a field path."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    _require(isinstance(obj, dict), "$", "record must be an object")
    _require(isinstance(obj.get("gloss_id"), str) and obj["gloss_id"],
             "gloss_id", "required non-empty string")

    keywords = obj.get("word_keywords", [])
    _require(isinstance(keywords, list) and all(isinstance(k, str) for k in keywords),
             "word_keywords", "must be a list of strings")

    def parse_shapes(key):
        shapes = obj.get(key, {})
        _require(isinstance(shapes, dict), key, "must be an object")
        for hand, token in shapes.items():
            _require(hand in HAND_KEYS, f"{key}.{hand}", "hand must be dominant/nondominant")
            _require(isinstance(token, str), f"{key}.{hand}", "token must be a string")
        return dict(shapes)

    hs_initial = parse_shapes("handshape_initial")
    hs_final = parse_shapes("handshape_final")

    for key in ("location_initial", "location_final"):
        if key in obj and obj[key] is not None:
            _require(isinstance(obj[key], str), key, "must be a string token")

    facing = []
    for i, raw in enumerate(obj.get("facing_parts", [])):
        path = f"facing_parts[{i}]"
        _require(isinstance(raw, dict), path, "must be an object")
        _require(raw.get("hand") in HAND_KEYS, f"{path}.hand", "must be dominant/nondominant")
        _require(isinstance(raw.get("target"), str), f"{path}.target", "must be a string token")
        _require(isinstance(raw.get("part"), str), f"{path}.part", "must be a string token")
        _require(raw.get("phase") in PHASES, f"{path}.phase", "must be null/initial/final")
        facing.append(FacingPart(raw["hand"], raw["target"], raw["part"], raw.get("phase")))

    tags = set(obj.get("tags", []))
    for tag in tags:
        _require(isinstance(tag, str), "tags", "tags must be strings")
    if "one_handed" in tags:
        for other in ("double_handed", "two_handed"):
            _require(other not in tags, "tags", f"one_handed excludes {other}")

    handedness = obj.get("signer_handedness")
    if handedness is not None:
        _require(handedness in ("left", "right"), "signer_handedness", "must be left/right")

    return PhonologyRecord(
        gloss_id=obj["gloss_id"],
        word_keywords=list(keywords),
        handshape_initial=hs_initial,
        handshape_final=hs_final,
        location_initial=obj.get("location_initial"),
        location_final=obj.get("location_final"),
        facing_parts=facing,
        tags=tags,
        signer_handedness=handedness,
    )


def read_records(path) -> list[PhonologyRecord]:
    """Read a JSONL file of phonology records."""
    out = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                out.append(parse_record(json.loads(line)))
    return out


def write_records(path, records) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json(), ensure_ascii=False) + "\n")

"""LLM output post-processing: stillness cleanup and handedness wording."""

from __future__ import annotations

import re

from .records import PhonologyRecord

# Sentences about the non-dominant hand are removed (one-handed signs only)
# when they match any of these stillness phrases.
STILLNESS_PATTERNS = [
    r"remains?\s+(?:\w+\s+)?still",
    r"stays?\s+(?:\w+\s+)?still",
    r"is\s+(?:\w+\s+)?still",
    r"keeps?\s+(?:\w+\s+)?still",
    r"(?:is\s+)?held\s+still",
    r"remains?\s+stationary",
    r"stays?\s+stationary",
    r"is\s+stationary",
    r"remains?\s+motionless",
    r"stays?\s+motionless",
    r"is\s+motionless",
    r"does\s+not\s+move",
    r"doesn'?t\s+move",
    r"without\s+moving",
]

_NONDOM_RE = re.compile(r"non[\s-]?dominant", re.IGNORECASE)
_STILL_RE = re.compile("|".join(STILLNESS_PATTERNS), re.IGNORECASE)
_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")


def _mentions_still_nondominant(sentence: str) -> bool:
    return bool(_NONDOM_RE.search(sentence)) and bool(_STILL_RE.search(sentence))


def remove_still_mentions(text: str) -> str:
    """Drop sentences stating the non-dominant hand remains still."""
    sentences = _SENTENCE_SPLIT.split(text.strip())
    kept = [s for s in sentences if s and not _mentions_still_nondominant(s)]
    return re.sub(r"\s+", " ", " ".join(kept)).strip()


def postprocess_descriptions(descriptions, record: PhonologyRecord) -> list:
    """Normalize whitespace; for one-handed signs also remove stillness
    sentences about the non-dominant hand."""
    out = []
    for text in descriptions:
        if record.one_handed:
            text = remove_still_mentions(text)
        out.append(re.sub(r"\s+", " ", text).strip())
    return out


def _match_case(replacement: str, matched: str) -> str:
    if matched.isupper():
        return replacement.upper()
    if matched[:1].isupper():
        return replacement[:1].upper() + replacement[1:]
    return replacement


def localize_handedness(text: str, signer_handedness: str) -> str:
    """Replace dominant/non-dominant wording with left/right per handedness.

    Right-handed signers: dominant -> right, non-dominant -> left; mirrored
    for left-handed signers.  Case-preserving and idempotent.
    """
    if signer_handedness == "right":
        dom, nondom = "right", "left"
    elif signer_handedness == "left":
        dom, nondom = "left", "right"
    else:
        raise ValueError(f"unknown handedness {signer_handedness!r}")

    text = _NONDOM_RE.sub(lambda m: _match_case(nondom, m.group(0)), text)
    return re.sub(r"dominant", lambda m: _match_case(dom, m.group(0)), text,
                  flags=re.IGNORECASE)

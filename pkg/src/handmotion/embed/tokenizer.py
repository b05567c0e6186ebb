"""Whitespace/punctuation tokenizer with a built vocabulary."""

from __future__ import annotations

import re

from ..errors import EmptyText

PAD, UNK = "<pad>", "<unk>"

_TOKEN_RE = re.compile(r"[a-z0-9]+(?:'[a-z]+)?")


def tokenize(text: str) -> list:
    return _TOKEN_RE.findall(text.lower())


def build_vocab(texts) -> list:
    """Deterministic vocabulary: specials first, then sorted unique tokens."""
    tokens = set()
    for text in texts:
        tokens.update(tokenize(text))
    return [PAD, UNK] + sorted(tokens)


class Vocabulary:
    def __init__(self, tokens):
        self.tokens = list(tokens)
        self.index = {t: i for i, t in enumerate(self.tokens)}
        self.pad_id = self.index[PAD]
        self.unk_id = self.index[UNK]

    def __len__(self) -> int:
        return len(self.tokens)

    def encode(self, text: str) -> list:
        words = tokenize(text)
        if not words:
            raise EmptyText(f"text tokenized to nothing: {text!r}")
        return [self.index.get(w, self.unk_id) for w in words]

"""Text-embedding providers for conditioning the generator.

Either the trained retrieval text encoder or a precomputed table standing
in for an external pretrained encoder, behind one ``embed(text)`` call.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import ConfigError
from .model import Thmr, encode_text, load_thmr


class ThmrTextProvider:
    def __init__(self, model: Thmr):
        self.model = model
        self.dim = model.cfg.latent_dim

    def embed(self, text: str) -> np.ndarray:
        return encode_text(text, self.model).astype(float)


class PrecomputedTextProvider:
    """Reads an .npz with arrays ``texts`` (unicode) and ``vectors``."""

    def __init__(self, path):
        data = np.load(path, allow_pickle=False)
        self.table = {str(t): np.asarray(v, dtype=float)
                      for t, v in zip(data["texts"], data["vectors"])}
        if not self.table:
            raise ConfigError(f"{path}: empty embedding table")
        self.dim = len(next(iter(self.table.values())))

    def embed(self, text: str) -> np.ndarray:
        try:
            return self.table[text]
        except KeyError:
            raise ConfigError(f"no precomputed embedding for text {text!r}") from None


def save_embedding_table(path, texts, vectors) -> None:
    np.savez(path, texts=np.array(list(texts)), vectors=np.asarray(vectors, dtype=float))


def provider_from_spec(spec: str):
    """``<ckpt path>`` (retrieval checkpoint) or ``<table.npz>``."""
    path = Path(spec)
    if not path.exists():
        raise ConfigError(f"text encoder source {spec!r} does not exist")
    if path.suffix == ".npz":
        return PrecomputedTextProvider(path)
    return ThmrTextProvider(load_thmr(path))

"""Dual-encoder retrieval model: motion and text transformers sharing a
256-dim embedding space."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import torch
from torch import nn

from ..errors import FeatureWidthMismatch
from ..features import subset_width
from .tokenizer import Vocabulary


@dataclass
class ThmrConfig:
    latent_dim: int = 256
    temperature: float = 0.1
    nce_weight: float = 0.1
    learning_rate: float = 1e-4
    batch_size: int = 32
    epochs: int = 100
    subset: str = "full_274"
    d_model: int = 128
    num_layers: int = 2
    num_heads: int = 4
    ff_dim: int = 256
    weight_decay: float = 0.0
    seed: int = 0
    vocab: list = field(default_factory=list)
    # "vocab" trains token embeddings; "precomputed" feeds external text
    # vectors of width ``text_input_dim`` through the same encoder.
    text_source: str = "vocab"
    text_input_dim: int = 0

    def validate(self):
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if self.batch_size < 2:
            raise ValueError("contrastive training needs batch size >= 2")

    @property
    def feature_width(self) -> int:
        return subset_width(self.subset)

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @classmethod
    def from_json(cls, obj) -> "ThmrConfig":
        return cls(**{k: v for k, v in obj.items() if k in cls.__dataclass_fields__})


def sinusoidal_positions(length: int, dim: int) -> torch.Tensor:
    position = torch.arange(length, dtype=torch.float32).unsqueeze(1)
    div = torch.exp(torch.arange(0, dim, 2, dtype=torch.float32)
                    * (-math.log(10000.0) / dim))
    pe = torch.zeros(length, dim)
    pe[:, 0::2] = torch.sin(position * div)
    pe[:, 1::2] = torch.cos(position * div[: dim // 2])
    return pe


class _SequenceEncoder(nn.Module):
    """Transformer over projected input tokens; a learnable CLS token is
    prepended and its output projected to the embedding space."""

    def __init__(self, input_dim: int, cfg: ThmrConfig):
        super().__init__()
        self.proj = nn.Linear(input_dim, cfg.d_model)
        self.cls = nn.Parameter(torch.zeros(1, 1, cfg.d_model))
        layer = nn.TransformerEncoderLayer(
            d_model=cfg.d_model, nhead=cfg.num_heads,
            dim_feedforward=cfg.ff_dim, dropout=0.0, batch_first=True)
        self.encoder = nn.TransformerEncoder(layer, num_layers=cfg.num_layers)
        self.out = nn.Linear(cfg.d_model, cfg.latent_dim)
        self.d_model = cfg.d_model

    def forward(self, x: torch.Tensor, padding_mask: torch.Tensor | None = None):
        # x: (B, T, input_dim); padding_mask: (B, T) True at padded positions
        h = self.proj(x)
        h = h + sinusoidal_positions(h.shape[1], self.d_model).to(h.dtype)
        cls = self.cls.expand(h.shape[0], 1, -1)
        h = torch.cat([cls, h], dim=1)
        if padding_mask is not None:
            pad = torch.zeros(h.shape[0], 1, dtype=torch.bool, device=h.device)
            padding_mask = torch.cat([pad, padding_mask], dim=1)
        h = self.encoder(h, src_key_padding_mask=padding_mask)
        return self.out(h[:, 0])


class TextTokenEncoder(nn.Module):
    def __init__(self, vocab_size: int, cfg: ThmrConfig):
        super().__init__()
        self.embedding = nn.Embedding(vocab_size, cfg.d_model)
        self.inner = _SequenceEncoder(cfg.d_model, cfg)

    def forward(self, token_ids: torch.Tensor, padding_mask=None):
        return self.inner(self.embedding(token_ids), padding_mask)


class Thmr(nn.Module):
    """Motion and text encoders into a shared latent space."""

    def __init__(self, cfg: ThmrConfig):
        super().__init__()
        cfg.validate()
        self.cfg = cfg
        self.motion_encoder = _SequenceEncoder(cfg.feature_width, cfg)
        if cfg.text_source == "vocab":
            self.vocab = Vocabulary(cfg.vocab or ["<pad>", "<unk>"])
            self.text_encoder = TextTokenEncoder(len(self.vocab), cfg)
        elif cfg.text_source == "precomputed":
            self.vocab = None
            self.text_encoder = _SequenceEncoder(cfg.text_input_dim, cfg)
        else:
            raise ValueError(f"unknown text_source {cfg.text_source!r}")

    def encode_motion_batch(self, batch: torch.Tensor, padding_mask=None):
        if batch.shape[-1] != self.cfg.feature_width:
            raise FeatureWidthMismatch(
                f"model expects width {self.cfg.feature_width}, got {batch.shape[-1]}")
        return self.motion_encoder(batch, padding_mask)

    def encode_text_batch(self, token_ids: torch.Tensor, padding_mask=None):
        return self.text_encoder(token_ids, padding_mask)


@torch.no_grad()
def encode_motion(features: np.ndarray, model: Thmr) -> np.ndarray:
    """Embed one (T, width) motion; deterministic in eval mode."""
    model.eval()
    x = torch.from_numpy(np.asarray(features, dtype=np.float32)).unsqueeze(0)
    return model.encode_motion_batch(x).squeeze(0).numpy()


@torch.no_grad()
def encode_text(text: str, model: Thmr) -> np.ndarray:
    """Embed one text string (tokenized against the model vocabulary)."""
    model.eval()
    ids = torch.tensor([model.vocab.encode(text)], dtype=torch.long)
    return model.encode_text_batch(ids).squeeze(0).numpy()


@torch.no_grad()
def encode_text_vectors(vectors: np.ndarray, model: Thmr) -> np.ndarray:
    """Embed precomputed per-token text vectors (T, text_input_dim)."""
    model.eval()
    x = torch.from_numpy(np.asarray(vectors, dtype=np.float32)).unsqueeze(0)
    return model.text_encoder(x).squeeze(0).numpy()


def save_thmr(path, model: Thmr) -> None:
    from ..checkpoint import save_checkpoint

    tensors = {name: param.detach().numpy() for name, param in model.state_dict().items()}
    save_checkpoint(path, {"kind": "thmr", "config": model.cfg.to_json()}, tensors)


def load_thmr(path) -> Thmr:
    from ..checkpoint import load_checkpoint

    config, tensors = load_checkpoint(path)
    if config.get("kind") != "thmr":
        raise ValueError(f"{path} is not a retrieval checkpoint")
    model = Thmr(ThmrConfig.from_json(config["config"]))
    state = {name: torch.from_numpy(arr) for name, arr in tensors.items()}
    model.load_state_dict(state)
    model.eval()
    return model

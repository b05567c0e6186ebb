"""Transformer denoiser over per-frame motion tokens.

Input token layout: [text-embedding token, timestep token, two register
tokens, per-frame motion tokens].  The first four outputs are discarded;
motion-token outputs project back to feature space as the clean-motion
prediction.  A learned null-condition embedding stands in when no text
conditioning is given (condition dropout and unconditional sampling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from ..errors import LengthExceedsMax
from .schedule import NoiseSchedule

NUM_PREFIX_TOKENS = 4  # text, timestep, two registers


@dataclass
class DiffusionConfig:
    feature_dim: int = 274
    text_dim: int = 256
    num_steps: int = 100
    schedule_kind: str = "cosine"
    cond_dropout: float = 0.05
    guidance: float = 15.0
    learning_rate: float = 1e-4
    batch_size: int = 32
    epochs: int = 300
    max_len: int = 128
    d_model: int = 128
    num_layers: int = 4
    num_heads: int = 4
    ff_dim: int = 256
    weight_decay: float = 0.0
    seed: int = 0

    def validate(self):
        if not np.isfinite(self.guidance) or self.guidance < 0:
            raise ValueError("guidance must be finite and >= 0")
        if not 0.0 <= self.cond_dropout < 1.0:
            raise ValueError("cond_dropout must be in [0, 1)")
        if self.num_steps < 1:
            raise ValueError("need at least one diffusion step")

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @classmethod
    def from_json(cls, obj) -> "DiffusionConfig":
        return cls(**{k: v for k, v in obj.items() if k in cls.__dataclass_fields__})


def timestep_embedding(t: torch.Tensor, dim: int) -> torch.Tensor:
    """Sinusoidal embedding of integer timesteps, shape (B, dim)."""
    half = dim // 2
    freqs = torch.exp(-math.log(10000.0) * torch.arange(half, dtype=torch.float32) / half)
    args = t.float().unsqueeze(1) * freqs.unsqueeze(0)
    emb = torch.cat([torch.sin(args), torch.cos(args)], dim=1)
    if dim % 2:
        emb = torch.cat([emb, torch.zeros_like(emb[:, :1])], dim=1)
    return emb


class Denoiser(nn.Module):
    def __init__(self, cfg: DiffusionConfig):
        super().__init__()
        cfg.validate()
        self.cfg = cfg
        d = cfg.d_model
        self.input_proj = nn.Linear(cfg.feature_dim, d)
        self.output_proj = nn.Linear(d, cfg.feature_dim)
        self.text_proj = nn.Linear(cfg.text_dim, d)
        self.null_condition = nn.Parameter(torch.zeros(d))
        self.time_mlp = nn.Sequential(nn.Linear(d, d), nn.SiLU(), nn.Linear(d, d))
        self.registers = nn.Parameter(torch.zeros(2, d))
        self.frame_positions = nn.Parameter(torch.zeros(cfg.max_len, d))
        layer = nn.TransformerEncoderLayer(
            d_model=d, nhead=cfg.num_heads, dim_feedforward=cfg.ff_dim,
            dropout=0.0, batch_first=True)
        self.encoder = nn.TransformerEncoder(layer, num_layers=cfg.num_layers)
        nn.init.normal_(self.frame_positions, std=0.02)
        nn.init.normal_(self.registers, std=0.02)
        nn.init.normal_(self.null_condition, std=0.02)

    def forward(self, x_t: torch.Tensor, t: torch.Tensor,
                text_embedding: torch.Tensor | None,
                padding_mask: torch.Tensor | None = None) -> torch.Tensor:
        """Predict the clean motion.

        ``x_t``: (B, T, F); ``t``: (B,) integer steps; ``text_embedding``:
        (B, text_dim) or None for the learned null condition;
        ``padding_mask``: (B, T) True at padded frames.
        """
        batch, length, _ = x_t.shape
        if length > self.cfg.max_len:
            raise LengthExceedsMax(f"length {length} exceeds max {self.cfg.max_len}")
        if text_embedding is None:
            cond = self.null_condition.unsqueeze(0).expand(batch, -1)
        else:
            cond = self.text_proj(text_embedding)
        time_tok = self.time_mlp(timestep_embedding(t, self.cfg.d_model))
        motion = self.input_proj(x_t) + self.frame_positions[:length].unsqueeze(0)
        tokens = torch.cat([
            cond.unsqueeze(1),
            time_tok.unsqueeze(1),
            self.registers.unsqueeze(0).expand(batch, -1, -1),
            motion,
        ], dim=1)
        if padding_mask is not None:
            prefix = torch.zeros(batch, NUM_PREFIX_TOKENS, dtype=torch.bool,
                                 device=x_t.device)
            full_mask = torch.cat([prefix, padding_mask], dim=1)
        else:
            full_mask = None
        h = self.encoder(tokens, src_key_padding_mask=full_mask)
        out = self.output_proj(h[:, NUM_PREFIX_TOKENS:])
        if padding_mask is not None:
            out = out.masked_fill(padding_mask.unsqueeze(-1), 0.0)
        return out


def denoise(x_t: np.ndarray, t: int, text_embedding, model: Denoiser,
            lengths_mask: np.ndarray | None = None) -> np.ndarray:
    """Single-sequence convenience wrapper around the batched forward."""
    model.eval()
    with torch.no_grad():
        x = torch.from_numpy(np.asarray(x_t, dtype=np.float32)).unsqueeze(0)
        ts = torch.tensor([t], dtype=torch.long)
        emb = None
        if text_embedding is not None:
            emb = torch.from_numpy(
                np.asarray(text_embedding, dtype=np.float32)).unsqueeze(0)
        mask = None
        if lengths_mask is not None:
            mask = torch.from_numpy(np.asarray(lengths_mask, dtype=bool)).unsqueeze(0)
        return model(x, ts, emb, mask).squeeze(0).numpy()


def save_denoiser(path, model: Denoiser) -> None:
    from ..checkpoint import save_checkpoint

    tensors = {name: p.detach().numpy() for name, p in model.state_dict().items()}
    save_checkpoint(path, {"kind": "diffusion", "config": model.cfg.to_json()}, tensors)


def load_denoiser(path) -> Denoiser:
    from ..checkpoint import load_checkpoint

    config, tensors = load_checkpoint(path)
    if config.get("kind") != "diffusion":
        raise ValueError(f"{path} is not a diffusion checkpoint")
    model = Denoiser(DiffusionConfig.from_json(config["config"]))
    model.load_state_dict({k: torch.from_numpy(v) for k, v in tensors.items()})
    model.eval()
    return model

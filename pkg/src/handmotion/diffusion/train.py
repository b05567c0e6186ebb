"""Diffusion training: clean-motion prediction with masked MSE."""

from __future__ import annotations

import logging
import random

import numpy as np
import torch

from ..errors import EmptyDataset
from .model import Denoiser, DiffusionConfig
from .schedule import NoiseSchedule, build_schedule

log = logging.getLogger(__name__)


def pad_batch(motions):
    lengths = [m.shape[0] for m in motions]
    t_max = max(lengths)
    width = motions[0].shape[1]
    batch = torch.zeros(len(motions), t_max, width)
    mask = torch.ones(len(motions), t_max, dtype=torch.bool)
    for i, m in enumerate(motions):
        batch[i, : m.shape[0]] = torch.from_numpy(np.asarray(m, dtype=np.float32))
        mask[i, : m.shape[0]] = False
    return batch, mask


def training_step(batch, model: Denoiser, schedule: NoiseSchedule,
                  p_drop: float, optimizer, rng: random.Random,
                  generator: torch.Generator) -> float:
    """One optimization step over a list of (features, [text embeddings]).

    Per sample: one text embedding sampled uniformly, replaced by the null
    condition with probability ``p_drop``; a uniform timestep in [1, N];
    loss is the MSE between predicted and clean motion on unpadded frames.
    """
    motions = [item[0] for item in batch]
    embeddings = []
    cond_mask = []
    for _, texts in batch:
        emb = texts[rng.randrange(len(texts))]
        embeddings.append(np.asarray(emb, dtype=np.float32))
        cond_mask.append(rng.random() >= p_drop)
    x0, padding_mask = pad_batch(motions)
    t = torch.randint(1, schedule.num_steps + 1, (len(batch),), generator=generator)
    noise = torch.randn(x0.shape, generator=generator)
    abar = torch.tensor([schedule.alpha_bar(int(ti)) for ti in t], dtype=torch.float32)
    x_t = (abar.sqrt().view(-1, 1, 1) * x0
           + (1.0 - abar).sqrt().view(-1, 1, 1) * noise)
    x_t = x_t.masked_fill(padding_mask.unsqueeze(-1), 0.0)

    emb_batch = torch.from_numpy(np.stack(embeddings))
    cond = model.text_proj(emb_batch)
    null = model.null_condition.unsqueeze(0).expand(len(batch), -1)
    keep = torch.tensor(cond_mask, dtype=torch.bool).unsqueeze(1)
    mixed_cond = torch.where(keep, cond, null)

    # Reuse the module internals with the pre-mixed condition token.
    pred = _forward_with_condition(model, x_t, t, mixed_cond, padding_mask)
    keep_frames = (~padding_mask).unsqueeze(-1)
    loss = ((pred - x0) ** 2 * keep_frames).sum() / keep_frames.sum() / x0.shape[-1]
    optimizer.zero_grad()
    loss.backward()
    optimizer.step()
    return float(loss.detach())


def _forward_with_condition(model: Denoiser, x_t, t, cond_tokens, padding_mask):
    from .model import NUM_PREFIX_TOKENS, timestep_embedding

    batch, length, _ = x_t.shape
    time_tok = model.time_mlp(timestep_embedding(t, model.cfg.d_model))
    motion = model.input_proj(x_t) + model.frame_positions[:length].unsqueeze(0)
    tokens = torch.cat([
        cond_tokens.unsqueeze(1),
        time_tok.unsqueeze(1),
        model.registers.unsqueeze(0).expand(batch, -1, -1),
        motion,
    ], dim=1)
    full_mask = None
    if padding_mask is not None:
        prefix = torch.zeros(batch, NUM_PREFIX_TOKENS, dtype=torch.bool)
        full_mask = torch.cat([prefix, padding_mask], dim=1)
    h = model.encoder(tokens, src_key_padding_mask=full_mask)
    out = model.output_proj(h[:, NUM_PREFIX_TOKENS:])
    if padding_mask is not None:
        out = out.masked_fill(padding_mask.unsqueeze(-1), 0.0)
    return out


def train_diffusion(dataset, cfg: DiffusionConfig) -> Denoiser:
    """Train a denoiser on (motion features, [text embedding]) pairs."""
    cfg.validate()
    if not dataset:
        raise EmptyDataset("no training pairs")
    torch.manual_seed(cfg.seed)
    rng = random.Random(cfg.seed)
    generator = torch.Generator().manual_seed(cfg.seed)
    model = Denoiser(cfg)
    schedule = build_schedule(cfg.num_steps, cfg.schedule_kind)
    optimizer = torch.optim.AdamW(model.parameters(), lr=cfg.learning_rate,
                                  weight_decay=cfg.weight_decay)
    model.train()
    order = list(range(len(dataset)))
    for epoch in range(cfg.epochs):
        rng.shuffle(order)
        losses = []
        for start in range(0, len(order), cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            batch = [dataset[i] for i in idx]
            losses.append(training_step(batch, model, schedule, cfg.cond_dropout,
                                        optimizer, rng, generator))
        if epoch % 50 == 0 or epoch == cfg.epochs - 1:
            log.info("epoch %d loss %.6f", epoch, float(np.mean(losses)))
    model.eval()
    return model

"""Contrastive training loop for the retrieval model."""

from __future__ import annotations

import logging
import random

import numpy as np
import torch

from ..errors import EmptyDataset
from .losses import infonce_loss
from .model import Thmr, ThmrConfig
from .tokenizer import build_vocab

log = logging.getLogger(__name__)


def pad_motion_batch(motions):
    """Stack variable-length (T, width) arrays into a padded batch + mask."""
    lengths = [m.shape[0] for m in motions]
    width = motions[0].shape[1]
    t_max = max(lengths)
    batch = torch.zeros(len(motions), t_max, width)
    mask = torch.ones(len(motions), t_max, dtype=torch.bool)
    for i, m in enumerate(motions):
        t = m.shape[0]
        batch[i, :t] = torch.from_numpy(np.asarray(m, dtype=np.float32))
        mask[i, :t] = False
    return batch, mask


def pad_token_batch(token_lists, pad_id: int):
    lengths = [len(t) for t in token_lists]
    t_max = max(lengths)
    batch = torch.full((len(token_lists), t_max), pad_id, dtype=torch.long)
    mask = torch.ones(len(token_lists), t_max, dtype=torch.bool)
    for i, ids in enumerate(token_lists):
        batch[i, : len(ids)] = torch.tensor(ids, dtype=torch.long)
        mask[i, : len(ids)] = False
    return batch, mask


def train_thmr(dataset, cfg: ThmrConfig) -> Thmr:
    """Train on (motion features, texts) pairs.

    ``dataset`` is a list of ``(features (T, width) array, list of texts)``;
    one text is sampled per motion per step.  Runs are reproducible for a
    fixed config seed.
    """
    cfg.validate()
    if not dataset:
        raise EmptyDataset("no training pairs")
    if not cfg.vocab and cfg.text_source == "vocab":
        texts = [t for _, pair_texts in dataset for t in pair_texts]
        cfg.vocab = build_vocab(texts)

    torch.manual_seed(cfg.seed)
    rng = random.Random(cfg.seed)
    model = Thmr(cfg)
    optimizer = torch.optim.AdamW(model.parameters(), lr=cfg.learning_rate,
                                  weight_decay=cfg.weight_decay)
    model.train()
    order = list(range(len(dataset)))
    for epoch in range(cfg.epochs):
        rng.shuffle(order)
        losses = []
        for start in range(0, len(order), cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            if len(idx) < 2:
                continue
            motions = [dataset[i][0] for i in idx]
            texts = [rng.choice(dataset[i][1]) for i in idx]
            mot_batch, mot_mask = pad_motion_batch(motions)
            tok_batch, tok_mask = pad_token_batch(
                [model.vocab.encode(t) for t in texts], model.vocab.pad_id)
            motion_emb = model.encode_motion_batch(mot_batch, mot_mask)
            text_emb = model.encode_text_batch(tok_batch, tok_mask)
            loss = cfg.nce_weight * infonce_loss(text_emb, motion_emb, cfg.temperature)
            optimizer.zero_grad()
            if loss.requires_grad and cfg.nce_weight != 0.0:
                loss.backward()
                optimizer.step()
            losses.append(float(loss.detach()))
        log.info("epoch %d loss %.6f", epoch, float(np.mean(losses)) if losses else 0.0)
    model.eval()
    return model

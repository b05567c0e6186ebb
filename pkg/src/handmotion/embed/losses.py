"""Symmetric InfoNCE over cosine-similarity logits."""

from __future__ import annotations

import torch
import torch.nn.functional as F


def infonce_loss(text_batch: torch.Tensor, motion_batch: torch.Tensor,
                 temperature: float) -> torch.Tensor:
    """Cross-entropy over cosine similarities divided by the temperature,
    averaged over the text-to-motion and motion-to-text directions."""
    if text_batch.shape[0] != motion_batch.shape[0]:
        raise ValueError("batch sizes differ")
    if text_batch.shape[0] < 2:
        raise ValueError("contrastive loss needs batch size >= 2")
    text = F.normalize(text_batch, dim=1)
    motion = F.normalize(motion_batch, dim=1)
    logits = text @ motion.T / temperature
    labels = torch.arange(text.shape[0], device=text.device)
    return (F.cross_entropy(logits, labels) + F.cross_entropy(logits.T, labels)) / 2

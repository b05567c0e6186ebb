"""Denoising diffusion noise schedules (cosine default, linear optional).

Timesteps are 1-based: t runs from 1 to N.  ``alpha_bar(0)`` is defined as
1 (the clean-data limit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BadScheduleParams

MAX_BETA = 0.999


@dataclass
class NoiseSchedule:
    betas: np.ndarray       # (N,), betas[t-1] is beta_t
    alphas: np.ndarray      # 1 - betas
    alpha_bars: np.ndarray  # cumulative products
    kind: str = "cosine"

    @property
    def num_steps(self) -> int:
        return len(self.betas)

    def beta(self, t: int) -> float:
        return float(self.betas[t - 1])

    def alpha(self, t: int) -> float:
        return float(self.alphas[t - 1])

    def alpha_bar(self, t: int) -> float:
        if t == 0:
            return 1.0
        return float(self.alpha_bars[t - 1])


def build_schedule(num_steps: int = 100, kind: str = "cosine") -> NoiseSchedule:
    """Build a schedule; betas are clipped into (0, 0.999]."""
    if num_steps < 1:
        raise BadScheduleParams(f"need at least 1 step, got {num_steps}")
    if kind == "cosine":
        s = 0.008

        def f(t):
            return math.cos((t / num_steps + s) / (1 + s) * math.pi / 2) ** 2

        betas = np.array([
            min(1.0 - f(t) / f(t - 1), MAX_BETA) for t in range(1, num_steps + 1)
        ])
    elif kind == "linear":
        # Classic 1000-step range rescaled to the requested step count.
        scale = 1000.0 / num_steps
        betas = np.linspace(1e-4 * scale, 0.02 * scale, num_steps)
        betas = np.clip(betas, 0.0, MAX_BETA)
    else:
        raise BadScheduleParams(f"unknown schedule kind {kind!r}")
    betas = np.clip(betas, 1e-8, MAX_BETA)
    alphas = 1.0 - betas
    alpha_bars = np.cumprod(alphas)
    if not np.all(np.diff(alpha_bars) < 0) and num_steps > 1:
        raise BadScheduleParams("alpha_bar is not strictly decreasing")
    return NoiseSchedule(betas=betas, alphas=alphas, alpha_bars=alpha_bars, kind=kind)


def q_sample(x0: np.ndarray, t: int, noise: np.ndarray,
             schedule: NoiseSchedule) -> np.ndarray:
    """Forward-process sample: sqrt(abar_t) x0 + sqrt(1 - abar_t) noise."""
    x0 = np.asarray(x0, dtype=float)
    noise = np.asarray(noise, dtype=float)
    if noise.shape != x0.shape:
        raise ValueError("noise shape must match x0")
    if not 1 <= t <= schedule.num_steps:
        raise ValueError(f"t={t} outside [1, {schedule.num_steps}]")
    abar = schedule.alpha_bar(t)
    return math.sqrt(abar) * x0 + math.sqrt(1.0 - abar) * noise


def posterior_coefficients(schedule: NoiseSchedule, t: int):
    """(coef_x0, coef_xt, variance) of q(x_{t-1} | x_t, x0)."""
    beta = schedule.beta(t)
    abar_t = schedule.alpha_bar(t)
    abar_prev = schedule.alpha_bar(t - 1)
    alpha = schedule.alpha(t)
    coef_x0 = math.sqrt(abar_prev) * beta / (1.0 - abar_t)
    coef_xt = math.sqrt(alpha) * (1.0 - abar_prev) / (1.0 - abar_t)
    variance = beta * (1.0 - abar_prev) / (1.0 - abar_t)
    return coef_x0, coef_xt, variance

"""Flickering-observation wrapper: blanks frames at a fixed probability.

Dynamics and rewards pass through untouched; observability is reduced by
replacing the returned frame with all-zeros with probability
``obscure_prob`` (reset frames included).
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .base import Env, StepResult


class FlickerWrapper(Env):
    def __init__(self, env: Env, obscure_prob: float, seed: int = 0):
        if not (0.0 <= obscure_prob <= 1.0):
            raise ConfigError(f"obscure_prob must be in [0, 1], got {obscure_prob}")
        self.env = env
        self.config = env.config
        self.obscure_prob = obscure_prob
        self.n_actions = env.n_actions
        self.height = env.height
        self.width = env.width
        self._rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))

    def _filter(self, obs: np.ndarray) -> tuple[np.ndarray, bool]:
        if self.obscure_prob > 0.0 and float(self._rng.random()) < self.obscure_prob:
            return np.zeros_like(obs), True
        return obs, False

    def reset(self) -> np.ndarray:
        obs, _ = self._filter(self.env.reset())
        return obs

    def step(self, action: int) -> StepResult:
        result = self.env.step(action)
        obs, blanked = self._filter(result.obs)
        info = dict(result.info)
        info["obscured"] = blanked
        return StepResult(obs=obs, reward=result.reward, done=result.done, info=info)

    @property
    def max_episode_steps(self) -> int:
        return self.env.max_episode_steps

    def get_state(self) -> dict:
        return {"inner": self.env.get_state(), "rng": self._rng.bit_generator.state}

    def set_state(self, state: dict) -> None:
        self.env.set_state(state["inner"])
        self._rng.bit_generator.state = state["rng"]

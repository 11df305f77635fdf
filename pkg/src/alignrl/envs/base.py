"""Environment protocol and shared types.

Observations are single grayscale frames (h, w) float32 in [0, 1].  Hidden
state lives inside each environment; dynamics are exposed as pure static
``transition`` functions so the dynamic-programming oracle and ``step``
share one implementation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import ConfigError, ContractError


@dataclass
class EnvConfig:
    name: str = "tmaze"
    width: int = 16
    height: int = 16
    corridor_length: int = 8          # tmaze
    paddle_width: int = 3             # bounceball
    obscure_prob: float = 0.0         # >0 wraps the env in a flickering filter
    max_episode_steps: int = 0        # 0 -> env-specific default
    seed: int = 0

    def validate(self) -> None:
        if self.corridor_length < 1:
            raise ConfigError(f"corridor_length must be >= 1, got {self.corridor_length}")
        if not (0.0 <= self.obscure_prob <= 1.0):
            raise ConfigError(f"obscure_prob must be in [0, 1], got {self.obscure_prob}")
        if self.max_episode_steps < 0:
            raise ConfigError(f"max_episode_steps must be >= 0, got {self.max_episode_steps}")
        if self.width < 7 or self.height < 7:
            raise ConfigError(f"observations must be at least 7x7, got {self.height}x{self.width}")


@dataclass
class StepResult:
    obs: np.ndarray
    reward: float
    done: bool
    info: dict = field(default_factory=dict)


class Env:
    """Base class: subclasses fill in dynamics and rendering."""

    n_actions: int
    height: int
    width: int

    def __init__(self, config: EnvConfig):
        self.config = config
        self.height = config.height
        self.width = config.width
        self._rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed)))
        self._t = 0
        self._active = False

    # -- contract helpers ---------------------------------------------------

    def _require_active(self, action: int) -> None:
        if not self._active:
            raise ContractError("step() called on a finished or unreset episode; call reset() first")
        if not (0 <= action < self.n_actions):
            raise ContractError(f"action {action} out of range [0, {self.n_actions})")

    # -- interface ------------------------------------------------------------

    def reset(self) -> np.ndarray:
        raise NotImplementedError

    def step(self, action: int) -> StepResult:
        raise NotImplementedError

    # -- checkpoint support -----------------------------------------------------

    def get_state(self) -> dict[str, Any]:
        raise NotImplementedError

    def set_state(self, state: dict[str, Any]) -> None:
        raise NotImplementedError

    def _rng_state(self) -> dict:
        return self._rng.bit_generator.state

    def _set_rng_state(self, state: dict) -> None:
        self._rng.bit_generator.state = state

"""Catch-the-ball on a small grid.

A ball travels diagonally one cell per step, reflecting off the side and
top walls.  A paddle on the bottom row moves at most one cell per step
(actions: 0 left, 1 stay, 2 right).  When the ball reaches the bottom row
the episode ends with reward 1.0 if the ball column overlaps the paddle,
else 0.0.  A single frame shows positions but not velocities, so two hidden
states can render identically while demanding opposite paddle moves.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .base import Env, EnvConfig, StepResult

BALL_VALUE = 1.0
PADDLE_VALUE = 0.5


class BounceBallEnv(Env):
    n_actions = 3

    def __init__(self, config: EnvConfig):
        config.validate()
        if not (1 <= config.paddle_width <= config.width - 2):
            raise ConfigError(f"paddle_width {config.paddle_width} invalid for width {config.width}")
        super().__init__(config)
        self.paddle_width = config.paddle_width
        self.max_episode_steps = config.max_episode_steps or 8 * config.height
        # hidden state: (ball_row, ball_col, dr, dc, paddle_left)
        self._state = (1, 1, 1, 1, 0)

    # -- pure dynamics (shared with the DP oracle) ---------------------------

    @staticmethod
    def initial_states(config: EnvConfig) -> list[tuple]:
        """Equally likely hidden states after reset."""
        w = config.width
        pleft = (w - config.paddle_width) // 2
        states = []
        for bc in range(1, w - 1):
            for dr in (-1, 1):
                for dc in (-1, 1):
                    states.append((1, bc, dr, dc, pleft))
        return states

    @staticmethod
    def transition(config: EnvConfig, state: tuple, action: int) -> tuple[tuple, float, bool]:
        h, w, pw = config.height, config.width, config.paddle_width
        br, bc, dr, dc, pleft = state
        pleft = min(max(pleft + (action - 1), 0), w - pw)
        nr = br + dr
        if nr < 0:
            dr = -dr
            nr = br + dr
        ncol = bc + dc
        if ncol < 0 or ncol > w - 1:
            dc = -dc
            ncol = bc + dc
        next_state = (nr, ncol, dr, dc, pleft)
        if nr == h - 1:
            caught = pleft <= ncol <= pleft + pw - 1
            return next_state, (1.0 if caught else 0.0), True
        return next_state, 0.0, False

    # -- rendering -----------------------------------------------------------------

    def _render(self, state: tuple) -> np.ndarray:
        br, bc, _, _, pleft = state
        frame = np.zeros((self.height, self.width), dtype=np.float32)
        frame[self.height - 1, pleft:pleft + self.paddle_width] = PADDLE_VALUE
        frame[br, bc] = BALL_VALUE
        return frame

    # -- env interface ------------------------------------------------------------------

    def reset(self) -> np.ndarray:
        options = self.initial_states(self.config)
        self._state = options[int(self._rng.integers(len(options)))]
        self._t = 0
        self._active = True
        return self._render(self._state)

    def step(self, action: int) -> StepResult:
        self._require_active(action)
        self._state, reward, done = self.transition(self.config, self._state, action)
        self._t += 1
        truncated = False
        if not done and self._t >= self.max_episode_steps:
            done, truncated = True, True
        if done:
            self._active = False
        return StepResult(obs=self._render(self._state), reward=reward, done=done,
                          info={"truncated": truncated})

    def get_state(self) -> dict:
        return {"state": list(self._state), "t": self._t,
                "active": self._active, "rng": self._rng_state()}

    def set_state(self, state: dict) -> None:
        self._state = tuple(int(v) for v in state["state"])
        self._t = int(state["t"])
        self._active = bool(state["active"])
        self._set_rng_state(state["rng"])

"""T-maze: the classic memory probe.

A cue shown ONLY on the reset frame tells which junction arm pays out.  The
corridor forces motion (every action advances one cell), so the agent
reaches the junction after exactly ``corridor_length`` steps, by which time
the cue has left any short frame stack.  At the junction, action 1 (left
arm) or 2 (right arm) ends the episode with reward 1.0 when it matches the
cue and 0.0 otherwise; action 0 is a no-op there.

Rendering (h x w, values in [0, 1]): a dim track with the agent as a bright
pixel, junction arms above/below the final column, and a 2x2 cue patch in
the top-left (LEFT cue) or bottom-left (RIGHT cue) corner of frame 0 only.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .base import Env, EnvConfig, StepResult

CUE_LEFT = 0
CUE_RIGHT = 1

ACTION_FORWARD = 0
ACTION_LEFT = 1
ACTION_RIGHT = 2

TRACK_VALUE = 0.25
AGENT_VALUE = 1.0
CUE_VALUE = 1.0

_COL0 = 2  # first corridor column; leaves room for the cue patch


class TMazeEnv(Env):
    n_actions = 3

    def __init__(self, config: EnvConfig):
        config.validate()
        if config.corridor_length > config.width - _COL0 - 2:
            raise ConfigError(
                f"corridor_length {config.corridor_length} does not fit width {config.width} "
                f"(max {config.width - _COL0 - 2})")
        super().__init__(config)
        self.corridor_length = config.corridor_length
        self.max_episode_steps = config.max_episode_steps or (config.corridor_length + 20)
        self._cue = CUE_LEFT
        self._pos = 0

    # -- pure dynamics (shared with the DP oracle) ---------------------------

    @staticmethod
    def initial_states(config: EnvConfig) -> list[tuple]:
        """Equally likely hidden states after reset: (cue, position)."""
        return [(CUE_LEFT, 0), (CUE_RIGHT, 0)]

    @staticmethod
    def transition(config: EnvConfig, state: tuple, action: int) -> tuple[tuple, float, bool]:
        cue, pos = state
        if pos < config.corridor_length:
            # corridor walls force forward motion whatever the action
            return (cue, pos + 1), 0.0, False
        if action == ACTION_FORWARD:
            return state, 0.0, False
        chose_left = action == ACTION_LEFT
        reward = 1.0 if (chose_left == (cue == CUE_LEFT)) else 0.0
        return state, reward, True

    # -- rendering ---------------------------------------------------------------

    def _render(self, cue: int, pos: int, t: int) -> np.ndarray:
        h, w = self.height, self.width
        frame = np.zeros((h, w), dtype=np.float32)
        row = h // 2
        cend = _COL0 + self.corridor_length
        frame[row, _COL0:cend + 1] = TRACK_VALUE
        frame[row - 1, cend] = TRACK_VALUE
        frame[row + 1, cend] = TRACK_VALUE
        frame[row, _COL0 + pos] = AGENT_VALUE
        if t == 0:
            if cue == CUE_LEFT:
                frame[0:2, 0:2] = CUE_VALUE
            else:
                frame[h - 2:h, 0:2] = CUE_VALUE
        return frame

    # -- env interface ---------------------------------------------------------------

    def reset(self) -> np.ndarray:
        options = self.initial_states(self.config)
        self._cue, self._pos = options[int(self._rng.integers(len(options)))]
        self._t = 0
        self._active = True
        return self._render(self._cue, self._pos, 0)

    def step(self, action: int) -> StepResult:
        self._require_active(action)
        (self._cue, self._pos), reward, done = self.transition(
            self.config, (self._cue, self._pos), action)
        self._t += 1
        truncated = False
        if not done and self._t >= self.max_episode_steps:
            done, truncated = True, True
        if done:
            self._active = False
        obs = self._render(self._cue, self._pos, self._t)
        return StepResult(obs=obs, reward=reward, done=done,
                          info={"truncated": truncated, "cue": self._cue, "pos": self._pos})

    def get_state(self) -> dict:
        return {"cue": self._cue, "pos": self._pos, "t": self._t,
                "active": self._active, "rng": self._rng_state()}

    def set_state(self, state: dict) -> None:
        self._cue = int(state["cue"])
        self._pos = int(state["pos"])
        self._t = int(state["t"])
        self._active = bool(state["active"])
        self._set_rng_state(state["rng"])

"""Deep Q-learning with experience replay and a periodically synced target network."""
from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from ..env import CourseEnv, EnvConfig
from ..skills import LearnerProfile
from .nn import Adam, ApproximatorParams, backward, forward, forward_cached
from .policy import RecommenderPolicy, TrainConfig, TrainingDiverged, skill_universe_of

log = logging.getLogger(__name__)


class ReplayBuffer:
    def __init__(self, capacity: int, n_inputs: int):
        self.capacity = capacity
        self.obs = np.zeros((capacity, n_inputs))
        self.next_obs = np.zeros((capacity, n_inputs))
        self.actions = np.zeros(capacity, dtype=np.int64)
        self.rewards = np.zeros(capacity)
        self.dones = np.zeros(capacity)
        self.size = 0
        self._pos = 0

    def add(self, obs, action, reward, next_obs, done):
        i = self._pos
        self.obs[i] = obs
        self.next_obs[i] = next_obs
        self.actions[i] = action
        self.rewards[i] = reward
        self.dones[i] = float(done)
        self._pos = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator):
        idx = rng.integers(0, self.size, size=batch_size)
        return self.obs[idx], self.actions[idx], self.rewards[idx], self.next_obs[idx], self.dones[idx]


def epsilon_at(step: int, cfg: TrainConfig) -> float:
    span = max(1, int(cfg.exploration_fraction * cfg.total_steps))
    frac = min(1.0, step / span)
    return cfg.exploration_initial + frac * (cfg.exploration_final - cfg.exploration_initial)


def td_loss_and_grad(params: ApproximatorParams, target: ApproximatorParams,
                     batch, gamma: float):
    """Mean squared TD error and its gradient w.r.t. ``params``."""
    obs, actions, rewards, next_obs, dones = batch
    q, cache = forward_cached(params, obs)
    q_next = forward(target, next_obs).max(axis=1)
    y = rewards + gamma * (1.0 - dones) * q_next
    rows = np.arange(len(actions))
    err = q[rows, actions] - y
    loss = float(np.mean(err ** 2))
    grad_out = np.zeros_like(q)
    grad_out[rows, actions] = 2.0 * err / len(actions)
    return loss, backward(params, cache, grad_out)


def train_value_agent(env: EnvConfig, learners: Sequence[LearnerProfile], cfg: TrainConfig,
                      skill_universe: Sequence[str] | None = None) -> RecommenderPolicy:
    if not learners:
        raise ValueError("need at least one learner to train on")
    universe = list(skill_universe) if skill_universe is not None else skill_universe_of(env, learners)
    genv = CourseEnv(env, universe)
    rng = np.random.default_rng(cfg.seed)
    params = ApproximatorParams.init(genv.n_inputs, cfg.hidden, genv.n_actions, rng)
    target = params.copy()
    opt = Adam(params, lr=cfg.learning_rate, max_grad_norm=10.0)
    buffer = ReplayBuffer(min(cfg.buffer_size, max(cfg.total_steps, 1)), genv.n_inputs)

    obs = genv.reset(learners[rng.integers(len(learners))].skills)
    for t in range(cfg.total_steps):
        if rng.random() < epsilon_at(t, cfg):
            action = int(rng.integers(genv.n_actions))
        else:
            action = int(np.argmax(forward(params, obs)))
        next_obs, reward, done, _ = genv.step(action)
        buffer.add(obs, action, reward, next_obs, done)
        obs = genv.reset(learners[rng.integers(len(learners))].skills) if done else next_obs

        if t >= cfg.learning_starts and t % cfg.train_freq == 0 and buffer.size >= cfg.batch_size:
            loss, grads = td_loss_and_grad(params, target, buffer.sample(cfg.batch_size, rng), cfg.gamma)
            if not np.isfinite(loss):
                raise TrainingDiverged(f"value agent TD loss became {loss} at step {t}")
            opt.step(params, grads)
        if (t + 1) % cfg.target_update == 0:
            target = params.copy()
        if (t + 1) % 20_000 == 0:
            log.debug("value agent step %d eps %.3f", t + 1, epsilon_at(t, cfg))

    if not params.is_finite():
        raise TrainingDiverged("value agent parameters are not finite")
    return RecommenderPolicy("value-agent", universe, genv.action_ids, params)

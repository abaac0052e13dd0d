"""Clipped-surrogate policy optimisation over softmax course preferences.

A policy network maps the encoded profile to one logit per course and a
separate value network estimates returns for the advantage baseline.
"""
from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from ..env import CourseEnv, EnvConfig
from ..skills import LearnerProfile
from .nn import Adam, ApproximatorParams, backward, forward, forward_cached
from .policy import RecommenderPolicy, TrainConfig, TrainingDiverged, skill_universe_of

log = logging.getLogger(__name__)


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


def policy_loss_and_grad(params: ApproximatorParams, obs: np.ndarray, actions: np.ndarray,
                         old_logp: np.ndarray, advantages: np.ndarray,
                         clip_range: float, ent_coef: float):
    """Negative clipped surrogate minus entropy bonus, and its gradient."""
    logits, cache = forward_cached(params, obs)
    logp_all = log_softmax(logits)
    p = np.exp(logp_all)
    rows = np.arange(len(actions))
    logp = logp_all[rows, actions]
    ratio = np.exp(logp - old_logp)
    unclipped = ratio * advantages
    clipped = np.clip(ratio, 1.0 - clip_range, 1.0 + clip_range) * advantages
    surrogate = np.minimum(unclipped, clipped)
    entropy = -(p * logp_all).sum(axis=1)
    n = len(actions)
    loss = float(-surrogate.mean() - ent_coef * entropy.mean())

    # The surrogate follows the ratio only where the unclipped term is the minimum.
    active = unclipped <= clipped
    d_logp = np.where(active, ratio * advantages, 0.0)
    onehot = np.zeros_like(p)
    onehot[rows, actions] = 1.0
    grad_logits = -(d_logp[:, None] * (onehot - p)) / n
    grad_logits += ent_coef * p * (logp_all + entropy[:, None]) / n
    return loss, backward(params, cache, grad_logits)


def value_loss_and_grad(params: ApproximatorParams, obs: np.ndarray, returns: np.ndarray):
    v, cache = forward_cached(params, obs)
    err = v[:, 0] - returns
    loss = float(0.5 * np.mean(err ** 2))
    return loss, backward(params, cache, (err / len(err))[:, None])


def gae(rewards, values, dones, last_value, gamma, lam):
    n = len(rewards)
    adv = np.zeros(n)
    running = 0.0
    for t in reversed(range(n)):
        next_value = last_value if t == n - 1 else values[t + 1]
        nonterminal = 1.0 - dones[t]
        delta = rewards[t] + gamma * next_value * nonterminal - values[t]
        running = delta + gamma * lam * nonterminal * running
        adv[t] = running
    return adv, adv + values


def train_policy_agent(env: EnvConfig, learners: Sequence[LearnerProfile], cfg: TrainConfig,
                       skill_universe: Sequence[str] | None = None) -> RecommenderPolicy:
    if not learners:
        raise ValueError("need at least one learner to train on")
    universe = list(skill_universe) if skill_universe is not None else skill_universe_of(env, learners)
    genv = CourseEnv(env, universe)
    rng = np.random.default_rng(cfg.seed)
    pi = ApproximatorParams.init(genv.n_inputs, cfg.hidden, genv.n_actions, rng, out_scale=0.01)
    vf = ApproximatorParams.init(genv.n_inputs, cfg.vf_hidden, 1, rng)
    pi_opt = Adam(pi, lr=cfg.learning_rate, max_grad_norm=cfg.max_grad_norm)
    vf_opt = Adam(vf, lr=cfg.learning_rate, max_grad_norm=cfg.max_grad_norm)

    n_steps = max(1, min(cfg.n_steps, cfg.total_steps))
    obs_buf = np.zeros((n_steps, genv.n_inputs))
    act_buf = np.zeros(n_steps, dtype=np.int64)
    rew_buf = np.zeros(n_steps)
    done_buf = np.zeros(n_steps)
    logp_buf = np.zeros(n_steps)

    obs = genv.reset(learners[rng.integers(len(learners))].skills)
    t = 0
    while t < cfg.total_steps:
        batch = min(n_steps, cfg.total_steps - t)
        for i in range(batch):
            logp_all = log_softmax(forward(pi, obs))
            action = int(rng.choice(genv.n_actions, p=np.exp(logp_all)))
            next_obs, reward, done, _ = genv.step(action)
            obs_buf[i], act_buf[i], rew_buf[i], done_buf[i] = obs, action, reward, float(done)
            logp_buf[i] = logp_all[action]
            obs = genv.reset(learners[rng.integers(len(learners))].skills) if done else next_obs
        t += batch

        values = forward(vf, obs_buf[:batch])[:, 0]
        last_value = float(forward(vf, obs)[0])
        adv, returns = gae(rew_buf[:batch], values, done_buf[:batch], last_value, cfg.gamma, cfg.gae_lambda)

        mb = min(cfg.minibatch_size, batch)
        for _ in range(cfg.n_epochs):
            order = rng.permutation(batch)
            for start in range(0, batch, mb):
                idx = order[start:start + mb]
                a = adv[idx]
                if len(idx) > 1:
                    a = (a - a.mean()) / (a.std() + 1e-8)
                ploss, pgrad = policy_loss_and_grad(pi, obs_buf[idx], act_buf[idx], logp_buf[idx], a,
                                                    cfg.clip_range, cfg.ent_coef)
                vloss, vgrad = value_loss_and_grad(vf, obs_buf[idx], returns[idx])
                if not (np.isfinite(ploss) and np.isfinite(vloss)):
                    raise TrainingDiverged(f"policy agent loss non-finite at step {t}: {ploss}, {vloss}")
                pi_opt.step(pi, pgrad)
                vf_opt.step(vf, vgrad)
        log.debug("policy agent step %d mean reward %.3f", t, rew_buf[:batch].mean())

    if not (pi.is_finite() and vf.is_finite()):
        raise TrainingDiverged("policy agent parameters are not finite")
    return RecommenderPolicy("policy-agent", universe, genv.action_ids, pi)

"""Finite-difference check of the hand-written gradients on random small networks."""
import argparse

import numpy as np

from skillpath.agents import dqn, ppo
from skillpath.agents.nn import ApproximatorParams, forward, gradient_check


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--networks", type=int, default=50)
    p.add_argument("--epsilon", type=float, default=1e-5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = np.random.default_rng(args.seed)

    worst = {"td": 0.0, "clip": 0.0, "value": 0.0}
    for _ in range(args.networks):
        n_in, hidden, n_out = (int(x) for x in rng.integers(2, 8, size=3))
        q = ApproximatorParams.init(n_in, hidden, n_out, rng)
        target = ApproximatorParams.init(n_in, hidden, n_out, rng)
        obs = rng.random((8, n_in))
        batch = (obs, rng.integers(0, n_out, size=8), rng.normal(size=8), rng.random((8, n_in)),
                 (rng.random(8) < 0.3).astype(float))
        f = lambda p_: dqn.td_loss_and_grad(p_, target, batch, 0.99)
        worst["td"] = max(worst["td"], gradient_check(q, lambda p_: f(p_)[0], lambda p_: f(p_)[1], args.epsilon))

        acts = rng.integers(0, n_out, size=8)
        old = ppo.log_softmax(forward(q, obs))[np.arange(8), acts] + rng.normal(size=8) * 0.05
        adv = rng.normal(size=8)
        g = lambda p_: ppo.policy_loss_and_grad(p_, obs, acts, old, adv, 0.2, 0.01)
        worst["clip"] = max(worst["clip"], gradient_check(q, lambda p_: g(p_)[0], lambda p_: g(p_)[1], args.epsilon))

        v = ApproximatorParams.init(n_in, hidden, 1, rng)
        ret = rng.normal(size=8)
        h = lambda p_: ppo.value_loss_and_grad(p_, obs, ret)
        worst["value"] = max(worst["value"], gradient_check(v, lambda p_: h(p_)[0], lambda p_: h(p_)[1], args.epsilon))

    for name, err in worst.items():
        print(f"{name:6s} max relative error {err:.2e}")


if __name__ == "__main__":
    main()

import numpy as np
import pytest

from skillpath.agents import dqn, ppo
from skillpath.agents.nn import Adam, ApproximatorParams, backward, forward, forward_cached, gradient_check

from oracles import naive_forward


def rand_params(rng, n_in=4, hidden=5, n_out=3):
    p = ApproximatorParams.init(n_in, hidden, n_out, rng)
    p.b1[:] = rng.normal(size=hidden) * 0.1
    p.b2[:] = rng.normal(size=n_out) * 0.1
    return p


def test_zero_weights_give_zero_output():
    p = ApproximatorParams.zeros(3, 4, 2)
    assert forward(p, np.ones(3)).tolist() == [0.0, 0.0]


def test_unit_network():
    p = ApproximatorParams(np.ones((1, 1)), np.zeros(1), np.ones((1, 1)), np.zeros(1))
    assert forward(p, np.array([1.0])).tolist() == [1.0]


def test_forward_matches_loop_implementation():
    rng = np.random.default_rng(3)
    for _ in range(20):
        p = rand_params(rng, 6, 7, 4)
        x = rng.normal(size=6)
        ref = naive_forward(p.W1.tolist(), p.b1.tolist(), p.W2.tolist(), p.b2.tolist(), x.tolist())
        np.testing.assert_allclose(forward(p, x), ref, rtol=0, atol=1e-12)


def test_batched_forward_equals_rowwise():
    rng = np.random.default_rng(0)
    p = rand_params(rng)
    X = rng.normal(size=(5, 4))
    np.testing.assert_allclose(forward(p, X), np.stack([forward(p, x) for x in X]), atol=1e-14)


def test_shape_checks():
    with pytest.raises(ValueError):
        ApproximatorParams(np.zeros((2, 3)), np.zeros(2), np.zeros((3, 1)), np.zeros(1))
    with pytest.raises(ValueError):
        forward(ApproximatorParams.zeros(2, 3, 1), np.zeros(5))


def _sq_loss(target, X):
    def loss(p):
        return float(0.5 * np.sum((forward(p, X) - target) ** 2))

    def grad(p):
        out, cache = forward_cached(p, X)
        return backward(p, cache, out - target)

    return loss, grad


def test_gradient_check_linear_loss_is_exact():
    rng = np.random.default_rng(1)
    p = rand_params(rng)
    x = rng.normal(size=4)
    w = rng.normal(size=3)
    # linear in W2 and b2 only; W1/b1 enter through relu, which is piecewise linear
    loss = lambda q: float(forward(q, x) @ w)

    def grad(q):
        _, cache = forward_cached(q, x)
        return backward(q, cache, w)

    assert gradient_check(p, loss, grad, 1e-5) < 1e-9


def test_gradient_check_random_squared_loss():
    rng = np.random.default_rng(2)
    p = rand_params(rng)
    X = rng.normal(size=(6, 4))
    loss, grad = _sq_loss(rng.normal(size=(6, 3)), X)
    assert gradient_check(p, loss, grad, 1e-5) < 1e-4


def test_gradient_check_constant_loss_is_zero():
    p = rand_params(np.random.default_rng(0))
    zero = lambda q: {k: np.zeros_like(v) for k, v in q.arrays().items()}
    assert gradient_check(p, lambda q: 3.0, zero, 1e-5) == 0.0


def test_gradient_check_detects_wrong_gradient():
    rng = np.random.default_rng(5)
    p = rand_params(rng)
    X = rng.normal(size=(3, 4))
    loss, grad = _sq_loss(np.zeros((3, 3)), X)
    bad = lambda q: {k: 2 * v for k, v in grad(q).items()}
    assert gradient_check(p, loss, bad, 1e-5) > 0.1


def test_gradient_check_epsilon_range():
    p = ApproximatorParams.zeros(1, 1, 1)
    with pytest.raises(ValueError):
        gradient_check(p, lambda q: 0.0, lambda q: {}, 0.1)


def test_td_loss_gradient():
    rng = np.random.default_rng(7)
    p, target = rand_params(rng), rand_params(rng)
    batch = (rng.random((8, 4)), rng.integers(0, 3, size=8), rng.normal(size=8), rng.random((8, 4)),
             (rng.random(8) < 0.3).astype(float))
    loss = lambda q: dqn.td_loss_and_grad(q, target, batch, 0.9)[0]
    grad = lambda q: dqn.td_loss_and_grad(q, target, batch, 0.9)[1]
    assert gradient_check(p, loss, grad, 1e-5) < 1e-4


def test_policy_loss_gradient():
    rng = np.random.default_rng(8)
    p = rand_params(rng)
    obs = rng.random((10, 4))
    actions = rng.integers(0, 3, size=10)
    old = ppo.log_softmax(forward(p, obs))[np.arange(10), actions] + rng.normal(size=10) * 0.05
    adv = rng.normal(size=10)
    f = lambda q: ppo.policy_loss_and_grad(q, obs, actions, old, adv, 0.2, 0.01)
    assert gradient_check(p, lambda q: f(q)[0], lambda q: f(q)[1], 1e-5) < 1e-4


def test_value_loss_gradient():
    rng = np.random.default_rng(9)
    p = rand_params(rng, 4, 5, 1)
    obs, ret = rng.random((7, 4)), rng.normal(size=7)
    f = lambda q: ppo.value_loss_and_grad(q, obs, ret)
    assert gradient_check(p, lambda q: f(q)[0], lambda q: f(q)[1], 1e-5) < 1e-4


def test_adam_reduces_squared_loss():
    rng = np.random.default_rng(4)
    p = rand_params(rng)
    X = rng.normal(size=(16, 4))
    loss, grad = _sq_loss(rng.normal(size=(16, 3)), X)
    opt = Adam(p, lr=1e-2)
    start = loss(p)
    for _ in range(300):
        opt.step(p, grad(p))
    assert loss(p) < 0.5 * start


def test_gae_without_discounting_sums_rewards():
    adv, ret = ppo.gae(np.array([1.0, 2.0, 3.0]), np.zeros(3), np.array([0.0, 0.0, 1.0]), 0.0, 1.0, 1.0)
    assert ret.tolist() == [6.0, 5.0, 3.0]

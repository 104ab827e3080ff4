"""Tape correctness against independent oracles.

The gradient oracle is central finite differences applied to the plain
numpy forward value; the matmul oracle is a triple loop.
"""

import numpy as np
import pytest

from pollinet import autodiff as ad


def fd_gradient(f, x, h=1e-5):
    """Central finite differences of a scalar function, entry by entry."""
    g = np.zeros_like(x)
    for i in range(x.shape[0]):
        for j in range(x.shape[1]):
            xp = x.copy()
            xm = x.copy()
            xp[i, j] += h
            xm[i, j] -= h
            g[i, j] = (f(xp) - f(xm)) / (2.0 * h)
    return g


def rel_err(a, b):
    return np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-12)


def test_matmul_forward_matches_triple_loop():
    rng = np.random.default_rng(7)
    for _ in range(5):
        n, k, m = rng.integers(1, 6, size=3)
        a = rng.standard_normal((n, k))
        b = rng.standard_normal((k, m))
        want = np.zeros((n, m))
        for i in range(n):
            for j in range(m):
                for t in range(k):
                    want[i, j] += a[i, t] * b[t, j]
        got = ad.matmul(ad.tensor(a), ad.tensor(b)).data
        assert np.allclose(got, want, atol=1e-12)


def test_matmul_gradients_match_fd():
    rng = np.random.default_rng(11)
    a0 = rng.standard_normal((4, 3))
    b0 = rng.standard_normal((3, 5))
    w = rng.standard_normal((4, 5))

    def val(a_arr, b_arr):
        return float(((a_arr @ b_arr) * w).sum())

    a = ad.tensor(a0)
    b = ad.tensor(b0)
    out = ad.total(ad.multiply(ad.matmul(a, b), ad.tensor(w)))
    ga, gb = ad.gradients(out, [a, b])
    assert rel_err(ga, fd_gradient(lambda x: val(x, b0), a0)) < 1e-6
    assert rel_err(gb, fd_gradient(lambda x: val(a0, x), b0)) < 1e-6


def test_two_layer_composition_gradient_matches_fd():
    # relu/sigmoid/exp/log/clip chained through matmuls, checked entrywise
    rng = np.random.default_rng(23)
    for trial in range(4):
        x0 = rng.uniform(-1.5, 1.5, size=(5, 4))
        w1 = rng.standard_normal((4, 6)) * 0.7
        w2 = rng.standard_normal((6, 3)) * 0.7

        def val(x_arr):
            h = np.maximum(x_arr @ w1, 0.0)
            s = 1.0 / (1.0 + np.exp(-(h @ w2)))
            p = np.clip(s, 0.05, 0.95)
            return float(np.mean(np.log(p) + p * p))

        x = ad.tensor(x0)
        h = ad.relu(ad.matmul(x, ad.tensor(w1)))
        s = ad.sigmoid(ad.matmul(h, ad.tensor(w2)))
        p = ad.clip(s, 0.05, 0.95)
        out = ad.mean(ad.add(ad.log(p), ad.multiply(p, p)))
        got = ad.gradient(out, x)
        want = fd_gradient(val, x0)
        assert rel_err(got, want) < 1e-4, f"trial {trial}"


def test_exp_log_shift_scale_transpose_gradient():
    rng = np.random.default_rng(5)
    x0 = rng.uniform(0.5, 2.0, size=(3, 4))

    def val(x_arr):
        return float((np.exp(0.5 * x_arr.T) - 2.0 * np.log(x_arr.T) + 3.0).sum())

    x = ad.tensor(x0)
    t = ad.transpose(x)
    out = ad.total(ad.shift(ad.subtract(ad.exp(ad.scale(t, 0.5)), ad.scale(ad.log(t), 2.0)), 3.0))
    assert abs(out.item() - val(x0)) < 1e-10
    assert rel_err(ad.gradient(out, x), fd_gradient(val, x0)) < 1e-5


def test_broadcast_add_and_multiply_unbroadcast():
    rng = np.random.default_rng(13)
    x0 = rng.standard_normal((4, 3))
    r0 = rng.standard_normal((1, 3))
    c0 = rng.standard_normal((4, 1))

    def val(x_arr, r_arr, c_arr):
        return float(((x_arr + r_arr) * c_arr).sum())

    x, r, c = ad.tensor(x0), ad.tensor(r0), ad.tensor(c0)
    out = ad.total(ad.multiply(ad.add(x, r), c))
    gx, gr, gc = ad.gradients(out, [x, r, c])
    assert gx.shape == x0.shape and gr.shape == r0.shape and gc.shape == c0.shape
    assert rel_err(gr, fd_gradient(lambda a: val(x0, a, c0), r0)) < 1e-5
    assert rel_err(gc, fd_gradient(lambda a: val(x0, r0, a), c0)) < 1e-5


def test_gradient_accumulates_over_reused_node():
    # y = x*x + x: dy/dx = 2x + 1
    x0 = np.array([[0.3, -1.2], [2.0, 0.0]])
    x = ad.tensor(x0)
    out = ad.total(ad.add(ad.multiply(x, x), x))
    assert np.allclose(ad.gradient(out, x), 2.0 * x0 + 1.0, atol=1e-12)


def test_gradient_linearity():
    rng = np.random.default_rng(3)
    x0 = rng.standard_normal((3, 3))
    w = rng.standard_normal((3, 3))

    def grad_of(alpha, beta):
        x = ad.tensor(x0)
        f1 = ad.total(ad.matmul(x, ad.tensor(w)))
        f2 = ad.mean(ad.multiply(x, x))
        out = ad.add(ad.scale(f1, alpha), ad.scale(f2, beta))
        return ad.gradient(out, x)

    g = grad_of(2.0, -3.0)
    g1 = grad_of(1.0, 0.0)
    g2 = grad_of(0.0, 1.0)
    assert np.allclose(g, 2.0 * g1 - 3.0 * g2, atol=1e-10)


def test_sigmoid_strictly_inside_unit_interval():
    x = ad.tensor(np.array([[-1e4, -30.0, 0.0, 30.0, 1e4]]).T)
    s = ad.sigmoid(x).data
    assert np.all(s > 0.0) and np.all(s < 1.0)
    assert abs(s[2, 0] - 0.5) < 1e-15


def test_relu_and_clip_zero_gradient_outside():
    x0 = np.array([[-1.0, 2.0, 0.5]])
    x = ad.tensor(x0)
    out = ad.total(ad.relu(x))
    assert np.allclose(ad.gradient(out, x), [[0.0, 1.0, 1.0]])
    x2 = ad.tensor(x0)
    out2 = ad.total(ad.clip(x2, 0.0, 1.0))
    assert np.allclose(ad.gradient(out2, x2), [[0.0, 0.0, 1.0]])


def test_mean_and_total_gradients():
    x0 = np.ones((2, 5))
    x = ad.tensor(x0)
    assert np.allclose(ad.gradient(ad.mean(x), x), np.full((2, 5), 0.1))
    x = ad.tensor(x0)
    assert np.allclose(ad.gradient(ad.total(x), x), np.ones((2, 5)))


def test_gradient_rejects_foreign_tensor():
    x = ad.tensor(np.ones((2, 2)))
    y = ad.tensor(np.ones((2, 2)))
    out = ad.mean(ad.multiply(x, x))
    with pytest.raises(ValueError, match="not part of this computation graph"):
        ad.gradient(out, y)


def test_gradient_rejects_nonscalar_output():
    x = ad.tensor(np.ones((2, 2)))
    with pytest.raises(ValueError, match="scalar"):
        ad.gradient(ad.multiply(x, x), x)


def test_dead_branch_gets_zero_gradient():
    # x feeds a relu that is fully off; gradient exists and is zero
    x = ad.tensor(np.full((2, 2), -3.0))
    out = ad.total(ad.relu(x))
    assert np.allclose(ad.gradient(out, x), np.zeros((2, 2)))


def test_non_matrix_input_rejected():
    with pytest.raises(ValueError, match="2-D"):
        ad.tensor(np.ones(3))


def test_custom_node_backward_is_used():
    # square via the custom-node escape hatch
    x0 = np.array([[1.0, -2.0]])
    x = ad.tensor(x0)

    def backward(g):
        ad.accumulate(x, g * 2.0 * x0)

    sq = ad.custom(x0 * x0, [x], backward)
    out = ad.total(sq)
    assert np.allclose(ad.gradient(out, x), 2.0 * x0, atol=1e-14)

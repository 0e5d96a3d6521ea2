import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from fcnn.exceptions import KernelError, LabelRangeError, MissingCacheError
from fcnn.kernels import (
    ConvSpec,
    batchnorm_backward,
    batchnorm_forward,
    conv_backward,
    conv_forward,
    cross_entropy,
    dropout,
    global_avgpool2d,
    leaky_relu,
    maxpool_backward,
    maxpool_forward,
    one_hot,
    softmax,
)
from fcnn.kernels.normalization import batch_statistics
from fcnn.kernels.oracles import conv2d_oracle, conv3d_oracle, maxpool_oracle
from fcnn.kernels.windows import pooled_extent, same_padding
from fcnn.state import LayerState

ORACLE_CASES = range(50)


def _random_conv_case(seed, rank):
    rng = np.random.default_rng(seed)
    kernel = tuple(int(k) for k in rng.integers(1, 4, size=rank))
    strides = tuple(int(s) for s in rng.integers(1, 3, size=rank))
    padding = ['same', 'valid'][seed % 2]
    extents = tuple(int(k + e) for k, e in zip(kernel, rng.integers(0, 4, size=rank)))
    c_in, c_out = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    batch = int(rng.integers(1, 3))
    x = rng.standard_normal((batch,) + extents + (c_in,))
    weights = rng.standard_normal(kernel + (c_in, c_out))
    bias = rng.standard_normal(c_out)
    return ConvSpec(kernel, strides, padding, c_in, c_out), x, weights, bias


@pytest.mark.parametrize('seed', ORACLE_CASES)
def test_conv3d_matches_direct_loops(seed):
    spec, x, weights, bias = _random_conv_case(seed, 3)
    expected = conv3d_oracle(x, weights, bias, spec.strides, spec.padding)
    out = conv_forward(x, spec, weights, bias)
    assert out.shape == expected.shape
    assert np.max(np.abs(out - expected)) <= 1e-6


@pytest.mark.parametrize('seed', ORACLE_CASES)
def test_conv2d_matches_direct_loops(seed):
    spec, x, weights, bias = _random_conv_case(1000 + seed, 2)
    expected = conv2d_oracle(x, weights, bias, spec.strides, spec.padding)
    out = conv_forward(x, spec, weights, bias)
    assert out.shape == expected.shape
    assert np.max(np.abs(out - expected)) <= 1e-6


@pytest.mark.parametrize('seed', ORACLE_CASES)
def test_maxpool_matches_window_scan_exactly(seed):
    rng = np.random.default_rng(2000 + seed)
    size = tuple(int(k) for k in rng.integers(1, 4, size=3))
    strides = tuple(int(s) for s in rng.integers(1, 4, size=3))
    x = rng.standard_normal((int(rng.integers(1, 3)),) + tuple(int(n) for n in rng.integers(1, 8, size=3)) + (2,))

    expected, expected_winners = maxpool_oracle(x, size, strides)
    out, cache = maxpool_forward(x, size, strides)
    assert_array_equal(out, expected)
    assert_array_equal(cache.winners, expected_winners)


def test_same_padding_keeps_ceil_extent():
    assert same_padding(64, 3, 1) == (1, 1)
    assert same_padding(30, 3, 1) == (1, 1)
    assert same_padding(5, 2, 2) == (0, 1)


def test_pooled_extent_ceil_mode():
    assert pooled_extent(64, 3, 3) == 22
    assert pooled_extent(30, 3, 3) == 10
    assert pooled_extent(64, 3, 3, ceil_mode=False) == 21
    assert pooled_extent(2, 3, 3) == 1


def test_valid_convolution_larger_than_input_fails():
    spec = ConvSpec((3, 3), (1, 1), 'valid', 1, 1)
    with pytest.raises(KernelError):
        conv_forward(np.zeros((1, 2, 2, 1)), spec, np.zeros(spec.weight_shape), np.zeros(1))


def test_conv_rejects_channel_mismatch():
    spec = ConvSpec((1, 1, 1), (1, 1, 1), 'same', 2, 1)
    with pytest.raises(KernelError):
        conv_forward(np.zeros((1, 2, 2, 2, 3)), spec, np.zeros(spec.weight_shape), np.zeros(1))


def test_maxpool_ties_go_to_first_offset():
    x = np.ones((1, 3, 3, 3, 1))
    out, cache = maxpool_forward(x, (3, 3, 3))
    assert out.shape == (1, 1, 1, 1, 1)
    assert cache.winners.item() == 0

    grad = maxpool_backward(np.ones_like(out), cache)
    assert grad[0, 0, 0, 0, 0] == 1
    assert grad.sum() == 1


def test_maxpool_backward_routes_to_winner_only():
    x = np.zeros((1, 4, 4, 4, 1))
    x[0, 1, 2, 0, 0] = 5.0
    out, cache = maxpool_forward(x, (3, 3, 3))
    assert out.shape == (1, 2, 2, 2, 1)
    grad = maxpool_backward(np.full(out.shape, 2.0), cache)
    assert grad[0, 1, 2, 0, 0] == 2.0
    assert grad.shape == x.shape


def test_maxpool_backward_needs_cache():
    with pytest.raises(MissingCacheError):
        maxpool_backward(np.zeros((1, 1, 1, 1, 1)), None)


def test_batchnorm_train_updates_running_statistics():
    rng = np.random.default_rng(0)
    x = rng.normal(3.0, 2.0, size=(4, 3, 3, 2, 5))
    state = LayerState.batchnorm(5, dtype=np.float64)

    out, cache = batchnorm_forward(x, state, 'train')
    assert_allclose(out.mean(axis=(0, 1, 2, 3)), 0, atol=1e-10)
    assert_allclose(out.var(axis=(0, 1, 2, 3)), 1, atol=1e-3)
    assert_allclose(state.running_mean, 0.01 * x.mean(axis=(0, 1, 2, 3)))
    assert_allclose(state.running_var, 0.99 + 0.01 * x.var(axis=(0, 1, 2, 3)))


def test_batchnorm_infer_leaves_state_untouched():
    x = np.random.default_rng(1).standard_normal((2, 3, 3, 4))
    state = LayerState.batchnorm(4, dtype=np.float64)
    state.running_mean[...] = 0.5
    before = (state.running_mean.copy(), state.running_var.copy())

    out, _ = batchnorm_forward(x, state, 'infer')
    assert_allclose(out, (x - 0.5) / np.sqrt(1 + state.epsilon))
    assert_array_equal(state.running_mean, before[0])
    assert_array_equal(state.running_var, before[1])


def test_batchnorm_backward_needs_cache():
    with pytest.raises(MissingCacheError):
        batchnorm_backward(np.zeros((1, 2)), None)


def test_leaky_relu_slope():
    x = np.array([-2.0, 0.0, 3.0])
    assert_allclose(leaky_relu(x), [-0.6, 0.0, 3.0])
    with pytest.raises(KernelError):
        leaky_relu(x, alpha=1.5)


def test_dropout_modes():
    x = np.ones((1000,), dtype=np.float32)
    out, keep = dropout(x, 0.25, 'infer')
    assert out is x and keep is None

    out, keep = dropout(x, 0.25, 'train', np.random.default_rng(0))
    assert set(np.unique(out)) <= {0.0, np.float32(1 / 0.75)}
    assert 0.65 < keep.mean() < 0.85
    with pytest.raises(KernelError):
        dropout(x, 0.25, 'train')


def test_softmax_contract_on_large_logits():
    rng = np.random.default_rng(0)
    logits = rng.uniform(-1e3, 1e3, size=(10_000, 8))
    probabilities = softmax(logits)
    assert np.all((probabilities >= 0) & (probabilities <= 1))
    assert np.max(np.abs(probabilities.sum(axis=1) - 1)) <= 1e-6

    shifts = rng.uniform(-100, 100, size=(10_000, 1))
    assert np.max(np.abs(softmax(logits + shifts) - probabilities)) <= 1e-6


def test_cross_entropy_value_and_gradient():
    probabilities = np.array([[0.7, 0.2, 0.1], [0.1, 0.1, 0.8]])
    loss, grad = cross_entropy(probabilities, [0, 2])
    assert loss == pytest.approx(-(np.log(0.7) + np.log(0.8)) / 2)
    assert_allclose(grad, (probabilities - one_hot([0, 2], 3)) / 2)

    same_loss, _ = cross_entropy(probabilities, one_hot([0, 2], 3))
    assert same_loss == pytest.approx(loss)


def test_labels_out_of_range():
    with pytest.raises(LabelRangeError):
        one_hot([0, 3], 3)
    with pytest.raises(LabelRangeError):
        cross_entropy(np.full((2, 3), 1 / 3), [0, -1])


def test_global_average_pool():
    x = np.arange(2 * 2 * 2 * 3, dtype=np.float64).reshape(2, 2, 2, 3)
    assert_allclose(global_avgpool2d(x), x.mean(axis=(1, 2)))
    with pytest.raises(KernelError):
        global_avgpool2d(np.zeros((1, 2, 2, 2, 1)))


def test_dropout_keeps_expected_share_of_a_million_elements():
    x = np.ones(1_000_000)
    out, keep = dropout(x, 0.25, 'train', np.random.default_rng(7))
    assert abs(keep.mean() - 0.75) <= 0.005
    assert abs(out.mean() - 1.0) <= 0.01


def test_softmax_closed_forms():
    logits = np.zeros((1, 60))
    assert_allclose(softmax(logits), np.full((1, 60), 1 / 60), atol=1e-12)

    logits[0, 0] = np.log(59)
    assert softmax(logits)[0, 0] == pytest.approx(0.5, abs=1e-12)


def test_centred_identity_kernel_reproduces_input():
    rng = np.random.default_rng(3)
    x = rng.standard_normal((2, 5, 4, 6, 3))
    weights = np.zeros((3, 3, 3, 3, 3))
    weights[1, 1, 1] = np.eye(3)
    spec = ConvSpec((3, 3, 3), (1, 1, 1), 'same', 3, 3)
    assert_allclose(conv_forward(x, spec, weights, np.zeros(3)), x, rtol=0, atol=1e-12)


@pytest.mark.parametrize('seed', range(10))
def test_conv_backward_is_the_adjoint_of_forward(seed):
    spec, x, weights, _ = _random_conv_case(3000 + seed, 3)
    zero_bias = np.zeros(spec.out_channels)
    out = conv_forward(x, spec, weights, zero_bias)
    grad_out = np.random.default_rng(seed).standard_normal(out.shape)
    grad_x, grad_w, grad_b = conv_backward(grad_out, x, spec, weights)

    inner = np.sum(out * grad_out)
    assert np.sum(x * grad_x) == pytest.approx(inner, rel=1e-9, abs=1e-9)
    assert np.sum(weights * grad_w) == pytest.approx(inner, rel=1e-9, abs=1e-9)
    assert_allclose(grad_b, grad_out.sum(axis=(0, 1, 2, 3)))


def test_batchnorm_constant_channel_and_shift():
    x = np.random.default_rng(4).standard_normal((3, 4, 4, 2, 2))
    x[..., 0] = 7.0
    state = LayerState.batchnorm(2, dtype=np.float64)
    state.beta[...] = 5.0

    out, _ = batchnorm_forward(x, state, 'train')
    assert_allclose(out[..., 0], 5.0, atol=1e-9)
    assert_allclose(out.mean(axis=(0, 1, 2, 3)), [5.0, 5.0], atol=1e-9)

    centred, _ = batchnorm_forward(x, LayerState.batchnorm(2, dtype=np.float64), 'train')
    assert_allclose(centred[..., 0], 0.0, atol=1e-9)


def test_batch_statistics_match_two_pass_variance():
    x = 1e4 + np.random.default_rng(5).standard_normal((6, 3, 3, 2, 4))
    mean, var = batch_statistics(x)
    flat = x.reshape(-1, 4)
    two_pass_mean = flat.sum(axis=0) / len(flat)
    two_pass_var = ((flat - two_pass_mean) ** 2).sum(axis=0) / len(flat)
    assert_allclose(mean, two_pass_mean, rtol=1e-12)
    assert_allclose(var, two_pass_var, rtol=1e-6)

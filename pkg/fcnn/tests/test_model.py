import dataclasses

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from fcnn.exceptions import FreezeError, MissingCacheError, ModelInputError, StaleCacheError
from fcnn.kernels import cross_entropy
from fcnn.model import (
    HEAD,
    ModelSpec,
    analytic_parameter_count,
    assemble,
    build,
    freeze_for_finetune,
    gradcheck_spec,
    swap_head,
)

LAYER_SHAPES = [
    ('conv3d_1', (64, 64, 30, 32)),
    ('bn_1', (64, 64, 30, 32)),
    ('lrelu_1', (64, 64, 30, 32)),
    ('conv3d_2', (64, 64, 30, 32)),
    ('bn_2', (64, 64, 30, 32)),
    ('lrelu_2', (64, 64, 30, 32)),
    ('maxpool', (22, 22, 10, 32)),
    ('dropout_1', (22, 22, 10, 32)),
    ('conv3d_3', (20, 20, 8, 64)),
    ('bn_3', (20, 20, 8, 64)),
    ('lrelu_3', (20, 20, 8, 64)),
    ('conv3d_4', (18, 18, 6, 64)),
    ('bn_4', (18, 18, 6, 64)),
    ('lrelu_4', (18, 18, 6, 64)),
    ('dropout_2', (18, 18, 6, 64)),
    ('conv3d_5', (18, 18, 1, 128)),
    ('reshape', (18, 18, 128)),
    ('conv2d_1', (8, 8, 128)),
    ('bn_5', (8, 8, 128)),
    ('lrelu_5', (8, 8, 128)),
    ('conv2d_2', (8, 8, 60)),
    ('avgpool', (60,)),
    ('softmax', (60,)),
]

FINETUNE_TRAINABLE = {
    'conv3d_5.weights', 'conv3d_5.bias',
    'conv2d_1.weights', 'conv2d_1.bias',
    'bn_5.gamma', 'bn_5.beta',
    'conv2d_2.weights', 'conv2d_2.bias',
}


def small_spec(n_classes=3, **changes):
    return dataclasses.replace(gradcheck_spec(n_classes), **changes)


def small_batch(spec, batch=2, seed=0):
    return np.random.default_rng(seed).uniform(0, 1, size=(batch,) + spec.input_shape + (1,)).astype(np.float32)


@pytest.mark.slow
def test_full_size_forward_matches_layer_table():
    model = build(60, seed=0)
    clip = np.random.default_rng(0).uniform(0, 1, size=(1, 64, 64, 30, 1)).astype(np.float32)
    produced = [(name, out.shape[1:]) for name, out in model.activations(clip) if name != 'input']
    assert produced == LAYER_SHAPES

    probabilities = model.predict(clip)
    assert probabilities.shape == (1, 60)
    assert abs(float(probabilities.sum()) - 1.0) <= 1e-6


def test_layer_names_in_order():
    model = assemble(ModelSpec(n_classes=60))
    assert [layer.name for layer in model.layers] == [name for name, _ in LAYER_SHAPES]
    assert model['conv3d_5'].spec.kernel == (1, 1, 6)


@pytest.mark.parametrize('n_classes', [60, 10, 2])
def test_parameter_count_matches_closed_form(n_classes):
    model = assemble(ModelSpec(n_classes=n_classes))
    assert model.parameter_count() == analytic_parameter_count(model.spec)


def test_parameter_count_for_sixty_classes():
    assert assemble(ModelSpec(n_classes=60)).parameter_count() == 399_836


def test_n_classes_must_be_at_least_two():
    with pytest.raises(ModelInputError):
        ModelSpec(n_classes=1)


def test_input_too_small_for_network():
    with pytest.raises(ModelInputError):
        assemble(ModelSpec(n_classes=2, input_shape=(8, 8, 6)))


def test_batch_axis_errors_name_the_axis():
    spec = small_spec()
    model = build(3, spec=spec)
    with pytest.raises(ModelInputError, match='axis 3 \\(time\\)'):
        model.predict(np.zeros((1, 8, 8, 5, 1)))
    with pytest.raises(ModelInputError, match='5 axes'):
        model.predict(np.zeros((8, 8, 6, 1)))


def test_build_is_deterministic_per_seed():
    spec = small_spec()
    a, b, c = build(3, 5, spec), build(3, 5, spec), build(3, 6, spec)
    for name, value in a.parameters().items():
        assert_array_equal(value, b.parameters()[name])
    assert not np.array_equal(a['conv3d_1'].state.weights, c['conv3d_1'].state.weights)


def test_infer_mode_returns_probabilities_without_cache():
    spec = small_spec()
    model = build(3, spec=spec)
    probabilities, cache = model.forward(small_batch(spec), 'infer')
    assert cache is None
    assert_allclose(probabilities.sum(axis=1), 1.0, atol=1e-6)


def test_infer_is_repeatable_and_ignores_dropout():
    spec = small_spec(dropout_rate=0.5)
    model = build(3, spec=spec)
    batch = small_batch(spec)
    assert_array_equal(model.predict(batch), model.predict(batch))


def test_backward_rejects_missing_and_stale_caches():
    spec = small_spec()
    model = build(3, spec=spec)
    batch = small_batch(spec)
    labels = np.array([0, 2])

    with pytest.raises(MissingCacheError):
        model.backward(None, np.zeros((2, 3)))

    probabilities, cache = model.forward(batch, 'train', np.random.default_rng(0))
    _, grad = cross_entropy(probabilities, labels)
    model.backward(cache, grad)
    with pytest.raises(StaleCacheError):
        model.backward(cache, grad)

    probabilities, cache = model.forward(batch, 'train', np.random.default_rng(0))
    model.touch()
    with pytest.raises(StaleCacheError):
        model.backward(cache, grad)


def test_freeze_leaves_last_three_blocks_trainable():
    model = freeze_for_finetune(assemble(ModelSpec(n_classes=60)), 3)
    assert set(model.parameters(trainable_only=True)) == FINETUNE_TRAINABLE
    assert not model['bn_4'].trainable
    assert model.trainable_tail == 3


@pytest.mark.parametrize('tail', [0, 8])
def test_freeze_tail_out_of_range(tail):
    with pytest.raises(FreezeError):
        freeze_for_finetune(assemble(ModelSpec(n_classes=60)), tail)


def test_backward_after_freeze_only_returns_trainable_gradients():
    spec = small_spec()
    model = freeze_for_finetune(build(3, spec=spec), 3)
    probabilities, cache = model.forward(small_batch(spec), 'train', np.random.default_rng(0))
    _, grad = cross_entropy(probabilities, [1, 2])
    assert set(model.backward(cache, grad)) == FINETUNE_TRAINABLE


def test_frozen_batchnorm_keeps_running_statistics():
    spec = small_spec()
    model = freeze_for_finetune(build(3, spec=spec), 3)
    before = {name: value.copy() for name, value in model.buffers().items()}
    model.forward(small_batch(spec), 'train', np.random.default_rng(0))

    after = model.buffers()
    for name in before:
        if name.startswith('bn_5'):
            continue
        assert_array_equal(after[name], before[name])
    assert not np.array_equal(after['bn_5.running_mean'], before['bn_5.running_mean'])


def test_swap_head_changes_class_count_only():
    spec = small_spec()
    model = build(3, spec=spec)
    kept = model['conv2d_1'].state.weights.copy()
    swap_head(model, 5, np.random.default_rng(0))

    assert model.n_classes == 5
    assert model[HEAD].spec.out_channels == 5
    assert_array_equal(model['conv2d_1'].state.weights, kept)
    assert model.predict(small_batch(spec)).shape == (2, 5)


def test_duplicated_clip_gives_identical_rows():
    spec = small_spec()
    model = build(3, spec=spec)
    clip = small_batch(spec, batch=1)
    probabilities = model.predict(np.concatenate([clip, clip]))
    assert_allclose(probabilities[0], probabilities[1], rtol=0, atol=1e-7)


def test_train_forward_is_repeatable_for_a_seed():
    spec = small_spec(dropout_rate=0.5)
    batch = small_batch(spec, batch=4)
    first, _ = build(3, spec=spec).forward(batch, 'train', np.random.default_rng(8))
    second, _ = build(3, spec=spec).forward(batch, 'train', np.random.default_rng(8))
    assert_array_equal(first, second)


def test_initial_weights_follow_the_glorot_bound():
    model = build(3, seed=5, spec=gradcheck_spec(3))
    for layer in model.convolutions:
        shape = layer.spec.weight_shape
        receptive = int(np.prod(shape[:-2]))
        bound = np.sqrt(6.0 / (receptive * (shape[-2] + shape[-1])))
        assert np.abs(layer.state.weights).max() <= bound * (1 + 1e-6)
        assert not np.any(layer.state.bias)

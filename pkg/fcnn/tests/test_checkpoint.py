import struct

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from fcnn import checkpoint
from fcnn.exceptions import (
    CheckpointFormatError,
    CheckpointMagicError,
    CheckpointMismatchError,
    CheckpointMissingError,
    CheckpointTruncatedError,
    CheckpointVersionError,
)
from fcnn.model import build, freeze_for_finetune, gradcheck_spec


@pytest.fixture
def model():
    trained = build(3, seed=11, spec=gradcheck_spec(3))
    trained['bn_2'].state.running_mean[...] = np.arange(2, dtype=np.float32)
    return trained


@pytest.fixture
def saved(model, tmp_path):
    return checkpoint.save(model, tmp_path / 'model.bin', metadata={'epoch': 4, 'seed': 11})


def test_round_trip_is_bitwise_identical(model, saved):
    restored = checkpoint.load(saved)
    batch = np.random.default_rng(0).uniform(0, 1, size=(2, 8, 8, 6, 1)).astype(np.float32)

    assert_array_equal(restored.predict(batch), model.predict(batch))
    for name, value in model.buffers().items():
        assert_array_equal(restored.buffers()[name], value)
    assert restored.metadata == {'epoch': 4, 'seed': 11}
    assert restored.spec == model.spec


def test_file_starts_with_magic_and_version(saved):
    magic, version, _ = struct.unpack_from('<8sII', saved.read_bytes())
    assert magic == b'3DFCNNCK'
    assert version == 1
    assert not saved.with_name(saved.name + '.partial').exists()


def test_freeze_survives_round_trip(model, tmp_path):
    path = checkpoint.save(freeze_for_finetune(model, 3), tmp_path / 'frozen.bin')
    restored = checkpoint.load(path)
    assert restored.trainable_tail == 3
    assert set(restored.parameters(trainable_only=True)) == set(model.parameters(trainable_only=True))


def test_missing_file(tmp_path):
    with pytest.raises(CheckpointMissingError):
        checkpoint.load(tmp_path / 'nope.bin')


def test_bad_magic(saved):
    raw = bytearray(saved.read_bytes())
    raw[:8] = b'NOTACKPT'
    saved.write_bytes(bytes(raw))
    with pytest.raises(CheckpointMagicError):
        checkpoint.load(saved)


def test_unsupported_version(saved):
    raw = bytearray(saved.read_bytes())
    struct.pack_into('<I', raw, 8, 2)
    saved.write_bytes(bytes(raw))
    with pytest.raises(CheckpointVersionError):
        checkpoint.load(saved)


@pytest.mark.parametrize('keep', [10, 40, -4])
def test_truncated_file(saved, keep):
    raw = saved.read_bytes()
    saved.write_bytes(raw[:keep])
    with pytest.raises(CheckpointTruncatedError):
        checkpoint.load(saved)


def test_trailing_values_are_rejected(saved):
    saved.write_bytes(saved.read_bytes() + np.zeros(3, dtype='<f4').tobytes())
    with pytest.raises(CheckpointFormatError):
        checkpoint.load(saved)


def test_class_count_mismatch(saved):
    with pytest.raises(CheckpointMismatchError):
        checkpoint.load(saved, expected_classes=60)
    assert checkpoint.load(saved, expected_classes=3).n_classes == 3

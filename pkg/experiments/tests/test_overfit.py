import numpy as np
import pytest

from clips.synthetic import overfit_split
from fcnn.model import build
from fcnn.training import TrainConfig, fit


@pytest.mark.slow
def test_moving_blobs_are_learned(tmp_path):
    train, val = overfit_split(seed=0)
    assert (len(train), len(val)) == (40, 16)

    config = TrainConfig(n_classes=4, batch_size=12, epochs=30, seed=0, out_dir=tmp_path, prefetch=2)
    result = fit(build(4, seed=0), train, val, config)

    history = result.history
    assert len(history) == 30
    assert history['train_acc'].iloc[-1] >= 0.95
    windows = history['train_loss'].to_numpy().reshape(6, 5).mean(axis=1)
    assert windows[-1] < windows[0]
    assert np.isfinite(history['val_loss']).all()

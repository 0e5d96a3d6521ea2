from pathlib import Path

import pytest
from django.test import override_settings

from experiments.config import RunConfig, load_run_config, read_config_file
from experiments.exceptions import ConfigError


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / 'run.env'
    path.write_text(
        "# comment lines are ignored\n"
        "batch_size=8\n"
        "seed=4\n"
        "DATASET=nwucla\n"
        "protocol=\n"
    )
    return path


def test_file_overrides_settings_and_flags_override_file(config_file):
    with override_settings(HAR_DEFAULTS={'epochs': 7, 'batch_size': 16, 'seed': 1}):
        config = load_run_config(config_file, seed=9, out_dir=None)

    assert config.epochs == 7
    assert config.batch_size == 8
    assert config.seed == 9
    assert config.protocol is None
    assert config.n_classes == 10


def test_keys_are_case_insensitive_and_blanks_dropped(config_file):
    assert read_config_file(config_file) == {'batch_size': '8', 'seed': '4', 'dataset': 'nwucla'}


def test_class_count_follows_the_dataset_preset():
    assert RunConfig().n_classes == 60
    assert RunConfig(dataset='uwa3dii').n_classes == 30
    assert RunConfig(dataset='uwa3dii', n_classes=12).n_classes == 12


def test_lr_boundaries_are_parsed(tmp_path):
    config = load_run_config(None, lr_boundaries='20, 40', out_dir=tmp_path)
    assert config.lr_boundaries == (20, 40)
    schedule = config.train_config().schedule
    assert [phase.end_epoch for phase in schedule.phases] == [20, 40, 50]


@pytest.mark.parametrize('overrides', [
    {'lr_boundaries': '20'},
    {'batch_size': 0},
    {'padding_mode': 'zeros'},
    {'unknown_key': 1},
    {'dataset_root': '/nonexistent/depth/videos'},
])
def test_invalid_values_are_config_errors(overrides):
    with pytest.raises(ConfigError):
        load_run_config(None, **overrides)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match='not found'):
        load_run_config(tmp_path / 'absent.env')


def test_train_config_carries_the_run_values(tmp_path):
    config = load_run_config(None, epochs=10, step_size_epochs=3, out_dir=tmp_path, n_classes=5)
    train = config.train_config(show_progress=True)
    assert train.n_classes == 5
    assert train.schedule.epochs == 10
    assert train.schedule.step_size_epochs == 3
    assert Path(train.out_dir) == tmp_path
    assert train.show_progress


def test_dropout_rate_reaches_the_network_spec(tmp_path):
    config = load_run_config(None, dropout_rate='0.4', n_classes=7, out_dir=tmp_path)
    spec = config.model_spec()
    assert spec.dropout_rate == 0.4
    assert spec.n_classes == 7
    assert 'dropout_rate' not in config.train_config().model_dump()

from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from experiments.exceptions import ConfigError, MissingIdError, SplitError
from experiments.splits import SplitProtocol, apply_split, load_protocol

PROTOCOL_DIR = Path(__file__).resolve().parent.parent / 'protocols'


@pytest.fixture
def index():
    rows = []
    for performer in range(1, 5):
        for camera in range(1, 5):
            rows.append({'name': f"p{performer}c{camera}", 'label': camera % 2,
                         'performer': performer, 'camera': camera})
    return pd.DataFrame(rows)


def test_cross_subject_tests_on_every_other_performer(index):
    split = apply_split(index, SplitProtocol(kind='cross-subject', train_ids='1,2'))
    assert set(split.train['performer']) == {1, 2}
    assert set(split.test['performer']) == {3, 4}
    assert split.counts == {'train': 8, 'test': 8, 'excluded': 0}
    assert not set(split.train['name']) & set(split.test['name'])


def test_cross_view_rejects_stray_cameras(index):
    with pytest.raises(SplitError, match=r'\[4\]'):
        apply_split(index, SplitProtocol(kind='cross-view', train_ids='2,3', test_ids='1'))


def test_view_combination_leaves_other_views_out(index):
    split = apply_split(index, SplitProtocol(kind='view-combination', train_ids='1,2', test_ids='3'))
    assert set(split.train['camera']) == {1, 2}
    assert set(split.test['camera']) == {3}
    assert split.excluded == 4


def test_manifest_protocol_splits_by_name(index):
    protocol = SplitProtocol(kind='manifest', train_names='p1c1,p1c2', test_names='p2c1')
    split = apply_split(index, protocol)
    assert list(split.train['name']) == ['p1c1', 'p1c2']
    assert list(split.test['name']) == ['p2c1']
    assert split.excluded == len(index) - 3


def test_missing_ids_are_reported(index):
    index['performer'] = index['performer'].astype(float)
    index.loc[3, 'performer'] = np.nan
    with pytest.raises(MissingIdError, match='p1c4'):
        apply_split(index, SplitProtocol(kind='cross-subject', train_ids='1'))


@pytest.mark.parametrize('values', [
    {'kind': 'cross-subject', 'train_ids': '1,2', 'test_ids': '2,3'},
    {'kind': 'view-combination', 'train_ids': '1'},
    {'kind': 'cross-view', 'train_ids': ''},
    {'kind': 'by-lighting', 'train_ids': '1'},
])
def test_invalid_protocols(values):
    with pytest.raises(ValidationError):
        SplitProtocol(**values)


def test_empty_index_gives_empty_sides(index):
    split = apply_split(index.iloc[0:0], SplitProtocol(kind='cross-subject', train_ids='1'))
    assert split.counts == {'train': 0, 'test': 0, 'excluded': 0}


@pytest.mark.parametrize('path', sorted(PROTOCOL_DIR.glob('*.txt')), ids=lambda p: p.stem)
def test_bundled_protocols_load(path):
    protocol = load_protocol(path)
    assert protocol.train_side
    assert protocol.test_side is None or not protocol.train_side & protocol.test_side


def test_protocol_file_errors(tmp_path):
    with pytest.raises(ConfigError, match='not found'):
        load_protocol(tmp_path / 'absent.txt')
    bad = tmp_path / 'bad.txt'
    bad.write_text("kind=cross-view\ntrain_ids=1,2\ntest_ids=2\n")
    with pytest.raises(ConfigError, match='overlap'):
        load_protocol(bad)

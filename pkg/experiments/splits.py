"""
Train/test split protocols.

Protocol files use the run-config ``key=value`` format::

    kind=cross-subject
    train_ids=1,2,4,5,8

Cross-subject splits on the ``performer`` column, cross-view and
view-combination on ``camera``. When ``test_ids`` is omitted from a
cross-subject or cross-view protocol the test side is every other id.
View-combination protocols name both sides; samples on neither side are left
out of the run and counted. Manifest protocols list sample names instead of ids.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import FrozenSet, Literal, Optional

import pandas as pd
from dotenv import dotenv_values
from pydantic import BaseModel, ValidationError, field_validator, model_validator

from .exceptions import ConfigError, MissingIdError, SplitError

logger = logging.getLogger(__name__)

SPLIT_COLUMNS = {
    'cross-subject': 'performer',
    'cross-view': 'camera',
    'view-combination': 'camera',
    'manifest': 'name',
}


def _parse_list(value):
    if isinstance(value, str):
        return [part.strip() for part in value.split(',') if part.strip()]
    return value


class SplitProtocol(BaseModel):
    kind: Literal['cross-subject', 'cross-view', 'view-combination', 'manifest']
    name: Optional[str] = None
    dataset: Optional[str] = None
    train_ids: FrozenSet[int] = frozenset()
    test_ids: Optional[FrozenSet[int]] = None
    train_names: FrozenSet[str] = frozenset()
    test_names: Optional[FrozenSet[str]] = None

    @field_validator('train_ids', 'test_ids', 'train_names', 'test_names', mode='before')
    @classmethod
    def split_lists(cls, value):
        return _parse_list(value)

    @model_validator(mode='after')
    def check_sides(self):
        if self.kind == 'manifest':
            train, test = self.train_names, self.test_names
        else:
            train, test = self.train_ids, self.test_ids
        if not train:
            raise ValueError(f"a {self.kind} protocol needs a non-empty train side")
        if self.kind in ('view-combination', 'manifest') and not test:
            raise ValueError(f"a {self.kind} protocol must list its test side explicitly")
        if test is not None and train & test:
            raise ValueError(f"train and test sides overlap on {sorted(train & test)}")
        return self

    @property
    def column(self) -> str:
        return SPLIT_COLUMNS[self.kind]

    @property
    def train_side(self) -> frozenset:
        return self.train_names if self.kind == 'manifest' else self.train_ids

    @property
    def test_side(self) -> Optional[frozenset]:
        return self.test_names if self.kind == 'manifest' else self.test_ids


@dataclass
class Split:
    train: pd.DataFrame
    test: pd.DataFrame
    excluded: int = 0

    @property
    def counts(self) -> dict:
        return {'train': len(self.train), 'test': len(self.test), 'excluded': self.excluded}


def load_protocol(path) -> SplitProtocol:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"protocol file not found: {path}")
    values = {key.strip().lower(): value for key, value in dotenv_values(path).items() if value not in (None, '')}
    try:
        return SplitProtocol(**values)
    except ValidationError as exc:
        raise ConfigError(f"invalid protocol {path}: {exc.errors()[0]['msg']}") from exc


def apply_split(index: pd.DataFrame, protocol: SplitProtocol) -> Split:
    """Partition ``index`` into disjoint train and test tables."""
    column = protocol.column
    if index.empty:
        return Split(index.copy(), index.copy())
    if column not in index.columns or index[column].isna().any():
        missing = index.loc[index[column].isna(), 'name'].tolist() if column in index.columns else index['name'].tolist()
        raise MissingIdError(f"{len(missing)} samples have no {column} id (first: {missing[:3]})")

    values = index[column] if protocol.kind == 'manifest' else index[column].astype(int)
    in_train = values.isin(protocol.train_side)
    if protocol.test_side is None:
        in_test = ~in_train
    else:
        in_test = values.isin(protocol.test_side)
    neither = ~(in_train | in_test)

    if neither.any() and protocol.kind in ('cross-subject', 'cross-view'):
        stray = sorted(values[neither].unique().tolist())
        raise SplitError(f"{column} ids {stray} are on neither side of the {protocol.kind} protocol")

    unused = set(protocol.train_side) - set(values[in_train].unique().tolist())
    if unused:
        logger.warning(f"Protocol train ids absent from the index: {sorted(unused)[:10]}")

    split = Split(
        train=index[in_train].reset_index(drop=True),
        test=index[in_test].reset_index(drop=True),
        excluded=int(neither.sum()),
    )
    logger.info(f"Applied {protocol.kind} split: {split.counts}")
    return split

"""
Binary checkpoint files.

Byte layout (all integers little-endian):

    offset  size  content
    0       8     magic b"3DFCNNCK"
    8       4     u32 format version (1)
    12      4     u32 header length N
    16      N     UTF-8 JSON header
    16+N    ...   raw little-endian float32 buffers, row-major, in header order

The header holds the ``ModelSpec`` hyperparameters, the fine-tune tail, the
training metadata (epoch, seed, schedule position, ...) and a tensor table of
``{"name", "shape", "offset", "count"}`` entries whose offsets are element
offsets into the buffer section. Tensors cover every learnable parameter and
every batch normalization running statistic.
"""
import json
import logging
import os
import struct
from pathlib import Path
from typing import Optional

import numpy as np

from .exceptions import (
    CheckpointFormatError,
    CheckpointMagicError,
    CheckpointMismatchError,
    CheckpointMissingError,
    CheckpointTruncatedError,
    CheckpointVersionError,
)
from .model import ModelSpec, Network, assemble, freeze_for_finetune

logger = logging.getLogger(__name__)

MAGIC = b"3DFCNNCK"
FORMAT_VERSION = 1
PREAMBLE = struct.Struct('<8sII')
STORAGE_DTYPE = np.dtype('<f4')


def _state_tensors(model: Network) -> dict:
    tensors = {}
    for layer in model.layers:
        for field, value in list(layer.parameters().items()) + list(layer.buffers().items()):
            tensors[f"{layer.name}.{field}"] = value
    return tensors


def save(model: Network, path, metadata: Optional[dict] = None) -> Path:
    """Write ``model`` to ``path`` through a temporary file so readers never see a partial checkpoint."""
    path = Path(path)
    tensors = _state_tensors(model)

    table, offset = [], 0
    for name, value in tensors.items():
        table.append({'name': name, 'shape': list(value.shape), 'offset': offset, 'count': int(value.size)})
        offset += int(value.size)

    header = json.dumps({
        'spec': model.spec.to_dict(),
        'trainable_tail': model.trainable_tail,
        'metadata': metadata if metadata is not None else dict(model.metadata),
        'tensors': table,
    }, sort_keys=True).encode('utf-8')

    path.parent.mkdir(parents=True, exist_ok=True)
    partial = path.with_name(path.name + '.partial')
    with open(partial, 'wb') as fh:
        fh.write(PREAMBLE.pack(MAGIC, FORMAT_VERSION, len(header)))
        fh.write(header)
        for value in tensors.values():
            fh.write(np.ascontiguousarray(value, dtype=STORAGE_DTYPE).tobytes())
    os.replace(partial, path)
    logger.debug(f"Saved checkpoint {path} ({offset} values)")
    return path


def read_header(raw: bytes) -> tuple:
    """Validate the preamble and return ``(header dict, payload bytes)``."""
    if len(raw) < PREAMBLE.size:
        raise CheckpointTruncatedError(f"file is {len(raw)} bytes, shorter than the {PREAMBLE.size}-byte preamble")
    magic, version, header_length = PREAMBLE.unpack_from(raw)
    if magic != MAGIC:
        raise CheckpointMagicError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(f"format version {version} is not supported (expected {FORMAT_VERSION})")

    end = PREAMBLE.size + header_length
    if len(raw) < end:
        raise CheckpointTruncatedError(f"header claims {header_length} bytes but the file ends early")
    try:
        header = json.loads(raw[PREAMBLE.size:end].decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointFormatError(f"unreadable checkpoint header: {exc}") from exc
    if not isinstance(header, dict) or 'spec' not in header or 'tensors' not in header:
        raise CheckpointFormatError("checkpoint header lacks the spec or tensor table")
    return header, raw[end:]


def load(path, expected_classes: Optional[int] = None) -> Network:
    """Rebuild the network stored at ``path``.

    ``expected_classes`` guards against loading a checkpoint into a run configured
    for a different class count.
    """
    path = Path(path)
    if not path.is_file():
        raise CheckpointMissingError(f"checkpoint not found: {path}")
    header, payload = read_header(path.read_bytes())

    try:
        spec = ModelSpec.from_dict(header['spec'])
    except (TypeError, ValueError) as exc:
        raise CheckpointFormatError(f"invalid model hyperparameters in header: {exc}") from exc
    if expected_classes is not None and spec.n_classes != expected_classes:
        raise CheckpointMismatchError(
            f"checkpoint has {spec.n_classes} classes but {expected_classes} were requested"
        )

    values = np.frombuffer(payload, dtype=STORAGE_DTYPE)
    needed = sum(int(entry['count']) for entry in header['tensors'])
    if values.size < needed or len(payload) % STORAGE_DTYPE.itemsize:
        raise CheckpointTruncatedError(f"payload holds {len(payload)} bytes, header needs {needed * 4}")
    if values.size > needed:
        raise CheckpointFormatError(f"payload has {values.size - needed} values not listed in the header")

    model = assemble(spec, dtype=np.float32)
    tensors = _state_tensors(model)
    if set(tensors) != {entry['name'] for entry in header['tensors']}:
        raise CheckpointFormatError("tensor table does not match the network layout")
    for entry in header['tensors']:
        target = tensors[entry['name']]
        if tuple(entry['shape']) != target.shape or entry['count'] != target.size:
            raise CheckpointFormatError(
                f"{entry['name']}: stored shape {tuple(entry['shape'])}, network expects {target.shape}"
            )
        start = int(entry['offset'])
        target[...] = values[start:start + target.size].reshape(target.shape)

    if header.get('trainable_tail'):
        freeze_for_finetune(model, header['trainable_tail'])
    model.metadata = dict(header.get('metadata') or {})
    model.touch()
    logger.info(f"Loaded checkpoint {path} ({spec.n_classes} classes)")
    return model

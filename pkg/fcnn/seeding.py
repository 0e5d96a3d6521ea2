"""One run seed fanned out to independent, named random streams."""
import zlib

import numpy as np

STREAMS = ('init', 'dropout', 'sampler', 'bench', 'head')


def substream(seed: int, name: str) -> np.random.Generator:
    """Generator for stream ``name``; changing how one stream is consumed never shifts another."""
    key = zlib.crc32(name.encode('utf-8'))
    return np.random.default_rng(np.random.SeedSequence([int(seed), key]))

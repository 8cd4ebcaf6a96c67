"""Deterministic seed derivation.

Every random stream is derived from a single master seed through
``numpy.random.SeedSequence`` entropy mixing of
``(master_seed, crc32(label), index)``.  Streams for different trials are
therefore independent of scheduling order.
"""
import zlib

import numpy as np

MASK64 = (1 << 64) - 1


def _label_key(label):
    return zlib.crc32(label.encode("utf-8"))


def substream_seed(master_seed, label, index=0):
    """64-bit seed for substream ``(label, index)``."""
    ss = np.random.SeedSequence([int(master_seed) & MASK64, _label_key(label), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def substream(master_seed, label, index=0):
    """Independent ``numpy.random.Generator`` for ``(label, index)``."""
    ss = np.random.SeedSequence([int(master_seed) & MASK64, _label_key(label), int(index)])
    return np.random.Generator(np.random.PCG64(ss))

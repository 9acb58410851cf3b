import zlib

import numpy as np


def _key(k):
    if isinstance(k, (int, np.integer)):
        if k < 0:
            raise ValueError("stream keys must be nonnegative")
        return int(k)
    return zlib.crc32(str(k).encode("utf-8"))


def substream(seed, *keys):
    """Independent generator for ``(seed, *keys)``.

    Streams are addressed by name rather than by draw order, so adding a new
    consumer never shifts the numbers an existing one receives.
    """
    if int(seed) < 0:
        raise ValueError("seed must be a nonnegative integer")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(_key(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed, *keys):
    """Integer seed for a child task, e.g. one Monte Carlo trial."""
    if int(seed) < 0:
        raise ValueError("seed must be a nonnegative integer")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(_key(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))

import numpy as np


def random_stream(seed: int, *stream_key: int) -> np.random.Generator:
    """Independent generator for one purpose (and optionally one device/round) split off a master seed."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in stream_key)))

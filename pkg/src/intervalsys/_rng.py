import numpy as np


def make_rng(seed, replica=None) -> np.random.Generator:
    """PCG64 generator; replica ``r`` (an int or a tuple of ints) gets its own spawned stream."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise ValueError("a seed is required")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    if replica is None:
        ss = np.random.SeedSequence(seed)
    else:
        key = replica if isinstance(replica, tuple) else (replica,)
        ss = np.random.SeedSequence(seed, spawn_key=tuple(int(r) for r in key))
    return np.random.Generator(np.random.PCG64(ss))

import numpy as np

_MASK64 = (1 << 64) - 1


def derive_seed(*keys: int) -> int:
    """Mix integer keys into one 64-bit seed.

    The result depends only on the keys, so work scheduled in any order
    (or on any number of threads) draws identical random streams.
    """
    ss = np.random.SeedSequence([int(k) & _MASK64 for k in keys])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def rng_for(*keys: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(*keys))

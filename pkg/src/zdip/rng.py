"""
Seeded substreams.

Every random draw in the package comes from a generator keyed by
``(master seed, *integer keys)``, so a result never depends on how work was
split into chunks or on the order in which chunks ran.
"""
import secrets

import numpy as np

__all__ = ["substream", "derive_seed", "resolve_seed", "GENERATOR_NAME"]

GENERATOR_NAME = f"numpy {np.__version__} PCG64 via SeedSequence(seed, spawn_key=keys)"


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for the stream labelled by `keys` under `seed`."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, *keys: int) -> int:
    """Integer seed for a child task, stable under `seed` and `keys`."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def resolve_seed(seed=None) -> int:
    """Return `seed` as an int, drawing a fresh 63-bit seed when it is None."""
    if seed is None:
        return secrets.randbits(63)
    return int(seed)


# first key of every stream, so unrelated uses of one seed never collide
NULL_DIPS = 0
MIXTURE = 1
SUBSAMPLE = 2
BOOTSTRAP = 3
EXPERIMENT = 4

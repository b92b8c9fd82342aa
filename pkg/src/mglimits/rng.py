"""Counter-based random streams with named per-purpose derivation.

Every sampler draw is a pure function of (seed, stream name, draw index):
streams are Philox generators keyed by a SeedSequence over (tag, seed,
stream id, index), so windows of different sizes from the same seed share
their latent prefixes, and independent repetitions derive child seeds
instead of reusing the parent.
"""

from __future__ import annotations

import numpy as np

_TAG = 0x6D676C69

STREAM_IDS = {
    "alpha": 0,   # single mixture coordinate
    "u": 1,       # per-vertex latent uniforms
    "beta": 2,    # per-pair latent uniforms, triangle order
    "perm": 3,    # vertex permutations
    "mc": 4,      # bulk monte-carlo batches
    "seq": 5,     # consistent-sequence growth
}


def stream(seed: int, name: str, index: int = 0) -> np.random.Generator:
    """Fresh generator for one named stream of one seed."""
    sid = STREAM_IDS[name]
    ss = np.random.SeedSequence(entropy=(_TAG, int(seed), sid, int(index)))
    return np.random.Generator(np.random.Philox(ss))


def derive_seeds(seed: int, count: int, salt: int = 0) -> list[int]:
    """Deterministic child seeds, independent-looking across count and salt."""
    ss = np.random.SeedSequence(entropy=(_TAG, int(seed), 10 ** 6 + int(salt)))
    state = ss.generate_state(2 * count, dtype=np.uint64)
    return [int(state[2 * i]) for i in range(count)]


def pair_order(k: int):
    """Canonical draw order of vertex pairs: (0,0),(0,1),(1,1),(0,2),...

    Ordered by the larger index first, so the first k(k+1)/2 pairs of any
    larger window extend the smaller window's pairs.
    """
    return [(i, j) for j in range(k) for i in range(j + 1)]

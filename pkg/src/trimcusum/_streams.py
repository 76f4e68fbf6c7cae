"""Counter-based uniform streams (Philox) for reproducible, order-independent draws.

Every consumer of randomness in this package addresses a (seed, stream) pair.
Stream indices map to disjoint counter ranges of the same keyed Philox family,
so replicate streams never overlap and results do not depend on the order or
degree of parallelism with which replicates are evaluated.
"""

from __future__ import annotations

import numpy as np

__all__ = ["STREAM_STRIDE", "stream_generator", "stream_uniforms"]

_KEY_MASK = (1 << 128) - 1

# Philox counter units reserved per stream index.  One counter unit yields four
# 64-bit words, so a single stream can serve ~2**130 draws before touching its
# neighbor; actual per-replicate consumption is bounded by the sample size.
STREAM_STRIDE = 1 << 128


def stream_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator positioned at the start of substream `stream` of family `seed`."""
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    if stream < 0:
        raise ValueError("stream index must be a nonnegative integer")
    bitgen = np.random.Philox(key=seed & _KEY_MASK, counter=stream * STREAM_STRIDE)
    return np.random.Generator(bitgen)


def stream_uniforms(seed: int, stream: int, n: int) -> np.ndarray:
    """n uniforms from the given substream, nudged off 0 so (0,1) maps are safe."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n >= STREAM_STRIDE:
        raise ValueError("draw count exceeds the per-stream reservation")
    u = stream_generator(seed, stream).random(n)
    return np.maximum(u, 2.0 ** -53, out=u)

"""Deterministic random streams for reproducible experiments.

Streams are built on Philox 4x64 (10 rounds, the documented round constants
of Salmon et al., as shipped in numpy).  Philox is counter-based: the key is
set directly to ``(base_seed, run_index)`` and the position within the
stream is the Philox counter, so every variate is addressed by
``(base_seed, run_index, call position)`` and replays identically across
platforms.  Gaussian variates are produced by an explicit Box-Muller
transform from uniform pairs rather than numpy's ziggurat, which keeps the
uniform-to-normal mapping pinned by this codebase.
"""

from __future__ import annotations

import math

import numpy as np

_MASK64 = (1 << 64) - 1


class RandomStream:
    """Seeded, splittable stream of uniforms and derived variates.

    A stream is owned by exactly one run; concurrent runs must use
    ``for_run`` to obtain streams with distinct keys.
    """

    __slots__ = ("base_seed", "run_index", "_gen")

    def __init__(self, base_seed: int, run_index: int = 0):
        self.base_seed = int(base_seed)
        self.run_index = int(run_index)
        key = np.array(
            [self.base_seed & _MASK64, self.run_index & _MASK64], dtype=np.uint64
        )
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def for_run(self, run_index: int) -> "RandomStream":
        """Fresh stream keyed by the same base seed and a new run index."""
        return RandomStream(self.base_seed, run_index)

    def uniform(self) -> float:
        """One double in [0, 1)."""
        return float(self._gen.random())

    def uniforms(self, n: int) -> np.ndarray:
        return self._gen.random(n)

    def normals(self, shape) -> np.ndarray:
        """Standard normals via Box-Muller on uniform pairs."""
        n = int(np.prod(shape)) if not np.isscalar(shape) else int(shape)
        m = (n + 1) // 2
        u1 = self._gen.random(m)
        u2 = self._gen.random(m)
        # 1 - u1 lies in (0, 1], so the log is finite.
        r = np.sqrt(-2.0 * np.log1p(-u1))
        ang = (2.0 * math.pi) * u2
        z = np.concatenate([r * np.cos(ang), r * np.sin(ang)])[:n]
        return z.reshape(shape)

    def symmetric(self, p: int, scale: float = 1.0) -> np.ndarray:
        """Random symmetric p x p matrix with N(0, scale^2) entries, symmetrized."""
        g = self.normals((p, p))
        return scale * 0.5 * (g + g.T)


def inverse_cdf_index(cumulative: np.ndarray, u: float) -> int:
    """Smallest i with cumulative[i] >= u; consumes no randomness itself.

    Ties at a cumulative boundary resolve toward the smaller index.
    """
    idx = int(np.searchsorted(cumulative, u, side="left"))
    return min(idx, len(cumulative) - 1)

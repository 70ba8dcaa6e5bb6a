"""Deterministic seed derivation for parallel simulation tasks.

Every stochastic operation in the toolkit draws from ``numpy``'s PCG64
generator. Independent task streams are derived from a single master seed
with :func:`mix`, the SplitMix64 output function applied to the master
seed advanced by ``stream + 1`` gamma increments. Results are therefore
reproducible bit-for-bit regardless of worker count or scheduling order.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix(master_seed: int, stream: int) -> int:
    """Derive the 64-bit seed for task ``stream`` from ``master_seed``.

    SplitMix64: state = master_seed + (stream + 1) * 0x9E3779B97F4A7C15,
    followed by the standard xorshift-multiply avalanche. Distinct
    ``stream`` values give statistically independent PCG64 streams.
    """
    if stream < 0:
        raise ValueError("stream index must be nonnegative")
    z = (master_seed + (stream + 1) * _GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64

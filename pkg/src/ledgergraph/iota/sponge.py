"""Pluggable sponge over 243-trit blocks.

The default MixerSponge is a fast, deterministic, non-cryptographic
permute-and-substitute mixer for tests and simulation. A ternary Keccak
(KERL) is deliberately NOT implemented; anything exposing absorb/squeeze
over 243-trit blocks can be plugged into the derivation pipeline instead.
"""

from __future__ import annotations

from typing import Protocol

import numpy as np

__all__ = ["Sponge", "MixerSponge", "sponge_hash", "BLOCK_TRITS"]

BLOCK_TRITS = 243
STATE_TRITS = 729
_ROUNDS = 8

# multiplicative stride, coprime with 3^6, so indexing is a permutation
_PERM = np.arange(STATE_TRITS, dtype=np.int64) * 364 % STATE_TRITS

# varied roll offsets so no single algebraic relation with the stride
# survives across rounds
_OFFSETS = (364, 27, 113, 541, 9, 310, 73, 200)

# dense per-round keys (fixed integer recurrence, platform independent);
# they keep the state dense so the multiplicative term stays active
_IDX = np.arange(STATE_TRITS, dtype=np.int64)
_ROUND_KEYS = np.stack([
    ((_IDX * 2654435761 + r * 40503 + 12345) >> 7) % 3 - 1
    for r in range(_ROUNDS)
])


class Sponge(Protocol):
    """Absorb/squeeze interface over 243-trit blocks (conformance slot)."""

    def absorb(self, trits) -> None: ...

    def squeeze(self) -> np.ndarray: ...

    def reset(self) -> None: ...


class MixerSponge:
    """729-trit state; absorb overwrites the rate then permutes."""

    def __init__(self) -> None:
        self.state = np.zeros(STATE_TRITS, dtype=np.int8)

    def reset(self) -> None:
        self.state[:] = 0

    def _transform(self) -> None:
        s = self.state.astype(np.int64)
        for rnd in range(_ROUNDS):
            s = s[_PERM]
            a, b = np.roll(s, 1), np.roll(s, _OFFSETS[rnd])
            total = int(s.sum())  # gives single-trit changes global reach
            # the a*b product keeps the round nonlinear over GF(3), so
            # difference patterns cannot collapse by linear cancellation
            s = (s + 2 * a + b + a * b + total + _ROUND_KEYS[rnd]) % 3 - 1
        self.state = s.astype(np.int8)

    def absorb(self, trits) -> None:
        block = np.asarray(trits, dtype=np.int8)
        if block.size % BLOCK_TRITS:
            raise ValueError(
                f"absorb length {block.size} is not a multiple of {BLOCK_TRITS}")
        for off in range(0, block.size, BLOCK_TRITS):
            self.state[:BLOCK_TRITS] = block[off:off + BLOCK_TRITS]
            self._transform()

    def squeeze(self) -> np.ndarray:
        out = self.state[:BLOCK_TRITS].copy()
        self._transform()
        return out


def sponge_hash(trits, sponge_factory=MixerSponge) -> np.ndarray:
    """One-shot 243-trit digest of a trit sequence."""
    trits = np.asarray(trits, dtype=np.int8)
    if trits.size == 0 or trits.size % BLOCK_TRITS:
        pad = BLOCK_TRITS - (trits.size % BLOCK_TRITS or BLOCK_TRITS)
        if trits.size == 0:
            pad = BLOCK_TRITS
        trits = np.concatenate([trits, np.zeros(pad, dtype=np.int8)])
    sponge = sponge_factory()
    sponge.absorb(trits)
    return sponge.squeeze()

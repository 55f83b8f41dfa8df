"""Seed -> subseed -> private key -> address derivation.

The pipeline shape follows the one-time-address scheme: the subseed is
the sponge digest of the seed with the key index added into its trailing
trits; the private key squeezes 27 blocks of 81 trytes per security
level; the address hashes each 81-tryte key segment 26 times and digests
the segment hashes together. Signing itself is replaced by opaque
fragment blobs elsewhere; only sizes and determinism matter here.
"""

from __future__ import annotations

import numpy as np

from ..core import LedgerError
from .sponge import BLOCK_TRITS, MixerSponge, sponge_hash
from .trinary import decode_trytes, encode_trytes, int_to_trits

__all__ = [
    "SEED_TRYTES",
    "MAX_KEY_INDEX",
    "KEY_FRAGMENT_TRYTES",
    "SEGMENT_TRYTES",
    "SEGMENT_ROUNDS",
    "CHECKSUM_TRYTES",
    "derive_subseed",
    "derive_private_key",
    "derive_address",
]

SEED_TRYTES = 81
MAX_KEY_INDEX = 9_007_199_254_740_991
KEY_FRAGMENT_TRYTES = 2187  # one signatureMessageFragment
SEGMENT_TRYTES = 81
SEGMENT_ROUNDS = 26
CHECKSUM_TRYTES = 9
_BLOCKS_PER_LEVEL = 27


class IndexOutOfRangeError(LedgerError):
    code = "index-out-of-range"


def _seed_trits(seed: str) -> list[int]:
    if len(seed) != SEED_TRYTES:
        raise LedgerError(f"seed must be exactly {SEED_TRYTES} trytes")
    return decode_trytes(seed)


def _add_index_into_tail(trits: list[int], index: int) -> list[int]:
    # balanced-ternary addition with carry; trit 242 is least significant
    out = list(trits)
    digits = int_to_trits(index)
    pos = len(out) - 1
    carry = 0
    i = 0
    while (i < len(digits) or carry) and pos >= 0:
        s = out[pos] + (digits[i] if i < len(digits) else 0) + carry
        carry = 0
        while s > 1:
            s -= 3
            carry += 1
        while s < -1:
            s += 3
            carry -= 1
        out[pos] = s
        pos -= 1
        i += 1
    return out


def derive_subseed(seed: str, index: int, sponge_factory=MixerSponge) -> str:
    """81-tryte subseed for one key index of a seed."""
    if not 0 <= index <= MAX_KEY_INDEX:
        raise IndexOutOfRangeError(
            f"index must lie in [0, {MAX_KEY_INDEX}], got {index}")
    trits = _add_index_into_tail(_seed_trits(seed), index)
    return encode_trytes(sponge_hash(trits, sponge_factory))


def derive_private_key(subseed: str, level: int,
                       sponge_factory=MixerSponge) -> str:
    """Private key of level * 2187 trytes: the sponge absorbs the subseed
    and squeezes 27 blocks of 81 trytes per security level."""
    if level not in (1, 2, 3):
        raise ValueError("security level must be 1, 2 or 3")
    sponge = sponge_factory()
    sponge.absorb(np.array(decode_trytes(subseed), dtype=np.int8))
    blocks = [sponge.squeeze() for _ in range(_BLOCKS_PER_LEVEL * level)]
    return encode_trytes(np.concatenate(blocks))


def derive_address(private_key: str, with_checksum: bool = False,
                   sponge_factory=MixerSponge) -> str:
    """81-tryte address (90 with checksum): hash every 81-tryte key
    segment 26 times, then digest the segment hashes together."""
    if len(private_key) % KEY_FRAGMENT_TRYTES:
        raise LedgerError(
            f"private key length {len(private_key)} is not a multiple of "
            f"{KEY_FRAGMENT_TRYTES} trytes")
    key_trits = np.array(decode_trytes(private_key), dtype=np.int8)
    outer = sponge_factory()
    for off in range(0, key_trits.size, BLOCK_TRITS):
        digest = key_trits[off:off + BLOCK_TRITS]
        for _ in range(SEGMENT_ROUNDS):
            digest = sponge_hash(digest, sponge_factory)
        outer.absorb(digest)
    address_trits = outer.squeeze()
    address = encode_trytes(address_trits)
    if with_checksum:
        digest = sponge_hash(address_trits, sponge_factory)
        address += encode_trytes(digest)[-CHECKSUM_TRYTES:]
    return address

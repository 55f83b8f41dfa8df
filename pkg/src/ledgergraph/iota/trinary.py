"""Balanced-ternary primitives. A tryte is three trits over {-1, 0, 1},
little-endian (value = t0 + 3*t1 + 9*t2, range -13..13), printed as one
character of the 27-symbol alphabet at position value mod 27. The codec
is a bijection, verified exhaustively in the tests."""

from __future__ import annotations

import numpy as np

from ..core import LedgerError

__all__ = [
    "TRYTE_ALPHABET",
    "InvalidTryteError",
    "encode_trytes",
    "decode_trytes",
    "int_to_trits",
    "trits_to_int",
    "ascii_to_trits",
]

TRYTE_ALPHABET = "9ABCDEFGHIJKLMNOPQRSTUVWXYZ"
_CHAR_INDEX = {c: i for i, c in enumerate(TRYTE_ALPHABET)}

# tryte value for alphabet index i: 0..13 map to themselves, 14..26 wrap
# to -13..-1 (index = value mod 27)
_INDEX_VALUE = [i if i <= 13 else i - 27 for i in range(27)]


class InvalidTryteError(LedgerError):
    code = "invalid-char"


def _tryte_trits(value: int) -> tuple[int, int, int]:
    t0 = ((value + 13) % 3) - 1
    rest = (value - t0) // 3
    t1 = ((rest + 13) % 3) - 1
    t2 = (rest - t1) // 3
    return (t0, t1, t2)


_VALUE_TRITS = {v: _tryte_trits(v) for v in range(-13, 14)}


def encode_trytes(trits) -> str:
    """Trits to characters; length must be a multiple of 3."""
    trits = list(int(t) for t in trits)
    if len(trits) % 3:
        raise InvalidTryteError(
            f"trit length {len(trits)} is not a multiple of 3")
    chars = []
    for i in range(0, len(trits), 3):
        t0, t1, t2 = trits[i], trits[i + 1], trits[i + 2]
        for t in (t0, t1, t2):
            if t not in (-1, 0, 1):
                raise InvalidTryteError(f"trit {t} outside {{-1,0,1}}")
        chars.append(TRYTE_ALPHABET[(t0 + 3 * t1 + 9 * t2) % 27])
    return "".join(chars)


def decode_trytes(trytes: str) -> list[int]:
    """Characters back to trits; inverse of encode_trytes."""
    trits: list[int] = []
    for c in trytes:
        idx = _CHAR_INDEX.get(c)
        if idx is None:
            raise InvalidTryteError(f"character {c!r} is not a tryte")
        trits.extend(_VALUE_TRITS[_INDEX_VALUE[idx]])
    return trits


def int_to_trits(value: int, length: int | None = None) -> list[int]:
    """Non-negative integer to little-endian balanced ternary."""
    if value < 0:
        raise ValueError("only non-negative integers")
    digits: list[int] = []
    n = value
    while n:
        r = n % 3
        if r == 2:
            digits.append(-1)
            n = n // 3 + 1
        else:
            digits.append(r)
            n //= 3
    if length is not None:
        if len(digits) > length:
            raise ValueError(f"{value} does not fit in {length} trits")
        digits.extend([0] * (length - len(digits)))
    return digits


def trits_to_int(trits) -> int:
    total, power = 0, 1
    for t in trits:
        total += int(t) * power
        power *= 3
    return total


def ascii_to_trits(text: str, pad_to: int | None = 243) -> np.ndarray:
    """Opaque identifier strings to trits (6 trits per byte), zero-padded
    to a block multiple so they can feed the sponge."""
    trits: list[int] = []
    for byte in text.encode("utf-8"):
        trits.extend(int_to_trits(byte, 6))
    if pad_to:
        remainder = len(trits) % pad_to
        if remainder or not trits:
            trits.extend([0] * (pad_to - remainder))
    return np.array(trits, dtype=np.int8)

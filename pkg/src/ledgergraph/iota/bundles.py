"""Bundle construction: the atomic group of input, output and
signature-fragment transactions realizing one transfer. Values sum to
zero (no fees); a level-s input is followed by s-1 zero-value fragment
transactions holding the rest of its signature."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core import LedgerError
from .keys import KEY_FRAGMENT_TRYTES
from .sponge import MixerSponge
from .trinary import ascii_to_trits, encode_trytes, int_to_trits

__all__ = ["TangleTransaction", "Bundle", "UnbalancedBundleError", "build_bundle"]


class UnbalancedBundleError(LedgerError):
    code = "unbalanced-bundle"


@dataclass
class TangleTransaction:
    """One DAG node. Negative value: input; positive: output; zero:
    message or signature fragment. Filled-in trunk/branch/hash/nonce are
    assigned at attach time and never change afterwards."""

    address: str
    value: int
    bundle: str = ""
    index: tuple[int, int] = (0, 0)  # position / last index
    tag: str = ""
    timestamp: int = 0
    signature_fragment: str = ""
    hash: str = ""
    trunk: str = ""
    branch: str = ""
    nonce: int = 0

    def __post_init__(self) -> None:
        if len(self.signature_fragment) > KEY_FRAGMENT_TRYTES:
            raise LedgerError(
                f"signatureMessageFragment holds at most {KEY_FRAGMENT_TRYTES} trytes")

    @property
    def is_input(self) -> bool:
        return self.value < 0

    @property
    def is_output(self) -> bool:
        return self.value > 0

    def essence(self) -> str:
        return (f"{self.address}|{self.value}|{self.tag}|"
                f"{self.index[0]}/{self.index[1]}|{self.timestamp}")


@dataclass
class Bundle:
    bundle_hash: str
    transactions: list[TangleTransaction] = field(default_factory=list)

    def value_sum(self) -> int:
        return sum(tx.value for tx in self.transactions)

    def inputs(self) -> list[TangleTransaction]:
        return [tx for tx in self.transactions if tx.is_input]

    def outputs(self) -> list[TangleTransaction]:
        return [tx for tx in self.transactions if tx.is_output]


def compute_bundle_hash(txs: list[TangleTransaction],
                        sponge_factory=MixerSponge) -> str:
    """Digest over every member's essence; changing any transaction
    invalidates the hash."""
    sponge = sponge_factory()
    for tx in txs:
        sponge.absorb(ascii_to_trits(tx.essence()))
    return encode_trytes(sponge.squeeze())


def _fragment_blob(address: str, position: int,
                   sponge_factory=MixerSponge) -> str:
    """Opaque signature stand-in of exactly one fragment (2187 trytes)."""
    sponge = sponge_factory()
    sponge.absorb(ascii_to_trits(f"sig|{address}|{position}"))
    blocks = [sponge.squeeze() for _ in range(27)]
    return encode_trytes(np.concatenate(blocks))


def build_bundle(inputs: list[tuple[str, int, int]],
                 outputs: list[tuple[str, int]],
                 tag: str = "", timestamp: int = 0,
                 sponge_factory=MixerSponge) -> Bundle:
    """Assemble a bundle from (address, security level, amount) inputs and
    (address, amount) outputs. Input amounts must equal output amounts
    (no fee); each level-s input contributes one negative-value
    transaction plus s-1 zero-value fragment transactions immediately
    after it, outputs follow as positive-value transactions."""
    total_in = sum(amount for (_a, _l, amount) in inputs)
    total_out = sum(amount for (_a, amount) in outputs)
    if total_in != total_out:
        raise UnbalancedBundleError(
            f"inputs {total_in} != outputs {total_out}; bundles carry no fee")
    for (_a, level, _v) in inputs:
        if level not in (1, 2, 3):
            raise ValueError("security level must be 1, 2 or 3")

    txs: list[TangleTransaction] = []
    for (address, level, amount) in inputs:
        txs.append(TangleTransaction(
            address=address, value=-amount, tag=tag, timestamp=timestamp,
            signature_fragment=_fragment_blob(address, 0, sponge_factory)))
        for extra in range(1, level):
            txs.append(TangleTransaction(
                address=address, value=0, tag=tag, timestamp=timestamp,
                signature_fragment=_fragment_blob(address, extra, sponge_factory)))
    for (address, amount) in outputs:
        txs.append(TangleTransaction(address=address, value=amount, tag=tag,
                                     timestamp=timestamp))

    last = len(txs) - 1
    for pos, tx in enumerate(txs):
        tx.index = (pos, last)
    bundle_hash = compute_bundle_hash(txs, sponge_factory)
    for tx in txs:
        tx.bundle = bundle_hash
    return Bundle(bundle_hash, txs)


def message_transaction(address: str, tag: str = "", timestamp: int = 0,
                        data: str = "",
                        sponge_factory=MixerSponge) -> Bundle:
    """A standalone zero-value (message) transaction as its own bundle."""
    tx = TangleTransaction(address=address, value=0, tag=tag,
                           timestamp=timestamp,
                           signature_fragment=data[:KEY_FRAGMENT_TRYTES])
    tx.index = (0, 0)
    bundle_hash = compute_bundle_hash([tx], sponge_factory)
    tx.bundle = bundle_hash
    return Bundle(bundle_hash, [tx])


def int_tag(n: int) -> str:
    """Small deterministic tryte tag from an integer (convenience)."""
    return encode_trytes(int_to_trits(n, 27))

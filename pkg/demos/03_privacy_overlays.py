"""Privacy-coin overlays on the UTXO model
===========================================

Zcash transactions classify into five types from their t/z address
kinds; Monero hides the real spend among ten decoys in an 11-member
ring. Hidden amounts poison value-based graphs, which the builders
refuse loudly.
"""

from ledgergraph.core import SATOSHI, Amount
from ledgergraph.utxo import (
    Block,
    Ledger,
    Output,
    UtxoTransaction,
    build_ring_input,
    classify_zcash_tx,
)
from ledgergraph.utxo_graphs import HiddenAmountError, build_address_graph

print("=== the five Zcash transaction types ===")
cases = [(["t"], ["t", "t"]), (["t"], ["z"]), (["z"], ["t"]),
         (["z"], ["z"]), (["t", "z"], ["t"])]
for ins, outs in cases:
    print(f"  {ins} -> {outs}: {classify_zcash_tx(ins, outs)}")

print("\n=== Monero ring construction ===")
decoy_pool = [(f"foreign{i}", 0) for i in range(25)]
ring = build_ring_input(("my_utxo", 0), decoy_pool, rng_seed=7)
print(f"  ring size: {len(ring.members)}")
print(f"  real spend hides at position {ring.real_index} "
      "(generator-side knowledge only)")
print(f"  members: {[m[0] for m in ring.members[:4]]}...")

print("\n=== RingCT-style hidden amounts are contagious ===")
ledger = Ledger(subsidy_schedule=lambda h: 1000)
cb = UtxoTransaction("g", (), (Output("g", 0, Amount(1000, SATOSHI), "a"),),
                     coinbase=True)
ledger.apply_block(Block(0, 0, (cb,), Amount(1000, SATOSHI)))
cb1 = UtxoTransaction("c1", (), (Output("c1", 0, Amount(1, SATOSHI), "m"),),
                      coinbase=True)
shielded = UtxoTransaction(
    "s", (("g", 0),),
    (Output("s", 0, Amount(990, SATOSHI), "b", amount_visible=False),))
ledger.apply_block(Block(1, 600, (cb1, shielded), Amount(1000, SATOSHI)))
try:
    build_address_graph(ledger, 1, 1)
except HiddenAmountError as exc:
    print(f"  address graph refused: {exc}")

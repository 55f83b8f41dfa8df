"""Chainlets: counting transactions by shape
=============================================

A chainlet C(x, y) is a transaction with x inputs and y outputs. This
demo reproduces the worked occurrence/amount matrices, folds them down
to a smaller boundary, and reports extreme chainlets.
"""

from ledgergraph import fixtures
from ledgergraph.chainlets import (
    aggregate_timeseries,
    build_matrices,
    extract_k_chainlets,
    extreme_chainlet_report,
    fold_matrix,
    snapshot_from_ledger,
)

COIN = fixtures.COIN

ledger = fixtures.amount_network()
snapshot = snapshot_from_ledger(ledger, *fixtures.AMOUNT_NETWORK_WINDOW)

print("=== first-order census ===")
for c in snapshot:
    print(f"  {c.txid}: C({c.x},{c.y}) {c.cls:<10} moving "
          f"{c.output_total / COIN:.2f} coins")

mats = build_matrices(snapshot, 3)
print("\n=== occurrence matrix, N=3 ===")
print(mats.occurrence)
print("=== amount matrix in coins ===")
print(mats.amount / COIN)

print("\n=== folding the boundary from 3 to 2 ===")
bigger = fixtures.fold_example_ledger()
snap2 = snapshot_from_ledger(bigger, *fixtures.FOLD_EXAMPLE_WINDOW)
wide = build_matrices(snap2, 3)
print("N=3 occurrence:")
print(wide.occurrence)
print("folded to N=2 (boundary row/column absorb everything beyond):")
print(fold_matrix(wide.occurrence, 2))
print("amounts, folded, in coins:")
print(fold_matrix(wide.amount, 2) / COIN)

print("\n=== k=2 chainlets: connected transaction pairs ===")
for k in extract_k_chainlets(fixtures.six_tx_network(), 2,
                             *fixtures.SIX_TX_WINDOW):
    a, b = k.spend_direction
    print(f"  {k.tx_nodes}: {a} funds {b}")

print("\n=== extreme chainlets at N=20 ===")
from ledgergraph.chainlets import FirstOrderChainlet
crowd = snapshot + [
    FirstOrderChainlet("whale_sell", 2, 25, "split", 900 * COIN),
    FirstOrderChainlet("whale_buy", 25, 2, "merge", 700 * COIN),
]
for row in extreme_chainlet_report(crowd, 20):
    print(f"  {row['txid']}: C({row['x']},{row['y']}) -> {row['pattern']}")

print("\n=== aggregate class shares per window ===")
merge, transition, split = aggregate_timeseries([snapshot])[0]
print(f"  merge {merge:.1f}% / transition {transition:.1f}% / split {split:.1f}%")

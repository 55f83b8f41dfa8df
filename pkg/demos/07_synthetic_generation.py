"""Synthetic ledgers for property testing
==========================================

One seed determines every generated artifact; per-chain streams split
by label so the generators never perturb each other. Generated ledgers
are valid by construction and their parameters are measurable in the
output.
"""

from collections import Counter

from ledgergraph.chainlets import snapshot_from_ledger
from ledgergraph.generate import (
    AccountSpec,
    TangleSpec,
    UtxoSpec,
    generate_account_txs,
    generate_tangle,
    generate_trust_graph,
    generate_utxo,
    RippleSpec,
)
from ledgergraph.account import validate_nonce_order
from ledgergraph.utxo import dump_jsonl

print("=== determinism: same (spec, seed) -> same bytes ===")
spec = UtxoSpec(tx_count=500, split_bias=0.75)
a = "\n".join(dump_jsonl(generate_utxo(spec, seed=42)))
b = "\n".join(dump_jsonl(generate_utxo(spec, seed=42)))
print(f"  identical: {a == b}")

print("\n=== the split-bias parameter is measurable ===")
ledger = generate_utxo(UtxoSpec(tx_count=10_000, split_bias=0.75), seed=10)
census = Counter(c.cls for c in snapshot_from_ledger(ledger)
                 if c.cls != "coinbase")
total = sum(census.values())
for cls in ("split", "merge", "transition"):
    print(f"  {cls:<12} {100 * census[cls] / total:5.1f}%")

print("\n=== account streams are nonce-valid by construction ===")
txs = generate_account_txs(AccountSpec(tx_count=2_000), seed=4)
print(f"  problems: {validate_nonce_order(txs) or 'none'}")

print("\n=== trust graphs balance to zero ===")
led = generate_trust_graph(RippleSpec(accounts=10, trust_density=0.3), seed=6)
positions = led.net_positions("USD")
print(f"  lines: {len(led.states)}, net position sum: {sum(positions.values())}")

print("\n=== tangle cycles conserve supply ===")
state, totals = generate_tangle(TangleSpec(cycles=12), seed=8)
print(f"  totals across milestones/snapshots: {sorted(set(totals))}")
print(f"  DAG integrity: {state.verify_dag()}")

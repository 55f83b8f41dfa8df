"""Walking the six-transaction UTXO network
============================================

Builds the twelve-address example ledger, then extracts the two classic
one-node-type views: the transaction graph (producers -> consumers) and
the ratio-weighted address graph, plus a coin lineage trace.
"""

from fractions import Fraction

from ledgergraph import fixtures
from ledgergraph.core import export_edge_list
from ledgergraph.utxo import trace_lineage
from ledgergraph.utxo_graphs import (
    build_address_graph,
    build_bipartite_graph,
    build_transaction_graph,
    graph_stats,
)

ledger = fixtures.six_tx_network()
window = fixtures.SIX_TX_WINDOW

print("=== transaction graph (a node can appear only once) ===")
tx_graph = build_transaction_graph(ledger, *window)
for (src, dst), spent in sorted(tx_graph.edges.items()):
    note = f"  ({spent} outputs consumed)" if spent > 1 else ""
    print(f"  {src} -> {dst}{note}")

print("\n=== address graph keeps what the tx graph loses ===")
addr_graph = build_address_graph(ledger, *window)
print(f"  nodes: {len(addr_graph.nodes)}, edges: {len(addr_graph.edges)}")
reuse = [e for e in addr_graph.edges if (e.source, e.target) == ("a9", "a1")]
loop = [e for e in addr_graph.edges if e.source == e.target == "a10"]
print(f"  past reuse edge a9->a1 present: {bool(reuse)}")
print(f"  change-back self-loop at a10:  {bool(loop)}")

print("\n=== every edge weight is an exact rational ===")
led = fixtures.weighted_example_ledger()
for e in build_address_graph(led, 1, 1).edges:
    btc = e.weight / Fraction(10**8)
    print(f"  w({e.source}->{e.target}) = {btc} BTC")

print("\n=== lineage of a merged output ===")
lineage = fixtures.lineage_ledger()
for path in trace_lineage(("t3", 0), lineage):
    pretty = " -> ".join(f"{t}:{i}" for t, i in path)
    print(f"  {pretty}")

print("\n=== deterministic CSV export (first rows) ===")
data = export_edge_list(build_bipartite_graph(ledger, *window)).decode()
print("  " + "\n  ".join(data.splitlines()[:5]))

print("\n=== summary statistics ===")
print(" ", graph_stats(addr_graph))

"""Account model: nonce order, token trades, trace hypergraphs
===============================================================

Account-model transactions always have one sender and one receiver,
ordered per sender by nonce. Token trades live inside contract storage
as internal transfers, and call cascades become hyperedges.
"""

from ledgergraph import fixtures
from ledgergraph.account import (
    TokenLedger,
    TraceExecutor,
    build_account_graph,
    build_token_graph,
    build_trace_hypergraph,
    deploy_token,
    validate_nonce_order,
)

print("=== the edge table as a multigraph ===")
txs = fixtures.account_table_txs()
print(f"  nonce problems: {validate_nonce_order(txs) or 'none'}")
graph = build_account_graph(txs)
for e in graph.edges:
    attrs = e.attr_dict
    print(f"  {e.source} -> {e.target}: {e.weight} wei "
          f"(nonce {attrs['nonce']}, block {attrs['block']})")

print("\n=== a token trade produces two partial views ===")
ledger = TokenLedger()
token = ledger.register(deploy_token("issuer", "TOK", 18, 1_000, nonce=0))
print(f"  token contract deployed at {token.address} (from owner+nonce)")
ledger.execute_token_transfer(token.address, "issuer", "a2", 50, "seed_tx")
# a1 already paid a2 100 wei on-chain; a2 answers with 2 TOK internally
ledger.execute_token_transfer(token.address, "a2", "a1", 2, "tx_block6")
token_graph = build_token_graph(ledger.transfers, token=token.address)
for e in token_graph[token.address].edges:
    print(f"  token edge {e.source} -> {e.target}: {e.weight} TOK")
print(f"  supply conserved: {token.check_conservation()}")

print("\n=== trace hypergraph of the sales-contract walkthrough ===")
for h in build_trace_hypergraph(fixtures.trace_scenario()).edges:
    print(f"  {h.label}: {' -> '.join(h.members)}")

print("\n=== a call loop truncates at the step budget ===")
executor = TraceExecutor(behaviors={
    "cA": [("cB", "call", 0)],
    "cB": [("cA", "call", 0)],
}, call_budget=6)
trace = executor.run("looping_tx", "someone", "cA")
print(f"  steps executed: {len(trace.steps) - 1}, truncated: {trace.truncated}")
print(f"  final step kind: {trace.steps[-1].kind}")

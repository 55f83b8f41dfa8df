"""run_pipeline orchestration and the cross-cutting graph
characteristics the ten graph types must carry."""

import json
import os

import pytest

from ledgergraph import fixtures
from ledgergraph.chainlets import build_matrices, merge_matrices, snapshot_from_ledger
from ledgergraph.core import Hypergraph
from ledgergraph.pipeline import RunConfig, run_pipeline


@pytest.fixture()
def fixture_dir(tmp_path):
    d = tmp_path / "fixtures"
    fixtures.write_all(str(d))
    return d


def test_pipeline_on_six_tx_fixture_builds_both_graphs(fixture_dir, tmp_path):
    out = tmp_path / "out"
    report = run_pipeline(RunConfig(
        chain="utxo", input_path=str(fixture_dir / "six_tx_network.jsonl"),
        output_dir=str(out), window=(1, 2), fold_n=3, subsidy=6 * fixtures.COIN))
    tx_rows = (out / "transaction_graph.csv").read_text().splitlines()
    assert len(tx_rows) == 1 + 6  # the six consumer edges
    addr_rows = (out / "address_graph.csv").read_text().splitlines()
    assert len(addr_rows) == 1 + 22
    summary = json.loads((out / "summary.json").read_text())
    assert summary["address_graph"]["nodes"] == 12


def test_pipeline_on_amount_fixture_reproduces_matrices(fixture_dir, tmp_path):
    out = tmp_path / "out"
    run_pipeline(RunConfig(
        chain="utxo", input_path=str(fixture_dir / "amount_network.jsonl"),
        output_dir=str(out), window=(1, 1), fold_n=3,
        subsidy=12 * fixtures.COIN))
    assert (out / "occurrence.csv").read_text() == "0,2,0\n1,1,1\n1,0,0\n"
    amount_rows = (out / "amount.csv").read_text().splitlines()
    assert amount_rows == ["0,358000000,0",
                           "190000000,175000000,300000000",
                           "280000000,0,0"]


def test_pipeline_empty_input_header_only(tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    out = tmp_path / "out"
    report = run_pipeline(RunConfig(chain="utxo", input_path=str(empty),
                                    output_dir=str(out), fold_n=3))
    assert (out / "transaction_graph.csv").read_text() == \
        "source,target,weight_num,weight_den,attr_json\n"
    assert (out / "address_graph.csv").read_text().count("\n") == 1
    assert report["summary"]["transactions"] == 0


def test_pipeline_generates_when_no_input(tmp_path):
    from ledgergraph.generate import UtxoSpec
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        run_pipeline(RunConfig(chain="utxo", output_dir=str(out), seed=5,
                               generator=UtxoSpec(tx_count=80), fold_n=5))
    for name in ("transaction_graph.csv", "occurrence.csv", "summary.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_pipeline_ripple_script(fixture_dir, tmp_path):
    out = tmp_path / "r"
    report = run_pipeline(RunConfig(
        chain="ripple", input_path=str(fixture_dir / "rippling_payment.jsonl"),
        output_dir=str(out)))
    assert report["summary"]["payments"] == 2  # the 50 and the partial 25
    assert report["summary"]["rejected_ops"] == 1
    rows = (out / "payment_graph.csv").read_text().splitlines()
    assert rows[0] == "label,position,member"
    assert len(rows) == 1 + 4 + 4  # two four-node settlement paths


def test_pipeline_iota_script(fixture_dir, tmp_path):
    out = tmp_path / "i"
    report = run_pipeline(RunConfig(
        chain="iota", input_path=str(fixture_dir / "tangle_double_spend.jsonl"),
        output_dir=str(out), genesis_balances={"a1": 100, "funder": 1000}))
    assert report["summary"]["supply"] == 1100
    graph_rows = (out / "transaction_graph.csv").read_text().splitlines()
    assert any("a1" in r and "r1" in r for r in graph_rows[1:])


def test_pipeline_account(fixture_dir, tmp_path):
    out = tmp_path / "a"
    report = run_pipeline(RunConfig(
        chain="account", input_path=str(fixture_dir / "account_table.jsonl"),
        output_dir=str(out)))
    assert report["summary"]["graph"]["edges"] == 6


# -- cross-cutting graph characteristics -----------------------------------------

def test_graph_characteristics_table():
    # UTXO: address graph weighted directed multi; tx graph collapsed simple
    led = fixtures.six_tx_network()
    from ledgergraph.utxo_graphs import build_address_graph, build_transaction_graph
    addr = build_address_graph(led, *fixtures.SIX_TX_WINDOW).to_edge_list()
    assert addr.directed and addr.multi
    assert all(e.weight is not None for e in addr.edges)
    tx = build_transaction_graph(led, *fixtures.SIX_TX_WINDOW).to_edge_list()
    assert tx.directed and not tx.multi

    # account: transaction and token graphs are weighted directed multi
    from ledgergraph.account import build_account_graph
    acct = build_account_graph(fixtures.account_table_txs())
    assert acct.directed and acct.multi

    # traces: directed hypergraph
    from ledgergraph.account import build_trace_hypergraph
    assert isinstance(build_trace_hypergraph(fixtures.trace_scenario()),
                      Hypergraph)

    # ripple: trust graph weighted directed multi; payment graph hypergraph
    ripple = fixtures.rippling_network()
    trust = ripple.trust_graph()
    assert trust.directed and trust.multi
    from ledgergraph.ripple import CurrencyValue, PaymentSpec
    ripple.pay(PaymentSpec("sarah", "bob", CurrencyValue("USD", None, 50)))
    payments = ripple.payment_graph()
    assert isinstance(payments, Hypergraph)
    assert payments.edges[0].members == ("sarah", "tim", "john", "bob")

    # iota: tangle graph directed simple; transaction graph weighted simple
    from ledgergraph.iota import TangleState, build_bundle
    from ledgergraph.iota.tangle import GENESIS_HASH
    state = TangleState({"a1": 100})
    head = state.attach(build_bundle([("a1", 1, 100)],
                                     [("r1", 60), ("r2", 40)]),
                        (GENESIS_HASH, GENESIS_HASH))
    state.apply_milestone(state.attach_message(state.coordinator, (head, head),
                                               tag="MILESTONE"))
    tangle = state.tangle_graph()
    assert tangle.directed and not tangle.multi
    txg = state.transaction_graph()
    assert txg.directed and not txg.multi
    weights = {(e.source, e.target): e.weight for e in txg.edges}
    assert weights == {("a1", "r1"): 60, ("a1", "r2"): 40}


def test_merge_matrices_linearity():
    led = fixtures.fold_example_ledger()
    snap = snapshot_from_ledger(led, 1, 1)
    whole = build_matrices(snap, 4, include_coinbase_row=True, window="all")
    left = build_matrices(snap[:4], 4, include_coinbase_row=True, window="l")
    right = build_matrices(snap[4:], 4, include_coinbase_row=True, window="r")
    merged = merge_matrices([left, right])
    assert (merged.occurrence == whole.occurrence).all()
    assert (merged.amount == whole.amount).all()
    assert (merged.coinbase_occurrence == whole.coinbase_occurrence).all()

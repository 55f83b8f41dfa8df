"""ledgergraph command-line entry point.

Subcommands: utxo | account | ripple | iota | chainlet | generate | replay.
Exit codes: 0 success, 2 validation error (machine-readable JSON on
stderr), 3 I/O error. All outputs are deterministic for fixed inputs,
config and seed. Defaults may come from a key=value config file
(--config) and are overridden by LEDGERGRAPH_* environment variables,
then by explicit flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import account as account_mod
from . import chainlets as chainlet_mod
from . import generate as gen
from . import scenario
from . import utxo as utxo_mod
from . import utxo_graphs as ug
from .core import LedgerError, export_edge_list, export_hypergraph, export_matrix
from .iota import bundles as iota_bundles
from .iota import keys as iota_keys
from .ripple import load_trust_csv

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3


def _fail_validation(exc: Exception) -> int:
    payload = {"error": getattr(exc, "code", "validation-error"), "message": str(exc)}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    return EXIT_VALIDATION


def _read_lines(path: str) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.readlines()


def _write_bytes(path: str | None, data: bytes) -> None:
    if path in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _load_config(path: str | None) -> dict[str, str]:
    """Key=value config, '#' comments; LEDGERGRAPH_* env vars override."""
    conf: dict[str, str] = {}
    if path:
        for raw in _read_lines(path):
            line = raw.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, value = line.split("=", 1)
            conf[key.strip().lower()] = value.strip()
    for key, value in os.environ.items():
        if key.startswith("LEDGERGRAPH_"):
            conf[key[len("LEDGERGRAPH_"):].lower()] = value
    return conf


def _parse_range(text: str | None) -> tuple[int | None, int | None]:
    if not text:
        return None, None
    if ":" in text:
        lo, hi = text.split(":", 1)
        return (int(lo) if lo else None, int(hi) if hi else None)
    return int(text), int(text)


# --------------------------------------------------------------------------
# subcommand handlers

def _cmd_utxo(args: argparse.Namespace) -> int:
    if args.action == "validate":
        try:
            ledger = utxo_mod.load_jsonl(_read_lines(args.file),
                                         subsidy=args.subsidy)
        except LedgerError as exc:
            return _fail_validation(exc)
        print(json.dumps({
            "blocks": len(ledger.blocks),
            "transactions": len(ledger.transactions),
            "unspent_outputs": len(ledger.utxo),
            "total_supply": ledger.total_supply(),
            "destroyed": ledger.destroyed,
        }, sort_keys=True))
        return EXIT_OK
    # graph
    try:
        ledger = utxo_mod.load_jsonl(_read_lines(args.file), subsidy=args.subsidy)
        start, end = args.start, args.end
        if args.kind == "tx":
            graph = ug.build_transaction_graph(ledger, start, end).to_edge_list()
        elif args.kind == "address":
            graph = ug.build_address_graph(ledger, start, end).to_edge_list()
        else:
            graph = ug.build_bipartite_graph(ledger, start, end)
    except LedgerError as exc:
        return _fail_validation(exc)
    _write_bytes(args.out, export_edge_list(graph, args.format))
    return EXIT_OK


def _cmd_chainlet(args: argparse.Namespace) -> int:
    try:
        ledger = utxo_mod.load_jsonl(_read_lines(args.file), subsidy=args.subsidy)
        start, end = _parse_range(args.window)
        snap = chainlet_mod.snapshot_from_ledger(ledger, start, end)
        matrices = chainlet_mod.build_matrices(snap, args.N,
                                               include_coinbase_row=args.coinbase_row)
    except LedgerError as exc:
        return _fail_validation(exc)
    occ_path, amt_path = (args.out.split(",", 1) if args.out and "," in args.out
                          else (args.out, None))
    _write_bytes(occ_path, export_matrix(matrices.occurrence))
    if amt_path:
        _write_bytes(amt_path, export_matrix(matrices.amount))
    return EXIT_OK


def _cmd_account(args: argparse.Namespace) -> int:
    try:
        records = [json.loads(ln) for ln in _read_lines(args.file) if ln.strip()]
        if args.action == "graph":
            txs = [account_mod.AccountTx(
                sender=r["from"], to=r["to"], amount_wei=int(r["amount"]),
                nonce=int(r["nonce"]), block_height=int(r["block"]),
                block_index=int(r["index"]), timestamp=int(r.get("timestamp", 0)))
                for r in records]
            graph = account_mod.build_account_graph(txs)
            _write_bytes(args.out, export_edge_list(graph, args.format))
            return EXIT_OK
        if args.action == "tokens":
            ledger = account_mod.TokenLedger()
            for r in records:
                if r["op"] == "deploy":
                    ledger.register(account_mod.deploy_token(
                        r["owner"], r["symbol"], int(r.get("decimals", 18)),
                        int(r["supply"]), int(r["nonce"])))
                elif r["op"] == "transfer":
                    ledger.execute_token_transfer(
                        r["token"], r["from"], r["to"], int(r["amount"]),
                        r.get("tx", ""))
            graphs = account_mod.build_token_graph(ledger.transfers)
            out = {}
            for token in sorted(graphs):
                out[token] = export_edge_list(graphs[token], "json").decode().strip()
            _write_bytes(args.out, (json.dumps(out, sort_keys=True) + "\n").encode())
            return EXIT_OK
        # traces
        traces = []
        executor = account_mod.TraceExecutor(call_budget=args.budget)
        for r in records:
            if r["op"] == "behavior":
                executor.behaviors[r["address"]] = [
                    (c["to"], c.get("kind", "call"), int(c.get("value", 0)))
                    for c in r["calls"]]
            elif r["op"] == "tx":
                traces.append(executor.run(r["id"], r["from"], r["to"],
                                           int(r.get("value", 0))))
        hg = account_mod.build_trace_hypergraph(traces)
        _write_bytes(args.out, export_hypergraph(hg, args.format))
        return EXIT_OK
    except (LedgerError, KeyError, ValueError) as exc:
        return _fail_validation(exc)


def _cmd_ripple(args: argparse.Namespace) -> int:
    try:
        ledger = load_trust_csv(_read_lines(args.trust)) if args.trust else None
        if args.action == "trust":
            _write_bytes(args.out,
                         export_edge_list(ledger.trust_graph(), args.format))
            return EXIT_OK
        if args.action == "pay":
            led, log = scenario.replay_ripple(_read_lines(args.script), ledger)
            data = "".join(json.dumps(e, sort_keys=True) + "\n" for e in log)
            _write_bytes(args.out, data.encode())
            return EXIT_OK if all(e["ok"] for e in log) or args.keep_going \
                else EXIT_VALIDATION
        if args.action == "offers":
            led, log = scenario.replay_ripple(_read_lines(args.script), ledger)
            rows = ["gets_currency,gets_issuer,pays_currency,pays_issuer,"
                    "sequence,gets_remaining,pays_remaining"]
            for (gk, pk, seq, grem, prem) in led.book_rows():
                rows.append(",".join([gk[0], gk[1] or "", pk[0], pk[1] or "",
                                      str(seq), str(grem), str(prem)]))
            _write_bytes(args.out, ("\n".join(rows) + "\n").encode())
            return EXIT_OK
        # report
        positions = {}
        for state in ledger.states.values():
            positions.setdefault(state.currency, 0)
        report = {
            "accounts": len(ledger.accounts),
            "trust_lines": len(ledger.states),
            "currencies": sorted(positions),
            "net_positions": {c: dict(sorted(ledger.net_positions(c).items()))
                              for c in sorted(positions)},
        }
        _write_bytes(args.out, (json.dumps(report, sort_keys=True) + "\n").encode())
        return EXIT_OK
    except LedgerError as exc:
        return _fail_validation(exc)


def _cmd_iota(args: argparse.Namespace) -> int:
    try:
        if args.action == "derive":
            subseed = iota_keys.derive_subseed(args.seed_trytes, args.index)
            key = iota_keys.derive_private_key(subseed, args.level)
            address = iota_keys.derive_address(key, with_checksum=args.checksum)
            print(json.dumps({"index": args.index, "level": args.level,
                              "address": address, "key_trytes": len(key)},
                             sort_keys=True))
            return EXIT_OK
        if args.action == "bundle":
            inputs = [(a, int(l), int(v)) for a, l, v in
                      (item.split(":") for item in args.inputs.split(","))]
            outputs = [(a, int(v)) for a, v in
                       (item.split(":") for item in args.outputs.split(","))]
            bundle = iota_bundles.build_bundle(inputs, outputs, tag=args.tag)
            print(json.dumps({
                "bundle": bundle.bundle_hash,
                "transactions": len(bundle.transactions),
                "values": [tx.value for tx in bundle.transactions],
            }, sort_keys=True))
            return EXIT_OK
        # grow / milestone / snapshot run scripts against a tangle
        genesis = json.loads(args.genesis) if args.genesis else {}
        state, log = scenario.replay_tangle(_read_lines(args.script),
                                            genesis_balances=genesis)
        if args.action in ("milestone", "snapshot"):
            extra = {"op": args.action}
            state, log2 = scenario.replay_tangle([json.dumps(extra)], state=state)
            log.extend(log2)
        rows = state.export_rows()
        _write_bytes(args.out, ("\n".join(rows) + "\n").encode())
        if args.log:
            data = "".join(json.dumps(e, sort_keys=True) + "\n" for e in log)
            _write_bytes(args.log, data.encode())
        return EXIT_OK
    except LedgerError as exc:
        return _fail_validation(exc)


def _cmd_generate(args: argparse.Namespace) -> int:
    try:
        if args.chain == "utxo":
            spec = gen.UtxoSpec(tx_count=args.count, split_bias=args.split_bias,
                                address_reuse_p=args.reuse_p)
            ledger = gen.generate_utxo(spec, args.seed)
            data = "\n".join(utxo_mod.dump_jsonl(ledger)) + "\n"
            _write_bytes(args.out, data.encode())
            return EXIT_OK
        if args.chain == "account":
            txs = gen.generate_account_txs(gen.AccountSpec(tx_count=args.count),
                                           args.seed)
            lines = [json.dumps({
                "from": t.sender, "to": t.to, "amount": t.amount_wei,
                "nonce": t.nonce, "block": t.block_height, "index": t.block_index,
                "timestamp": t.timestamp}, sort_keys=True) for t in txs]
            _write_bytes(args.out, ("\n".join(lines) + "\n").encode())
            return EXIT_OK
        if args.chain == "ripple":
            led = gen.generate_trust_graph(gen.RippleSpec(), args.seed)
            rows = ["low,high,currency,balance,low_limit,high_limit"]
            for key in sorted(led.states):
                s = led.states[key]
                rows.append(f"{s.low},{s.high},{s.currency},{s.balance},"
                            f"{s.low_limit},{s.high_limit}")
            _write_bytes(args.out, ("\n".join(rows) + "\n").encode())
            return EXIT_OK
        # iota
        state, _totals = gen.generate_tangle(
            gen.TangleSpec(cycles=args.count, snapshot_every=10**9), args.seed)
        _write_bytes(args.out, ("\n".join(state.export_rows()) + "\n").encode())
        return EXIT_OK
    except LedgerError as exc:
        return _fail_validation(exc)


def _cmd_replay(args: argparse.Namespace) -> int:
    try:
        _state, log = scenario.replay(_read_lines(args.script), args.kind)
    except LedgerError as exc:
        return _fail_validation(exc)
    data = "".join(json.dumps(e, sort_keys=True) + "\n" for e in log)
    _write_bytes(args.out, data.encode())
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ledgergraph",
        description="Validate ledger data and build blockchain network graphs.")
    parser.add_argument("--config", help="key=value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("utxo", help="UTXO ledger validation and graphs")
    pa = p.add_subparsers(dest="action", required=True)
    v = pa.add_parser("validate")
    v.add_argument("file")
    v.add_argument("--subsidy", type=int, default=5_000_000_000)
    g = pa.add_parser("graph")
    g.add_argument("file")
    g.add_argument("--kind", choices=("tx", "address", "bipartite"), default="tx")
    g.add_argument("--from", dest="start", type=int, default=None)
    g.add_argument("--to", dest="end", type=int, default=None)
    g.add_argument("--subsidy", type=int, default=5_000_000_000)
    g.add_argument("--out", default=None)
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_utxo)

    c = sub.add_parser("chainlet", help="occurrence/amount matrices")
    c.add_argument("file")
    c.add_argument("--N", type=int, default=chainlet_mod.DEFAULT_N)
    c.add_argument("--window", help="block range A:B")
    c.add_argument("--out", help="occ.csv[,amt.csv]")
    c.add_argument("--subsidy", type=int, default=5_000_000_000)
    c.add_argument("--coinbase-row", action="store_true")
    c.set_defaults(func=_cmd_chainlet)

    a = sub.add_parser("account", help="account/token/trace graphs")
    aa = a.add_subparsers(dest="action", required=True)
    for name in ("graph", "tokens", "traces"):
        pp = aa.add_parser(name)
        pp.add_argument("file")
        pp.add_argument("--out", default=None)
        pp.add_argument("--format", choices=("csv", "json"), default="csv")
        pp.add_argument("--budget", type=int, default=account_mod.DEFAULT_CALL_BUDGET)
    a.set_defaults(func=_cmd_account)

    r = sub.add_parser("ripple", help="trust graph and payment scenarios")
    ra = r.add_subparsers(dest="action", required=True)
    for name in ("trust", "pay", "offers", "report"):
        pp = ra.add_parser(name)
        pp.add_argument("--trust", help="trust graph CSV", default=None)
        if name in ("pay", "offers"):
            pp.add_argument("script")
        pp.add_argument("--out", default=None)
        pp.add_argument("--format", choices=("csv", "json"), default="csv")
        pp.add_argument("--keep-going", action="store_true")
    r.set_defaults(func=_cmd_ripple)

    i = sub.add_parser("iota", help="derivation, bundles and tangle scripts")
    ia = i.add_subparsers(dest="action", required=True)
    d = ia.add_parser("derive")
    d.add_argument("--seed-trytes", required=True)
    d.add_argument("--index", type=int, default=0)
    d.add_argument("--level", type=int, default=2)
    d.add_argument("--checksum", action="store_true")
    b = ia.add_parser("bundle")
    b.add_argument("--inputs", required=True, help="addr:level:amount,...")
    b.add_argument("--outputs", required=True, help="addr:amount,...")
    b.add_argument("--tag", default="")
    for name in ("grow", "milestone", "snapshot"):
        pp = ia.add_parser(name)
        pp.add_argument("script")
        pp.add_argument("--genesis", help="JSON address->balance map")
        pp.add_argument("--out", default=None)
        pp.add_argument("--log", default=None)
    i.set_defaults(func=_cmd_iota)

    gn = sub.add_parser("generate", help="synthetic ledgers")
    gn.add_argument("chain", choices=("utxo", "account", "ripple", "iota"))
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--count", type=int, default=1000)
    gn.add_argument("--split-bias", type=float, default=0.75)
    gn.add_argument("--reuse-p", type=float, default=0.0)
    gn.add_argument("--out", default=None)
    gn.set_defaults(func=_cmd_generate)

    rp = sub.add_parser("replay", help="scenario scripts")
    rp.add_argument("script")
    rp.add_argument("--kind", choices=("ripple", "iota"), required=True)
    rp.add_argument("--out", default=None)
    rp.set_defaults(func=_cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    conf = _load_config(args.config)
    for key, value in conf.items():  # config/env fill unset optional flags
        if hasattr(args, key) and getattr(args, key) in (None, False):
            current = getattr(args, key)
            if isinstance(current, bool):
                setattr(args, key, value.lower() in ("1", "true", "yes"))
            else:
                setattr(args, key, value)
    try:
        return args.func(args)
    except OSError as exc:
        print(json.dumps({"error": "io-failure", "message": str(exc)}),
              file=sys.stderr)
        return EXIT_IO
    except (LedgerError, ValueError, KeyError) as exc:
        # malformed scripts and records are validation failures, not crashes
        return _fail_validation(exc)


if __name__ == "__main__":
    sys.exit(main())

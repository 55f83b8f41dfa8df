"""Chainlet extraction and the occurrence/amount matrix machinery,
including boundary folding, extreme chainlet reports and aggregate
class-share time series.

A chainlet C(x, y) is the one-transaction substructure with x inputs and
y outputs; counts and transferred output totals per (x, y) are folded
into N x N matrices whose last row/column accumulate everything at or
beyond the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import LedgerError
from .utxo import Ledger, UtxoTransaction
from .utxo_graphs import HiddenAmountError, txs_in_range

__all__ = [
    "FirstOrderChainlet",
    "KChainlet",
    "ChainletMatrices",
    "UnsupportedKError",
    "classify_first_order",
    "extract_k_chainlets",
    "occurrence_matrix",
    "amount_matrix",
    "build_matrices",
    "fold_matrix",
    "fold_coinbase_row",
    "merge_matrices",
    "extreme_chainlet_report",
    "aggregate_timeseries",
    "snapshot_from_ledger",
    "DEFAULT_N",
]

DEFAULT_N = 20  # distinguishes 400 chainlet shapes and keeps the matrix dense


class UnsupportedKError(LedgerError):
    code = "unsupported-k"


@dataclass(frozen=True)
class FirstOrderChainlet:
    txid: str
    x: int  # input count
    y: int  # output count
    cls: str  # merge | transition | split | coinbase
    output_total: int  # subunits
    amounts_visible: bool = True


@dataclass(frozen=True)
class KChainlet:
    k: int
    tx_nodes: tuple[str, ...]
    address_nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    spend_direction: tuple[str, str] | None = None  # (producer, consumer) for k=2


@dataclass
class ChainletMatrices:
    """Paired N x N occurrence and amount matrices (1-based C(x,y) indexing
    maps to row x-1, column y-1). The coinbase row i=0 is stored separately
    so the core matrix shape is unchanged."""

    N: int
    occurrence: np.ndarray
    amount: np.ndarray
    coinbase_occurrence: np.ndarray | None = None
    coinbase_amount: np.ndarray | None = None
    window: str = ""


def classify_first_order(tx: UtxoTransaction) -> FirstOrderChainlet:
    """Classify one transaction by its input/output counts."""
    x, y = len(tx.inputs), len(tx.outputs)
    if tx.coinbase:
        cls = "coinbase"
    elif x > y:
        cls = "merge"
    elif x == y:
        cls = "transition"
    else:
        cls = "split"
    return FirstOrderChainlet(
        txid=tx.id, x=x, y=y, cls=cls, output_total=tx.output_total(),
        amounts_visible=all(o.amount_visible for o in tx.outputs),
    )


def snapshot_from_ledger(ledger: Ledger, start: int | None = None,
                         end: int | None = None) -> list[FirstOrderChainlet]:
    """First-order chainlets of a block-range snapshot, block order."""
    return [classify_first_order(tx) for tx in txs_in_range(ledger, start, end)]


def extract_k_chainlets(ledger: Ledger, k: int, start: int | None = None,
                        end: int | None = None) -> list[KChainlet]:
    """k=1: one chainlet per transaction (they partition the tx set).
    k=2: unordered connected transaction pairs where one spends the
    other's output inside the window; spend direction kept as attribute.
    """
    if k not in (1, 2):
        raise UnsupportedKError(f"k={k} not supported (only 1 and 2)")
    txs = txs_in_range(ledger, start, end)
    if k == 1:
        result = []
        for tx in txs:
            addrs = tuple(ledger.output(r).address for r in tx.inputs) + tuple(
                o.address for o in tx.outputs)
            edges = tuple((ledger.output(r).address, tx.id) for r in tx.inputs) + tuple(
                (tx.id, o.address) for o in tx.outputs)
            result.append(KChainlet(1, (tx.id,), addrs, edges))
        return result

    in_window = {tx.id: tx for tx in txs}
    pairs: dict[tuple[str, str], tuple[str, str]] = {}
    for tx in txs:
        for (src_txid, _idx) in tx.inputs:
            if src_txid in in_window:
                key = tuple(sorted((src_txid, tx.id)))
                pairs.setdefault(key, (src_txid, tx.id))
    result = []
    for key in sorted(pairs):
        producer, consumer = pairs[key]
        members = (in_window[producer], in_window[consumer])
        addrs: dict[str, None] = {}
        edges: list[tuple[str, str]] = []
        for tx in members:
            for r in tx.inputs:
                addr = ledger.output(r).address
                addrs.setdefault(addr)
                edges.append((addr, tx.id))
            for o in tx.outputs:
                addrs.setdefault(o.address)
                edges.append((tx.id, o.address))
        result.append(KChainlet(2, key, tuple(addrs), tuple(edges),
                                spend_direction=(producer, consumer)))
    return result


def _fold_index(v: int, n: int) -> int:
    """Map a 1-based dimension onto 0-based matrix index with boundary fold."""
    return min(v, n) - 1


def _accumulate(snapshot: Iterable[FirstOrderChainlet], n: int, want_amount: bool,
                include_coinbase_row: bool, skip_hidden: bool = False):
    if n < 1:
        raise ValueError("N must be >= 1")
    core = np.zeros((n, n), dtype=np.int64)
    cb_row = np.zeros(n, dtype=np.int64)
    for c in snapshot:
        if want_amount and not c.amounts_visible:
            if skip_hidden:
                continue  # RingCT-style txs drop out of the amount view
            raise HiddenAmountError(
                f"tx {c.txid} has hidden output amounts; amount matrix undefined"
            )
        value = c.output_total if want_amount else 1
        if c.x == 0:
            if include_coinbase_row:
                cb_row[_fold_index(c.y, n)] += value
            continue
        core[_fold_index(c.x, n), _fold_index(c.y, n)] += value
    return core, (cb_row if include_coinbase_row else None)


def occurrence_matrix(snapshot: Sequence[FirstOrderChainlet], n: int,
                      include_coinbase_row: bool = False):
    """Chainlet counts as an N x N matrix; dimensions >= N fold into the
    N-th row/column. Returns (matrix, coinbase_row_or_None)."""
    return _accumulate(snapshot, n, want_amount=False,
                       include_coinbase_row=include_coinbase_row)


def amount_matrix(snapshot: Sequence[FirstOrderChainlet], n: int,
                  include_coinbase_row: bool = False,
                  skip_hidden: bool = False):
    """Transferred coin totals per chainlet shape, in subunits. vol() is
    the sum of output amounts of the matching transactions. Hidden-amount
    transactions raise unless skip_hidden excludes them instead."""
    return _accumulate(snapshot, n, want_amount=True,
                       include_coinbase_row=include_coinbase_row,
                       skip_hidden=skip_hidden)


def build_matrices(snapshot: Sequence[FirstOrderChainlet], n: int = DEFAULT_N,
                   include_coinbase_row: bool = False,
                   window: str = "") -> ChainletMatrices:
    occ, occ_cb = occurrence_matrix(snapshot, n, include_coinbase_row)
    amt, amt_cb = amount_matrix(snapshot, n, include_coinbase_row)
    return ChainletMatrices(n, occ, amt, occ_cb, amt_cb, window)


def fold_matrix(matrix: np.ndarray, n_prime: int) -> np.ndarray:
    """Fold an N x N chainlet matrix down to N' x N' (N' <= N): entries at
    or beyond the new boundary sum into the last row/column."""
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise ValueError("chainlet matrices are square")
    if not 1 <= n_prime <= n:
        raise ValueError(f"cannot fold {n}x{n} to {n_prime}x{n_prime}")
    if n_prime == n:
        return matrix.copy()
    b = n_prime - 1  # 0-based boundary
    folded = np.zeros((n_prime, n_prime), dtype=matrix.dtype)
    folded[:b, :b] = matrix[:b, :b]
    folded[:b, b] = matrix[:b, b:].sum(axis=1)
    folded[b, :b] = matrix[b:, :b].sum(axis=0)
    folded[b, b] = matrix[b:, b:].sum()
    return folded


def merge_matrices(parts: Sequence[ChainletMatrices]) -> ChainletMatrices:
    """Elementwise sum of per-window matrices (valid because both counts
    and amounts are linear in the transaction set), so disjoint windows
    can be built in parallel and combined."""
    if not parts:
        raise ValueError("nothing to merge")
    first = parts[0]
    if any(p.N != first.N for p in parts):
        raise ValueError("all parts must share the fold dimension N")
    has_cb = first.coinbase_occurrence is not None
    if any((p.coinbase_occurrence is not None) != has_cb for p in parts):
        raise ValueError("mixed coinbase-row settings")
    return ChainletMatrices(
        N=first.N,
        occurrence=sum(p.occurrence for p in parts),
        amount=sum(p.amount for p in parts),
        coinbase_occurrence=(sum(p.coinbase_occurrence for p in parts)
                             if has_cb else None),
        coinbase_amount=(sum(p.coinbase_amount for p in parts)
                         if has_cb else None),
        window="+".join(p.window for p in parts if p.window),
    )


def fold_coinbase_row(row: np.ndarray, n_prime: int) -> np.ndarray:
    n = row.shape[0]
    if not 1 <= n_prime <= n:
        raise ValueError(f"cannot fold row of {n} to {n_prime}")
    folded = np.zeros(n_prime, dtype=row.dtype)
    folded[: n_prime - 1] = row[: n_prime - 1]
    folded[n_prime - 1] = row[n_prime - 1:].sum()
    return folded


def extreme_chainlet_report(snapshot: Sequence[FirstOrderChainlet],
                            n: int) -> list[dict]:
    """Transactions whose dimensions reach the fold boundary. Sell pattern:
    few inputs fan out to >= N outputs; buy pattern: >= N inputs collapse
    into few outputs."""
    if n < 1:
        raise ValueError("N must be >= 1")
    report = []
    for c in snapshot:
        if c.x < n and c.y < n:
            continue
        if c.x < n <= c.y:
            pattern = "sell-pattern"
        elif c.y < n <= c.x:
            pattern = "buy-pattern"
        else:
            pattern = "extreme-both"
        report.append({
            "txid": c.txid, "x": c.x, "y": c.y,
            "output_total": c.output_total, "pattern": pattern,
            "amounts_visible": c.amounts_visible,
        })
    return report


def aggregate_timeseries(
    windows: Sequence[Sequence[FirstOrderChainlet]],
) -> list[tuple[float, float, float]]:
    """Per-window (merge%, transition%, split%) of non-coinbase txs.
    The three shares sum to 100 whenever the window is non-empty."""
    series = []
    for snapshot in windows:
        counts = {"merge": 0, "transition": 0, "split": 0}
        for c in snapshot:
            if c.cls in counts:
                counts[c.cls] += 1
        total = sum(counts.values())
        if total == 0:
            series.append((0.0, 0.0, 0.0))
        else:
            series.append((
                100.0 * counts["merge"] / total,
                100.0 * counts["transition"] / total,
                100.0 * counts["split"] / total,
            ))
    return series

"""Account-model ledger: nonce-ordered transaction multigraph, built-in
fungible token contracts producing internal transfers, and trace
hypergraphs over scripted call cascades.

Token transfers are internal state changes, never top-level transactions;
the executor is strictly single-threaded and calls run sequentially.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .core import Edge, EdgeList, Hyperedge, Hypergraph, LedgerError

__all__ = [
    "AccountTx",
    "TokenContract",
    "InternalTransfer",
    "TraceStep",
    "Trace",
    "NonceGap",
    "NonceError",
    "InsufficientTokenBalanceError",
    "validate_nonce_order",
    "build_account_graph",
    "deploy_token",
    "TokenLedger",
    "build_token_graph",
    "shared_traders",
    "build_trace_hypergraph",
    "trace_value_edges",
    "TraceExecutor",
    "NULL_ADDRESS",
    "DEFAULT_CALL_BUDGET",
]

NULL_ADDRESS = "NULL"
DEFAULT_CALL_BUDGET = 1024  # flat per-step gas accounting


class NonceError(LedgerError):
    code = "nonce-error"


class InsufficientTokenBalanceError(LedgerError):
    code = "insufficient-token-balance"


@dataclass(frozen=True)
class AccountTx:
    """One mined transaction; the sender is always an externally owned
    address (contracts and NULL cannot initiate)."""

    sender: str
    to: str
    amount_wei: int
    nonce: int
    block_height: int
    block_index: int
    timestamp: int = 0
    input_data: bytes = b""
    contract_creation: bool = False

    def __post_init__(self) -> None:
        if self.nonce < 0:
            raise ValueError("nonce must be non-negative")
        if self.sender == NULL_ADDRESS:
            raise ValueError("the NULL address cannot initiate a transaction")
        if self.contract_creation and not self.input_data:
            raise ValueError("contract creation carries the code as input data")


@dataclass(frozen=True)
class NonceGap:
    sender: str
    kind: str  # gap | duplicate
    nonce: int
    detail: str


def validate_nonce_order(txs: Iterable[AccountTx]) -> list[NonceGap]:
    """Check that every sender's mined nonces form 0,1,2,... in mining
    order (blocks, then block index; same-block multiples must ascend).
    Returns an empty list when the set is valid."""
    by_sender: dict[str, list[AccountTx]] = {}
    for tx in txs:
        by_sender.setdefault(tx.sender, []).append(tx)
    problems: list[NonceGap] = []
    for sender in sorted(by_sender):
        rows = sorted(by_sender[sender], key=lambda t: (t.block_height, t.block_index))
        seen: set[int] = set()
        expected = 0
        for tx in rows:
            if tx.nonce in seen:
                problems.append(NonceGap(sender, "duplicate", tx.nonce,
                                         f"nonce {tx.nonce} mined twice"))
                continue
            seen.add(tx.nonce)
            if tx.nonce > expected:
                problems.append(NonceGap(
                    sender, "gap", expected,
                    f"nonce {tx.nonce} mined while {expected} absent"))
                expected = tx.nonce + 1
            elif tx.nonce < expected:
                problems.append(NonceGap(
                    sender, "out-of-order", tx.nonce,
                    f"nonce {tx.nonce} mined after nonce {expected - 1}"))
            else:
                expected += 1
    return problems


def build_account_graph(txs: Sequence[AccountTx],
                        require_valid_nonces: bool = True) -> EdgeList:
    """Directed weighted multigraph: one edge per transaction with the
    full feature set of the edge table."""
    if require_valid_nonces:
        problems = validate_nonce_order(txs)
        if problems:
            raise NonceError("; ".join(p.detail for p in problems))
    graph = EdgeList(directed=True, multi=True)
    for tx in txs:
        graph.add(Edge.make(
            tx.sender, tx.to, tx.amount_wei,
            nonce=tx.nonce, block=tx.block_height, index=tx.block_index,
            timestamp=tx.timestamp,
        ))
    return graph


# --------------------------------------------------------------------------
# Tokens

def _default_digest(owner: str, nonce: int) -> str:
    raw = hashlib.sha256(f"{owner}:{nonce}".encode("utf-8")).hexdigest()
    return "0x" + raw[:40]


@dataclass
class TokenContract:
    """Fungible token state. The transfer function is built in; contract
    languages and bytecode are out of scope."""

    address: str
    owner: str
    symbol: str
    decimals: int
    total_supply: int
    balances: dict[str, int] = field(default_factory=dict)

    def balance_of(self, holder: str) -> int:
        return self.balances.get(holder, 0)

    def check_conservation(self) -> bool:
        return sum(self.balances.values()) == self.total_supply


@dataclass(frozen=True)
class InternalTransfer:
    """A token balance update; recorded in the token network but never
    broadcast as an ordinary transaction."""

    token: str
    sender: str
    recipient: str
    token_amount: int
    triggering_tx: str


def deploy_token(owner: str, symbol: str, decimals: int, supply: int, nonce: int,
                 digest: Callable[[str, int], str] = _default_digest) -> TokenContract:
    """Create a token contract at the address deterministically derived
    from (owner, nonce). Replaying the same pair yields the same address;
    symbols are not assumed unique."""
    address = digest(owner, nonce)
    return TokenContract(address=address, owner=owner, symbol=symbol,
                         decimals=decimals, total_supply=supply,
                         balances={owner: supply})


class TokenLedger:
    """Holds deployed contracts and the internal-transfer log."""

    def __init__(self) -> None:
        self.contracts: dict[str, TokenContract] = {}
        self.transfers: list[InternalTransfer] = []

    def register(self, contract: TokenContract) -> TokenContract:
        if contract.address in self.contracts:
            existing = self.contracts[contract.address]
            if (existing.owner, existing.symbol) != (contract.owner, contract.symbol):
                raise LedgerError(f"address collision at {contract.address}")
            return existing  # idempotent redeploy of the same (owner, nonce)
        self.contracts[contract.address] = contract
        return contract

    def execute_token_transfer(self, contract_address: str, caller: str,
                               recipient: str, token_amount: int,
                               triggering_tx: str) -> InternalTransfer:
        """The transfer-function call: moves token balance atomically.
        Fails without touching state when the caller lacks the tokens."""
        contract = self.contracts.get(contract_address)
        if contract is None:
            raise LedgerError(f"no token contract at {contract_address}")
        if token_amount < 0:
            raise ValueError("token amount must be non-negative")
        if contract.balance_of(caller) < token_amount:
            raise InsufficientTokenBalanceError(
                f"{caller} holds {contract.balance_of(caller)} < {token_amount}"
            )
        contract.balances[caller] = contract.balance_of(caller) - token_amount
        contract.balances[recipient] = contract.balance_of(recipient) + token_amount
        xfer = InternalTransfer(contract_address, caller, recipient,
                                token_amount, triggering_tx)
        self.transfers.append(xfer)
        return xfer


def build_token_graph(transfers: Iterable[InternalTransfer],
                      token: str | None = None) -> dict[str, EdgeList]:
    """Per-token directed weighted multigraphs; nodes are the trader
    addresses and every internal transfer is one edge."""
    graphs: dict[str, EdgeList] = {}
    for t in transfers:
        if token is not None and t.token != token:
            continue
        graph = graphs.setdefault(t.token, EdgeList(directed=True, multi=True))
        graph.add(Edge.make(t.sender, t.recipient, t.token_amount,
                            token=t.token, tx=t.triggering_tx))
    if token is not None:
        graphs.setdefault(token, EdgeList(directed=True, multi=True))
    return graphs


def shared_traders(graphs: dict[str, EdgeList]) -> dict[str, list[str]]:
    """Addresses active in more than one token network (overlap report)."""
    membership: dict[str, set[str]] = {}
    for token, graph in graphs.items():
        for node in graph.nodes():
            membership.setdefault(node, set()).add(token)
    return {addr: sorted(tokens) for addr, tokens in sorted(membership.items())
            if len(tokens) > 1}


# --------------------------------------------------------------------------
# Traces

_CALL_KINDS = {"call", "delegatecall", "create", "selfdestruct",
               "value-transfer", "error"}


@dataclass(frozen=True)
class TraceStep:
    caller: str
    callee: str
    kind: str = "call"
    value: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _CALL_KINDS:
            raise ValueError(f"unknown call kind {self.kind!r}")


@dataclass(frozen=True)
class Trace:
    """The ordered call cascade of one transaction. Steps execute
    sequentially; the virtual machine never makes two calls at once."""

    root_tx: str
    steps: tuple[TraceStep, ...]
    truncated: bool = False


def build_trace_hypergraph(traces: Iterable[Trace]) -> Hypergraph:
    """One hyperedge per root transaction covering every touched address
    in call order. Pure state changes (token balance updates) are not
    steps, so they never appear here."""
    hg = Hypergraph()
    for trace in traces:
        members: dict[str, None] = {}
        attrs = []
        for i, step in enumerate(trace.steps):
            if step.kind == "error":
                attrs.append((f"step{i}", "error:budget-exhausted"))
                continue
            members.setdefault(step.caller)
            members.setdefault(step.callee)
            attrs.append((f"step{i}", f"{step.kind}:{step.caller}->{step.callee}"))
        if len(members) < 2:
            continue  # a self-call-only trace cannot form a hyperedge
        hg.edges.append(Hyperedge(tuple(members), trace.root_tx, tuple(attrs)))
    return hg


def trace_value_edges(traces: Iterable[Trace]) -> EdgeList:
    """Coin-moving steps as graph edges; this is how a contract-to-EOA
    payout becomes visible, since it never exists as a top-level tx."""
    graph = EdgeList(directed=True, multi=True)
    for trace in traces:
        for step in trace.steps:
            if step.kind == "error" or step.value == 0:
                continue
            graph.add(Edge.make(step.caller, step.callee, step.value,
                                kind=step.kind, tx=trace.root_tx))
    return graph


class TraceExecutor:
    """Runs scripted call behaviors to produce traces.

    A behavior maps a contract address to the list of (callee, kind, value)
    calls it makes whenever invoked. Execution is depth-first and
    sequential with a flat per-step budget; exhausting it truncates the
    trace with an error step.
    """

    def __init__(self, behaviors: dict[str, list[tuple[str, str, int]]] | None = None,
                 call_budget: int = DEFAULT_CALL_BUDGET):
        self.behaviors = behaviors or {}
        self.call_budget = call_budget

    def run(self, root_tx: str, sender: str, to: str, value: int = 0,
            kind: str = "call") -> Trace:
        steps: list[TraceStep] = []
        budget = self.call_budget
        truncated = False

        def invoke(caller: str, callee: str, call_kind: str, amount: int) -> bool:
            nonlocal budget, truncated
            if budget <= 0:
                steps.append(TraceStep(caller, callee, "error", 0))
                truncated = True
                return False
            budget -= 1
            steps.append(TraceStep(caller, callee, call_kind, amount))
            for nxt_callee, nxt_kind, nxt_value in self.behaviors.get(callee, []):
                if not invoke(callee, nxt_callee, nxt_kind, nxt_value):
                    return False
            return True

        invoke(sender, to, kind, value)
        return Trace(root_tx, tuple(steps), truncated=truncated)

"""Shared ledger primitives: identifiers, exact integer amounts, and the
uniform graph export containers used by every chain model.

All types here are immutable value objects; builders elsewhere return new
instances instead of mutating. Amounts are integers in the smallest subunit
of their currency family and all ratio-valued weights are exact rationals,
so conservation invariants can be tested with plain equality.
"""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping

__all__ = [
    "LedgerError",
    "IncompatibleUnitsError",
    "NonIntegralConversionError",
    "AmountOverflowError",
    "Unit",
    "SATOSHI",
    "BTC",
    "WEI",
    "ETHER",
    "DROP",
    "XRP",
    "IOTA_TOKEN",
    "MIOTA",
    "issued",
    "Amount",
    "convert_unit",
    "AddressId",
    "Edge",
    "EdgeList",
    "Hyperedge",
    "Hypergraph",
    "export_edge_list",
    "export_hypergraph",
    "export_matrix",
    "canonical_json",
]

# Signed 128-bit bound; Python ints never wrap, so the overflow contract is
# enforced explicitly at this artifact boundary.
MAX_AMOUNT = 2**127 - 1


class LedgerError(Exception):
    """Base class for every validation or contract error in the package."""

    code = "ledger-error"


class IncompatibleUnitsError(LedgerError):
    code = "incompatible-units"


class NonIntegralConversionError(LedgerError):
    code = "non-integral-result"


class AmountOverflowError(LedgerError):
    code = "amount-overflow"


@dataclass(frozen=True)
class Unit:
    """A currency unit: a family tag plus a decimal scale above the subunit.

    ``scale`` is the power of ten separating this unit from the family's
    smallest subunit (satoshi, wei, drop, iota token). Issued currencies
    have no subunit hierarchy; their scale is always 0.
    """

    family: str
    name: str
    scale: int = 0

    def __str__(self) -> str:
        return self.name


SATOSHI = Unit("btc", "satoshi", 0)
BTC = Unit("btc", "BTC", 8)  # one bitcoin contains 100 million satoshis
WEI = Unit("eth", "wei", 0)
ETHER = Unit("eth", "ether", 18)
DROP = Unit("xrp", "drop", 0)
XRP = Unit("xrp", "XRP", 6)  # 1 XRP = 1 million drops
IOTA_TOKEN = Unit("iota", "iota", 0)
MIOTA = Unit("iota", "Miota", 6)


def issued(currency: str, issuer: str | None = None) -> Unit:
    """Unit for a user-issued currency; 3- or 40-character code."""
    if len(currency) not in (3, 40):
        raise IncompatibleUnitsError(
            f"issued currency code must be 3 or 40 characters, got {currency!r}"
        )
    tag = f"issued:{currency}" + (f".{issuer}" if issuer else "")
    return Unit(tag, currency, 0)


def _check_bound(value: int) -> int:
    if not -MAX_AMOUNT <= value <= MAX_AMOUNT:
        raise AmountOverflowError(f"amount {value} exceeds the integer boundary")
    return value


@dataclass(frozen=True, order=False)
class Amount:
    """Signed integer amount in a specific unit. Arithmetic is checked."""

    value: int
    unit: Unit

    def __post_init__(self) -> None:
        if not isinstance(self.value, int):
            raise TypeError("Amount.value must be an int (no floating-point finance)")
        _check_bound(self.value)

    def _require_same_unit(self, other: "Amount") -> None:
        if self.unit != other.unit:
            raise IncompatibleUnitsError(
                f"cannot combine {self.unit} with {other.unit}"
            )

    def __add__(self, other: "Amount") -> "Amount":
        self._require_same_unit(other)
        return Amount(_check_bound(self.value + other.value), self.unit)

    def __sub__(self, other: "Amount") -> "Amount":
        self._require_same_unit(other)
        return Amount(_check_bound(self.value - other.value), self.unit)

    def __neg__(self) -> "Amount":
        return Amount(_check_bound(-self.value), self.unit)

    def __lt__(self, other: "Amount") -> bool:
        self._require_same_unit(other)
        return self.value < other.value

    def __le__(self, other: "Amount") -> bool:
        self._require_same_unit(other)
        return self.value <= other.value

    def __str__(self) -> str:
        return f"{self.value} {self.unit.name}"


def convert_unit(amount: Amount, target: Unit) -> Amount:
    """Exact integer rescaling between units of one currency family.

    Raises IncompatibleUnitsError across families and
    NonIntegralConversionError when the result would lose precision
    (e.g. 1 satoshi expressed in BTC).
    """
    if amount.unit.family != target.family:
        raise IncompatibleUnitsError(
            f"cannot convert {amount.unit} to {target} (different families)"
        )
    shift = amount.unit.scale - target.scale
    if shift >= 0:
        return Amount(_check_bound(amount.value * 10**shift), target)
    div = 10**-shift
    if amount.value % div:
        raise NonIntegralConversionError(
            f"{amount} is not an integral number of {target.name}"
        )
    return Amount(amount.value // div, target)


# --------------------------------------------------------------------------
# Identifiers

_LEGAL_KINDS = {
    "utxo": {"plain", "t-addr", "z-addr"},
    "account": {"eoa", "contract", "null"},
    "ripple": {"plain", "gateway", "market", "wallet"},
    "iota": {"plain"},
}


@dataclass(frozen=True)
class AddressId:
    """Opaque chain-scoped address. No base58 or checksum validation."""

    chain: str
    raw: str
    kind: str = "plain"

    def __post_init__(self) -> None:
        if not self.raw:
            raise ValueError("address raw string must be non-empty")
        legal = _LEGAL_KINDS.get(self.chain)
        if legal is None:
            raise ValueError(f"unknown chain tag {self.chain!r}")
        if self.kind not in legal:
            raise ValueError(f"kind {self.kind!r} is not legal for chain {self.chain!r}")

    def __str__(self) -> str:
        return self.raw


# --------------------------------------------------------------------------
# Graph containers

def canonical_json(attrs: Mapping[str, Any]) -> str:
    """Stable JSON for attribute maps: sorted keys, compact separators."""
    return json.dumps(attrs, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: Fraction | int | None = None
    attrs: tuple[tuple[str, Any], ...] = ()

    @staticmethod
    def make(source: str, target: str, weight: Fraction | int | None = None,
             **attrs: Any) -> "Edge":
        return Edge(source, target, weight, tuple(sorted(attrs.items())))

    @property
    def attr_dict(self) -> dict[str, Any]:
        return dict(self.attrs)


@dataclass
class EdgeList:
    """Uniform export container for the directed/weighted graph types.

    With multi=False, (source, target, currency-attribute) triples must be
    unique; duplicates raise at append time.
    """

    directed: bool = True
    multi: bool = True
    edges: list[Edge] = field(default_factory=list)
    _seen: set[tuple[str, str, Any]] = field(default_factory=set, repr=False)

    def add(self, edge: Edge) -> None:
        if not self.multi:
            key = (edge.source, edge.target, edge.attr_dict.get("currency"))
            if key in self._seen:
                raise ValueError(f"duplicate edge {key} in simple graph")
            self._seen.add(key)
        self.edges.append(edge)

    def nodes(self) -> list[str]:
        seen: dict[str, None] = {}
        for e in self.edges:
            seen.setdefault(e.source)
            seen.setdefault(e.target)
        return list(seen)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Hyperedge:
    """Ordered hyperedge; member order reflects call/path order."""

    members: tuple[str, ...]
    label: str = ""
    step_attrs: tuple[tuple[str, Any], ...] = ()

    def __post_init__(self) -> None:
        if len(self.members) < 2:
            raise ValueError("hyperedge needs at least 2 members")


@dataclass
class Hypergraph:
    edges: list[Hyperedge] = field(default_factory=list)

    def nodes(self) -> list[str]:
        seen: dict[str, None] = {}
        for h in self.edges:
            for m in h.members:
                seen.setdefault(m)
        return list(seen)


# --------------------------------------------------------------------------
# Deterministic export

_EDGE_HEADER = "source,target,weight_num,weight_den,attr_json"


def _edge_row(edge: Edge) -> tuple[str, str, str, str, str]:
    if edge.weight is None:
        num = den = ""
    else:
        w = Fraction(edge.weight)
        num, den = str(w.numerator), str(w.denominator)
    return edge.source, edge.target, num, den, canonical_json(edge.attr_dict)


def _attr_hash(attr_json: str) -> str:
    return hashlib.sha256(attr_json.encode("utf-8")).hexdigest()


def _csv_quote(cell: str) -> str:
    if any(c in cell for c in ',"\n'):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def export_edge_list(graph: EdgeList | Iterable[Edge], fmt: str = "csv") -> bytes:
    """Serialize a graph deterministically; re-export is byte-identical.

    Rows are sorted by (source, target, attribute hash) so two builds of
    the same ledger produce identical bytes regardless of build order.
    """
    edges = graph.edges if isinstance(graph, EdgeList) else list(graph)
    rows = sorted(
        (_edge_row(e) for e in edges),
        key=lambda r: (r[0], r[1], _attr_hash(r[4]), r[2], r[3]),
    )
    if fmt == "csv":
        out = io.StringIO()
        out.write(_EDGE_HEADER + "\n")
        for row in rows:
            out.write(",".join(_csv_quote(c) for c in row) + "\n")
        return out.getvalue().encode("utf-8")
    if fmt == "json":
        payload = [
            {"source": s, "target": t, "weight_num": n, "weight_den": d,
             "attrs": json.loads(a)}
            for s, t, n, d, a in rows
        ]
        return (json.dumps(payload, sort_keys=True, separators=(",", ":"),
                           ensure_ascii=False) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def export_hypergraph(graph: Hypergraph, fmt: str = "csv") -> bytes:
    """Hyperedges as (label, position, member) rows or JSON objects."""
    rows = []
    for h in sorted(graph.edges, key=lambda h: (h.label, h.members)):
        for pos, member in enumerate(h.members):
            rows.append((h.label, str(pos), member))
    if fmt == "csv":
        out = io.StringIO()
        out.write("label,position,member\n")
        for row in rows:
            out.write(",".join(_csv_quote(c) for c in row) + "\n")
        return out.getvalue().encode("utf-8")
    if fmt == "json":
        payload = [
            {"label": h.label, "members": list(h.members),
             "step_attrs": dict(h.step_attrs)}
            for h in sorted(graph.edges, key=lambda h: (h.label, h.members))
        ]
        return (json.dumps(payload, sort_keys=True, separators=(",", ":"),
                           ensure_ascii=False) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def export_matrix(matrix) -> bytes:
    """N rows of N comma-separated integers, LF line endings."""
    lines = []
    for row in matrix:
        lines.append(",".join(str(int(v)) for v in row))
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""

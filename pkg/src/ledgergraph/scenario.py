"""Scripted scenario replay: JSONL commands applied in order against a
Ripple or tangle state, with an event log recording every transition,
including rejected operations (which leave state untouched)."""

from __future__ import annotations

import json
from typing import Iterable

from .core import LedgerError
from .ripple import CurrencyValue, PaymentSpec, RippleLedger
from .iota.bundles import build_bundle
from .iota.tangle import TangleState

__all__ = ["replay_ripple", "replay_tangle", "replay"]


def _cv(obj) -> CurrencyValue:
    return CurrencyValue(obj["currency"], obj.get("issuer"), int(obj["value"]))


def _ripple_step(led: RippleLedger, cmd: dict):
    op = cmd["op"]
    if op == "create_account":
        led.create_account(cmd["address"], int(cmd.get("xrp", 0)))
        return {"address": cmd["address"]}
    if op == "set_trust":
        state = led.set_trust(cmd["lender"], cmd["borrower"], cmd["currency"],
                              int(cmd["limit"]),
                              no_ripple=bool(cmd.get("no_ripple", True)))
        return {"deleted": state is None}
    if op == "adjust_debt":
        led.adjust_line_debt(cmd["lender"], cmd["borrower"], cmd["currency"],
                             int(cmd["amount"]))
        return {}
    if op == "pay":
        spec = PaymentSpec(
            account=cmd["account"], destination=cmd["destination"],
            amount=_cv(cmd["amount"]),
            send_max=_cv(cmd["send_max"]) if cmd.get("send_max") else None,
            pathset=tuple(tuple(p) for p in cmd.get("paths", [])),
            tf_no_direct_ripple=bool(cmd.get("no_direct_ripple", False)),
            tf_partial_payment=bool(cmd.get("partial", False)),
        )
        return led.pay(spec)
    if op == "offer":
        return led.create_offer(cmd["owner"], _cv(cmd["gets"]), _cv(cmd["pays"]))
    if op == "cancel_offer":
        led.cancel_offer(cmd["owner"], int(cmd["sequence"]))
        return {}
    if op == "write_check":
        check = led.write_check(cmd["sender"], cmd["receiver"], _cv(cmd["amount"]),
                                cmd.get("expiration"))
        return {"check_id": check.check_id}
    if op == "cash_check":
        cashed = led.cash_check(int(cmd["check_id"]), int(cmd["amount"]),
                                int(cmd.get("now", 0)))
        return {"cashed": cashed}
    if op == "cancel_check":
        led.cancel_check(int(cmd["check_id"]), cmd["by"])
        return {}
    if op == "create_escrow":
        escrow = led.create_escrow(cmd["sender"], cmd["receiver"], int(cmd["drops"]),
                                   int(cmd["release_time"]), cmd.get("expiration"))
        return {"escrow_id": escrow.escrow_id}
    if op == "finish_escrow":
        return {"released": led.finish_escrow(int(cmd["escrow_id"]), int(cmd["now"]))}
    if op == "cancel_escrow":
        return {"refunded": led.cancel_escrow(int(cmd["escrow_id"]), int(cmd["now"]))}
    raise LedgerError(f"unknown ripple op {op!r}")


def replay_ripple(lines: Iterable[str],
                  ledger: RippleLedger | None = None) -> tuple[RippleLedger, list[dict]]:
    led = ledger or RippleLedger()
    log: list[dict] = []
    for i, line in enumerate(_records(lines)):
        before = led.state_digest()
        try:
            result = _ripple_step(led, line)
            log.append({"index": i, "op": line["op"], "ok": True, "result": result})
        except LedgerError as exc:
            assert led.state_digest() == before, "failed op must not mutate state"
            log.append({"index": i, "op": line["op"], "ok": False,
                        "error": {"code": getattr(exc, "code", "ledger-error"),
                                  "message": str(exc)}})
    return led, log


def _tangle_step(state: TangleState, cmd: dict, aliases: dict[str, str]):
    op = cmd["op"]
    if op == "attach_bundle":
        bundle = build_bundle(
            [(i["address"], int(i.get("level", 2)), int(i["amount"]))
             for i in cmd["inputs"]],
            [(o["address"], int(o["amount"])) for o in cmd["outputs"]],
            tag=cmd.get("tag", ""), timestamp=int(cmd.get("timestamp", 0)),
            sponge_factory=state.sponge_factory)
        tips = _tips(state, cmd, aliases)
        head = state.attach(bundle, tips, difficulty=int(cmd.get("difficulty", 0)))
        if cmd.get("as"):
            aliases[cmd["as"]] = head
        return {"head": head, "bundle": bundle.bundle_hash}
    if op == "attach_message":
        tips = _tips(state, cmd, aliases)
        head = state.attach_message(cmd["address"], tips, tag=cmd.get("tag", ""),
                                    timestamp=int(cmd.get("timestamp", 0)),
                                    data=cmd.get("data", ""),
                                    difficulty=int(cmd.get("difficulty", 0)))
        if cmd.get("as"):
            aliases[cmd["as"]] = head
        return {"head": head}
    if op == "milestone":
        if "tips" in cmd:
            tips = _tips(state, cmd, aliases)
            head = state.attach_message(state.coordinator, tips, tag="MILESTONE",
                                        timestamp=int(cmd.get("timestamp", 0)))
            result = state.apply_milestone(head)
        else:
            head = state.issue_milestone(timestamp=int(cmd.get("timestamp", 0)))
            result = {"confirmed_bundles": None}
        if cmd.get("as"):
            aliases[cmd["as"]] = head
        return {"milestone": head, "invalid": sorted(state.invalid),
                "balances": dict(sorted(state.balances.items()))}
    if op == "promote":
        head = state.promote(aliases.get(cmd["tx"], cmd["tx"]),
                             timestamp=int(cmd.get("timestamp", 0)))
        return {"head": head}
    if op == "select_tips":
        trunk, branch = state.select_tips(cmd.get("strategy", "uniform-random"),
                                          int(cmd.get("seed", 0)))
        return {"trunk": trunk, "branch": branch}
    raise LedgerError(f"unknown tangle op {op!r}")


def _tips(state: TangleState, cmd: dict, aliases: dict[str, str]) -> tuple[str, str]:
    if "tips" in cmd:
        trunk, branch = cmd["tips"]
        return (aliases.get(trunk, trunk), aliases.get(branch, branch))
    return state.select_tips("oldest-first")


def replay_tangle(lines: Iterable[str],
                  state: TangleState | None = None,
                  genesis_balances: dict[str, int] | None = None,
                  ) -> tuple[TangleState, list[dict]]:
    from .iota.tangle import GENESIS_HASH
    st = state or TangleState(genesis_balances or {})
    aliases: dict[str, str] = {"GENESIS": GENESIS_HASH}
    log: list[dict] = []
    for i, cmd in enumerate(_records(lines)):
        if cmd["op"] == "snapshot":
            balances, st = st.snapshot()
            log.append({"index": i, "op": "snapshot", "ok": True,
                        "result": {"balances": dict(sorted(balances.items()))}})
            continue
        try:
            result = _tangle_step(st, cmd, aliases)
            log.append({"index": i, "op": cmd["op"], "ok": True, "result": result})
        except LedgerError as exc:
            log.append({"index": i, "op": cmd["op"], "ok": False,
                        "error": {"code": getattr(exc, "code", "ledger-error"),
                                  "message": str(exc)}})
    return st, log


def _records(lines: Iterable[str]) -> Iterable[dict]:
    for line in lines:
        if isinstance(line, dict):
            yield line
            continue
        line = line.strip()
        if line:
            yield json.loads(line)


def replay(lines: Iterable[str], kind: str):
    """Dispatch by chain kind; returns (final_state, event_log)."""
    if kind == "ripple":
        return replay_ripple(lines)
    if kind == "iota":
        return replay_tangle(lines)
    raise LedgerError(f"scenario replay supports ripple|iota, not {kind!r}")

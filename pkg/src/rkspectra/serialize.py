"""JSON documents for labeled preorders, and Graphviz DOT for their Hasse diagrams.

Document layout::

    {"nodes": [{"id": "0|", "il": "0"}, ...],
     "order": [["0|", "1|"], ...],
     "meta": {"signature": [1, 0], "canonical": true}}

IL values are decimal strings so that big integers survive any JSON reader.
Only order generators are stored; the closure is rebuilt on load.
"""

from __future__ import annotations

import json
import re
from typing import Any

from .catalog import TheorySignature
from .poset import LabeledPreorder, PreorderError, hasse_edges, make_preorder, quotient_rk

__all__ = ["DocumentError", "dumps", "from_document", "loads", "to_document", "to_dot"]

_DECIMAL = re.compile(r"[0-9]+")
_KEYS = {"nodes", "order", "meta"}


class DocumentError(ValueError):
    """The input is not a well-formed preorder document."""


def to_document(p: LabeledPreorder, signature: TheorySignature | None = None) -> dict[str, Any]:
    meta: dict[str, Any] = {"canonical": p.canonical}
    if signature is not None:
        meta["signature"] = [signature.k, signature.s]
    return {
        "nodes": [{"id": x, "il": str(p.il[x])} for x in p.nodes],
        "order": [[x, y] for x, y in p.generators],
        "meta": meta,
    }


def dumps(p: LabeledPreorder, signature: TheorySignature | None = None) -> str:
    return json.dumps(to_document(p, signature), indent=1, ensure_ascii=False) + "\n"


def from_document(doc: Any) -> tuple[LabeledPreorder, TheorySignature | None]:
    """Validate a decoded document; returns the preorder and its declared signature."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    keys = set(doc)
    if not {"nodes", "order"} <= keys or not keys <= _KEYS:
        raise DocumentError(f"document keys must be nodes, order and optionally meta; got {sorted(keys)}")

    nodes, il = [], {}
    if not isinstance(doc["nodes"], list):
        raise DocumentError("'nodes' must be a list")
    for entry in doc["nodes"]:
        if not isinstance(entry, dict) or set(entry) != {"id", "il"}:
            raise DocumentError(f"node entries need exactly 'id' and 'il': {entry!r}")
        ident, value = entry["id"], entry["il"]
        if not isinstance(ident, str):
            raise DocumentError(f"node id must be a string: {ident!r}")
        if not isinstance(value, str) or not _DECIMAL.fullmatch(value):
            raise DocumentError(f"il of {ident!r} must be a non-negative decimal string: {value!r}")
        if ident in il:
            raise DocumentError(f"duplicate node id {ident!r}")
        nodes.append(ident)
        il[ident] = int(value)

    if not isinstance(doc["order"], list):
        raise DocumentError("'order' must be a list")
    pairs = []
    for pair in doc["order"]:
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
            raise DocumentError(f"order entries must be [id, id]: {pair!r}")
        pairs.append((pair[0], pair[1]))

    meta = doc.get("meta") or {}
    if not isinstance(meta, dict) or not set(meta) <= {"signature", "canonical"}:
        raise DocumentError(f"bad meta block: {meta!r}")
    canonical = meta.get("canonical", False)
    if not isinstance(canonical, bool):
        raise DocumentError("meta.canonical must be a boolean")
    signature = None
    if "signature" in meta:
        sig = meta["signature"]
        if not (
            isinstance(sig, list)
            and len(sig) == 2
            and all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in sig)
        ):
            raise DocumentError(f"meta.signature must be [k, s]: {sig!r}")
        signature = TheorySignature(*sig)

    try:
        p = make_preorder(nodes, pairs, il, canonical=canonical)
    except PreorderError as exc:
        raise DocumentError(str(exc)) from exc
    return p, signature


def loads(text: str) -> tuple[LabeledPreorder, TheorySignature | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return from_document(doc)


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _quote(s: str) -> str:
    return f'"{_escape(s)}"'


def to_dot(p: LabeledPreorder, name: str = "RK") -> str:
    """Hasse diagram of ``quotient_rk(p)``, edges pointing upward, one rank per height."""
    q = quotient_rk(p)
    edges = hasse_edges(q)
    below: dict[str, list[str]] = {x: [] for x in q.nodes}
    for x, y in edges:
        below[y].append(x)
    height: dict[str, int] = {}
    # Nodes sorted by down-set size come after everything they cover.
    for i in sorted(range(len(q)), key=lambda i: q.down[i].bit_count()):
        x = q.nodes[i]
        height[x] = max((height[z] + 1 for z in below[x]), default=0)

    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for x in q.nodes:
        label = _escape(x) + r"\n" + f"IL={q.il[x]}"
        lines.append(f'  {_quote(x)} [label="{label}"];')
    for h in range(max(height.values()) + 1):
        members = " ".join(_quote(x) + ";" for x in q.nodes if height[x] == h)
        lines.append(f"  {{ rank=same; {members} }}")
    for x, y in edges:
        lines.append(f"  {_quote(x)} -> {_quote(y)};")
    lines.append("}")
    return "\n".join(lines) + "\n"

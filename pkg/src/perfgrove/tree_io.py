"""Tree serialization: nested-brace listings and versioned JSON.

Listing grammar (whitespace between tokens is insignificant)::

    tree   := inner | leaf
    inner  := '{' QUOTED ':' '{' branch (',' branch)* '}' '}'
    branch := NUMBER ':' tree
    leaf   := '<ProbDist' entry (',' entry)* '>'
    entry  := NUMBER '-' NUMBER '=' NUMBER

Listings carry no sample counts, so parsed leaves get ``n=0`` and are
flagged synthetic.
"""

from __future__ import annotations

import json
import math
import re
from typing import Any

from perfgrove.binning import BinSet, make_label
from perfgrove.errors import DomainError, FormatError
from perfgrove.id3 import Internal, Leaf, Node, ProbDist, _sort_values

FORMAT_VERSION = 1
SUM_TOLERANCE = 1e-6

_NUMBER = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?")
_QUOTED = re.compile(r"'([^']*)'|\"([^\"]*)\"")


def _to_number(text: str):
    return float(text) if any(c in text for c in ".eE") else int(text)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, message: str, pos: int | None = None):
        pos = self.pos if pos is None else pos
        raise FormatError(f"{message} at offset {pos}", offset=pos)

    def skip(self):
        n = len(self.text)
        while self.pos < n and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos : self.pos + 1]

    def expect(self, token: str):
        self.skip()
        if not self.text.startswith(token, self.pos):
            found = self.text[self.pos : self.pos + 10] or "end of input"
            self.fail(f"expected {token!r}, found {found!r}")
        self.pos += len(token)

    def number(self):
        self.skip()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.fail("expected a number")
        self.pos = m.end()
        return _to_number(m.group(0))

    def tree(self) -> Node:
        c = self.peek()
        if c == "{":
            return self.inner()
        if c == "<":
            return self.leaf()
        if not c:
            self.fail("unexpected end of input")
        self.fail(f"expected '{{' or '<', found {c!r}")

    def inner(self) -> Internal:
        self.expect("{")
        self.skip()
        m = _QUOTED.match(self.text, self.pos)
        if not m:
            self.fail("expected a quoted attribute name")
        attribute = m.group(1) if m.group(1) is not None else m.group(2)
        self.pos = m.end()
        self.expect(":")
        self.expect("{")
        children: dict[Any, Node] = {}
        while True:
            start = self.pos
            value = self.number()
            if value in children:
                self.fail(f"duplicate branch {value!r} under {attribute!r}", start)
            self.expect(":")
            children[value] = self.tree()
            c = self.peek()
            if c == ",":
                self.pos += 1
                if self.peek() == "}":
                    break
                continue
            if c == "}":
                break
            self.fail(f"expected ',' or '}}' after branch, found {c or 'end of input'!r}")
        self.expect("}")
        self.expect("}")
        return Internal(attribute, children)

    def leaf(self) -> Leaf:
        start = self.pos
        self.expect("<ProbDist")
        probs: dict[str, float] = {}
        while True:
            lab_start = self.pos
            hi = self.number()
            self.expect("-")
            lo = self.number()
            label = make_label(lo, hi)
            self.expect("=")
            p = self.number()
            if label in probs:
                self.fail(f"duplicate entry {label!r}", lab_start)
            if not 0 < p <= 1:
                self.fail(f"probability {p!r} outside (0, 1]", lab_start)
            probs[label] = float(p)
            c = self.peek()
            if c == ",":
                self.pos += 1
                continue
            if c == ">":
                self.pos += 1
                break
            self.fail(f"expected ',' or '>' in ProbDist, found {c or 'end of input'!r}")
        total = math.fsum(probs.values())
        if abs(total - 1.0) > SUM_TOLERANCE:
            self.fail(f"ProbDist probabilities sum to {total!r}", start)
        return Leaf(ProbDist(probs, tol=SUM_TOLERANCE), n=0, synthetic=True)


def parse_appendix(text: str) -> Node:
    """Parse a nested-brace tree listing."""
    p = _Parser(text)
    tree = p.tree()
    p.skip()
    if p.pos != len(text):
        p.fail(f"trailing text {text[p.pos:p.pos + 10]!r}")
    return tree


def _format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    return str(v) if isinstance(v, int) else repr(float(v))


def _render_leaf(leaf: Leaf) -> str:
    inner = ", ".join(f"{lab}={p!r}" for lab, p in leaf.dist.items())
    return f"<ProbDist {inner}>"


def _render(node: Node, depth: int) -> str:
    if isinstance(node, Leaf):
        return _render_leaf(node)
    pad = "  " * (depth + 1)
    branches = ",\n".join(
        f"{pad}{_format_value(v)}: {_render(node.children[v], depth + 1)}" for v in _sort_values(node.children)
    )
    return f"{{ '{node.attribute}': {{\n{branches}}}}}"


def render_appendix(tree: Node) -> str:
    """Canonical listing: one branch per line, two spaces per depth level."""
    return _render(tree, 0)


def node_to_obj(node: Node) -> dict:
    if isinstance(node, Leaf):
        out: dict[str, Any] = {"dist": dict(node.dist.items()), "n": node.n}
        if node.synthetic:
            out["synthetic"] = True
        return out
    return {
        "attr": node.attribute,
        "children": {_format_value(v): node_to_obj(node.children[v]) for v in _sort_values(node.children)},
    }


def node_from_obj(obj: Any) -> Node:
    if not isinstance(obj, dict):
        raise FormatError(f"tree node must be an object, got {type(obj).__name__}")
    if "dist" in obj:
        try:
            dist = ProbDist(obj["dist"], tol=SUM_TOLERANCE)
        except DomainError as exc:
            raise FormatError(f"bad leaf distribution: {exc}") from None
        return Leaf(dist, n=int(obj.get("n", 0)), synthetic=bool(obj.get("synthetic", False)))
    if "attr" in obj and "children" in obj:
        children = {}
        for key, child in obj["children"].items():
            try:
                value = _to_number(key)
            except ValueError:
                raise FormatError(f"branch value {key!r} is not numeric") from None
            children[value] = node_from_obj(child)
        if not children:
            raise FormatError(f"internal node {obj['attr']!r} has no children")
        return Internal(str(obj["attr"]), children)
    raise FormatError(f"unrecognized tree node with keys {sorted(obj)}")


def to_obj(tree: Node, binset: BinSet) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "binset": {"boundaries": list(binset.boundaries)},
        "root": node_to_obj(tree),
    }


def check_version(obj: Any) -> None:
    if not isinstance(obj, dict):
        raise FormatError("model JSON must be an object")
    if "format_version" not in obj:
        raise FormatError("model JSON has no format_version")
    if obj["format_version"] != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {obj['format_version']!r}")


def to_json(tree: Node, binset: BinSet) -> str:
    return json.dumps(to_obj(tree, binset), indent=2)


def from_json(text: str) -> tuple[Node, BinSet]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}", offset=exc.pos) from None
    check_version(obj)
    try:
        binset = BinSet(tuple(obj["binset"]["boundaries"]))
    except (KeyError, TypeError):
        raise FormatError("model JSON has no binset boundaries") from None
    except DomainError as exc:
        raise FormatError(f"bad binset: {exc}") from None
    if "root" not in obj:
        raise FormatError("model JSON has no root node")
    return node_from_obj(obj["root"]), binset

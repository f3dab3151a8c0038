"""Rebuild a balanced tree listing from a page-extracted one.

Text extracted from paginated documents loses and duplicates closing
braces, so brace counting cannot be trusted to place branches. Instead
every ``value:`` key is attached to an open attribute dict that can hold
it: the value must lie in the attribute's domain and exceed the dict's
previous key (listings are emitted in ascending order). Among those, the
dict whose depth is closest to what the preceding run of closing braces
suggests wins. A key that fits nowhere repeats an existing key; like a
dict literal, the later value replaces the earlier one.

Usage::

    python scripts/rebuild_fixture.py tests/fixtures/appendix_raw.txt \
        -o tests/fixtures/appendix_tree.txt --log
"""

import argparse
import re
import sys

from perfgrove.binning import make_label
from perfgrove.tree_io import parse_appendix, render_appendix

DOMAINS = {
    "query": set(range(1, 31)),
    "nodes": {1, 2, 3, 4, 5, 6, 8, 12, 16},
    "replication": set(range(1, 7)),
    "data_size": {1, 10},
    "blk_range": {64, 128, 256},
    "colocated": {0, 1},
}

TOKEN = re.compile(r"\{|\}|'(\w+)'|(\d+)\s*:|<ProbDist([^>]*)>")


def tokens(text):
    for m in TOKEN.finditer(text):
        if m.group(1):
            yield "attr", m.group(1), m.start()
        elif m.group(2):
            yield "key", int(m.group(2)), m.start()
        elif m.group(3) is not None:
            yield "leaf", m.group(3), m.start()
        else:
            yield m.group(0), None, m.start()


def normalize_leaf(body):
    entries = []
    for part in body.split(","):
        label, _, p = part.partition("=")
        hi, _, lo = re.sub(r"\s+", "", label).partition("-")
        entries.append(f"{make_label(float(lo), float(hi))}={p.strip()}")
    return "<ProbDist " + ", ".join(entries) + ">"


def rebuild(text, log=None):
    root = None
    stack = []  # open frames: {"attr", "children", "last"}
    pending = None
    closes = 0
    for kind, value, pos in tokens(text):
        if kind == "{":
            continue
        if kind == "}":
            closes += 1
            continue
        if kind == "attr":
            frame = {"attr": value, "children": {}, "last": None}
            if pending is None:
                root = frame
            else:
                pending[0]["children"][pending[1]] = frame
                pending = None
            stack.append(frame)
            closes = 0
            continue
        if kind == "leaf":
            frame, key = pending
            frame["children"][key] = normalize_leaf(value)
            pending = None
            continue

        suggested = closes / 2.0
        closes = 0
        fits = [
            up
            for up in range(len(stack))
            if value in DOMAINS[stack[-1 - up]["attr"]]
            and (stack[-1 - up]["last"] is None or value > stack[-1 - up]["last"])
        ]
        duplicate = False
        if not fits:
            fits = [up for up in range(len(stack)) if stack[-1 - up]["last"] == value][:1]
            duplicate = True
        if not fits:
            raise ValueError(f"key {value} at offset {pos} fits no open branch")
        up = min(fits, key=lambda u: (abs(u - suggested), u))
        if log is not None and (up != suggested or duplicate):
            what = "duplicate key replaces earlier value" if duplicate else f"braces suggest {suggested} levels"
            log.append(f"offset {pos}: key {value} placed {up} level(s) up; {what}")
        del stack[len(stack) - up :]
        if not duplicate:
            stack[-1]["last"] = value
        pending = (stack[-1], value)
    return root


def emit(frame):
    if isinstance(frame, str):
        return frame
    branches = ", ".join(f"{k}: {emit(v)}" for k, v in frame["children"].items())
    return f"{{ '{frame['attr']}': {{ {branches}}}}}"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("raw")
    ap.add_argument("-o", "--out", default="-")
    ap.add_argument("--log", action="store_true", help="report every repaired placement on stderr")
    args = ap.parse_args(argv)

    with open(args.raw, encoding="utf-8") as fh:
        raw = fh.read()
    notes = []
    root = rebuild(raw, notes)
    # one top-level branch per line, otherwise single spaces
    top = root["children"]
    lines = [f"{k}: {emit(v)}" for k, v in top.items()]
    text = f"{{ '{root['attr']}': {{ " + ",\n".join(lines) + "}}\n"

    tree = parse_appendix(text)
    assert parse_appendix(render_appendix(tree)) == tree

    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.log:
        for line in notes:
            print(line, file=sys.stderr)
        print(f"{len(notes)} placements repaired", file=sys.stderr)


if __name__ == "__main__":
    main()

"""Plain-text edge-list, attribute-list and node-list formats (1-based ids).

Edge list::

    # rig-edgelist n=<n>
    i j
    ...

one pair per line with ``i < j``, in ascending lexicographic order.

Attribute list::

    # rig-attrs n=<n> m=<m>
    <members of attribute 1>
    ...

one line per attribute, members space-separated, empty lines allowed.

Further lines starting with ``#`` directly after the header carry
provenance (resolved parameters, seed) and are ignored by the readers.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from pathlib import Path
from typing import IO, Any

import numpy as np

from .errors import FormatError
from .graph import AttributeAssignment, Graph

__all__ = [
    "format_edgelist",
    "write_edgelist",
    "read_edgelist",
    "parse_edgelist",
    "format_attributes",
    "write_attributes",
    "read_attributes",
    "parse_attributes",
    "read_node_list",
]

_EDGE_HEADER = re.compile(r"^#\s*rig-edgelist\s+n=(\d+)\s*$")
_ATTR_HEADER = re.compile(r"^#\s*rig-attrs\s+n=(\d+)\s+m=(\d+)\s*$")


def _meta_lines(meta: Mapping[str, Any] | None) -> list[str]:
    if not meta:
        return []
    return ["# " + " ".join(f"{k}={v}" for k, v in meta.items())]


def format_edgelist(g: Graph, meta: Mapping[str, Any] | None = None) -> str:
    u, v = g.edges()
    lines = [f"# rig-edgelist n={g.n}", *_meta_lines(meta)]
    lines.extend(f"{a} {b}" for a, b in zip((u + 1).tolist(), (v + 1).tolist()))
    return "\n".join(lines) + "\n"


def write_edgelist(g: Graph, path: str | Path, meta: Mapping[str, Any] | None = None) -> None:
    Path(path).write_text(format_edgelist(g, meta))


def parse_edgelist(lines: Iterable[str]) -> Graph:
    it = iter(enumerate(lines, start=1))
    try:
        _, header = next(it)
    except StopIteration:
        raise FormatError("empty edge list") from None
    match = _EDGE_HEADER.match(header.strip())
    if not match:
        raise FormatError(f"line 1: expected '# rig-edgelist n=<n>', got {header.strip()!r}")
    n = int(match.group(1))
    if n < 1:
        raise FormatError("line 1: n must be positive")
    us: list[int] = []
    vs: list[int] = []
    prev = (0, 0)
    for lineno, raw in it:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected two node ids, got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer node id in {line!r}") from None
        if not (1 <= i < j <= n):
            raise FormatError(f"line {lineno}: need 1 <= i < j <= {n}, got {i} {j}")
        if (i, j) <= prev:
            raise FormatError(f"line {lineno}: pairs must be strictly ascending")
        prev = (i, j)
        us.append(i - 1)
        vs.append(j - 1)
    return Graph.from_edges(n, np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64))


def read_edgelist(path: str | Path | IO[str]) -> Graph:
    if hasattr(path, "read"):
        return parse_edgelist(path.read().splitlines())
    with open(path) as fh:
        return parse_edgelist(fh.read().splitlines())


def format_attributes(a: AttributeAssignment, meta: Mapping[str, Any] | None = None) -> str:
    lines = [f"# rig-attrs n={a.n} m={a.m}", *_meta_lines(meta)]
    lines.extend(" ".join(str(i + 1) for i in a.attribute(k).tolist()) for k in range(a.m))
    return "\n".join(lines) + "\n"


def write_attributes(
    a: AttributeAssignment, path: str | Path, meta: Mapping[str, Any] | None = None
) -> None:
    Path(path).write_text(format_attributes(a, meta))


def parse_attributes(lines: Iterable[str]) -> AttributeAssignment:
    lines = list(lines)
    if not lines:
        raise FormatError("empty attribute list")
    match = _ATTR_HEADER.match(lines[0].strip())
    if not match:
        raise FormatError(f"line 1: expected '# rig-attrs n=<n> m=<m>', got {lines[0].strip()!r}")
    n, m = int(match.group(1)), int(match.group(2))
    body_start = 1
    while body_start < len(lines) and lines[body_start].startswith("#"):
        body_start += 1
    body = lines[body_start:]
    if len(body) > m and all(not x.strip() for x in body[m:]):
        body = body[:m]
    if len(body) < m:
        body = body + [""] * (m - len(body))
    if len(body) != m:
        raise FormatError(f"expected {m} attribute lines, got {len(body)}")
    rows = []
    for offset, raw in enumerate(body):
        lineno = body_start + offset + 1
        try:
            ids = [int(x) for x in raw.split()]
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer node id") from None
        if any(not 1 <= i <= n for i in ids):
            raise FormatError(f"line {lineno}: node id outside 1..{n}")
        if any(b <= a for a, b in zip(ids, ids[1:])):
            raise FormatError(f"line {lineno}: members must be strictly increasing")
        rows.append([i - 1 for i in ids])
    return AttributeAssignment.from_lists(n, rows)


def read_attributes(path: str | Path) -> AttributeAssignment:
    with open(path) as fh:
        return parse_attributes(fh.read().splitlines())


def read_node_list(path: str | Path, n: int) -> np.ndarray:
    """Whitespace-separated 1-based node ids; returns sorted 0-based ids."""
    text = Path(path).read_text()
    ids = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for tok in line.split():
            try:
                i = int(tok)
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer node id {tok!r}") from None
            if not 1 <= i <= n:
                raise FormatError(f"line {lineno}: node id {i} outside 1..{n}")
            ids.append(i - 1)
    if not ids:
        raise FormatError("node list is empty")
    if len(set(ids)) != len(ids):
        raise FormatError("node list contains duplicates")
    return np.sort(np.asarray(ids, dtype=np.int64))

"""Reader and writer for the SteinLib STP 1.0 text format."""
from __future__ import annotations

import logging
import re
from decimal import Decimal, InvalidOperation
from math import lcm
from typing import Union

from .graph import Graph, GraphError, STPInstance

log = logging.getLogger(__name__)

MAGIC = "33D32945 STP File, Version 1.0"


class STPParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _tokens(raw: str) -> list[str]:
    # quoted strings survive as one token, as in `Name "i080-001"`
    return [a or b for a, b in re.findall(r'"([^"]*)"|(\S+)', raw)]


def _weight(tok: str, lineno: int) -> Decimal:
    try:
        w = Decimal(tok)
    except InvalidOperation:
        raise STPParseError(f"weight {tok!r} is not a number", lineno) from None
    if not w.is_finite() or w <= 0:
        raise STPParseError(f"non-positive weight {tok}", lineno)
    return w


def parse_stp(text: Union[str, bytes]) -> STPInstance:
    """Parse an STP file body. Node ids in the file are 1-based."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.splitlines()
    if not lines or lines[0].strip().upper() != MAGIC.upper():
        raise STPParseError(f"missing header {MAGIC!r}", 1)

    name, seed = "", None
    n = declared_m = declared_t = None
    edges: list[tuple[int, int, Decimal]] = []
    terminals: list[int] = []
    section = None
    saw_eof = False
    ended: dict[str, int] = {}

    def close_section(lineno: int) -> None:
        if section == "GRAPH":
            if n is None:
                raise STPParseError("Graph section lacks a Nodes line", lineno)
            if declared_m is not None and declared_m != len(edges):
                raise STPParseError(f"Edges {declared_m} declared but {len(edges)} E-lines found", lineno)
        elif section == "TERMINALS":
            if declared_t is not None and declared_t != len(terminals):
                raise STPParseError(
                    f"Terminals {declared_t} declared but {len(terminals)} T-lines found", lineno)
        if section:
            ended[section] = lineno

    for lineno, raw in enumerate(lines[1:], start=2):
        toks = _tokens(raw.split("#", 1)[0])
        if not toks:
            continue
        key = toks[0].upper()
        if section is None:
            if key == "SECTION" and len(toks) >= 2:
                section = toks[1].upper()
                if section not in ("COMMENT", "GRAPH", "TERMINALS"):
                    log.warning("skipping unsupported SECTION %s at line %d", toks[1], lineno)
                continue
            if key == "EOF":
                saw_eof = True
                break
            raise STPParseError(f"unexpected {toks[0]!r} outside a section", lineno)
        if key == "SECTION":
            raise STPParseError(f"SECTION {section} not closed by END", lineno)
        if key == "END":
            close_section(lineno)
            section = None
            continue
        if section == "COMMENT":
            if key == "NAME" and len(toks) > 1:
                name = " ".join(toks[1:])
            elif key == "REMARK" and len(toks) > 2 and toks[1].lower() == "seed":
                try:
                    seed = int(toks[2])
                except ValueError:
                    pass
        elif section == "GRAPH":
            try:
                if key == "NODES":
                    n = int(toks[1])
                    if n < 1:
                        raise STPParseError("Nodes must be positive", lineno)
                elif key == "EDGES":
                    declared_m = int(toks[1])
                elif key in ("E", "A"):
                    if n is None:
                        raise STPParseError("edge before Nodes declaration", lineno)
                    if len(toks) != 4:
                        raise STPParseError("edge lines need exactly 'E u v w'", lineno)
                    u, v = int(toks[1]), int(toks[2])
                    for x in (u, v):
                        if not 1 <= x <= n:
                            raise STPParseError(f"node id {x} outside 1..{n}", lineno)
                    edges.append((u - 1, v - 1, _weight(toks[3], lineno)))
                else:
                    log.debug("ignoring graph key %s at line %d", toks[0], lineno)
            except (IndexError, ValueError) as exc:
                if isinstance(exc, STPParseError):
                    raise
                raise STPParseError(f"malformed line {raw.strip()!r}", lineno) from None
        elif section == "TERMINALS":
            try:
                if key == "TERMINALS":
                    declared_t = int(toks[1])
                elif key == "T":
                    t = int(toks[1])
                    if n is None or not 1 <= t <= n:
                        raise STPParseError(f"terminal id {t} outside 1..{n}", lineno)
                    terminals.append(t - 1)
                else:
                    log.debug("ignoring terminal key %s at line %d", toks[0], lineno)
            except (IndexError, ValueError) as exc:
                if isinstance(exc, STPParseError):
                    raise
                raise STPParseError(f"malformed line {raw.strip()!r}", lineno) from None

    last = len(lines)
    if section is not None:
        raise STPParseError(f"SECTION {section} not closed by END", last)
    if not saw_eof:
        raise STPParseError("missing EOF terminator", last)
    if "GRAPH" not in ended:
        raise STPParseError("no Graph section", last)
    if "TERMINALS" not in ended:
        raise STPParseError("no Terminals section", last)

    scale = 1
    for _, _, w in edges:
        exp = w.normalize().as_tuple().exponent
        if exp < 0:
            scale = lcm(scale, 10 ** -exp)
    try:
        graph = Graph.from_edges(n, [(u, v, int(w * scale)) for u, v, w in edges], scale)
        return STPInstance(graph, tuple(terminals), name, seed)
    except GraphError as exc:
        raise STPParseError(str(exc), ended["GRAPH"]) from None


def _format_weight(w: int, denominator: int) -> str:
    if denominator == 1:
        return str(w)
    return format(Decimal(w) / Decimal(denominator), "f")


def serialize_stp(instance: STPInstance) -> bytes:
    g = instance.graph
    out = [MAGIC, "", "SECTION Comment"]
    if instance.id:
        out.append(f'Name "{instance.id}"')
    if instance.seed is not None:
        out.append(f"Remark seed {instance.seed}")
    out += ["END", "", "SECTION Graph", f"Nodes {g.n}", f"Edges {g.m}"]
    for u, v, w in sorted(g.edges):
        out.append(f"E {u + 1} {v + 1} {_format_weight(w, g.denominator)}")
    out += ["END", "", "SECTION Terminals", f"Terminals {len(instance.terminals)}"]
    out += [f"T {t + 1}" for t in instance.terminals]
    out += ["END", "", "EOF", ""]
    return "\n".join(out).encode("utf-8")

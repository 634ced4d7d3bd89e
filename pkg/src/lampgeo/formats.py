"""Textual literals shared by the CLI and the JSON reports.

Configurations are ``index:value`` pairs joined by commas (empty string =
identity); vertices are ``<config>|<k>``; Z[1/n] elements are ``r*n^k`` or
plain integer/rational/decimal literals; vectors are ``x,y``.  Map
descriptions compose with ``;`` in left-to-right application order.
Parse errors carry the offending column.
"""

from __future__ import annotations

from fractions import Fraction

from .base_groups import BSNumber, LampConfig
from .errors import ParseError
from .maps import BaseMap, BlockPerm, Compose, Inversion, Shift, Translate


def _int_at(text: str, position: int, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected {what}, got {text!r}", position) from None


# ---------------------------------------------------------------------------
# lamp configurations and vertices
# ---------------------------------------------------------------------------

def format_config(cfg: LampConfig) -> str:
    return ",".join(f"{i}:{v}" for i, v in cfg.entries)


def parse_config(text: str, n: int, offset: int = 0) -> LampConfig:
    text = text.strip()
    if not text:
        return LampConfig.zero(n)
    items = []
    pos = offset
    for part in text.split(","):
        if ":" not in part:
            raise ParseError(f"expected index:value, got {part!r}", pos)
        idx_s, _, val_s = part.partition(":")
        idx = _int_at(idx_s, pos, "an integer index")
        val = _int_at(val_s, pos + len(idx_s) + 1, "an integer value")
        if not 0 < val < n:
            raise ParseError(f"value {val} out of range 1..{n - 1}", pos + len(idx_s) + 1)
        items.append((idx, val))
        pos += len(part) + 1
    if len({i for i, _ in items}) != len(items):
        raise ParseError("repeated index in configuration", offset)
    return LampConfig(n, tuple(sorted(items)))


def format_vertex(v) -> str:
    return f"{format_config(v.config)}|{v.cursor}"


def parse_vertex(text: str, n: int):
    from .dl_graph import DLVertex
    if "|" not in text:
        raise ParseError("vertex literal needs '<config>|<k>'", 0)
    cfg_s, _, k_s = text.rpartition("|")
    cfg = parse_config(cfg_s, n)
    k = _int_at(k_s.strip(), len(cfg_s) + 1, "an integer cursor")
    return DLVertex(cfg, k)


# ---------------------------------------------------------------------------
# Z[1/n] literals
# ---------------------------------------------------------------------------

def format_bs(x: BSNumber) -> str:
    if x.k == 0:
        return str(x.r)
    return f"{x.r}*{x.n}^{x.k}"


def parse_bs(text: str, n: int) -> BSNumber:
    text = text.strip()
    if not text:
        raise ParseError("empty number literal", 0)
    if "*" in text:
        r_s, _, rest = text.partition("*")
        r = _int_at(r_s.strip(), 0, "an integer numerator")
        if "^" not in rest:
            raise ParseError("expected base^exponent after '*'", len(r_s) + 1)
        base_s, _, exp_s = rest.partition("^")
        base = _int_at(base_s.strip(), len(r_s) + 1, "an integer base")
        if base != n:
            raise ParseError(f"base {base} does not match n={n}", len(r_s) + 1)
        k = _int_at(exp_s.strip(), len(r_s) + len(rest) - len(exp_s) + 1, "an integer exponent")
        return BSNumber.normalize(r, k, n)
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a number literal: {text!r}", 0) from None
    try:
        return BSNumber.from_fraction(value, n)
    except Exception:
        raise ParseError(f"{text} is not an element of Z[1/{n}]", 0) from None


# ---------------------------------------------------------------------------
# integer vectors and windows
# ---------------------------------------------------------------------------

def format_vector(v: tuple[int, int]) -> str:
    return f"{v[0]},{v[1]}"


def parse_vector(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError("vector literal needs 'x,y'", 0)
    x = _int_at(parts[0].strip(), 0, "an integer")
    y = _int_at(parts[1].strip(), len(parts[0]) + 1, "an integer")
    return (x, y)


def parse_window(text: str) -> tuple[int, int]:
    """Either a width W meaning [0, W), or an explicit 'lo:hi' range."""
    text = text.strip()
    if ":" in text:
        lo_s, _, hi_s = text.partition(":")
        lo = _int_at(lo_s.strip(), 0, "an integer")
        hi = _int_at(hi_s.strip(), len(lo_s) + 1, "an integer")
    else:
        lo, hi = 0, _int_at(text, 0, "an integer width")
    if hi <= lo:
        raise ParseError(f"window [{lo}, {hi}) is empty", 0)
    return (lo, hi)


def parse_matrix(text: str) -> tuple[tuple[int, int], tuple[int, int]]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ParseError("matrix literal needs 'a,b,c,d'", 0)
    a, b, c, d = (_int_at(p, 0, "an integer") for p in parts)
    return ((a, b), (c, d))


# ---------------------------------------------------------------------------
# map description language
# ---------------------------------------------------------------------------

def format_map(m: BaseMap) -> str:
    if isinstance(m, Shift):
        return f"shift:{m.j}"
    if isinstance(m, Translate):
        return f"translate:{format_config(m.c)}"
    if isinstance(m, Inversion):
        return "invert"
    if isinstance(m, BlockPerm):
        pairs = ",".join(f"{s}>{t}" for s, t in m.table)
        return f"blockperm:m={m.m}:{pairs}"
    if isinstance(m, Compose):
        return ";".join(format_map(p) for p in reversed(m.maps))
    raise ParseError(f"unknown map variant {type(m).__name__}", 0)


def _parse_single_map(text: str, n: int, offset: int) -> BaseMap:
    if text == "invert":
        return Inversion()
    head, sep, rest = text.partition(":")
    if head == "shift":
        if not sep:
            raise ParseError("shift needs an offset, e.g. shift:2", offset)
        return Shift(_int_at(rest.strip(), offset + len(head) + 1, "an integer offset"))
    if head == "translate":
        if not sep:
            raise ParseError("translate needs a configuration literal", offset)
        return Translate(parse_config(rest, n, offset + len(head) + 1))
    if head == "blockperm":
        m_s, sep2, table_s = rest.partition(":")
        m_s = m_s.strip()
        if not m_s.startswith("m="):
            raise ParseError("blockperm needs m=<length> first", offset + len(head) + 1)
        m = _int_at(m_s[2:], offset + len(head) + 3, "an integer block length")
        pairs = []
        pos = offset + len(head) + 1 + len(m_s) + 1
        if sep2 and table_s.strip():
            for chunk in table_s.split(","):
                if ">" not in chunk:
                    raise ParseError(f"expected src>dst, got {chunk!r}", pos)
                src, _, dst = chunk.partition(">")
                pairs.append((src.strip(), dst.strip()))
                pos += len(chunk) + 1
        try:
            return BlockPerm.from_pairs(m, pairs, n)
        except Exception as exc:
            raise ParseError(str(exc), offset) from None
    raise ParseError(f"unknown map variant {head!r}", offset)


def parse_map(text: str, n: int = 2) -> BaseMap:
    """Parse the map DSL; ';' chains maps in left-to-right application order."""
    text = text.strip()
    if not text:
        raise ParseError("empty map description", 0)
    parts = []
    pos = 0
    for chunk in text.split(";"):
        stripped = chunk.strip()
        if not stripped:
            raise ParseError("empty map in composition", pos)
        parts.append(_parse_single_map(stripped, n, pos))
        pos += len(chunk) + 1
    if len(parts) == 1:
        return parts[0]
    return Compose(tuple(reversed(parts)))

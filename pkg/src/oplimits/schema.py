"""JSON interchange formats.

Every document is an object with a single key naming its kind::

    {"tuple": [2, 4, 6]}
    {"norm_tuple": ["1/1", "2/1", "3/1"]}
    {"presentation": {"prefix": [[3]], "period": [[1, 1], [2]]}}
    {"diagram": {"src_count": 1, "dst_count": 1,
                 "edges": [{"src": 1, "dst": 1, "mult": 2}],
                 "fiber_order": {"1": [0]}}}
    {"grid": {"n": 2, "k": 2, "rank": [1, 2, 3, 4]}}
    {"point": {"prefix": [1, 2], "tail": [{"maxF": 1}]}}

plus the composite inputs ``orders``, ``grids`` and ``intertwining`` used by
single CLI verbs.  ``parse(emit(kind, x)) == (kind, x)`` for every kind.
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any

from .bratelli import Edge, OrderedDiagram
from .embed import GridOrder
from .presentation import Presentation
from .spectrum import Point, Selector, SelKind
from .tuples import int_tuple, norm_tuple


class SchemaError(ValueError):
    """Input that does not match a documented schema."""


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer, got {value!r}")
    return value


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected an array, got {type(value).__name__}")
    return value


def _obj(value, where: str, keys: set[str]) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"{where}: expected an object, got {type(value).__name__}")
    missing = keys - value.keys()
    if missing:
        raise SchemaError(f"{where}: missing field(s) {sorted(missing)}")
    extra = value.keys() - keys
    if extra:
        raise SchemaError(f"{where}: unknown field(s) {sorted(extra)}")
    return value


def _wrap(where: str, fn, *args):
    try:
        return fn(*args)
    except SchemaError:
        raise
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{where}: {exc}") from None


# -- rationals and tuples ---------------------------------------------------


def fraction_to_json(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def fraction_from_json(value, where: str = "rational") -> Fraction:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if not isinstance(value, str) or value.count("/") != 1:
        raise SchemaError(f"{where}: expected a \"num/den\" string, got {value!r}")
    num, den = value.split("/")
    try:
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{where}: malformed rational {value!r}") from None


def parse_tuple(value, where: str = "tuple"):
    items = [_int(v, f"{where}[{i}]") for i, v in enumerate(_list(value, where))]
    return _wrap(where, int_tuple, items)


def parse_norm_tuple(value, where: str = "norm_tuple"):
    items = [fraction_from_json(v, f"{where}[{i}]") for i, v in enumerate(_list(value, where))]
    return _wrap(where, norm_tuple, items)


def emit_norm_tuple(t) -> list[str]:
    return [fraction_to_json(Fraction(a)) for a in t]


# -- structured values ------------------------------------------------------


def parse_presentation(value, where: str = "presentation") -> Presentation:
    d = _obj(value, where, {"prefix", "period"})
    prefix = [parse_tuple(t, f"{where}.prefix[{i}]") for i, t in enumerate(_list(d["prefix"], f"{where}.prefix"))]
    period = [parse_tuple(t, f"{where}.period[{i}]") for i, t in enumerate(_list(d["period"], f"{where}.period"))]
    return _wrap(where, Presentation, tuple(prefix), tuple(period))


def emit_presentation(p: Presentation) -> dict:
    return {"prefix": [list(t) for t in p.prefix], "period": [list(t) for t in p.period]}


def parse_diagram(value, where: str = "diagram") -> OrderedDiagram:
    d = _obj(value, where, {"src_count", "dst_count", "edges", "fiber_order"})
    edges = []
    for i, e in enumerate(_list(d["edges"], f"{where}.edges")):
        e = _obj(e, f"{where}.edges[{i}]", {"src", "dst", "mult"})
        edges.append(Edge(*(_int(e[key], f"{where}.edges[{i}].{key}") for key in ("src", "dst", "mult"))))
    fo = d["fiber_order"]
    if not isinstance(fo, dict):
        raise SchemaError(f"{where}.fiber_order: expected an object")
    fibers = {}
    for key, idxs in fo.items():
        try:
            w = int(key)
        except ValueError:
            raise SchemaError(f"{where}.fiber_order: key {key!r} is not a vertex number") from None
        fibers[w] = [_int(v, f"{where}.fiber_order[{key}]") for v in _list(idxs, f"{where}.fiber_order[{key}]")]
    src_count = _int(d["src_count"], f"{where}.src_count")
    dst_count = _int(d["dst_count"], f"{where}.dst_count")
    if set(fibers) - set(range(1, dst_count + 1)):
        raise SchemaError(f"{where}.fiber_order: keys outside 1..{dst_count}")
    return OrderedDiagram.build(src_count, dst_count, edges, fibers)


def emit_diagram(d: OrderedDiagram) -> dict:
    return {
        "src_count": d.src_count,
        "dst_count": d.dst_count,
        "edges": [{"src": e.src, "dst": e.dst, "mult": e.mult} for e in d.edges],
        "fiber_order": {str(w): list(d.fiber(w)) for w in range(1, d.dst_count + 1)},
    }


def parse_grid(value, where: str = "grid") -> GridOrder:
    d = _obj(value, where, {"n", "k", "rank"})
    rank = tuple(_int(v, f"{where}.rank[{i}]") for i, v in enumerate(_list(d["rank"], f"{where}.rank")))
    n, k = _int(d["n"], f"{where}.n"), _int(d["k"], f"{where}.k")
    if len(rank) != n * k:
        raise SchemaError(f"{where}.rank: expected {n * k} entries, got {len(rank)}")
    return _wrap(where, GridOrder, n, k, rank)


def emit_grid(g: GridOrder) -> dict:
    return {"n": g.n, "k": g.k, "rank": list(g.rank)}


def parse_point(value, where: str = "point") -> Point:
    d = _obj(value, where, {"prefix", "tail"})
    prefix = tuple(_int(v, f"{where}.prefix[{i}]") for i, v in enumerate(_list(d["prefix"], f"{where}.prefix")))
    tail = []
    for i, sel in enumerate(_list(d["tail"], f"{where}.tail")):
        if not isinstance(sel, dict) or len(sel) != 1:
            raise SchemaError(f"{where}.tail[{i}]: expected one of {{index}}, {{minF}}, {{maxF}}")
        (key, v), = sel.items()
        try:
            kind = SelKind(key)
        except ValueError:
            raise SchemaError(f"{where}.tail[{i}]: unknown selector {key!r}") from None
        tail.append(_wrap(f"{where}.tail[{i}]", Selector, kind, _int(v, f"{where}.tail[{i}].{key}")))
    return _wrap(where, Point, prefix, tuple(tail))


def emit_point(x: Point) -> dict:
    return {"prefix": list(x.prefix), "tail": [{s.kind.value: s.value} for s in x.tail]}


def parse_orders(value, where: str = "orders") -> list[list[tuple[int, ...]]]:
    chains = []
    for m, chain in enumerate(_list(value, where), start=1):
        pts = []
        for i, x in enumerate(_list(chain, f"{where}[{m - 1}]")):
            pts.append(tuple(_int(v, f"{where}[{m - 1}][{i}]") for v in _list(x, f"{where}[{m - 1}][{i}]")))
        chains.append(pts)
    return chains


def parse_grids(value, where: str = "grids") -> tuple[int, list[GridOrder]]:
    d = _obj(value, where, {"k1", "levels"})
    grids = [parse_grid(g, f"{where}.levels[{i}]") for i, g in enumerate(_list(d["levels"], f"{where}.levels"))]
    return _int(d["k1"], f"{where}.k1"), grids


def parse_intertwining(value, where: str = "intertwining") -> dict:
    keys = {"chain_a", "chain_b", "eprime", "fprime", "f", "g"}
    d = _obj(value, where, keys)
    out = {}
    for key in ("chain_a", "chain_b", "eprime", "fprime"):
        out[key] = [parse_diagram(x, f"{where}.{key}[{i}]") for i, x in enumerate(_list(d[key], f"{where}.{key}"))]
    for key in ("f", "g"):
        out[key] = [_int(v, f"{where}.{key}[{i}]") for i, v in enumerate(_list(d[key], f"{where}.{key}"))]
    return out


PARSERS = {
    "tuple": parse_tuple,
    "norm_tuple": parse_norm_tuple,
    "presentation": parse_presentation,
    "diagram": parse_diagram,
    "grid": parse_grid,
    "point": parse_point,
    "orders": parse_orders,
    "grids": parse_grids,
    "intertwining": parse_intertwining,
}

EMITTERS = {
    "tuple": list,
    "norm_tuple": emit_norm_tuple,
    "presentation": emit_presentation,
    "diagram": emit_diagram,
    "grid": emit_grid,
    "point": emit_point,
}


def parse_document(doc) -> tuple[str, Any]:
    if not isinstance(doc, dict) or len(doc) != 1:
        raise SchemaError(f"expected an object with exactly one key among {sorted(PARSERS)}")
    (kind, body), = doc.items()
    if kind not in PARSERS:
        raise SchemaError(f"unknown document kind {kind!r}; expected one of {sorted(PARSERS)}")
    return kind, PARSERS[kind](body, kind)


def emit(kind: str, value) -> dict:
    return {kind: EMITTERS[kind](value)}


def load_input(source: str) -> tuple[str, Any]:
    """Parse a JSON document given inline or as a path to a file."""
    text = source
    origin = "argument"
    if not source.lstrip().startswith(("{", "[")) and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
        origin = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{origin}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_document(doc)

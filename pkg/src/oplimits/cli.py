"""Command line front end.

Exit codes: 0 on success (whatever the verdict), 1 for usage, parse or
validation errors, 2 when an internal consistency check fails.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

from . import __version__
from .arith import Supernatural
from .bratelli import contract_chain, order_equivalent, verify_intertwining
from .classify import (
    GeometricMode,
    InvariantSet,
    alternation_invariants,
    has_geometric_character,
    invariants,
    isomorphic,
)
from .cocycle import build_cocycle
from .embed import (
    GridKind,
    classify_grid_order,
    grid_order_from_tuple,
    is_lop_direct,
    is_op_direct,
)
from .errors import InternalInvariantError, NotAlternationError
from .presentation import compose_int
from .schema import (
    SchemaError,
    canonical_json,
    emit,
    emit_diagram,
    emit_norm_tuple,
    emit_point,
    fraction_from_json,
    fraction_to_json,
    load_input,
)
from .spectrum import (
    DEFAULT_CAP,
    GapKind,
    SystemLevels,
    check_coherence,
    closure_member,
    gap_successor,
    is_gap_point,
    materialize_order,
    orbit_dense,
    orders_by_grids,
    orders_from_grids,
    related_points,
    validate_point,
)
from .tuples import (
    ANY_RATIO,
    canonical_factorization,
    compose,
    compressed_factorization,
    is_geometric,
    normalize,
)


class UsageError(Exception):
    pass


@dataclass
class Report:
    verb: str
    result: dict
    lines: list[str]
    limits: dict = field(default_factory=dict)

    def machine(self) -> str:
        return canonical_json(
            {"verb": self.verb, "version": __version__, "limits": self.limits, "result": self.result}
        )

    def human(self) -> str:
        return "\n".join(self.lines) + "\n"


def _fmt_frac(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_tuple(t) -> str:
    return "(" + ",".join(_fmt_frac(a) for a in t) + ")"


def _sn_json(s: Supernatural) -> dict:
    return {
        "finite": {str(p): e for p, e in s.finite},
        "infinite": sorted(s.infinite),
        "text": str(s),
    }


def _expect(source: str, *kinds: str) -> tuple[str, Any]:
    kind, value = load_input(source)
    if kind not in kinds:
        raise UsageError(f"expected a {' or '.join(kinds)} document, got {kind}")
    return kind, value


def _normalized(source: str):
    kind, value = _expect(source, "tuple", "norm_tuple")
    if kind == "tuple":
        return normalize(value)
    return Fraction(1), value


# -- verbs ------------------------------------------------------------------


def cmd_factor(args) -> Report:
    lead, t = _normalized(args.input)
    canonical = canonical_factorization(t)
    compressed = compressed_factorization(t)
    ratio = is_geometric(t)
    result = {
        "leading": fraction_to_json(lead),
        "normalized": emit_norm_tuple(t),
        "canonical": [emit_norm_tuple(c) for c in canonical],
        "compressed": [emit_norm_tuple(c) for c in compressed],
        "geometric_ratio": None if ratio is None else ("any" if ratio is ANY_RATIO else fraction_to_json(ratio)),
    }
    unit = "(1)"
    lines = [
        f"normalized tuple: {_fmt_tuple(t)} (leading entry {_fmt_frac(lead)})",
        "unique factorization [Theorem 26]: " + (" o ".join(map(_fmt_tuple, canonical)) or unit),
        "compressed factorization [Theorem 27]: " + (" o ".join(map(_fmt_tuple, compressed)) or unit),
        "geometric: " + ("no" if ratio is None else "yes, ratio " + result["geometric_ratio"]),
    ]
    return Report("factor", result, lines)


def cmd_compose(args) -> Report:
    k1, outer = _expect(args.outer, "tuple", "norm_tuple")
    k2, inner = _expect(args.inner, "tuple", "norm_tuple")
    if k1 == k2 == "tuple":
        value = compose_int(outer, inner)
        doc = emit("tuple", value)
    else:
        value = compose(normalize(outer)[1] if k1 == "tuple" else outer,
                        normalize(inner)[1] if k2 == "tuple" else inner)
        doc = emit("norm_tuple", value)
    return Report("compose", {"composite": doc},
                  [f"{_fmt_tuple(outer)} o {_fmt_tuple(inner)} = {_fmt_tuple(value)} (inner factor applied first)"])


def cmd_check_embedding(args) -> Report:
    kind, value = _expect(args.input, "grid", "tuple")
    if kind == "tuple":
        if args.n is None:
            raise UsageError("a tuple input needs --n (the size of the domain T_n)")
        g = grid_order_from_tuple(args.n, value)
    else:
        g = value
    cls = classify_grid_order(g)
    result = {
        "grid": {"n": g.n, "k": g.k, "rank": list(g.rank)},
        "classification": cls.kind.value,
        "multiplicities": list(cls.multiplicities) if cls.multiplicities else None,
        "witness": None,
        "direct_lop": is_lop_direct(g),
        "direct_op": is_op_direct(g),
    }
    if cls.kind is GridKind.NOT_LOP:
        lines = [f"T_{g.n} -> T_{g.n * g.k}: not locally order preserving [condition (3), Lemma 2]"]
    elif cls.kind is GridKind.LOP:
        w = cls.witness
        result["witness"] = {"g": w.g, "h": w.h, "i": w.i, "j": w.j, "a": w.a, "b": w.b}
        lines = [
            f"T_{g.n} -> T_{g.n * g.k}: locally order preserving but not order preserving [Lemma 3]",
            f"witness: e_{w.g}{w.h} + e_{w.i}{w.j} with a={w.a}, b={w.b}",
        ]
    else:
        lines = [
            f"T_{g.n} -> T_{g.n * g.k}: order preserving, "
            f"direct sum of refinements {_fmt_tuple(cls.multiplicities)} [Theorem 5]"
        ]
    return Report("check-embedding", result, lines)


def cmd_diagram_contract(args) -> Report:
    diagrams = [_expect(src, "diagram")[1] for src in args.diagrams]
    d = contract_chain(diagrams)
    return Report("diagram-contract", {"diagram": emit_diagram(d)},
                  [canonical_json({"diagram": emit_diagram(d)}).rstrip()])


def cmd_diagram_equiv(args) -> Report:
    d1 = _expect(args.first, "diagram")[1]
    d2 = _expect(args.second, "diagram")[1]
    same = order_equivalent(d1, d2)
    return Report("diagram-equiv", {"order_equivalent": same},
                  [("order equivalent" if same else "not order equivalent") + " [ordered diagram equivalence]"])


def cmd_verify_intertwining(args) -> Report:
    data = _expect(args.input, "intertwining")[1]

    def as_map(values, name) -> Callable[[int], int]:
        def f(n):
            if not 1 <= n <= len(values):
                raise UsageError(f"index map {name} is given only up to {len(values)}, needed at {n}")
            return values[n - 1]
        return f

    try:
        rep = verify_intertwining(data["chain_a"], data["chain_b"], data["eprime"], data["fprime"],
                                  as_map(data["f"], "f"), as_map(data["g"], "g"), args.horizon)
    except IndexError as exc:
        raise UsageError(str(exc)) from None
    lines = [("intertwining equations hold" if rep.ok else "intertwining equations fail")
             + f", verified to level {rep.horizon} [intertwining diagram]"]
    lines += rep.failures
    return Report("verify-intertwining", {"ok": rep.ok, "failures": list(rep.failures)}, lines,
                  {"horizon": args.horizon})


def _system(source: str, cap: int) -> SystemLevels:
    return SystemLevels(_expect(source, "presentation")[1], cap)


def cmd_order(args) -> Report:
    sys_ = _system(args.presentation, args.cap)
    chain = materialize_order(sys_, args.level)
    if orders_by_grids(sys_, args.level)[-1] != chain:
        raise InternalInvariantError("sorted order and grid construction disagree")
    return Report("order", {"level": args.level, "chain": [list(x) for x in chain]},
                  [f"order on X_{args.level} ({len(chain)} points) [Lemma 2, Theorem 7]"]
                  + ["  " + ",".join(map(str, x)) for x in chain],
                  {"cap": args.cap, "level": args.level})


def cmd_coherence(args) -> Report:
    kind, value = _expect(args.input, "presentation", "orders", "grids")
    if kind == "presentation":
        orders = orders_by_grids(SystemLevels(value, args.cap), args.levels)
    elif kind == "grids":
        k1, grids = value
        orders = orders_from_grids(k1, grids)
    else:
        orders = value
    rep = check_coherence(orders, hyper=args.hyper)
    lines = [("coherent" if rep.coherent else "not coherent") + " [Theorem 7]"]
    if args.hyper:
        lines.append(("hypercoherent" if rep.hypercoherent else "not hypercoherent") + " [Theorem 8]")
    lines += rep.failures
    return Report("coherence",
                  {"levels": len(orders), "coherent": rep.coherent, "hypercoherent": rep.hypercoherent,
                   "failures": list(rep.failures)},
                  lines, {"cap": args.cap, "levels": len(orders)})


def cmd_gap(args) -> Report:
    sys_ = _system(args.presentation, args.cap)
    x = _expect(args.point, "point")[1]
    validate_point(sys_, x)
    kind = is_gap_point(sys_, x)
    result: dict = {"kind": kind.value, "successor": None}
    if kind is GapKind.GAP:
        y = gap_successor(sys_, x)
        result["successor"] = emit_point(y)
        lines = ["gap point [Theorem 9]", "right partner: " + canonical_json(emit("point", y)).strip()]
    elif kind is GapKind.EXCEPTIONAL:
        lines = ["the point is x^infinity, the exceptional case of [Theorem 9]; not decided here"]
    else:
        lines = ["not a gap point [Theorem 9]"]
    return Report("gap", result, lines)


def cmd_closure(args) -> Report:
    sys_ = _system(args.presentation, args.cap)
    x = _expect(args.x, "point")[1]
    y = _expect(args.y, "point")[1]
    validate_point(sys_, x)
    validate_point(sys_, y)
    member = closure_member(sys_, x, y)
    rel = related_points(sys_, x, y)
    dense = orbit_dense(sys_, y)
    lines = [
        ("x lies" if member else "x does not lie") + " in the orbit closure of y [Lemmas 10, 11]",
        "orbit of y is " + ("dense [Lemma 10]" if dense else "not dense"),
        f"relation of x to y: {rel.value}" + (" (tails differ; not decided)" if rel.value == "unrelated" else ""),
    ]
    return Report("closure", {"closure_member": member, "orbit_dense": dense, "relation": rel.value}, lines)


def _parse_gaps(text: str) -> list[Fraction]:
    if not text:
        return []
    out = []
    for part in text.split(","):
        part = part.strip()
        out.append(fraction_from_json(part if "/" in part else int(part), "--gaps"))
    return out


def cmd_cocycle(args) -> Report:
    sys_ = _system(args.presentation, args.cap)
    try:
        gaps = _parse_gaps(args.gaps) if args.gaps is not None else [Fraction(1)] * (sys_.k(1) - 1)
        transition = fraction_from_json(args.transition if "/" in args.transition else int(args.transition),
                                        "--transition")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    table = build_cocycle(sys_, args.depth, gaps, transition)
    levels = [[fraction_to_json(g) for g in level] for level in table.gaps]
    lines = [f"locally constant cocycle to depth {args.depth} [Theorem 14]"]
    for m, level in enumerate(table.gaps, start=1):
        lines.append(f"  level {m}: " + " ".join(_fmt_frac(g) for g in level))
    return Report("cocycle", {"gaps": levels, "transition": fraction_to_json(transition)}, lines,
                  {"cap": args.cap, "depth": args.depth})


def _invariants_json(inv: InvariantSet) -> dict:
    out: dict = {"envelope": _sn_json(inv.envelope), "first_summand": _sn_json(inv.first_summand)}
    if isinstance(inv.mode, GeometricMode):
        out["mode"] = {"geometric": {"lengths": _sn_json(inv.mode.lengths),
                                     "root": fraction_to_json(inv.mode.root)}}
    else:
        out["mode"] = {"non_geometric": {
            "prefix_factors": [emit_norm_tuple(t) for t in inv.mode.prefix_factors],
            "cycle_factors": [emit_norm_tuple(t) for t in inv.mode.cycle_factors],
        }}
    return out


def _invariant_lines(inv: InvariantSet) -> list[str]:
    lines = [
        f"envelope supernatural number: {inv.envelope}",
        f"first refinement summand: {inv.first_summand} [Theorem 13]",
    ]
    if isinstance(inv.mode, GeometricMode):
        lines += ["geometric character: yes",
                  f"lengths: {inv.mode.lengths}",
                  f"reduced root: {_fmt_frac(inv.mode.root)}"]
    else:
        lines += ["geometric character: no",
                  "factor cycle [Theorem 27]: " + " ".join(_fmt_tuple(t) for t in inv.mode.cycle_factors)]
    return lines


def cmd_invariants(args) -> Report:
    p = _expect(args.presentation, "presentation")[1]
    inv = invariants(p)
    result = _invariants_json(inv)
    lines = _invariant_lines(inv)
    try:
        standard, refinement = alternation_invariants(p)
        result["alternation"] = {"standard": _sn_json(standard), "refinement": _sn_json(refinement)}
        lines.append(f"alternation presentation: standard {standard}, refinement {refinement}")
    except NotAlternationError:
        result["alternation"] = None
    result["geometric_character"] = has_geometric_character(p) is not None
    lines.append("(invariants of eventually periodic presentations [Theorem 29])")
    return Report("invariants", result, lines)


def cmd_iso(args) -> Report:
    p1 = _expect(args.first, "presentation")[1]
    p2 = _expect(args.second, "presentation")[1]
    rep = isomorphic(p1, p2)
    result = {
        "isomorphic": rep.verdict,
        "findings": [{"invariant": f.invariant, "holds": f.holds, "detail": f.detail, "citation": f.citation}
                     for f in rep.findings],
        "left": _invariants_json(rep.left),
        "right": _invariants_json(rep.right),
        "notes": list(rep.notes),
    }
    if rep.verdict:
        lines = ["isomorphic: all invariants agree [Theorem 29]"]
    else:
        lines = [f"not isomorphic: {f.invariant} invariant differs ({f.detail}) [{f.citation}]"
                 for f in rep.failures]
    lines += [f"note: {n}" for n in rep.notes]
    return Report("iso", result, lines)


# -- argument parsing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    def options(default_format, default_cap):
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--format", choices=("human", "machine"), default=default_format)
        p.add_argument("--cap", type=int, default=default_cap,
                       help=f"largest finite level that may be materialized (default {DEFAULT_CAP})")
        return p

    # options are accepted before or after the verb; only the top level sets defaults
    common = options(argparse.SUPPRESS, argparse.SUPPRESS)
    parser = _Parser(prog="oplimits", description=__doc__.splitlines()[0],
                     parents=[options("human", DEFAULT_CAP)])
    parser.add_argument("--version", action="version", version=f"oplimits {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, handler, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = verb("factor", cmd_factor, "unique and compressed factorization of a tuple")
    p.add_argument("input")
    p = verb("compose", cmd_compose, "compose two tuples (inner applied first)")
    p.add_argument("outer")
    p.add_argument("inner")
    p = verb("check-embedding", cmd_check_embedding, "classify a grid order")
    p.add_argument("input")
    p.add_argument("--n", type=int, help="domain size when the input is a tuple")
    p = verb("diagram-contract", cmd_diagram_contract, "contract ordered diagrams (first applied first)")
    p.add_argument("diagrams", nargs="+")
    p = verb("diagram-equiv", cmd_diagram_equiv, "order equivalence of two diagrams")
    p.add_argument("first")
    p.add_argument("second")
    p = verb("verify-intertwining", cmd_verify_intertwining, "check intertwining equations to a horizon")
    p.add_argument("input")
    p.add_argument("--horizon", type=int, default=5)
    p = verb("order", cmd_order, "materialize the spectrum order at a level")
    p.add_argument("presentation")
    p.add_argument("--level", type=int, required=True)
    p = verb("coherence", cmd_coherence, "check coherence (and hypercoherence) of level orders")
    p.add_argument("input")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--hyper", action="store_true")
    p = verb("gap", cmd_gap, "decide whether a point is a gap point")
    p.add_argument("presentation")
    p.add_argument("point")
    p = verb("closure", cmd_closure, "orbit-closure membership of x in the closure of y")
    p.add_argument("presentation")
    p.add_argument("x")
    p.add_argument("y")
    p = verb("cocycle", cmd_cocycle, "build a locally constant cocycle table")
    p.add_argument("presentation")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--gaps", help="comma separated level-1 gaps, e.g. 1,1/2 (default all 1)")
    p.add_argument("--transition", default="1", help="block transition constant (default 1)")
    p = verb("invariants", cmd_invariants, "classification invariants of a presentation")
    p.add_argument("presentation")
    p = verb("iso", cmd_iso, "decide isomorphism of two presentations")
    p.add_argument("first")
    p.add_argument("second")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.handler(args)
    except InternalInvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 2
    except (UsageError, SchemaError, ValueError, IndexError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report.limits.setdefault("cap", args.cap)
    sys.stdout.write(report.machine() if args.format == "machine" else report.human())
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Ordered diagrams with multiplicity, their contraction, and a finite
intertwining verifier.

Vertices are 1-based.  Edges are identified by their 0-based position in
``edges``; ``fiber_order[w]`` lists the edges ending at ``w`` from first to
last.  The module name keeps the "Bratelli" spelling; user-facing text
says Bratteli.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .tuples import int_tuple


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    mult: int


@dataclass(frozen=True)
class OrderedDiagram:
    src_count: int
    dst_count: int
    edges: tuple[Edge, ...]
    fiber_order: tuple[tuple[int, ...], ...]  # index w-1 holds the fiber of w

    @classmethod
    def build(cls, src_count: int, dst_count: int, edges, fiber_order=None) -> "OrderedDiagram":
        """Accepts edges as ``Edge`` or ``(src, dst, mult)`` and a fiber order as a
        mapping ``dst -> [edge indices]``; when omitted, edges are ordered as listed."""
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
        if fiber_order is None:
            fibers = tuple(
                tuple(idx for idx, e in enumerate(edges) if e.dst == w) for w in range(1, dst_count + 1)
            )
        else:
            fibers = tuple(tuple(fiber_order.get(w, ())) for w in range(1, dst_count + 1))
        return cls(src_count, dst_count, edges, fibers)

    def fiber(self, w: int) -> tuple[int, ...]:
        return self.fiber_order[w - 1]


def diagnostics(d: OrderedDiagram) -> list[str]:
    problems = []
    if d.src_count < 1 or d.dst_count < 1:
        problems.append("vertex sets must be nonempty")
    for idx, e in enumerate(d.edges):
        if not 1 <= e.src <= d.src_count:
            problems.append(f"edge {idx}: source {e.src} out of range")
        if not 1 <= e.dst <= d.dst_count:
            problems.append(f"edge {idx}: target {e.dst} out of range")
        if e.mult < 1:
            problems.append(f"edge {idx}: multiplicity {e.mult} is not positive")
    if len(d.fiber_order) != d.dst_count:
        problems.append("fiber order must list every target vertex")
        return problems
    for w in range(1, d.dst_count + 1):
        expected = sorted(idx for idx, e in enumerate(d.edges) if e.dst == w)
        if sorted(d.fiber(w)) != expected:
            problems.append(f"fiber order at {w} is not a permutation of its incoming edges")
        if not expected:
            problems.append(f"target {w} has no incoming edge")
    used = {e.src for e in d.edges}
    for v in range(1, d.src_count + 1):
        if v not in used:
            problems.append(f"source {v} has no outgoing edge")
    return problems


def validate(d: OrderedDiagram) -> bool:
    return not diagnostics(d)


def _require_valid(d: OrderedDiagram) -> None:
    problems = diagnostics(d)
    if problems:
        raise ValueError("invalid ordered diagram: " + "; ".join(problems))


def target_dimensions(d: OrderedDiagram, src_dims: Sequence[int]) -> tuple[int, ...]:
    if len(src_dims) != d.src_count:
        raise ValueError(f"expected {d.src_count} source dimensions, got {len(src_dims)}")
    dims = [0] * d.dst_count
    for e in d.edges:
        dims[e.dst - 1] += src_dims[e.src - 1] * e.mult
    return tuple(dims)


def embedding_blocks(d: OrderedDiagram) -> tuple[tuple[tuple[int, int], ...], ...]:
    """For each target, the ordered ``(src, mult)`` summands of the associated embedding."""
    _require_valid(d)
    return tuple(
        tuple((d.edges[idx].src, d.edges[idx].mult) for idx in d.fiber(w))
        for w in range(1, d.dst_count + 1)
    )


def contract(first: OrderedDiagram, second: OrderedDiagram) -> OrderedDiagram:
    """Diagram of ``second`` applied after ``first``.

    Edges are pairs ``(e1, e2)`` with ``e1`` ending where ``e2`` starts;
    within a fiber they are ordered by ``e2`` first, then ``e1``.
    """
    _require_valid(first)
    _require_valid(second)
    if first.dst_count != second.src_count:
        raise ValueError(
            f"cannot contract: {first.dst_count} middle vertices vs {second.src_count}"
        )
    edges: list[Edge] = []
    fibers: dict[int, list[int]] = {}
    for w in range(1, second.dst_count + 1):
        fibers[w] = []
        for i2 in second.fiber(w):
            e2 = second.edges[i2]
            for i1 in first.fiber(e2.src):
                e1 = first.edges[i1]
                fibers[w].append(len(edges))
                edges.append(Edge(e1.src, w, e1.mult * e2.mult))
    return OrderedDiagram.build(first.src_count, second.dst_count, edges, fibers)


def contract_chain(diagrams: Sequence[OrderedDiagram]) -> OrderedDiagram:
    """Contract ``d_1, d_2, ...`` with ``d_1`` applied first."""
    if not diagrams:
        raise ValueError("empty chain")
    result = diagrams[0]
    for d in diagrams[1:]:
        result = contract(result, d)
    return result


def identity_diagram(count: int) -> OrderedDiagram:
    return OrderedDiagram.build(count, count, [Edge(v, v, 1) for v in range(1, count + 1)])


def tuple_diagram(t: Sequence[int]) -> OrderedDiagram:
    """Single vertex to single vertex, one edge per entry, in order."""
    t = int_tuple(t)
    return OrderedDiagram.build(1, 1, [Edge(1, 1, a) for a in t])


def diagram_tuple(d: OrderedDiagram) -> tuple[int, ...]:
    if d.src_count != 1 or d.dst_count != 1:
        raise ValueError("only single-vertex diagrams correspond to tuples")
    return tuple(mult for _, mult in embedding_blocks(d)[0])


def order_equivalent(d1: OrderedDiagram, d2: OrderedDiagram) -> bool:
    if (d1.src_count, d1.dst_count) != (d2.src_count, d2.dst_count):
        return False
    return embedding_blocks(d1) == embedding_blocks(d2)


IndexMap = Callable[[int], int]


@dataclass(frozen=True)
class IntertwiningReport:
    ok: bool
    horizon: int
    failures: tuple[str, ...] = ()


def verify_intertwining(
    chain_a: Sequence[OrderedDiagram],
    chain_b: Sequence[OrderedDiagram],
    eprime: Sequence[OrderedDiagram],
    fprime: Sequence[OrderedDiagram],
    f_map: IndexMap,
    g_map: IndexMap,
    horizon: int,
) -> IntertwiningReport:
    """Check both intertwining equivalences for every ``n <= horizon``.

    ``chain_a[n-1]`` is ``E_n : V_{n-1} -> V_n`` and likewise for ``chain_b``
    (``F_n``).  ``eprime[n-1] = E'_n`` maps ``V_n`` to ``W_{f(n)}`` and
    ``fprime[m-1] = F'_m`` maps ``W_m`` to ``V_{g(m)}``.  The checks are

        F'_{f(n)} o E'_n  ~  E_{g(f(n))} o ... o E_{n+1}
        E'_{g(m)} o F'_m  ~  F_{f(g(m))} o ... o F_{m+1}

    for ``n, m <= horizon``.  A passing report is only a statement up to the
    horizon.
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")

    def pick(seq, index, name):
        if not 1 <= index <= len(seq):
            raise IndexError(f"{name}_{index} needed but only {len(seq)} given")
        return seq[index - 1]

    def one_side(n, e_prime, f_prime, chain, fwd, back, label):
        m = fwd(n)
        top = back(m)
        if top <= n:
            raise ValueError(f"index maps must satisfy {label}: composite index {top} <= {n}")
        lhs = contract(pick(e_prime, n, "E'" if label == "A" else "F'"),
                       pick(f_prime, m, "F'" if label == "A" else "E'"))
        rhs = contract_chain([pick(chain, i, "E" if label == "A" else "F") for i in range(n + 1, top + 1)])
        return order_equivalent(lhs, rhs)

    failures = []
    for n in range(1, horizon + 1):
        if not one_side(n, eprime, fprime, chain_a, f_map, g_map, "A"):
            failures.append(f"E-side equation fails at n={n}")
        if not one_side(n, fprime, eprime, chain_b, g_map, f_map, "B"):
            failures.append(f"F-side equation fails at m={n}")
    return IntertwiningReport(not failures, horizon, tuple(failures))

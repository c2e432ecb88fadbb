"""Locally constant cocycles on the spectrum of an order preserving system.

Level ``m`` of a :class:`CocycleTable` stores the gaps between consecutive
points of ``X_m`` in its spectrum order; ``c(x, y)`` is the signed sum of the
gaps from ``x`` to ``y``.  Each level is built from the previous one so that
``c_m((x, j), (y, j)) == c_{m-1}(x, y)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Sequence

from .errors import InternalInvariantError
from .spectrum import Prefix, SystemLevels, materialize_order


@dataclass(frozen=True)
class CocycleTable:
    gaps: tuple[tuple[Fraction, ...], ...]  # gaps[m-1] for level m
    chains: tuple[tuple[Prefix, ...], ...]
    transition_value: Fraction
    scales: tuple[Fraction, ...]  # the constant d used to build each level >= 2

    @property
    def depth(self) -> int:
        return len(self.gaps)

    def _offsets(self, m: int) -> dict[Prefix, Fraction]:
        cache = self.__dict__.setdefault("_offset_cache", {})
        if m not in cache:
            sums = [Fraction(0)] + list(accumulate(self.gaps[m - 1]))
            cache[m] = dict(zip(self.chains[m - 1], sums))
        return cache[m]


def _positive(value, name) -> Fraction:
    q = Fraction(value)
    if q <= 0:
        raise ValueError(f"{name} must be positive, got {q}")
    return q


def _next_level(prev: Sequence[Fraction], r: Sequence[int], transition: Fraction) -> tuple[list[Fraction], Fraction]:
    d = min(prev) if prev else Fraction(1)
    count = len(prev) + 1
    gaps: list[Fraction] = []
    for t, size in enumerate(r):
        if t:
            gaps.append(transition)
        for i in range(count):
            if i:
                gaps.append(prev[i - 1] - Fraction(size - 1, size) * d)
            gaps.extend([d / size] * (size - 1))
    return gaps, d


def build_cocycle(sys: SystemLevels, depth: int, c1_gaps: Sequence, transition_value=1) -> CocycleTable:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    transition = _positive(transition_value, "transition value")
    level1 = [_positive(g, "level-1 gap") for g in c1_gaps]
    if len(level1) != sys.k(1) - 1:
        raise ValueError(f"expected {sys.k(1) - 1} level-1 gaps, got {len(level1)}")
    gaps = [level1]
    scales = []
    for m in range(2, depth + 1):
        nxt, d = _next_level(gaps[-1], sys.r(m), transition)
        gaps.append(nxt)
        scales.append(d)
    chains = tuple(tuple(materialize_order(sys, m)) for m in range(1, depth + 1))
    table = CocycleTable(tuple(map(tuple, gaps)), chains, transition, tuple(scales))
    problems = verify_cocycle(sys, table, exhaustive=False)
    if problems:
        raise InternalInvariantError("cocycle construction broke: " + problems[0])
    return table


def cocycle_eval(table: CocycleTable, m: int, x: Sequence[int], y: Sequence[int]) -> Fraction:
    if not 1 <= m <= table.depth:
        raise ValueError(f"level {m} outside the table depth {table.depth}")
    offsets = table._offsets(m)
    try:
        return offsets[tuple(y)] - offsets[tuple(x)]
    except KeyError as exc:
        raise ValueError(f"point {exc.args[0]} is not in X_{m}") from None


def verify_cocycle(sys: SystemLevels, table: CocycleTable, exhaustive: bool = True) -> list[str]:
    """Re-check positivity, the order/sign property and level consistency.

    Without ``exhaustive`` only consecutive pairs are checked, which implies
    the general case by telescoping.
    """
    problems = []
    for m, gaps in enumerate(table.gaps, start=1):
        if len(gaps) != len(table.chains[m - 1]) - 1:
            problems.append(f"level {m}: wrong number of gaps")
        if any(g <= 0 for g in gaps):
            problems.append(f"level {m}: nonpositive gap")
    for m in range(2, table.depth + 1):
        prev = table.chains[m - 2]
        pairs = (
            [(x, y) for x in prev for y in prev]
            if exhaustive
            else list(zip(prev, prev[1:]))
        )
        for j in range(1, sys.k(m) + 1):
            for x, y in pairs:
                if cocycle_eval(table, m, x + (j,), y + (j,)) != cocycle_eval(table, m - 1, x, y):
                    problems.append(f"level {m}: consistency fails for {x}, {y}, {j}")
                    return problems
    if exhaustive:
        for m in range(1, table.depth + 1):
            chain = table.chains[m - 1]
            for a, x in enumerate(chain):
                for b, y in enumerate(chain):
                    if (cocycle_eval(table, m, x, y) >= 0) != (a <= b):
                        problems.append(f"level {m}: sign of c({x}, {y}) disagrees with the order")
                        return problems
    return problems

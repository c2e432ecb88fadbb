"""Spectrum orders of order preserving systems at finite levels.

Points of ``X = prod [k_n]`` are described by a finite prefix and a periodic
tail of selectors.  A selector is resolved against the F-set partition of the
level it lands on, so a tail such as ``[MaxOfF(1)]`` means "the largest
element of the first F-set at every level".
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from math import lcm
from typing import Optional, Sequence

from .embed import GridOrder, grid_order_from_tuple
from .errors import NotGapPointError, SizeLimitError
from .presentation import Presentation

DEFAULT_CAP = 10_000

Prefix = tuple[int, ...]


class Cmp(enum.Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"


class SystemLevels:
    """Per-level data ``r^(n)``, ``k_n`` and the F-set partition of ``[k_n]``."""

    def __init__(self, presentation: Presentation, cap: int = DEFAULT_CAP):
        self.presentation = presentation
        self.cap = cap
        self._bounds: dict[int, tuple[int, ...]] = {}

    def r(self, n: int) -> tuple[int, ...]:
        return self.presentation.tuple_at(n)

    def k(self, n: int) -> int:
        return self.presentation.k(n)

    def boundaries(self, n: int) -> tuple[int, ...]:
        """Cumulative sums ``(0, r_1, r_1 + r_2, ..., k_n)``."""
        if n not in self._bounds:
            acc = [0]
            for size in self.r(n):
                acc.append(acc[-1] + size)
            self._bounds[n] = tuple(acc)
        return self._bounds[n]

    def f_set(self, n: int, s: int) -> range:
        b = self.boundaries(n)
        if not 1 <= s < len(b):
            raise IndexError(f"level {n} has {len(b) - 1} F-sets, asked for {s}")
        return range(b[s - 1] + 1, b[s] + 1)

    def i_n(self, n: int, x: int) -> int:
        b = self.boundaries(n)
        if not 1 <= x <= b[-1]:
            raise IndexError(f"coordinate {x} outside [1, {b[-1]}] at level {n}")
        for s in range(1, len(b)):
            if x <= b[s]:
                return s
        raise AssertionError("unreachable")

    def level_size(self, m: int) -> int:
        return self.presentation.level_size(m)


def i_n(sys: SystemLevels, n: int, x: int) -> int:
    return sys.i_n(n, x)


def order_key(sys: SystemLevels, x: Prefix) -> tuple:
    """Sort key realizing the recursive order on ``X_m``: F-set indices from
    the top level down, then the coordinates from the bottom level up."""
    m = len(x)
    return tuple(sys.i_n(n, x[n - 1]) for n in range(m, 0, -1)) + tuple(x)


def compare_prefix(sys: SystemLevels, m: int, x: Sequence[int], y: Sequence[int]) -> Cmp:
    if len(x) != m or len(y) != m:
        raise ValueError(f"expected prefixes of length {m}, got {len(x)} and {len(y)}")
    for q in range(m, 0, -1):
        a, b = sys.i_n(q, x[q - 1]), sys.i_n(q, y[q - 1])
        if a != b:
            return Cmp.LT if a < b else Cmp.GT
    for q in range(m):
        if x[q] != y[q]:
            return Cmp.LT if x[q] < y[q] else Cmp.GT
    return Cmp.EQ


def _check_cap(sys: SystemLevels, m: int, cap: Optional[int]) -> None:
    limit = sys.cap if cap is None else cap
    size = sys.level_size(m)
    if size > limit:
        raise SizeLimitError(f"level {m} has {size} points, above the cap of {limit}")


def materialize_order(sys: SystemLevels, m: int, cap: Optional[int] = None) -> list[Prefix]:
    if m < 1:
        raise ValueError("levels start at 1")
    _check_cap(sys, m, cap)
    points = product(*(range(1, sys.k(n) + 1) for n in range(1, m + 1)))
    return sorted(points, key=lambda x: order_key(sys, x))


def orders_from_grids(k1: int, grids: Sequence[GridOrder]) -> list[list[Prefix]]:
    """Chains on ``X_1, X_2, ...`` obtained by feeding each level's chain into
    the next grid order (rows of the grid = positions in the previous chain)."""
    chains = [[(x,) for x in range(1, k1 + 1)]]
    for g in grids:
        prev = chains[-1]
        if g.n != len(prev):
            raise ValueError(f"grid expects {g.n} rows but the level has {len(prev)} points")
        nxt: list[Prefix] = [()] * (g.n * g.k)
        for row, x in enumerate(prev, start=1):
            for j in range(1, g.k + 1):
                nxt[g.position(row, j) - 1] = x + (j,)
        chains.append(nxt)
    return chains


def orders_by_grids(sys: SystemLevels, m: int, cap: Optional[int] = None) -> list[list[Prefix]]:
    """Independent construction of the chains on ``X_1..X_m`` through grid orders."""
    _check_cap(sys, m, cap)
    grids = []
    size = sys.k(1)
    for n in range(2, m + 1):
        grids.append(grid_order_from_tuple(size, sys.r(n)))
        size *= sys.k(n)
    return orders_from_grids(sys.k(1), grids)


@dataclass(frozen=True)
class CoherenceReport:
    coherent: bool
    hypercoherent: Optional[bool]
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.coherent and self.hypercoherent is not False


def _validate_chains(orders: Sequence[Sequence[Prefix]]) -> None:
    if not orders:
        raise ValueError("no levels given")
    for m, chain in enumerate(orders, start=1):
        chain = [tuple(x) for x in chain]
        if any(len(x) != m for x in chain):
            raise ValueError(f"level {m} contains a point of the wrong length")
        if len(set(chain)) != len(chain):
            raise ValueError(f"level {m} lists a point twice")
        k = max(x[-1] for x in chain)
        if m == 1:
            expected = {(j,) for j in range(1, k + 1)}
        else:
            expected = {tuple(x) + (j,) for x in orders[m - 2] for j in range(1, k + 1)}
        if set(chain) != expected:
            raise ValueError(f"level {m} is not a ranking of X_{m}")


def check_coherence(orders: Sequence[Sequence[Sequence[int]]], hyper: bool = False) -> CoherenceReport:
    """Check the coherence conditions between adjacent levels (and, when
    ``hyper``, that every stem induces the same order on the suffixes)."""
    orders = [[tuple(x) for x in chain] for chain in orders]
    _validate_chains(orders)
    failures = []
    for m in range(1, len(orders)):
        rank = {x: pos for pos, x in enumerate(orders[m])}
        k = max(x[-1] for x in orders[m])
        for x in orders[m - 1]:
            positions = [rank[x + (j,)] for j in range(1, k + 1)]
            if positions != sorted(positions):
                failures.append(f"level {m + 1}: extensions of {x} are out of order")
                break
        for x, y in zip(orders[m - 1], orders[m - 1][1:]):
            bad = [j for j in range(1, k + 1) if rank[x + (j,)] > rank[y + (j,)]]
            if bad:
                failures.append(f"level {m + 1}: {x} < {y} but not after appending {bad[0]}")
                break
    coherent = not failures
    hyper_ok = None
    if hyper:
        hyper_ok = True
        for j, chain in enumerate(orders, start=1):
            for i in range(1, j):
                suffix_orders = {}
                for x in chain:
                    suffix_orders.setdefault(x[:i], []).append(x[i:])
                if len({tuple(v) for v in suffix_orders.values()}) > 1:
                    hyper_ok = False
                    failures.append(f"stems of length {i} induce different orders at level {j}")
    return CoherenceReport(coherent, hyper_ok, tuple(failures))


# -- points ----------------------------------------------------------------


class SelKind(enum.Enum):
    INDEX = "index"
    MIN_F = "minF"
    MAX_F = "maxF"


@dataclass(frozen=True)
class Selector:
    kind: SelKind
    value: int

    def __post_init__(self):
        if self.value < 1:
            raise ValueError(f"selector argument must be positive, got {self.value}")


def Index(v: int) -> Selector:
    return Selector(SelKind.INDEX, v)


def MinOfF(s: int) -> Selector:
    return Selector(SelKind.MIN_F, s)


def MaxOfF(s: int) -> Selector:
    return Selector(SelKind.MAX_F, s)


@dataclass(frozen=True)
class Point:
    prefix: tuple[int, ...]
    tail: tuple[Selector, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(v) for v in self.prefix))
        object.__setattr__(self, "tail", tuple(self.tail))
        if not self.tail:
            raise ValueError("a point needs a nonempty periodic tail")
        if any(v < 1 for v in self.prefix):
            raise ValueError("coordinates are positive")


def _resolve(sys: SystemLevels, sel: Selector, n: int) -> int:
    if sel.kind is SelKind.INDEX:
        if sel.value > sys.k(n):
            raise ValueError(f"index {sel.value} exceeds k_{n} = {sys.k(n)}")
        return sel.value
    f = sys.f_set(n, sel.value)
    return f[0] if sel.kind is SelKind.MIN_F else f[-1]


def coordinate(sys: SystemLevels, x: Point, n: int) -> int:
    if n <= len(x.prefix):
        v = x.prefix[n - 1]
        if v > sys.k(n):
            raise ValueError(f"coordinate {v} exceeds k_{n} = {sys.k(n)}")
        return v
    return _resolve(sys, x.tail[(n - len(x.prefix) - 1) % len(x.tail)], n)


def joint_window(sys: SystemLevels, *points: Point) -> tuple[int, int]:
    """``(S, L)``: beyond level ``S`` every coordinate and F-set index of the
    given points repeats with period ``L``."""
    s = max([len(sys.presentation.prefix)] + [len(p.prefix) for p in points])
    period = lcm(len(sys.presentation.period), *(len(p.tail) for p in points))
    return s, period


def resolve_prefix(sys: SystemLevels, x: Point, m: int) -> Prefix:
    return tuple(coordinate(sys, x, n) for n in range(1, m + 1))


def validate_point(sys: SystemLevels, x: Point) -> None:
    s, period = joint_window(sys, x)
    resolve_prefix(sys, x, s + period)


class Relation(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    EQUAL = "equal"
    UNRELATED = "unrelated"


def related_points(sys: SystemLevels, x: Point, y: Point) -> Relation:
    """Decide the spectrum relation for points whose tails agree; tails that
    differ infinitely often are reported Unrelated."""
    s, period = joint_window(sys, x, y)
    xs = resolve_prefix(sys, x, s + period)
    ys = resolve_prefix(sys, y, s + period)
    if xs[s:] != ys[s:]:
        return Relation.UNRELATED
    verdict = compare_prefix(sys, s, xs[:s], ys[:s])
    return {Cmp.EQ: Relation.EQUAL, Cmp.LT: Relation.FORWARD, Cmp.GT: Relation.BACKWARD}[verdict]


def _periodic_indices(sys: SystemLevels, x: Point, s: int, period: int) -> list[int]:
    return [sys.i_n(n, coordinate(sys, x, n)) for n in range(s + 1, s + period + 1)]


def orbit_dense(sys: SystemLevels, x: Point) -> bool:
    s, period = joint_window(sys, x)
    return any(i > 1 for i in _periodic_indices(sys, x, s, period))


def closure_member(sys: SystemLevels, x: Point, y: Point) -> bool:
    """Whether ``x`` lies in the closure of the orbit of ``y``."""
    if orbit_dense(sys, y):
        return True
    s, period = joint_window(sys, x, y)
    if any(i > 1 for i in _periodic_indices(sys, x, s, period)):
        return False
    # both sit in the first F-sets from level s+1 on, so the comparison at
    # level s+period is the eventual comparison
    top = s + period
    verdict = compare_prefix(sys, top, resolve_prefix(sys, x, top), resolve_prefix(sys, y, top))
    return verdict is not Cmp.GT


class GapKind(enum.Enum):
    GAP = "gap"
    NOT_GAP = "not-gap"
    EXCEPTIONAL = "exceptional-x-infinity"


def is_gap_point(sys: SystemLevels, x: Point) -> GapKind:
    s, period = joint_window(sys, x)
    coords = resolve_prefix(sys, x, s + period)
    if all(v == sys.k(n) for n, v in enumerate(coords, start=1)):
        return GapKind.EXCEPTIONAL
    if all(coords[n - 1] == sys.r(n)[0] for n in range(s + 1, s + period + 1)):
        return GapKind.GAP
    return GapKind.NOT_GAP


def gap_successor(sys: SystemLevels, x: Point) -> Point:
    """The right partner ``y`` of a gap point ``x``."""
    kind = is_gap_point(sys, x)
    if kind is not GapKind.GAP:
        raise NotGapPointError(f"point is {kind.value}, not a gap point")
    s, period = joint_window(sys, x)
    coords = resolve_prefix(sys, x, s + period)

    def top_of_block(n):
        return sys.f_set(n, sys.i_n(n, coords[n - 1]))[-1]

    def bottom_of_block(n):
        return sys.f_set(n, sys.i_n(n, coords[n - 1]))[0]

    # beyond s every coordinate is max F_1, so a non-maximal one sits at or below s
    lagging = [n for n in range(1, s + 1) if coords[n - 1] != top_of_block(n)]
    if lagging:
        m = lagging[-1]
        head = list(coords[: m - 1]) + [coords[m - 1] + 1]
    else:
        m = next(n for n, v in enumerate(coords, start=1) if v != sys.k(n))
        head = [1] * (m - 1) + [coords[m - 1] + 1]
    head += [bottom_of_block(n) for n in range(m + 1, max(m, s) + 1)]
    return Point(tuple(head), (MinOfF(1),))

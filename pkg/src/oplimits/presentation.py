"""Eventually periodic presentations ``T_1 -> T_{k_1} -> T_{k_1 k_2} -> ...``.

Level ``n`` (1-based) uses ``prefix[n-1]`` while the prefix lasts, then the
period repeats forever.  Every tuple is a sequence of refinement
multiplicities.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

from .tuples import IntTuple, int_tuple


def compose_int(outer: Sequence[int], inner: Sequence[int]) -> IntTuple:
    """Integer tuple of ``outer o inner`` (``inner`` applied first)."""
    return tuple(a * b for a in outer for b in inner)


@dataclass(frozen=True)
class Presentation:
    prefix: tuple[IntTuple, ...]
    period: tuple[IntTuple, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int_tuple(t) for t in self.prefix))
        object.__setattr__(self, "period", tuple(int_tuple(t) for t in self.period))
        if not self.period:
            raise ValueError("the period of a presentation must be nonempty")

    @classmethod
    def of(cls, period: Sequence[Sequence[int]], prefix: Sequence[Sequence[int]] = ()) -> "Presentation":
        return cls(tuple(tuple(t) for t in prefix), tuple(tuple(t) for t in period))

    def tuple_at(self, n: int) -> IntTuple:
        if n < 1:
            raise IndexError("levels start at 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.period[(n - len(self.prefix) - 1) % len(self.period)]

    def k(self, n: int) -> int:
        return sum(self.tuple_at(n))

    def tuples(self, count: int) -> list[IntTuple]:
        return [self.tuple_at(n) for n in range(1, count + 1)]

    def telescope(self) -> "Presentation":
        """Compose each full period into a single tuple; the prefix is kept."""
        combined = self.period[0]
        for t in self.period[1:]:
            combined = compose_int(t, combined)
        return Presentation(self.prefix, (combined,))

    def padded(self, extra: Sequence[Sequence[int]]) -> "Presentation":
        """Prepend finitely many levels."""
        return Presentation(tuple(tuple(t) for t in extra) + self.prefix, self.period)

    def level_size(self, m: int) -> int:
        return prod(self.k(n) for n in range(1, m + 1))

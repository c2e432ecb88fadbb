"""Exact arithmetic helpers: perfect powers, reduced roots, supernatural numbers.

Rationals are plain :class:`fractions.Fraction` values.  Everything in this
package is exact; no floating point is used anywhere.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, prod
from typing import Iterable, Mapping

from sympy import factorint

__all__ = [
    "Supernatural",
    "SnRelation",
    "prime_factors",
    "rat_perfect_power",
    "reduced_root",
    "sn_from_periodic",
    "sn_compare",
    "as_positive_fraction",
]


def prime_factors(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer as ``{prime: exponent}``."""
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")
    return {int(p): int(e) for p, e in factorint(n).items()}


def as_positive_fraction(value) -> Fraction:
    q = Fraction(value)
    if q <= 0:
        raise ValueError(f"expected a positive rational, got {q}")
    return q


def rat_perfect_power(n: int) -> tuple[int, int]:
    """Return ``(base, exponent)`` with ``base**exponent == n`` and exponent maximal.

    >>> rat_perfect_power(64)
    (2, 6)
    >>> rat_perfect_power(12)
    (12, 1)
    """
    factors = prime_factors(n)
    if not factors:
        return 1, 1
    e = reduce(gcd, factors.values())
    base = prod(p ** (k // e) for p, k in factors.items())
    return base, e


def reduced_root(q) -> tuple[Fraction, int]:
    """Deepest rational root of ``q``: returns ``(root, degree)`` with ``root**degree == q``.

    The degree is the gcd of every prime exponent occurring in the numerator
    and denominator.  ``reduced_root(1)`` is ``(1, 1)`` by convention.
    """
    q = as_positive_fraction(q)
    num = prime_factors(q.numerator)
    den = prime_factors(q.denominator)
    exponents = list(num.values()) + list(den.values())
    if not exponents:
        return Fraction(1), 1
    e = reduce(gcd, exponents)
    root = Fraction(
        prod(p ** (k // e) for p, k in num.items()),
        prod(p ** (k // e) for p, k in den.items()),
    )
    return root, e


class SnRelation(enum.Enum):
    EQUAL = "equal"
    FINITELY_EQUIVALENT = "finitely-equivalent"
    INEQUIVALENT = "inequivalent"


@dataclass(frozen=True)
class Supernatural:
    """A supernatural number of eventually periodic type.

    ``finite`` holds ``(prime, exponent)`` pairs with finite positive
    exponent, sorted by prime; ``infinite`` holds the primes carrying
    exponent infinity.  The two sets of primes are disjoint.
    """

    finite: tuple[tuple[int, int], ...] = ()
    infinite: frozenset[int] = frozenset()

    def __post_init__(self):
        finite = tuple(sorted((int(p), int(e)) for p, e in self.finite))
        infinite = frozenset(int(p) for p in self.infinite)
        object.__setattr__(self, "finite", finite)
        object.__setattr__(self, "infinite", infinite)
        seen = set()
        for p, e in finite:
            if p in seen:
                raise ValueError(f"prime {p} listed twice")
            seen.add(p)
            if e < 1:
                raise ValueError(f"exponent of {p} must be positive, got {e}")
            if prime_factors(p) != {p: 1}:
                raise ValueError(f"{p} is not prime")
        for p in infinite:
            if prime_factors(p) != {p: 1}:
                raise ValueError(f"{p} is not prime")
        if seen & infinite:
            raise ValueError(f"primes {sorted(seen & infinite)} are both finite and infinite")

    @classmethod
    def from_parts(cls, finite: Mapping[int, int], infinite: Iterable[int]) -> "Supernatural":
        return cls(tuple(finite.items()), frozenset(infinite))

    @property
    def finite_exponents(self) -> dict[int, int]:
        return dict(self.finite)

    def is_one(self) -> bool:
        return not self.finite and not self.infinite

    def __str__(self) -> str:
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.finite]
        parts += [f"{p}^inf" for p in sorted(self.infinite)]
        return "*".join(parts) if parts else "1"


def sn_from_periodic(prefix_factors: Iterable[int], period_factors: Iterable[int]) -> Supernatural:
    """The supernatural number ``prod(prefix) * prod(period)**inf``."""
    period_factors = list(period_factors)
    if not period_factors:
        raise ValueError("period must be nonempty")
    infinite: set[int] = set()
    for f in period_factors:
        infinite.update(prime_factors(f))
    finite: dict[int, int] = {}
    for f in prefix_factors:
        for p, e in prime_factors(f).items():
            if p not in infinite:
                finite[p] = finite.get(p, 0) + e
    return Supernatural.from_parts(finite, infinite)


def sn_compare(a: Supernatural, b: Supernatural) -> SnRelation:
    if a == b:
        return SnRelation.EQUAL
    # any finite discrepancy is absorbed by the finite multipliers
    if a.infinite == b.infinite:
        return SnRelation.FINITELY_EQUIVALENT
    return SnRelation.INEQUIVALENT

"""Refinement-multiplicity tuples and their unique factorization.

A tuple ``(a_0, ..., a_{n-1})`` stands for the direct sum of refinement
embeddings of multiplicities ``a_0, ..., a_{n-1}``.  Normalized tuples are
divided through by their first entry, so they start with 1 and have rational
entries.

Composition convention: ``compose(outer, inner)`` is the embedding that
applies ``inner`` first.  The inner tuple is the initial segment of the
result, and entry ``i * len(inner) + j`` equals ``outer[i] * inner[j]``.
Factorizations are always listed outermost first, ``[c_1, ..., c_k]`` with
``t = c_1 o c_2 o ... o c_k``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Union

from .errors import InternalInvariantError, NotDivisibleError

IntTuple = tuple[int, ...]
NormTuple = tuple[Fraction, ...]

ONE: NormTuple = (Fraction(1),)


class _AnyRatio:
    """Ratio of a length-1 tuple: compatible with every ratio."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ANY_RATIO"

    def __reduce__(self):
        return (_AnyRatio, ())


ANY_RATIO = _AnyRatio()
Ratio = Union[Fraction, _AnyRatio]


class Divisibility(enum.Enum):
    NONE = "none"
    DIVISIBLE = "divisible"
    STRONGLY_DIVISIBLE = "strongly-divisible"


def int_tuple(entries: Sequence[int]) -> IntTuple:
    t = tuple(entries)
    if not t:
        raise ValueError("a tuple must have at least one entry")
    for a in t:
        if isinstance(a, bool) or not isinstance(a, int) or a < 1:
            raise ValueError(f"tuple entries must be positive integers, got {a!r}")
    return t


def norm_tuple(entries: Sequence) -> NormTuple:
    """Coerce to a normalized tuple; the first entry must be 1."""
    t = tuple(Fraction(a) for a in entries)
    if not t:
        raise ValueError("a tuple must have at least one entry")
    if t[0] != 1:
        raise ValueError(f"normalized tuples start with 1, got {t[0]}")
    if any(a <= 0 for a in t):
        raise ValueError("normalized tuple entries must be positive")
    return t


def normalize(t: Sequence[int]) -> tuple[Fraction, NormTuple]:
    """Split an integer tuple into its leading entry and normalized tuple."""
    t = int_tuple(t)
    lead = Fraction(t[0])
    return lead, tuple(Fraction(a, t[0]) for a in t)


def compose(outer: Sequence, inner: Sequence) -> NormTuple:
    outer = [Fraction(a) for a in outer]
    inner = [Fraction(b) for b in inner]
    return tuple(a * b for a in outer for b in inner)


def power(c: Sequence, m: int) -> NormTuple:
    """``c o c o ... o c`` (m copies); ``power(c, 0) == (1,)``."""
    result = ONE
    for _ in range(m):
        result = compose(result, c)
    return result


def _ratios(t: Sequence[Fraction]) -> list[Fraction]:
    # ratios[i] = t[i] / t[i-1] for i >= 1; index 0 unused
    return [Fraction(0)] + [t[i] / t[i - 1] for i in range(1, len(t))]


def _classify_ratios(ratios: Sequence[Fraction], n: int, m: int) -> Divisibility:
    if n % m:
        return Divisibility.NONE
    for i in range(m + 1, n):
        if i % m and ratios[i] != ratios[i % m]:
            return Divisibility.NONE
    first = ratios[m] if m < n else None
    if all(ratios[i] == first for i in range(2 * m, n, m)):
        return Divisibility.STRONGLY_DIVISIBLE
    return Divisibility.DIVISIBLE


def divisibility(t: Sequence, m: int) -> Divisibility:
    """Decide m-divisibility and strong m-divisibility of a normalized tuple."""
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    t = norm_tuple(t)
    return _classify_ratios(_ratios(t), len(t), m)


def factor_by_length(t: Sequence, m: int) -> tuple[NormTuple, NormTuple]:
    """Write ``t = outer o inner`` with ``len(inner) == m``."""
    t = norm_tuple(t)
    if divisibility(t, m) is Divisibility.NONE:
        raise NotDivisibleError(f"tuple of length {len(t)} is not {m}-divisible")
    inner = t[:m]
    outer = t[::m]
    return outer, inner


def is_irreducible(t: Sequence) -> bool:
    t = norm_tuple(t)
    return all(divisibility(t, m) is Divisibility.NONE for m in range(2, len(t)))


def peel_minimal(t: Sequence) -> tuple[NormTuple, NormTuple]:
    """Split off the innermost irreducible factor (the shortest possible inner factor)."""
    t = norm_tuple(t)
    return _peel(t)


def _peel(t: NormTuple) -> tuple[NormTuple, NormTuple]:
    n = len(t)
    ratios = _ratios(t)
    for m in range(2, n):
        if n % m == 0 and _classify_ratios(ratios, n, m) is not Divisibility.NONE:
            return t[::m], t[:m]
    return ONE, t


def is_geometric(t: Sequence) -> Optional[Ratio]:
    """Ratio ``x`` if ``t == (1, x, x**2, ...)``, ``ANY_RATIO`` for ``(1,)``, else None."""
    t = norm_tuple(t)
    if len(t) == 1:
        return ANY_RATIO
    x = t[1]
    for i in range(2, len(t)):
        if t[i] != t[i - 1] * x:
            return None
    return x


def canonical_factorization(t: Sequence) -> list[NormTuple]:
    """Unique factorization into irreducibles, ordered so that geometric
    adjacent pairs have non-increasing lengths from outside in.

    Returns ``[]`` for the unit ``(1,)``.
    """
    t = norm_tuple(t)
    inner_first = []
    while len(t) > 1:
        t, inner = _peel(t)
        inner_first.append(inner)
    return inner_first[::-1]


def compressed_factorization(t: Sequence) -> list[NormTuple]:
    """Factorization whose factors are irreducible or geometric, with no
    adjacent pair composing to a geometric tuple."""
    return merge_geometric_runs(canonical_factorization(t))


def merge_geometric_runs(factors: Sequence[NormTuple]) -> list[NormTuple]:
    """Merge maximal runs of adjacent factors (outermost first) whose
    composition is geometric."""
    merged: list[NormTuple] = []
    for f in factors:
        if merged and is_geometric(compose(merged[-1], f)) is not None:
            merged[-1] = compose(merged[-1], f)
        else:
            merged.append(f)
    return merged


def is_all_ones(t: Sequence) -> bool:
    return all(a == 1 for a in t)


class CommuteKind(enum.Enum):
    TRIVIAL_FACTOR = "trivial-factor"
    BOTH_ALL_ONES = "both-all-ones"
    COMMON_POWER = "common-power"
    NON_COMMUTING = "non-commuting"


@dataclass(frozen=True)
class CommuteClass:
    kind: CommuteKind
    root: Optional[NormTuple] = None
    m: Optional[int] = None
    n: Optional[int] = None


def _integer_log(value: int, base: int) -> Optional[int]:
    e, acc = 0, 1
    while acc < value:
        acc *= base
        e += 1
    return e if acc == value else None


def commute_class(a: Sequence, b: Sequence) -> CommuteClass:
    """Classify a pair of normalized tuples by how (and whether) they commute."""
    a, b = norm_tuple(a), norm_tuple(b)
    if compose(a, b) != compose(b, a):
        return CommuteClass(CommuteKind.NON_COMMUTING)
    if len(a) == 1 or len(b) == 1:
        return CommuteClass(CommuteKind.TRIVIAL_FACTOR)
    if is_all_ones(a) and is_all_ones(b):
        return CommuteClass(CommuteKind.BOTH_ALL_ONES)
    for length in range(2, gcd(len(a), len(b)) + 1):
        m = _integer_log(len(a), length)
        n = _integer_log(len(b), length)
        if m is None or n is None:
            continue
        # the innermost copy of the root is an initial segment of both
        c = a[:length]
        if power(c, m) == a and power(c, n) == b:
            return CommuteClass(CommuteKind.COMMON_POWER, c, m, n)
    raise InternalInvariantError(f"commuting tuples {a} and {b} fit no commuting class")

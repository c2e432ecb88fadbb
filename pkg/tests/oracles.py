"""Brute-force reference implementations used to cross-check the library.

Nothing here imports the code under test; each oracle works from the
definitions alone and favours obviousness over speed.
"""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import product


def ocompose(outer, inner):
    return tuple(Fraction(a) * Fraction(b) for a in outer for b in inner)


def onormalize(t):
    return tuple(Fraction(a, t[0]) for a in t)


def ogeometric(t) -> bool:
    return all(t[i] == t[1] ** i for i in range(len(t))) if len(t) > 1 else True


def _splits(t):
    """Every way of writing ``t = outer o inner`` with a nontrivial inner factor."""
    n = len(t)
    for m in range(2, n + 1):
        if n % m == 0:
            # the inner factor of a composition is always its initial segment
            inner, outer = t[:m], t[::m]
            if ocompose(outer, inner) == t:
                yield outer, inner


@lru_cache(maxsize=None)
def oirreducible(t) -> bool:
    return all(len(inner) == len(t) for _, inner in _splits(t))


@lru_cache(maxsize=None)
def all_chains(t) -> tuple[tuple, ...]:
    """All factorizations of ``t`` into irreducibles, outermost first."""
    if len(t) == 1:
        return ((),)
    out = []
    for outer, inner in _splits(t):
        if oirreducible(inner):
            out.extend(chain + (inner,) for chain in all_chains(outer))
    return tuple(out)


def length_ordered(chain) -> bool:
    return all(
        len(a) >= len(b)
        for a, b in zip(chain, chain[1:])
        if ogeometric(ocompose(a, b))
    )


def norm_tuples(max_entry: int, max_len: int):
    """Distinct normalized tuples coming from integer tuples in the box."""
    seen = set()
    for n in range(1, max_len + 1):
        for t in product(range(1, max_entry + 1), repeat=n):
            key = onormalize(t)
            if key not in seen:
                seen.add(key)
                yield key


def random_tuple(rng: random.Random, max_len=4, max_entry=4):
    return tuple(rng.randint(1, max_entry) for _ in range(rng.randint(1, max_len)))


def random_presentation_parts(rng: random.Random, max_levels=2, max_len=3, max_entry=3):
    prefix = [random_tuple(rng, max_len, max_entry) for _ in range(rng.randint(0, 1))]
    period = [random_tuple(rng, max_len, max_entry) for _ in range(rng.randint(1, max_levels))]
    return period, prefix

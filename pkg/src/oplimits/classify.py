"""Classification invariants of eventually periodic order preserving
presentations, and the isomorphism decision built on them.

Factor streams are kept in application order: the first factor is the
innermost one, applied first.  This is the reverse of the outermost-first
lists returned by :func:`oplimits.tuples.canonical_factorization`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .arith import SnRelation, Supernatural, reduced_root, sn_compare, sn_from_periodic
from .errors import InternalInvariantError, NotAlternationError
from .presentation import Presentation
from .tuples import (
    ANY_RATIO,
    NormTuple,
    canonical_factorization,
    compose,
    compressed_factorization,
    is_geometric,
    normalize,
)

STABILITY_PERIODS = 4
STABILITY_LENGTH_CAP = 4096


def envelope_supernatural(p: Presentation) -> Supernatural:
    return sn_from_periodic([sum(t) for t in p.prefix], [sum(t) for t in p.period])


def first_summand_supernatural(p: Presentation) -> Supernatural:
    return sn_from_periodic([t[0] for t in p.prefix], [t[0] for t in p.period])


def _norm(t) -> NormTuple:
    return normalize(t)[1]


@dataclass(frozen=True)
class GeometricWitness:
    """Eventual common ratio of the nontrivial levels (None if every level is
    a pure refinement, so no ratio is constrained)."""

    ratio: Optional[Fraction]


def _chain_law(period: tuple) -> Optional[GeometricWitness]:
    ratios = []
    for t in period:
        x = is_geometric(_norm(t))
        if x is None:
            return None
        if x is not ANY_RATIO:
            ratios.append((x, len(t)))
    # composing skips length-1 levels, so the law links consecutive
    # nontrivial levels, cyclically around the period
    for idx, (x, length) in enumerate(ratios):
        nxt = ratios[(idx + 1) % len(ratios)][0]
        if nxt != x ** length:
            return None
    return GeometricWitness(ratios[0][0] if ratios else None)


def _composite(tuples) -> NormTuple:
    """Normalized tuple of applying ``tuples`` in order."""
    result: NormTuple = (Fraction(1),)
    for t in tuples:
        result = compose(_norm(t), result)
    return result


def has_geometric_character(p: Presentation) -> Optional[GeometricWitness]:
    witness = _chain_law(p.period)
    oracle = is_geometric(_composite(p.period * 2)) is not None
    if (witness is not None) != oracle:
        raise InternalInvariantError(
            "geometric-character chain law disagrees with the two-period composite"
        )
    return witness


def _merge_stream(stream: list[NormTuple]) -> list[NormTuple]:
    """Merge maximal runs (application order) composing to a geometric tuple."""
    merged: list[NormTuple] = []
    for f in stream:
        if merged and is_geometric(compose(f, merged[-1])) is not None:
            merged[-1] = compose(f, merged[-1])
        else:
            merged.append(f)
    return merged


def _stream(tuples) -> list[NormTuple]:
    out: list[NormTuple] = []
    for t in tuples:
        out.extend(reversed(canonical_factorization(_norm(t))))
    return out


def _cyclic_merge(stream: list[NormTuple]) -> list[NormTuple]:
    n = len(stream)
    breaks = [i for i in range(n) if is_geometric(compose(stream[(i + 1) % n], stream[i])) is None]
    if not breaks:
        raise InternalInvariantError("factor cycle composes to a geometric tuple")
    start = (breaks[0] + 1) % n
    return _merge_stream(stream[start:] + stream[:start])


def _primitive_rotation(cycle: list[NormTuple]) -> tuple[NormTuple, ...]:
    n = len(cycle)
    for p in range(1, n + 1):
        if n % p == 0 and all(cycle[i] == cycle[i % p] for i in range(n)):
            cycle = cycle[:p]
            break
    rotations = [tuple(cycle[i:] + cycle[:i]) for i in range(len(cycle))]
    return min(rotations)


def check_factor_stability(p: Presentation, periods: int = STABILITY_PERIODS,
                           length_cap: int = STABILITY_LENGTH_CAP) -> int:
    """Compare the compressed factorization of j-period composites with the
    merged concatenation of per-level factors; returns the largest j checked."""
    one_period = _composite(p.period)
    per_level = _stream(p.period)
    composite: NormTuple = (Fraction(1),)
    checked = 0
    for j in range(1, periods + 1):
        composite = compose(one_period, composite)
        if len(composite) > length_cap:
            break
        expected = _merge_stream(per_level * j)
        actual = list(reversed(compressed_factorization(composite)))
        if actual != expected:
            raise InternalInvariantError(
                f"factor stream over {j} periods is not the concatenation of the per-level factors"
            )
        checked = j
    return checked


@dataclass(frozen=True)
class GeometricMode:
    lengths: Supernatural
    root: Fraction


@dataclass(frozen=True)
class NonGeometricMode:
    prefix_factors: tuple[NormTuple, ...]
    cycle_factors: tuple[NormTuple, ...]


@dataclass(frozen=True)
class InvariantSet:
    envelope: Supernatural
    first_summand: Supernatural
    mode: Union[GeometricMode, NonGeometricMode]


def invariants(p: Presentation) -> InvariantSet:
    witness = has_geometric_character(p)
    if witness is not None:
        lengths = sn_from_periodic([], [len(t) for t in p.period])
        root = reduced_root(witness.ratio)[0] if witness.ratio is not None else Fraction(1)
        mode: Union[GeometricMode, NonGeometricMode] = GeometricMode(lengths, root)
    else:
        check_factor_stability(p)
        cycle = _primitive_rotation(_cyclic_merge(_stream(p.period)))
        mode = NonGeometricMode(tuple(_merge_stream(_stream(p.prefix))), cycle)
    return InvariantSet(envelope_supernatural(p), first_summand_supernatural(p), mode)


@dataclass(frozen=True)
class Finding:
    invariant: str
    holds: bool
    detail: str
    citation: str


@dataclass(frozen=True)
class IsoReport:
    verdict: bool
    findings: tuple[Finding, ...]
    left: InvariantSet
    right: InvariantSet
    notes: tuple[str, ...] = field(default=())

    @property
    def failures(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if not f.holds)


def isomorphic(p1: Presentation, p2: Presentation) -> IsoReport:
    a, b = invariants(p1), invariants(p2)
    findings = []
    env = sn_compare(a.envelope, b.envelope)
    findings.append(Finding(
        "envelope", env is SnRelation.EQUAL,
        f"{a.envelope} vs {b.envelope}: {env.value}", "Glimm; Theorem 29"))
    first = sn_compare(a.first_summand, b.first_summand)
    findings.append(Finding(
        "first-summand", first is not SnRelation.INEQUIVALENT,
        f"{a.first_summand} vs {b.first_summand}: {first.value}", "Theorem 13"))
    notes = []
    if first is SnRelation.EQUAL:
        notes.append("first-summand supernatural numbers are exactly equal")
    if isinstance(a.mode, GeometricMode) != isinstance(b.mode, GeometricMode):
        findings.append(Finding("geometric-character", False,
                                "one presentation has geometric character and the other does not",
                                "Theorem 29"))
    elif isinstance(a.mode, GeometricMode):
        lengths = sn_compare(a.mode.lengths, b.mode.lengths)
        findings.append(Finding(
            "lengths", lengths is not SnRelation.INEQUIVALENT,
            f"{a.mode.lengths} vs {b.mode.lengths}: {lengths.value}", "Theorem 29"))
        findings.append(Finding(
            "reduced-root", a.mode.root == b.mode.root,
            f"{a.mode.root} vs {b.mode.root}", "Theorem 29"))
    else:
        same = a.mode.cycle_factors == b.mode.cycle_factors
        findings.append(Finding(
            "factor-cycle", same,
            "primitive factor cycles agree up to rotation" if same else "primitive factor cycles differ",
            "Theorems 26, 27 and 29"))
    verdict = all(f.holds for f in findings)
    if verdict and first is SnRelation.INEQUIVALENT:
        raise InternalInvariantError("isomorphic verdict with inequivalent first summands")
    notes.append("decided for eventually periodic presentations")
    return IsoReport(verdict, tuple(findings), a, b, tuple(notes))


def alternation_invariants(p: Presentation) -> tuple[Supernatural, Supernatural]:
    """``(standard, refinement)`` supernatural numbers of an alternation presentation."""
    for t in p.prefix + p.period:
        if len(set(t)) != 1:
            raise NotAlternationError(f"tuple {t} has unequal entries")
    standard = sn_from_periodic([len(t) for t in p.prefix], [len(t) for t in p.period])
    return standard, first_summand_supernatural(p)

import random

import pytest

from oplimits.embed import (
    NormalizerElem,
    compose_grids,
    conjugate_normalizer,
    is_lop_direct,
    nop_membership,
    satisfies_condition3,
)
from oplimits.errors import NotGapPointError, SizeLimitError
from oplimits.presentation import Presentation
from oplimits.spectrum import (
    Cmp,
    GapKind,
    Index,
    MaxOfF,
    MinOfF,
    Point,
    Relation,
    SystemLevels,
    check_coherence,
    closure_member,
    compare_prefix,
    coordinate,
    gap_successor,
    is_gap_point,
    joint_window,
    materialize_order,
    orbit_dense,
    orders_by_grids,
    orders_from_grids,
    related_points,
    resolve_prefix,
)
from corpus import ALTERNATION, CORPUS, REFINEMENT, THREE_STEP_GRIDS, STANDARD, sample_points, small_random_presentation

GAP_SYSTEMS = [
    REFINEMENT,
    STANDARD,
    ALTERNATION,
    Presentation.of([(1, 1, 1)]),
    Presentation.of([(1, 2)]),
    Presentation.of([(2, 1)]),
    Presentation.of([(1, 1), (3,)], prefix=[(2,)]),
]


def sys_of(period, prefix=()):
    return SystemLevels(Presentation.of(period, prefix))


def test_f_sets():
    sys = sys_of([(1, 2, 3)])
    assert sys.boundaries(1) == (0, 1, 3, 6)
    assert list(sys.f_set(1, 2)) == [2, 3]
    assert [sys.i_n(1, x) for x in range(1, 7)] == [1, 2, 2, 3, 3, 3]
    with pytest.raises(IndexError):
        sys.f_set(1, 4)
    with pytest.raises(IndexError):
        sys.i_n(1, 7)


def test_small_orders():
    assert materialize_order(sys_of([(3,)]), 1) == [(1,), (2,), (3,)]
    assert materialize_order(sys_of([(1, 1)]), 2) == [(1, 1), (2, 1), (1, 2), (2, 2)]
    assert materialize_order(sys_of([(2,)]), 2) == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_compare_prefix():
    sys = sys_of([(1, 1)])
    assert compare_prefix(sys, 2, (2, 1), (1, 2)) is Cmp.LT
    assert compare_prefix(sys, 2, (1, 2), (1, 2)) is Cmp.EQ
    with pytest.raises(ValueError):
        compare_prefix(sys, 2, (1,), (1, 2))


def test_size_cap():
    sys = SystemLevels(Presentation.of([(2,)]), cap=8)
    assert len(materialize_order(sys, 3)) == 8
    with pytest.raises(SizeLimitError):
        materialize_order(sys, 4)
    with pytest.raises(SizeLimitError):
        orders_by_grids(sys, 4)


@pytest.mark.parametrize("p", CORPUS, ids=str)
def test_materialized_order_matches_grid_construction(p):
    sys = SystemLevels(p, cap=50_000)
    levels = max(m for m in range(1, 6) if p.level_size(m) <= 5000)
    by_grids = orders_by_grids(sys, levels)
    for m in range(1, levels + 1):
        assert materialize_order(sys, m) == by_grids[m - 1]
    report = check_coherence(by_grids, hyper=True)
    assert report.coherent and report.hypercoherent, report.failures


def test_coherence_rejects_malformed():
    with pytest.raises(ValueError):
        check_coherence([])
    with pytest.raises(ValueError):
        check_coherence([[(1,), (1,)]])
    with pytest.raises(ValueError):
        check_coherence([[(1,), (2,)], [(1, 1), (2, 1), (1, 2)]])
    assert check_coherence([[(1,)]], hyper=True).ok


def test_coherence_detects_bad_extension():
    orders = [[(1,), (2,)], [(1, 2), (1, 1), (2, 1), (2, 2)]]
    report = check_coherence(orders)
    assert not report.coherent
    assert report.failures[0].startswith("level 2: extensions of (1,)")


def test_three_step_example_grids():
    phi1, phi2 = THREE_STEP_GRIDS
    assert (phi1.n, phi1.k, phi2.n, phi2.k) == (3, 3, 9, 3)
    assert satisfies_condition3(phi1) and satisfies_condition3(phi2)
    assert is_lop_direct(phi1) and is_lop_direct(phi2)
    assert not satisfies_condition3(compose_grids(phi1, phi2))


def test_three_step_example_coherence():
    orders = orders_from_grids(3, THREE_STEP_GRIDS)
    assert check_coherence(orders[:2], hyper=True).ok
    report = check_coherence(orders, hyper=True)
    assert report.coherent and report.hypercoherent is False
    assert "stems of length 1 induce different orders at level 3" in report.failures


def test_three_step_example_pushes_e12_out_of_the_normalizer():
    phi1, phi2 = THREE_STEP_GRIDS
    w = NormalizerElem(3, frozenset({(1, 2)}))
    once = conjugate_normalizer(phi1, w)
    assert once.pairs == frozenset({(1, 3), (2, 5), (4, 7)})
    assert nop_membership(once)
    assert not nop_membership(conjugate_normalizer(phi2, once))


def test_orders_from_grids_checks_dimensions():
    with pytest.raises(ValueError):
        orders_from_grids(2, THREE_STEP_GRIDS)


def test_points_and_coordinates():
    sys = sys_of([(1, 2)], prefix=[(2,)])
    x = Point((2,), (MaxOfF(2), Index(1)))
    assert resolve_prefix(sys, x, 4) == (2, 3, 1, 3)
    assert joint_window(sys, x) == (1, 2)
    assert coordinate(sys, Point((), (MinOfF(2),)), 2) == 2
    with pytest.raises(ValueError):
        coordinate(sys, Point((5,), (Index(1),)), 1)
    with pytest.raises(ValueError):
        Point((1,), ())


def test_related_points():
    sys = sys_of([(2,)])
    tail = (MaxOfF(1),)
    assert related_points(sys, Point((1, 1), tail), Point((1, 1), tail)) is Relation.EQUAL
    assert related_points(sys, Point((1, 1), tail), Point((2, 1), tail)) is Relation.FORWARD
    assert related_points(sys, Point((2, 1), tail), Point((1, 1), tail)) is Relation.BACKWARD
    assert related_points(sys, Point((), tail), Point((), (MinOfF(1),))) is Relation.UNRELATED
    # same tail, written differently
    assert related_points(sys, Point((), (Index(2),)), Point((2,), (MaxOfF(1),))) is Relation.EQUAL


def test_orbit_density():
    assert orbit_dense(SystemLevels(STANDARD), Point((), (MaxOfF(2),)))
    assert not orbit_dense(SystemLevels(STANDARD), Point((), (MaxOfF(1),)))
    assert not orbit_dense(SystemLevels(REFINEMENT), Point((1,), (Index(2),)))


def test_closure_member_basics():
    sys = SystemLevels(ALTERNATION)
    dense = Point((), (MaxOfF(2), Index(1)))
    x = Point((1,), (MaxOfF(1),))
    assert closure_member(sys, x, dense)
    assert closure_member(sys, x, x)
    assert not closure_member(sys, dense, x)


@pytest.mark.parametrize("p", GAP_SYSTEMS, ids=str)
def test_closure_member_transitive(p):
    sys = SystemLevels(p)
    pts = random.Random(3).sample(sample_points(sys), 12)
    for x in pts:
        for y in pts:
            if closure_member(sys, x, y):
                for z in pts:
                    if closure_member(sys, z, x):
                        assert closure_member(sys, z, y)


def test_gap_closed_forms():
    ref, std = SystemLevels(REFINEMENT), SystemLevels(STANDARD)
    assert is_gap_point(ref, Point((), (Index(2),))) is GapKind.EXCEPTIONAL
    assert is_gap_point(ref, Point((1,), (Index(2),))) is GapKind.GAP
    assert is_gap_point(ref, Point((2,), (Index(1),))) is GapKind.NOT_GAP
    assert is_gap_point(std, Point((), (Index(1),))) is GapKind.GAP
    assert is_gap_point(std, Point((2, 2), (Index(1),))) is GapKind.GAP
    assert is_gap_point(std, Point((), (Index(1), Index(2)))) is GapKind.NOT_GAP
    alt = SystemLevels(ALTERNATION)
    assert is_gap_point(alt, Point((), (MaxOfF(2), MaxOfF(1)))) is GapKind.EXCEPTIONAL
    assert is_gap_point(alt, Point((), (MaxOfF(2), Index(1)))) is GapKind.NOT_GAP


def test_gap_successor_cases():
    std = SystemLevels(STANDARD)
    # Case 2 with q = 1
    assert resolve_prefix(std, gap_successor(std, Point((), (Index(1),))), 4) == (2, 1, 1, 1)
    ref = SystemLevels(Presentation.of([(3,)]))
    # Case 1 with m = 1
    y = gap_successor(ref, Point((1,), (MaxOfF(1),)))
    assert resolve_prefix(ref, y, 4) == (2, 1, 1, 1)
    with pytest.raises(NotGapPointError):
        gap_successor(std, Point((), (Index(2),)))
    with pytest.raises(NotGapPointError):
        gap_successor(ref, Point((), (MaxOfF(1),)))


def increment_level(sys, x, y):
    """Highest level at which ``y`` raises the coordinate of ``x`` by one."""
    return max(n for n in range(1, len(y.prefix) + 1) if coordinate(sys, y, n) == coordinate(sys, x, n) + 1)


def immediate_successor_levels(sys, x, y, top=6):
    """Levels ``m <= top`` at which ``y``'s prefix directly follows ``x``'s."""
    good = []
    for m in range(1, top + 1):
        chain = materialize_order(sys, m)
        pos = {p: i for i, p in enumerate(chain)}
        if pos[resolve_prefix(sys, y, m)] == pos[resolve_prefix(sys, x, m)] + 1:
            good.append(m)
    return good


@pytest.mark.parametrize("p", GAP_SYSTEMS, ids=str)
def test_gap_successor_is_immediate(p):
    sys = SystemLevels(p, cap=50_000)
    gaps = [x for x in sample_points(sys) if is_gap_point(sys, x) is GapKind.GAP]
    assert gaps
    for x in gaps:
        y = gap_successor(sys, x)
        start = increment_level(sys, x, y)
        assert immediate_successor_levels(sys, x, y) == list(range(start, 7))
        assert closure_member(sys, x, y)
        assert not closure_member(sys, y, x)


def test_random_systems_are_coherent():
    rng = random.Random(11)
    for _ in range(10):
        p = small_random_presentation(rng, 4, 3000)
        sys = SystemLevels(p)
        orders = [materialize_order(sys, m) for m in range(1, 5)]
        assert orders == orders_by_grids(sys, 4)
        assert check_coherence(orders, hyper=True).ok

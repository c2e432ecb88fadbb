import random

import pytest
from hypothesis import given, strategies as st

from oplimits.bratelli import (
    OrderedDiagram,
    contract,
    contract_chain,
    diagnostics,
    diagram_tuple,
    embedding_blocks,
    identity_diagram,
    order_equivalent,
    target_dimensions,
    tuple_diagram,
    verify_intertwining,
)
from oplimits.presentation import compose_int
from corpus import mutate, random_chain, random_diagram, telescoped_pair


def test_build_and_validate():
    d = OrderedDiagram.build(2, 1, [(1, 1, 2), (2, 1, 1)], {1: [1, 0]})
    assert diagnostics(d) == []
    assert embedding_blocks(d) == (((2, 1), (1, 2)),)
    assert target_dimensions(d, (3, 5)) == (11,)
    bad = OrderedDiagram.build(1, 2, [(1, 1, 1)])
    assert any("no incoming edge" in p for p in diagnostics(bad))
    assert diagnostics(OrderedDiagram.build(2, 1, [(1, 1, 1)])) == ["source 2 has no outgoing edge"]
    assert diagnostics(OrderedDiagram.build(1, 1, [(1, 1, 0)]))
    with pytest.raises(ValueError):
        embedding_blocks(bad)


def test_contract_rejects_mismatch():
    with pytest.raises(ValueError):
        contract(identity_diagram(2), identity_diagram(3))
    with pytest.raises(ValueError):
        contract_chain([])


@given(st.lists(st.integers(1, 4), min_size=1, max_size=4), st.lists(st.integers(1, 4), min_size=1, max_size=4))
def test_single_vertex_contraction_is_tuple_composition(a, b):
    assert diagram_tuple(contract(tuple_diagram(a), tuple_diagram(b))) == compose_int(b, a)


def test_diagram_tuple_needs_single_vertices():
    with pytest.raises(ValueError):
        diagram_tuple(identity_diagram(2))


@pytest.mark.parametrize("seed", range(25))
def test_contraction_associative(seed):
    rng = random.Random(seed)
    a, b, c = random_chain(rng, 3, max_vertices=3)
    assert order_equivalent(contract(contract(a, b), c), contract(a, contract(b, c)))


def test_identity_is_neutral():
    rng = random.Random(7)
    d = random_diagram(rng, 2, 3)
    assert order_equivalent(contract(identity_diagram(2), d), d)
    assert order_equivalent(contract(d, identity_diagram(3)), d)


def test_order_equivalence_sees_fiber_order():
    d1 = OrderedDiagram.build(2, 1, [(1, 1, 1), (2, 1, 1)], {1: [0, 1]})
    d2 = OrderedDiagram.build(2, 1, [(1, 1, 1), (2, 1, 1)], {1: [1, 0]})
    assert not order_equivalent(d1, d2)
    assert not order_equivalent(d1, identity_diagram(1))


@pytest.mark.parametrize("seed", range(10))
def test_intertwining_accepts_telescoping(seed):
    rng = random.Random(seed)
    chain = random_chain(rng, 14)
    chain_b, eprime, fprime, f, g = telescoped_pair(chain)
    report = verify_intertwining(chain, chain_b, eprime, fprime, f, g, horizon=5)
    assert report.ok, report.failures


@pytest.mark.parametrize("seed", range(10))
def test_intertwining_rejects_mutation(seed):
    rng = random.Random(seed)
    chain = random_chain(rng, 14)
    chain_b, eprime, fprime, f, g = telescoped_pair(chain)
    n = rng.randint(1, 5)
    eprime[n - 1] = mutate(eprime[n - 1], rng)
    report = verify_intertwining(chain, chain_b, eprime, fprime, f, g, horizon=5)
    assert not report.ok
    assert f"E-side equation fails at n={n}" in report.failures


def test_identity_shift_intertwining():
    # a chain is intertwined with itself through E'_n = id, F'_n = E_{n+1}
    chain = [tuple_diagram((1, 2))] * 12
    ids = [identity_diagram(1)] * 12
    report = verify_intertwining(chain, chain, ids, chain[1:], lambda n: n, lambda n: n + 1, 5)
    assert report.ok


def test_intertwining_input_errors():
    chain = [tuple_diagram((1, 2))] * 3
    with pytest.raises(IndexError):
        verify_intertwining(chain, chain, chain, chain, lambda n: n, lambda n: n + 1, 5)
    with pytest.raises(ValueError):
        verify_intertwining(chain, chain, chain, chain, lambda n: n, lambda n: n, 1)
    with pytest.raises(ValueError):
        verify_intertwining(chain, chain, chain, chain, lambda n: n, lambda n: n + 1, 0)

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grasscomb.errors import ArgumentError, ParseError, ShapeError
from grasscomb.graphs import DirectedMultigraph, lgv_check, path_matrix_at, sample_point
from grasscomb.linalg import matrix_inverse_rational
from grasscomb.transfer import (
    FORWARD,
    REVERSED,
    LayeredGraph,
    _layer_complement,
    chain_graph,
    theorem2_check,
    theorem2_check_all,
    transfer_product,
)


@st.composite
def layered(draw, max_N=3, max_layers=3, max_edges=3):
    N = draw(st.integers(1, max_N))
    n = draw(st.integers(1, max_layers))
    edge = st.tuples(st.integers(1, N), st.integers(1, N))
    return LayeredGraph(N, [draw(st.lists(edge, max_size=max_edges)) for _ in range(n)])


@st.composite
def layered_and_ends(draw):
    lg = draw(layered())
    p = draw(st.integers(0, min(2, lg.N)))
    pick = st.sets(st.integers(1, lg.N), min_size=p, max_size=p).map(lambda s: tuple(sorted(s)))
    return lg, draw(pick), draw(pick)


@given(layered(), st.integers(0, 1000))
def test_product_of_transfers_equals_chained_path_matrix(lg, seed):
    # oracle: one big inverse of the whole chained graph, read off at block (1, n)
    point = sample_point(lg.variables, random.Random(seed))
    try:
        inverses = [matrix_inverse_rational(_layer_complement(layer, point)) for layer in lg.layers]
    except ArithmeticError:
        return
    ch = chain_graph(lg)
    big = path_matrix_at(ch.graph, point)
    N, n = lg.N, lg.n_layers
    block = [[big[ch.flat(i, 1) - 1][ch.flat(j, n) - 1] for j in range(1, N + 1)] for i in range(1, N + 1)]
    assert transfer_product(inverses, FORWARD) == block


@given(layered_and_ends(), st.integers(0, 2**16))
def test_theorem2_forward_holds(args, seed):
    lg, A, B = args
    assert theorem2_check(lg, A, B, trials=2, seed=seed).passed


@given(st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), max_size=3), st.integers(0, 2**16))
def test_single_layer_reproduces_lgv_verdicts(edges, seed):
    lg = LayeredGraph(3, [edges])
    layer = lg.layers[0]
    for A, B in [((), ()), ((1,), (2,)), ((1, 3), (2, 3))]:
        assert theorem2_check(lg, A, B, seed=seed).verdicts() == lgv_check(layer, A, B, seed=seed).verdicts()


def test_layer_names_match_single_graph_names():
    lg = LayeredGraph(2, [[(1, 2), (1, 2)]])
    assert lg.variables == DirectedMultigraph(2, [(1, 2), (1, 2)]).variables


def test_reversed_order_fails_on_witness():
    lg = LayeredGraph(2, [[(1, 2, "u")], [(2, 1, "v")]])
    assert theorem2_check(lg, (1,), (1,), seed=1).passed
    rev = theorem2_check(lg, (1,), (1,), seed=1, order=REVERSED)
    assert not rev.passed
    assert all(c.minor == 1 and c.flow_side != 1 for c in rev.checks)


def test_check_all_matches_individual():
    lg = LayeredGraph(2, [[(1, 2), (2, 2)], [(2, 1)]])
    pairs = [((1,), (1,)), ((1,), (2,)), ((1, 2), (1, 2))]
    batch = theorem2_check_all(lg, pairs, seed=9)
    for (A, B), rep in zip(pairs, batch):
        assert rep.verdicts() == theorem2_check(lg, A, B, seed=9).verdicts()


def test_chain_flat_indexing():
    ch = chain_graph(LayeredGraph(3, [[], [], []]))
    assert ch.flat(2, 3) == 8 and ch.unflat(8) == (2, 3)
    assert len(ch.graph.edges) == 6


def test_json_roundtrip():
    data = {"N": 2, "layers": [{"edges": [{"from": 1, "to": 2, "weight": "u"}]}, {"edges": []}]}
    lg = LayeredGraph.from_json(data)
    assert LayeredGraph.from_json(lg.to_json()).to_json() == lg.to_json()


def test_errors():
    lg = LayeredGraph(2, [[(1, 2)]])
    with pytest.raises(ArgumentError):
        theorem2_check(lg, (1,), (1, 2), seed=0)
    with pytest.raises(ArgumentError):
        theorem2_check(lg, (3,), (1,), seed=0)
    with pytest.raises(ShapeError):
        LayeredGraph(2, [[(1, 3)]])
    with pytest.raises(ShapeError):
        LayeredGraph(2, [])
    with pytest.raises(ShapeError):
        LayeredGraph(2, [DirectedMultigraph(3, [])])
    with pytest.raises(ParseError):
        LayeredGraph.from_json('{"N": 2}')
    with pytest.raises(ParseError):
        LayeredGraph.from_json({"N": 2, "layers": [{"edges": [{"from": 1, "to": 2, "weight": 1.5}]}]})

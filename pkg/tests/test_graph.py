import json

import numpy as np
import pytest

from arakdyn.graph import (
    DirectedGraph,
    block_form,
    directed_edge_matrix,
    load_graph,
    mumford_genus2_preset,
    path_graph,
    quotient_ball,
    transpose,
    tree_ball,
    walks,
)
from arakdyn.symbolic import count_words, free_group_subshift

THETA = [
    [0, 1, 0, 0, 0, 1],
    [1, 0, 1, 0, 0, 0],
    [0, 1, 0, 1, 0, 0],
    [0, 0, 1, 0, 1, 0],
    [0, 0, 0, 1, 0, 1],
    [1, 0, 0, 0, 1, 0],
]
DUMBBELL = [
    [0, 0, 1, 0, 0, 1],
    [1, 1, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0],
    [0, 1, 0, 0, 1, 0],
    [1, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 1],
]


def matrix(spec):
    return [list(r) for r in spec.A]


def test_printed_matrices():
    assert matrix(directed_edge_matrix(mumford_genus2_preset(1))) == matrix(free_group_subshift(2))
    assert matrix(directed_edge_matrix(mumford_genus2_preset(2))) == THETA
    assert matrix(directed_edge_matrix(mumford_genus2_preset(3))) == DUMBBELL
    assert directed_edge_matrix(mumford_genus2_preset("theta")).alphabet.letters == ("a", "b", "c", "a~", "b~", "c~")


def test_single_loop():
    g = DirectedGraph(("v",), (("e", "v", "v"),))
    assert matrix(directed_edge_matrix(g)) == [[1, 0], [0, 1]]


def test_preset_shapes():
    theta = mumford_genus2_preset(2)
    assert len(theta.vertices) == 2 and len(theta.positive) == 3
    assert mumford_genus2_preset(3).betti_number() == 2
    for p in (1, 2, 3):
        assert mumford_genus2_preset(p).betti_number() == 2


def oracle_matrix(graph):
    # transfer matrix from scratch: composable and not the reverse edge
    E = list(graph.oriented)

    def ends(w):
        s, d = next((s, d) for e, s, d in graph.edges if e == w[0])
        return (s, d) if w[1] > 0 else (d, s)

    return [[int(ends(x)[1] == ends(y)[0] and y != (x[0], -x[1])) for y in E] for x in E]


@pytest.mark.parametrize("p", ["rose2", "theta", "dumbbell"])
def test_matrix_oracle_and_row_sums(p):
    g = mumford_genus2_preset(p)
    spec = directed_edge_matrix(g)
    assert matrix(spec) == oracle_matrix(g)
    for w, row in zip(g.oriented, spec.A):
        v = g.range(w)
        back = int(g.source(g.iota(w)) == v)
        assert sum(row) == g.out_degree(v) - back


@pytest.mark.parametrize("p", ["rose2", "theta", "dumbbell"])
def test_block_symmetries(p):
    g = mumford_genus2_preset(p)
    a11, a12, a21, a22 = block_form(directed_edge_matrix(g), len(g.positive))
    assert a12 == transpose(a12)
    assert a21 == transpose(a21)
    assert a11 == transpose(a22)


def test_walk_counts():
    theta = mumford_genus2_preset("theta")
    assert len(walks(theta, 1)) == 6
    assert len(walks(theta, 2)) == int(np.array(THETA).sum()) == 12
    assert len(walks(mumford_genus2_preset("rose2"), 2)) == count_words(free_group_subshift(2), 2) == 12


def test_sink_validation():
    g = path_graph(1)
    with pytest.raises(ValueError):
        directed_edge_matrix(g, require_sink_free=True)
    directed_edge_matrix(mumford_genus2_preset(2), require_sink_free=True)


def test_graph_validation():
    with pytest.raises(ValueError):
        DirectedGraph(("v",), (("e", "v", "w"),))
    with pytest.raises(ValueError):
        DirectedGraph(("v",), (("e", "v", "v"), ("e", "v", "v")))


def test_json_roundtrip(tmp_path):
    g = mumford_genus2_preset("dumbbell")
    path = tmp_path / "g.json"
    path.write_text(g.to_json())
    assert load_graph(str(path)) == g
    assert set(json.loads(g.to_json())) == {"vertices", "edges", "orientation"}
    assert "->" in g.to_dot()


def test_tree_ball_depth_zero():
    base = path_graph(2)
    ball = tree_ball(base, 3, 0)
    assert ball.graph.vertices == base.vertices
    assert ball.graph.edges == base.edges


def degrees(graph):
    deg = {v: 0 for v in graph.vertices}
    for _, s, d in graph.edges:
        deg[s] += 1
        deg[d] += 1
    return deg


def test_single_edge_ball():
    ball = tree_ball(path_graph(1), 2, 1)
    deg = degrees(ball.graph)
    assert deg["p0"] == deg["p1"] == 3
    assert len(ball.vertices_at(1)) == 4


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_tree_ball_regular_tree(q, n):
    ball = tree_ball(path_graph(2), q, n)
    g = ball.graph
    assert g.is_tree()
    deg = degrees(g)
    for v, d in ball.distance.items():
        assert d <= n
        assert deg[v] == (q + 1 if d < n else 1)
    for e, s, t in g.edges:
        assert abs(ball.distance[s] - ball.distance[t]) <= 1


def test_ball_nesting():
    small = tree_ball(path_graph(1), 2, 1)
    big = tree_ball(path_graph(1), 2, 2)
    assert set(small.graph.vertices) <= set(big.graph.vertices)
    restricted = {v for v, d in big.distance.items() if d <= 1}
    assert restricted == set(small.graph.vertices)


def test_tree_ball_rejects_cycles():
    with pytest.raises(ValueError):
        tree_ball(mumford_genus2_preset("theta"), 2, 1)
    ball = quotient_ball(mumford_genus2_preset("theta"), 2, 2)
    assert ball.graph.betti_number() == 2

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectrum import graph as gr
from spectrum.graph import GraphSizeError
from spectrum.prob_types import (Distribution, NType, TypeGraphSpec, binary_entropy, binary_relative_entropy,
                                 enumerate_ntypes, l1_distance, marginals, materialization_cap, mixture,
                                 mutual_information, product_dist, pushforward, shannon_entropy, tv_distance,
                                 type_class, type_class_size, type_graph, type_of)

weights = st.lists(st.integers(0, 20), min_size=1, max_size=6).filter(lambda w: sum(w) > 0)


def exact(ws):
    total = sum(ws)
    return Distribution(range(len(ws)), [Fraction(w, total) for w in ws])


def test_distribution_validation():
    with pytest.raises(ValueError):
        Distribution([0, 1], [Fraction(1, 2), Fraction(1, 3)])
    with pytest.raises(ValueError):
        Distribution([0, 1], [1.5, -0.5])
    with pytest.raises(ValueError):
        Distribution([0, 0], [0.5, 0.5])
    P = Distribution([0, 1], [0.5, 0.5 + 1e-14])
    assert not P.exact


def test_distribution_accessors():
    P = Distribution(["a", "b", "c"], [Fraction(1, 2), Fraction(1, 2), 0])
    assert P.exact and P["a"] == Fraction(1, 2) and P["z"] == 0
    assert P.support == ("a", "b")
    assert P.is_ntype(2) and not P.is_ntype(3) and P.denominator() == 2
    assert P.on(["c", "b", "a", "d"]).as_array().tolist() == [0, 0.5, 0.5, 0]
    with pytest.raises(ValueError):
        P.on(["c"])


@settings(max_examples=50, deadline=None)
@given(weights)
def test_json_round_trip(ws):
    P = exact(ws)
    assert Distribution.from_json_dict(P.to_json_dict()) == P
    Q = Distribution.from_array(range(len(ws)), np.array(ws, dtype=float))
    assert np.allclose(Distribution.from_json_dict(Q.to_json_dict()).as_array(), Q.as_array())


def test_entropies():
    assert shannon_entropy(Distribution.uniform(range(8))) == pytest.approx(3.0)
    assert shannon_entropy(Distribution.point(range(3), 1)) == 0.0
    assert binary_entropy(0.5) == 1.0 and binary_entropy(0.0) == 0.0
    assert binary_relative_entropy(0.5, 0.5) == 0.0
    assert binary_relative_entropy(0.5, 0.0) == math.inf
    assert binary_relative_entropy(0.0, 0.5) == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(weights, weights)
def test_distances_and_mixtures(a, b):
    n = min(len(a), len(b))
    if sum(a[:n]) == 0 or sum(b[:n]) == 0:
        return
    P, Q = exact(a[:n]), exact(b[:n])
    assert 0 <= tv_distance(P, Q) <= 1
    assert l1_distance(P, Q) == 2 * tv_distance(P, Q)
    p = Fraction(1, 3)
    M = mixture(p, P, Q)
    assert M.exact
    assert shannon_entropy(M) == pytest.approx(float(p) * shannon_entropy(P) + float(1 - p) * shannon_entropy(Q)
                                               + binary_entropy(float(p)))


@settings(max_examples=40, deadline=None)
@given(weights, weights)
def test_product_has_zero_mutual_information(a, b):
    P, Q = exact(a), exact(b)
    J = product_dist(P, Q)
    PX, PY = marginals(J)
    assert PX.on(P.labels) == P and PY.on(Q.labels) == Q
    assert mutual_information(J) == pytest.approx(0.0, abs=1e-12)
    assert shannon_entropy(J) == pytest.approx(shannon_entropy(P) + shannon_entropy(Q))


def test_mutual_information_of_copy():
    J = Distribution([(0, 0), (1, 1)], [Fraction(1, 2)] * 2)
    assert mutual_information(J) == pytest.approx(1.0)


def test_pushforward():
    P = Distribution.uniform(range(4))
    Q = pushforward(lambda x: x % 2, P)
    assert Q[0] == Q[1] == Fraction(1, 2)
    assert pushforward({0: "a", 1: "a", 2: "b", 3: "b"}, P, ["a", "b", "c"]).labels == ("a", "b", "c")


@pytest.mark.parametrize("d,n", [(1, 4), (2, 5), (3, 4), (4, 3)])
def test_enumerate_ntypes(d, n):
    types = enumerate_ntypes(range(d), n)
    assert len(types) == math.comb(n + d - 1, d - 1)
    assert len({T.counts for T in types}) == len(types)
    assert sum(type_class_size(T) for T in types) == d**n


def test_type_class_contents():
    T = NType((0, 1, 2), (2, 1, 0))
    cls = type_class(T)
    assert cls == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert all(type_of(s, (0, 1, 2)) == T for s in cls)
    assert type_class_size(NType(tuple(range(5)), (1,) * 5)) == 120
    with pytest.raises(GraphSizeError):
        type_class(NType(tuple(range(5)), (2,) * 5), cap=10)


def test_ntype_helpers():
    P = Distribution(range(3), [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])
    T = NType.from_distribution(P)
    assert T.n == 4 and T.counts == (2, 1, 1)
    assert T.scaled(3).counts == (6, 3, 3)
    with pytest.raises(ValueError):
        NType.from_distribution(P, 3)


def test_type_graph_of_c5():
    C5 = gr.cycle(5)
    H = type_graph(C5, 5, Distribution.uniform(range(5)))
    assert H.n == 120
    assert H.labels == tuple(sorted(H.labels))
    assert all(sorted(lab) == [0, 1, 2, 3, 4] for lab in H.labels)
    # adjacency follows the strong power
    a, b = H.labels[0], H.labels[1]
    close = all(x == y or C5.has_edge(x, y) for x, y in zip(a, b))
    assert H.has_edge(a, b) == close


def test_type_graphs_of_complete_graphs_are_complete():
    H = type_graph(gr.complete(3), 4, Distribution(range(3), [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]))
    assert H.num_edges == H.n * (H.n - 1) // 2


def test_type_graph_balls():
    C5 = gr.cycle(5)
    U = Distribution.uniform(range(5))
    assert type_graph(C5, 3, U, eps=Fraction(1, 100)).n == 0
    # two distinct symbols sit at distance 3/5 from uniform, a repeated symbol at 4/5
    ball = type_graph(C5, 2, U, eps=Fraction(3, 5) + Fraction(1, 100))
    assert ball.n == 20
    spec = TypeGraphSpec(C5, 2, center=U, eps=Fraction(3, 5))
    assert type_graph(spec).n == 0  # the ball is open


def test_materialization_cap(monkeypatch):
    monkeypatch.setenv("SPECTRUM_CAP", "50")
    assert materialization_cap() == 50
    with pytest.raises(GraphSizeError):
        type_graph(gr.cycle(5), 5, Distribution.uniform(range(5)))
    assert materialization_cap(1000) == 1000

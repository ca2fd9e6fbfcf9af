import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectrum import corners as cn
from spectrum import graph as gr
from spectrum.graph import VertexMap
from spectrum.prob_types import Distribution, binary_entropy, mixture, shannon_entropy

probs = st.integers(0, 2**32 - 1)


def dirichlet(seed, d):
    return np.random.default_rng(seed).dirichlet(np.ones(d))


def test_generator_corner_basics():
    A = cn.GeneratorCorner("ab", [[1, 0], [0, 1], [0.5, 0.5], [0.2, 0.1]])
    assert len(A.generators) == 3  # the dominated generator is pruned
    assert A.contains([0.5, 0.5]) and A.contains([0.3, 0.6]) and not A.contains([0.6, 0.6])
    point, val = A.lmo([1.0, -1.0])
    assert val == 1.0 and point.tolist() == [1.0, 0.0]
    assert A.support([1, 1]) == 1.0
    with pytest.raises(ValueError):
        cn.GeneratorCorner("a", [[-1.0]])


def test_unit_and_cube_corners_are_dual():
    U, C = cn.unit_corner(range(3)), cn.cube_corner(range(3))
    assert U.antiblocker().same_generators(C)
    assert C.antiblocker().same_generators(U)


def test_vertex_packing_generators():
    A = cn.vertex_packing(gr.path(3))
    assert sorted(map(tuple, A.generators.tolist())) == [(0, 1, 0), (1, 0, 1)]
    assert cn.vertex_packing(gr.null_graph()).dim == 0


@pytest.mark.parametrize("G", [gr.path(4), gr.cycle(5), gr.petersen(), gr.complete_bipartite(2, 3)])
def test_antiblocker_of_vertex_packing(G):
    A = cn.vertex_packing(G)
    B = A.antiblocker()
    assert cn.hausdorff_distance(B.antiblocker(), A, directions=200) < 1e-9
    # pairing never exceeds one
    assert (A.generators @ B.generators.T).max() <= 1 + 1e-9
    if gr.is_perfect(G):  # the antiblocker is the clique polytope
        assert B.same_generators(cn.vertex_packing(gr.complement(G)))


def test_c5_antiblocker_has_fractional_vertex():
    B = cn.vertex_packing(gr.cycle(5)).antiblocker()
    assert any(np.allclose(g, 0.5) for g in B.generators)


@settings(max_examples=40, deadline=None)
@given(probs, st.integers(1, 6))
def test_unit_corner_entropy_is_shannon(seed, d):
    p = dirichlet(seed, d)
    assert cn.entropy(cn.unit_corner(range(d)), p) == pytest.approx(shannon_entropy(p), abs=1e-7)
    assert cn.entropy(cn.cube_corner(range(d)), p) == pytest.approx(0.0, abs=1e-7)


def test_graph_entropy_of_complete_multipartite():
    # VP of K_{2,3}: independent sets are the two sides, entropy is h(2/5) at uniform
    A = cn.vertex_packing(gr.complete_bipartite(2, 3))
    assert cn.entropy(A, np.full(5, 0.2)) == pytest.approx(binary_entropy(0.4), abs=1e-7)


@settings(max_examples=25, deadline=None)
@given(probs, st.sampled_from([gr.cycle(5), gr.path(4), gr.complete_bipartite(2, 2), gr.petersen()]))
def test_entropy_duality_on_vertex_packing(seed, G):
    A = cn.vertex_packing(G)
    p = dirichlet(seed, G.n)
    assert cn.entropy(A, p) + cn.entropy(A.antiblocker(), p) == pytest.approx(shannon_entropy(p), abs=1e-6)


def test_entropy_result_certifies_gap():
    A = cn.vertex_packing(gr.cycle(5))
    res = cn.entropy_solve(A, np.full(5, 0.2))
    assert 0 <= res.gap <= 1e-7
    assert A.contains(res.point)
    assert res.value == pytest.approx(-np.mean(np.log2(res.point)), abs=1e-12)
    # C5 is vertex-transitive: graph entropy is log2(n / alpha)
    assert res.value == pytest.approx(math.log2(2.5), abs=1e-7)


def test_entropy_ignores_zero_probability_coordinates():
    A = cn.vertex_packing(gr.path(3))
    assert cn.entropy(A, [0.5, 0.5, 0.0]) == pytest.approx(1.0, abs=1e-7)
    with pytest.raises(ValueError):
        cn.entropy(A, [0.5, 0.6, 0.0])


def test_theta_body_membership_and_lmo():
    C5 = gr.cycle(5)
    T = cn.theta_body(C5)
    assert T.support(np.ones(5)) == pytest.approx(math.sqrt(5), abs=1e-6)
    assert T.contains(np.full(5, 1 / math.sqrt(5)) * 0.999)
    assert not T.contains(np.full(5, 1 / math.sqrt(5)) * 1.01)
    x, _ = T.lmo(np.ones(5))
    assert T.contains(x, 1e-6)
    assert T.antiblocker().support(np.ones(5)) == pytest.approx(math.sqrt(5), abs=1e-6)


def test_marton_identity():
    C5 = gr.cycle(5)
    U = Distribution.uniform(range(5))
    a = cn.entropy(cn.theta_body(C5), U)
    b = cn.entropy(cn.theta_body(gr.complement(C5)), U)
    assert a + b == pytest.approx(math.log2(5), abs=1e-6)
    assert b == pytest.approx(math.log2(5) / 2, abs=1e-6)


def test_theta_body_equals_vertex_packing_for_perfect_graphs():
    P4 = gr.path(4)
    assert cn.hausdorff_distance(cn.vertex_packing(P4), cn.theta_body(P4), directions=50) < 1e-6
    C5 = gr.cycle(5)
    assert cn.hausdorff_distance(cn.vertex_packing(C5), cn.theta_body(C5), directions=50) > 0.03


def test_tensor_product_entropy_is_additive_on_products():
    A, B = cn.vertex_packing(gr.path(3)), cn.vertex_packing(gr.complete(2))
    C = cn.tensor_product(A, B)
    assert C.dim == 6 and C.ground[1] == (0, 1)
    p, q = np.array([0.2, 0.5, 0.3]), np.array([0.6, 0.4])
    assert cn.entropy(C, np.kron(p, q)) == pytest.approx(cn.entropy(A, p) + cn.entropy(B, q), abs=1e-6)
    with pytest.raises(TypeError):
        cn.tensor_product(A, cn.theta_body(gr.complete(2)))


@settings(max_examples=20, deadline=None)
@given(probs, st.floats(0.05, 0.95))
def test_direct_sum_formula(seed, p):
    A, B = cn.vertex_packing(gr.cycle(5)), cn.vertex_packing(gr.path(3))
    P = Distribution.from_array(range(5), dirichlet(seed, 5))
    Q = Distribution.from_array(range(3), dirichlet(seed + 1, 3))
    lhs = cn.entropy(cn.direct_sum(A, B), mixture(p, P, Q))
    assert lhs == pytest.approx(p * cn.entropy(A, P) + (1 - p) * cn.entropy(B, Q) + binary_entropy(p), abs=1e-6)


def test_direct_sum_of_vertex_packings_is_packing_of_join():
    G, H = gr.cycle(5), gr.path(3)
    lhs = cn.vertex_packing(gr.join(G, H))
    assert lhs.same_generators(cn.direct_sum(cn.vertex_packing(G), cn.vertex_packing(H)))


def test_pullback_entropy_is_pushforward_entropy():
    B = cn.vertex_packing(gr.cycle(5))
    f = {0: 0, 1: 0, 2: 2, 3: 4}
    A = cn.pullback(f, B, range(4))
    P = np.array([0.1, 0.2, 0.3, 0.4])
    pushed = np.array([0.3, 0.0, 0.3, 0.0, 0.4])
    assert cn.entropy(A, P) == pytest.approx(cn.entropy(B, pushed), abs=1e-7)
    T = cn.pullback(f, cn.theta_body(gr.cycle(5)), range(4))
    assert cn.entropy(T, P) == pytest.approx(cn.entropy(cn.theta_body(gr.cycle(5)), pushed), abs=1e-6)


def test_pullback_along_vertex_map():
    C5 = gr.cycle(5)
    sub = gr.induced_subgraph(C5, [0, 1, 2])
    phi = VertexMap(sub, C5, (0, 1, 2))
    A = cn.pullback(phi, cn.vertex_packing(gr.complement(C5)))
    target = cn.vertex_packing(gr.complement(sub))
    assert all(target.contains(g) for g in A.generators)


def test_max_entropy_closed_form():
    assert cn.max_entropy_closed_form(cn.vertex_packing(gr.complement(gr.cycle(5)))) == pytest.approx(
        math.log2(2.5), abs=1e-9)
    assert cn.max_entropy_closed_form(cn.theta_body(gr.complement(gr.cycle(5)))) == pytest.approx(
        math.log2(5) / 2, abs=1e-6)


def test_json_round_trip():
    A = cn.vertex_packing(gr.cycle(5)).antiblocker()
    B = cn.GeneratorCorner.from_json_dict(A.to_json_dict())
    assert B.same_generators(A)


def test_hausdorff_distance():
    U = cn.unit_corner(range(2))
    assert cn.hausdorff_distance(U, U) == 0.0
    assert cn.hausdorff_distance(U, cn.cube_corner(range(2))) == pytest.approx(math.sqrt(0.5), abs=1e-3)
    with pytest.raises(ValueError):
        cn.hausdorff_distance(U, cn.unit_corner(range(3)))


def test_corner_from_entropy_recovers_unit_corner():
    rec = cn.corner_from_entropy(shannon_entropy, range(2), resolution=1 / 64)
    assert cn.hausdorff_distance(rec, cn.unit_corner(range(2))) < 0.02


def test_corner_from_entropy_recovers_vertex_packing():
    A = cn.vertex_packing(gr.path(3))
    rec = cn.corner_from_entropy(lambda p: cn.entropy(A, p), range(3), resolution=1 / 12)
    assert cn.hausdorff_distance(rec, A, directions=200) < 0.05


def test_corner_from_entropy_rejects_bad_input():
    with pytest.raises(ValueError, match="concavity"):
        cn.corner_from_entropy(lambda p: 2 * shannon_entropy(p), range(2), resolution=1 / 16)
    with pytest.raises(ValueError, match="coarse"):
        cn.corner_from_entropy(shannon_entropy, range(2), resolution=1.0)

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from spectrum import graph as gr
from spectrum.lp import UnboundedLP, solve_packing
from spectrum.sdp import weighted_theta

cp = pytest.importorskip("cvxpy")


def random_adj(seed, n, p=0.5):
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < p, 1)
    return upper | upper.T


def theta_oracle(adj, w):
    n = len(adj)
    B = cp.Variable((n, n), PSD=True)
    s = np.sqrt(w)
    cons = [cp.trace(B) == 1] + [B[i, j] == 0 for i, j in zip(*np.nonzero(np.triu(adj, 1)))]
    prob = cp.Problem(cp.Maximize(cp.sum(cp.multiply(np.outer(s, s), B))), cons)
    prob.solve(solver="CLARABEL")
    return prob.value


@pytest.mark.parametrize("G,value", [
    (gr.cycle(5), math.sqrt(5)), (gr.complete(4), 1.0), (gr.edgeless(4), 4.0), (gr.petersen(), 4.0),
    (gr.cycle(7), 7 * math.cos(math.pi / 7) / (1 + math.cos(math.pi / 7))),
])
def test_theta_closed_forms(G, value):
    res = weighted_theta(G.adjacency)
    assert res.value == pytest.approx(value, abs=1e-6)
    assert res.upper >= res.value - 1e-9
    assert res.upper - res.value < 1e-6


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_weighted_theta_matches_cvxpy(seed, n):
    adj = random_adj(seed, n)
    w = np.random.default_rng(seed + 1).random(n) + 0.05
    ours = weighted_theta(adj, w)
    assert ours.value == pytest.approx(theta_oracle(adj, w), rel=1e-5, abs=1e-6)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_maximizer_is_a_certificate(seed, n):
    adj = random_adj(seed, n)
    comp = ~adj & ~np.eye(n, dtype=bool)
    w = np.random.default_rng(seed).random(n)
    res = weighted_theta(adj, w)
    x = res.maximizer
    assert (x >= 0).all()
    assert w @ x == pytest.approx(res.value, rel=1e-6, abs=1e-8)
    # x lies in the theta body: theta of the complement weighted by x is at most one
    assert weighted_theta(comp, x).value <= 1 + 1e-6


def test_theta_sandwich_and_complement_product():
    for G in [gr.cycle(5), gr.cycle(7), gr.path(4), gr.petersen()]:
        t = weighted_theta(G.adjacency).value
        tc = weighted_theta(gr.complement(G).adjacency).value
        assert gr.max_independent_set(G).__len__() <= t + 1e-7
        assert t <= gr.chromatic_number(gr.complement(G)) + 1e-7
        assert t * tc >= G.n - 1e-5
    # vertex-transitive graphs attain the product bound with equality
    c7 = gr.cycle(7)
    assert weighted_theta(c7.adjacency).value * weighted_theta(gr.complement(c7).adjacency).value == \
        pytest.approx(7, abs=1e-5)


def test_theta_degenerate_inputs():
    assert weighted_theta(np.zeros((0, 0), dtype=bool)).value == 0.0
    assert weighted_theta(np.zeros((3, 3), dtype=bool), np.zeros(3)).value == 0.0
    with pytest.raises(ValueError):
        weighted_theta(np.zeros((2, 2), dtype=bool), [1.0, -1.0])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 6))
def test_packing_lp_matches_highs(seed, m, n):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, 4, size=(m, n))
    A[:, A.sum(0) == 0] = 1
    b = rng.integers(0, 6, size=m)
    c = rng.integers(-2, 5, size=n)
    sol = solve_packing(A.tolist(), b.tolist(), c.tolist())
    ref = linprog(-c, A_ub=A, b_ub=b, bounds=(0, None), method="highs")
    assert float(sol.value) == pytest.approx(-ref.fun, abs=1e-9)
    x = sol.x
    assert all(v >= 0 for v in x)
    assert all(sum(Fraction(int(A[i, j])) * x[j] for j in range(n)) <= b[i] for i in range(m))
    # strong duality with an exact dual certificate
    y = sol.y
    assert all(v >= 0 for v in y)
    assert sum(Fraction(int(b[i])) * y[i] for i in range(m)) == sol.value
    assert all(sum(Fraction(int(A[i, j])) * y[i] for i in range(m)) >= c[j] for j in range(n))


def test_packing_lp_errors():
    with pytest.raises(UnboundedLP):
        solve_packing([[0]], [1], [1])
    with pytest.raises(ValueError):
        solve_packing([[1]], [-1], [1])

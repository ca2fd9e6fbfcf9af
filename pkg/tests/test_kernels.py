import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectrum.kernels import backends

BACKENDS = backends()
IDS = [m.BACKEND for m in BACKENDS]


def random_adj(seed, n, p):
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < p, 1)
    return upper | upper.T


def chromatic_oracle(adj):
    """Subset DP: fewest independent sets covering the vertex set."""
    n = len(adj)
    indep = [all(not adj[i, j] for i, j in itertools.combinations([v for v in range(n) if s >> v & 1], 2))
             for s in range(1 << n)]
    best = [0] + [n + 1] * ((1 << n) - 1)
    for s in range(1, 1 << n):
        low = s & -s
        sub = s
        while sub:
            if sub & low and indep[sub]:
                best[s] = min(best[s], best[s ^ sub] + 1)
            sub = (sub - 1) & s
    return best[(1 << n) - 1]


graphs = st.tuples(st.integers(0, 2**32 - 1), st.integers(0, 9), st.floats(0.0, 1.0))


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
@settings(max_examples=60, deadline=None)
@given(graphs)
def test_max_clique_matches_networkx(impl, g):
    adj = random_adj(*g)
    clique = impl.max_clique(adj)
    assert clique == sorted(clique)
    assert all(adj[i, j] for i, j in itertools.combinations(clique, 2))
    expected = max((len(c) for c in nx.find_cliques(nx.from_numpy_array(adj.astype(int)))), default=0)
    assert len(clique) == expected


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
@settings(max_examples=40, deadline=None)
@given(graphs)
def test_chromatic_number_matches_subset_dp(impl, g):
    adj = random_adj(*g)
    k, colouring = impl.chromatic_number(adj)
    assert k == chromatic_oracle(adj)
    colouring = np.asarray(colouring)
    assert len(colouring) == len(adj)
    for i, j in zip(*np.nonzero(adj)):
        assert colouring[i] != colouring[j]
    if len(adj):
        assert len(set(colouring.tolist())) == k


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 3))
def test_strong_adjacency_definition(impl, seed, d, n):
    rng = np.random.default_rng(seed)
    base = random_adj(seed, d, 0.5)
    reach = base | np.eye(d, dtype=bool)
    seqs = np.array(sorted(set(map(tuple, rng.integers(0, d, size=(12, n))))), dtype=np.int64)
    adj = impl.strong_adjacency(seqs, reach)
    for a in range(len(seqs)):
        for b in range(len(seqs)):
            want = a != b and all(reach[x, y] for x, y in zip(seqs[a], seqs[b]))
            assert bool(adj[a, b]) == want


def test_backends_agree_on_c5_square():
    c5 = np.zeros((5, 5), dtype=bool)
    for i in range(5):
        c5[i, (i + 1) % 5] = c5[(i + 1) % 5, i] = True
    reach = c5 | np.eye(5, dtype=bool)
    seqs = np.array(list(itertools.product(range(5), repeat=2)), dtype=np.int64)
    results = [impl.strong_adjacency(seqs, reach) for impl in BACKENDS]
    for r in results[1:]:
        assert np.array_equal(r, results[0])
    comp = ~results[0] & ~np.eye(25, dtype=bool)
    assert {len(impl.max_clique(comp)) for impl in BACKENDS} == {5}
    assert {impl.chromatic_number(results[0])[0] for impl in BACKENDS} == {5}


def test_selected_backend_is_compiled_when_built():
    from spectrum import kernels

    assert kernels.BACKEND in IDS
    assert IDS[-1] == "python"

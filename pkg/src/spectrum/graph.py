"""Finite simple graphs, graph algebra and cohomomorphisms.

A :class:`Graph` is an immutable value: an ordered tuple of hashable vertex
labels and a symmetric boolean adjacency matrix with an empty diagonal.
Products label their vertices with tuples so that subsets of a product (type
classes, say) can be addressed by label.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import kernels

MAX_DENSE_VERTICES = 16384


class GraphSizeError(ValueError):
    """A construction or exhaustive search would exceed its size guard."""


class Graph:
    __slots__ = ("_labels", "_adj", "_index", "_hash")

    def __init__(self, labels: Sequence[Hashable], adjacency, *, check: bool = True):
        labels = tuple(labels)
        adj = np.array(adjacency, dtype=bool, copy=True).reshape(len(labels), len(labels))
        if check:
            if not np.array_equal(adj, adj.T):
                raise ValueError("adjacency must be symmetric")
            if adj.diagonal().any():
                raise ValueError("adjacency must have an empty diagonal (no loops)")
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise ValueError("vertex labels must be unique")
        adj.setflags(write=False)
        self._labels = labels
        self._adj = adj
        self._index = index
        self._hash = None

    @classmethod
    def from_edges(cls, vertices, edges: Iterable[tuple]) -> "Graph":
        """Build from a vertex count or label list and an edge list of labels."""
        labels = list(range(vertices)) if isinstance(vertices, int) else list(vertices)
        index = {lab: i for i, lab in enumerate(labels)}
        adj = np.zeros((len(labels), len(labels)), dtype=bool)
        for u, v in edges:
            i, j = index[u], index[v]
            if i == j:
                raise ValueError(f"loop at vertex {u!r}")
            adj[i, j] = adj[j, i] = True
        return cls(labels, adj, check=False)

    @property
    def labels(self) -> tuple:
        return self._labels

    @property
    def n(self) -> int:
        return len(self._labels)

    def __len__(self) -> int:
        return len(self._labels)

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"vertex {label!r} not in graph") from None

    def has_edge(self, u, v) -> bool:
        return bool(self._adj[self.index(u), self.index(v)])

    def edges(self) -> list[tuple[int, int]]:
        """Edges as index pairs ``(i, j)`` with ``i < j``."""
        i, j = np.nonzero(np.triu(self._adj, 1))
        return list(zip(i.tolist(), j.tolist()))

    @property
    def num_edges(self) -> int:
        return int(np.triu(self._adj, 1).sum())

    def relabeled(self, labels: Sequence[Hashable] | None = None) -> "Graph":
        labels = range(self.n) if labels is None else labels
        return Graph(labels, self._adj, check=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._labels == other._labels and np.array_equal(self._adj, other._adj)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._labels, self._adj.tobytes()))
        return self._hash

    def key(self) -> bytes:
        """Label-insensitive key of the labelled adjacency (for caching)."""
        return self.n.to_bytes(4, "little") + np.packbits(self._adj).tobytes()

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


def _check_dense(n: int) -> None:
    if n > MAX_DENSE_VERTICES:
        raise GraphSizeError(
            f"graph with {n} vertices exceeds the dense-adjacency guard "
            f"({MAX_DENSE_VERTICES}); reduce the power or product size"
        )


# named graphs

def complete(n: int) -> Graph:
    adj = ~np.eye(n, dtype=bool)
    return Graph(range(n), adj, check=False)


def edgeless(n: int) -> Graph:
    """The empty graph on ``n`` vertices (the complement of ``K_n``)."""
    return Graph(range(n), np.zeros((n, n), dtype=bool), check=False)


def null_graph() -> Graph:
    return edgeless(0)


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    """Path on ``n`` vertices (so ``path(4)`` is P_4)."""
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# graph algebra

def complement(G: Graph) -> Graph:
    adj = ~G.adjacency
    np.fill_diagonal(adj, False)
    return Graph(G.labels, adj, check=False)


def intersection(G: Graph, H: Graph) -> Graph:
    """Edge intersection of two graphs on the same labelled vertex set."""
    if G.labels != H.labels:
        raise ValueError("graphs must share the labelled vertex set")
    return Graph(G.labels, G.adjacency & H.adjacency, check=False)


def edge_union(G: Graph, H: Graph) -> Graph:
    if G.labels != H.labels:
        raise ValueError("graphs must share the labelled vertex set")
    return Graph(G.labels, G.adjacency | H.adjacency, check=False)


def disjoint_union(G: Graph, H: Graph) -> Graph:
    n, m = G.n, H.n
    adj = np.zeros((n + m, n + m), dtype=bool)
    adj[:n, :n] = G.adjacency
    adj[n:, n:] = H.adjacency
    labels = [(0, g) for g in G.labels] + [(1, h) for h in H.labels]
    return Graph(labels, adj, check=False)


def join(G: Graph, H: Graph) -> Graph:
    U = disjoint_union(G, H)
    adj = U.adjacency.copy()
    adj[: G.n, G.n:] = True
    adj[G.n:, : G.n] = True
    return Graph(U.labels, adj, check=False)


def _reach(G: Graph) -> np.ndarray:
    return G.adjacency | np.eye(G.n, dtype=bool)


def _pair_labels(G: Graph, H: Graph) -> list:
    return [(g, h) for g in G.labels for h in H.labels]


def strong_product(G: Graph, H: Graph) -> Graph:
    _check_dense(G.n * H.n)
    adj = np.kron(_reach(G), _reach(H)).astype(bool)
    np.fill_diagonal(adj, False)
    return Graph(_pair_labels(G, H), adj, check=False)


def costrong_product(G: Graph, H: Graph) -> Graph:
    return complement(strong_product(complement(G), complement(H)))


def lexicographic_product(G: Graph, H: Graph) -> Graph:
    _check_dense(G.n * H.n)
    adj = np.kron(G.adjacency, np.ones((H.n, H.n), dtype=bool)) | np.kron(
        np.eye(G.n, dtype=bool), H.adjacency
    )
    return Graph(_pair_labels(G, H), adj.astype(bool), check=False)


def g_join(G: Graph, parts) -> Graph:
    """Paste ``parts[v]`` into every vertex ``v`` of ``G`` (Sabidussi's G-join).

    ``parts`` is a mapping from labels of ``G`` to graphs, or a sequence in the
    vertex order of ``G``.
    """
    if isinstance(parts, dict):
        missing = [v for v in G.labels if v not in parts]
        if missing:
            raise ValueError(f"no part graph for vertex {missing[0]!r}")
        fam = [parts[v] for v in G.labels]
    else:
        fam = list(parts)
        if len(fam) != G.n:
            raise ValueError(f"expected {G.n} part graphs, got {len(fam)}")
    sizes = [H.n for H in fam]
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    total = int(offs[-1])
    _check_dense(total)
    adj = np.zeros((total, total), dtype=bool)
    for a in range(G.n):
        sa = slice(offs[a], offs[a + 1])
        adj[sa, sa] = fam[a].adjacency
        for b in range(G.n):
            if G.adjacency[a, b]:
                adj[sa, offs[b]:offs[b + 1]] = True
    labels = [(v, h) for v, H in zip(G.labels, fam) for h in H.labels]
    return Graph(labels, adj, check=False)


def induced_subgraph(G: Graph, S: Iterable) -> Graph:
    """``G[S]`` for a collection of labels; vertex order follows ``G``."""
    wanted = set(S)
    for s in wanted:
        G.index(s)
    idx = [i for i, lab in enumerate(G.labels) if lab in wanted]
    return induced_by_index(G, idx)


def induced_by_index(G: Graph, idx: Sequence[int]) -> Graph:
    idx = np.asarray(idx, dtype=int)
    if idx.size and (idx.min() < 0 or idx.max() >= G.n):
        raise IndexError("vertex index out of range")
    return Graph([G.labels[i] for i in idx], G.adjacency[np.ix_(idx, idx)], check=False)


def strong_power(G: Graph, n: int, cap: int = 2_000_000) -> Graph:
    """``G^{⊠n}`` with vertices labelled by length-``n`` tuples of labels."""
    if n < 1:
        raise ValueError("power must be at least 1")
    size = G.n**n
    if size > cap:
        raise GraphSizeError(f"G^{n} has {size} vertices, above the cap {cap}; reduce n")
    _check_dense(size)
    seqs = np.array(list(itertools.product(range(G.n), repeat=n)), dtype=np.int64).reshape(size, n)
    adj = kernels.strong_adjacency(seqs, _reach(G))
    labels = [tuple(G.labels[i] for i in row) for row in seqs.tolist()]
    return Graph(labels, adj, check=False)


# cliques, colouring, perfection

def clique_number(G: Graph) -> int:
    return len(kernels.max_clique(G.adjacency))


def max_independent_set(G: Graph) -> list:
    comp = ~G.adjacency
    np.fill_diagonal(comp, False)
    return [G.labels[i] for i in kernels.max_clique(comp)]


def chromatic_number(G: Graph) -> int:
    return kernels.chromatic_number(G.adjacency)[0]


def maximal_cliques(G: Graph, limit: int = 200_000) -> list[frozenset]:
    """All maximal cliques as frozensets of vertex indices (Bron–Kerbosch with pivot)."""
    n = G.n
    nbr = [0] * n
    for i, j in G.edges():
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i
    out: list[frozenset] = []

    def bits(x):
        while x:
            low = x & -x
            yield low.bit_length() - 1
            x ^= low

    def bk(R, P, X):
        if not P and not X:
            out.append(frozenset(R))
            if len(out) > limit:
                raise GraphSizeError(f"more than {limit} maximal cliques")
            return
        pivot = max(bits(P | X), key=lambda u: (P & nbr[u]).bit_count())
        for v in list(bits(P & ~nbr[pivot])):
            bk(R + [v], P & nbr[v], X & nbr[v])
            P &= ~(1 << v)
            X |= 1 << v

    if n:
        bk([], (1 << n) - 1, 0)
    return sorted(out, key=lambda c: sorted(c))


def is_perfect(G: Graph, guard: int = 10) -> bool:
    """Brute force: every induced subgraph has clique number equal to chromatic number."""
    if G.n > guard:
        raise GraphSizeError(f"is_perfect brute force limited to {guard} vertices")
    for r in range(1, G.n + 1):
        for S in itertools.combinations(range(G.n), r):
            sub = G.adjacency[np.ix_(S, S)]
            if len(kernels.max_clique(sub)) != kernels.chromatic_number(sub)[0]:
                return False
    return True


# isomorphism (brute force, small graphs only)

def _backtrack_maps(src_adj, dst_adj, compatible, injective):
    """Yield index maps src -> dst where ``compatible(u, a, v, b)`` holds for all pairs."""
    n, m = src_adj.shape[0], dst_adj.shape[0]
    phi = [-1] * n

    def rec(v):
        if v == n:
            yield list(phi)
            return
        for b in range(m):
            if injective and b in phi[:v]:
                continue
            if all(compatible(u, phi[u], v, b) for u in range(v)):
                phi[v] = b
                yield from rec(v + 1)
                phi[v] = -1

    yield from rec(0)


def find_isomorphism(G: Graph, H: Graph, guard: int = 8):
    """Return an index map witnessing ``G ≅ H`` or ``None``."""
    if G.n != H.n or G.num_edges != H.num_edges:
        return None
    if G.n > guard:
        raise GraphSizeError(f"isomorphism testing limited to {guard} vertices")
    if sorted(G.adjacency.sum(1)) != sorted(H.adjacency.sum(1)):
        return None
    A, B = G.adjacency, H.adjacency
    for phi in _backtrack_maps(A, B, lambda u, a, v, b: A[u, v] == B[a, b], True):
        return phi
    return None


def is_isomorphic(G: Graph, H: Graph, guard: int = 8) -> bool:
    return find_isomorphism(G, H, guard) is not None


def automorphisms(G: Graph, guard: int = 8) -> list[np.ndarray]:
    if G.n > guard:
        raise GraphSizeError(f"automorphism enumeration limited to {guard} vertices")
    A = G.adjacency
    return [np.asarray(p) for p in _backtrack_maps(A, A, lambda u, a, v, b: A[u, v] == A[a, b], True)]


# cohomomorphisms: H <= G iff there is a homomorphism complement(H) -> complement(G)

@dataclass(frozen=True)
class VertexMap:
    source: Graph
    target: Graph
    images: tuple  # target vertex index for every source vertex index

    def __post_init__(self):
        if len(self.images) != self.source.n:
            raise ValueError("vertex map must be total on the source")
        if any(not 0 <= b < self.target.n for b in self.images):
            raise ValueError("vertex map value outside the target")

    def __call__(self, label):
        return self.target.labels[self.images[self.source.index(label)]]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.images, dtype=int)


def is_cohomomorphism(phi, H: Graph, G: Graph) -> bool:
    """True iff ``phi`` is a homomorphism ``complement(H) -> complement(G)``.

    Every pair of distinct non-adjacent vertices of ``H`` must land on distinct
    non-adjacent vertices of ``G``; edges of ``H`` are unconstrained.
    """
    f = phi.as_array() if isinstance(phi, VertexMap) else np.asarray(phi, dtype=int)
    if f.shape != (H.n,):
        raise ValueError("map must be total on V(H)")
    if H.n == 0:
        return True
    if G.n == 0 or f.min() < 0 or f.max() >= G.n:
        return False
    image_close = G.adjacency[np.ix_(f, f)] | (f[:, None] == f[None, :])
    bad = image_close & ~H.adjacency
    np.fill_diagonal(bad, False)
    return not bad.any()


def exists_cohomomorphism(H: Graph, G: Graph, guard: int = 12):
    """Search exhaustively for a witness of ``H <= G``; ``None`` if there is none."""
    if H.n > guard or G.n > guard:
        raise GraphSizeError(f"cohomomorphism search limited to {guard}/{guard} vertices")
    if H.n == 0:
        return VertexMap(H, G, ())
    if G.n == 0:
        return None
    # allowed[a] = targets that a non-adjacent partner may use when the other end sits at a
    allowed = ~G.adjacency
    np.fill_diagonal(allowed, False)
    nonadj = ~H.adjacency
    np.fill_diagonal(nonadj, False)
    order = sorted(range(H.n), key=lambda v: -int(nonadj[v].sum()))
    phi = [-1] * H.n

    def rec(k):
        if k == len(order):
            return True
        v = order[k]
        cand = np.ones(G.n, dtype=bool)
        for u in order[:k]:
            if nonadj[v, u]:
                cand &= allowed[phi[u]]
        for b in np.flatnonzero(cand):
            phi[v] = int(b)
            if rec(k + 1):
                return True
        phi[v] = -1
        return False

    if rec(0):
        return VertexMap(H, G, tuple(phi))
    return None


# Randomised covering of a vertex-transitive graph by copies of an induced subgraph

Sampler = Callable[[np.random.Generator], np.ndarray]


def automorphism_sampler(G: Graph, guard: int = 8) -> Sampler:
    """Uniform sampler over the full automorphism group (small graphs)."""
    group = automorphisms(G, guard)

    def draw(rng):
        return group[rng.integers(len(group))]

    return draw


def coordinate_sampler(G: Graph) -> Sampler:
    """Sampler for graphs labelled by sequences, acting by coordinate permutations.

    Labels that are tuples of atoms get one symmetric group on the coordinates;
    labels that are tuples of tuples (products of type graphs) get an
    independent permutation per block. The label set must be closed under the
    action, which holds for type classes and their products.
    """
    if G.n == 0:
        raise ValueError("empty graph has no vertices to permute")
    first = G.labels[0]
    blocked = all(isinstance(x, tuple) for x in first)
    lengths = [len(x) for x in first] if blocked else [len(first)]

    def act(label, perms):
        if blocked:
            return tuple(tuple(block[p] for p in perm) for block, perm in zip(label, perms))
        return tuple(label[p] for p in perms[0])

    def draw(rng):
        perms = [rng.permutation(L) for L in lengths]
        return np.fromiter((G.index(act(lab, perms)) for lab in G.labels), dtype=int, count=G.n)

    return draw


@dataclass(frozen=True)
class Cover:
    N: int
    phi: VertexMap
    attempts: int

    @property
    def target(self) -> Graph:
        return self.phi.target


def cover_size(n_vertices: int, subset_size: int) -> int:
    """``floor(|V| / |S| * ln |V|) + 1``."""
    return math.floor(n_vertices / subset_size * math.log(n_vertices)) + 1


def transitive_cover(H: Graph, S: Iterable, sampler: Sampler | None, seed=None,
                     max_attempts: int = 1000) -> Cover:
    """Witness ``H <= complement(K_N) ⊠ H[S]`` for a vertex-transitive ``H``.

    Draws ``N`` random automorphisms until every vertex is moved into ``S`` by
    one of them, then maps ``v`` to ``(i, pi_i(v))`` for the first such ``i``.
    The map is checked to be a cohomomorphism before it is returned.
    """
    if sampler is None:
        raise ValueError("an automorphism sampler is required")
    S_idx = sorted({H.index(s) for s in S})
    if not S_idx:
        raise ValueError("S must be nonempty")
    N = cover_size(H.n, len(S_idx))
    sub = induced_by_index(H, S_idx)
    target = strong_product(edgeless(N), sub)
    pos_in_S = np.full(H.n, -1, dtype=int)
    pos_in_S[S_idx] = np.arange(len(S_idx))
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_attempts + 1):
        perms = [np.asarray(sampler(rng), dtype=int) for _ in range(N)]
        images = np.full(H.n, -1, dtype=int)
        for i in range(N - 1, -1, -1):
            hit = pos_in_S[perms[i]]
            ok = hit >= 0
            images[ok] = i * len(S_idx) + hit[ok]
        if (images >= 0).all():
            phi = VertexMap(H, target, tuple(images.tolist()))
            if not is_cohomomorphism(phi, H, target):
                raise RuntimeError("sampler did not return automorphisms")
            return Cover(N, phi, attempt)
    raise RuntimeError(f"no covering found in {max_attempts} attempts")


# I/O

def to_graph6(G: Graph) -> str:
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(G.n))
    g.add_edges_from(G.edges())
    return nx.to_graph6_bytes(g, header=False).decode().strip()


def from_graph6(text: str) -> Graph:
    import networkx as nx

    text = text.strip()
    if text.startswith(">>graph6<<"):
        text = text[len(">>graph6<<"):]
    try:
        g = nx.from_graph6_bytes(text.encode())
    except (ValueError, IndexError, nx.NetworkXError) as exc:
        raise ValueError(f"invalid graph6 string {text!r}: {exc}") from None
    return Graph.from_edges(g.number_of_nodes(), g.edges())


def _jsonable_label(lab):
    if isinstance(lab, tuple):
        return [_jsonable_label(x) for x in lab]
    return lab


def _tuple_label(lab):
    if isinstance(lab, list):
        return tuple(_tuple_label(x) for x in lab)
    return lab


def to_json_dict(G: Graph) -> dict:
    out = {"n": G.n, "edges": [list(e) for e in G.edges()]}
    if G.labels != tuple(range(G.n)):
        out["labels"] = [_jsonable_label(lab) for lab in G.labels]
    return out


def from_json_dict(d: dict) -> Graph:
    n = int(d["n"])
    labels = [_tuple_label(x) for x in d["labels"]] if d.get("labels") is not None else list(range(n))
    if len(labels) != n:
        raise ValueError("labels length does not match n")
    adj = np.zeros((n, n), dtype=bool)
    for e in d.get("edges", []):
        i, j = int(e[0]), int(e[1])
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"bad edge {e}")
        adj[i, j] = adj[j, i] = True
    return Graph(labels, adj, check=False)


def to_json(G: Graph) -> str:
    return json.dumps(to_json_dict(G), sort_keys=True)


def from_json(text: str) -> Graph:
    return from_json_dict(json.loads(text))


def small_graph_corpus(max_vertices: int = 5, include_null: bool = True) -> list[Graph]:
    """All graphs up to isomorphism on at most ``max_vertices`` vertices (atlas order)."""
    import networkx as nx

    if max_vertices > 7:
        raise GraphSizeError("the graph atlas stops at 7 vertices")
    out = [null_graph()] if include_null else []
    for g in nx.graph_atlas_g()[1:]:
        if g.number_of_nodes() > max_vertices:
            break
        out.append(Graph.from_edges(g.number_of_nodes(), g.edges()))
    return out

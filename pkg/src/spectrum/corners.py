"""Convex corners: representations, corner entropy and corner algebra.

A convex corner on a finite ground set is a compact convex subset of the
nonnegative orthant that is closed downwards and has nonempty interior. Two
representations are supported: a finite generator list (the corner is the
downward closure of their convex hull), and an oracle given by a membership
test plus a linear-maximization routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import HalfspaceIntersection
from scipy.stats import qmc

from . import graph as gr
from . import sdp
from .graph import Graph, GraphSizeError, VertexMap
from .prob_types import Distribution, enumerate_ntypes, shannon_entropy

MEMBER_TOL = 1e-7
ENTROPY_TOL = 1e-7
MAX_FW_ITER = 10_000
VERTEX_ENUM_DIM = 12


class ConvexCorner:
    ground: tuple

    @property
    def dim(self) -> int:
        return len(self.ground)

    def lmo(self, w) -> tuple[np.ndarray, float]:
        """Maximizer of ``<w, a>`` over the corner and a certified upper value."""
        raise NotImplementedError

    def support(self, w) -> float:
        return self.lmo(w)[1]

    def contains(self, a, tol: float = MEMBER_TOL) -> bool:
        raise NotImplementedError

    def antiblocker(self) -> "ConvexCorner":
        raise NotImplementedError


def _prune(points: np.ndarray) -> np.ndarray:
    """Drop duplicate and coordinatewise-dominated generators (order preserved)."""
    if len(points) == 0:
        return points
    pts = np.unique(np.round(points, 12), axis=0)
    keep = []
    for i, p in enumerate(pts):
        dominated = False
        for j, q in enumerate(pts):
            if i != j and np.all(q >= p) and np.any(q > p):
                dominated = True
                break
        if not dominated:
            keep.append(p)
    return np.array(keep).reshape(-1, points.shape[1])


class GeneratorCorner(ConvexCorner):
    def __init__(self, ground: Sequence, generators, prune: bool = True):
        self.ground = tuple(ground)
        d = len(self.ground)
        G = np.asarray(generators, dtype=float)
        G = G.reshape(-1, d) if d else np.zeros((1, 0))
        if (G < 0).any():
            raise ValueError("generators must be nonnegative")
        if len(G) == 0:
            raise ValueError("a corner needs at least one generator")
        self.generators = _prune(G) if prune else G

    def __repr__(self) -> str:
        return f"GeneratorCorner(dim={self.dim}, generators={len(self.generators)})"

    def lmo(self, w):
        w = np.asarray(w, dtype=float)
        wp = np.maximum(w, 0.0)
        scores = self.generators @ wp
        j = int(np.argmax(scores))
        return self.generators[j] * (w > 0), float(scores[j])

    def contains(self, a, tol: float = MEMBER_TOL) -> bool:
        a = np.asarray(a, dtype=float)
        if (a < -tol).any():
            return False
        target = np.maximum(a - tol, 0.0)
        if np.any(np.all(self.generators >= target, axis=1)):
            return True
        k = len(self.generators)
        res = linprog(np.zeros(k), A_ub=-self.generators.T, b_ub=-target,
                      A_eq=np.ones((1, k)), b_eq=[1.0], bounds=[(0, None)] * k, method="highs")
        return res.status == 0

    def antiblocker(self) -> "GeneratorCorner":
        return GeneratorCorner(self.ground, _antiblocker_vertices(self.generators))

    def to_json_dict(self) -> dict:
        from fractions import Fraction

        from .graph import _jsonable_label

        gens = [[str(Fraction(float(x)).limit_denominator(10**9)) for x in g] for g in self.generators]
        return {"ground": [_jsonable_label(x) for x in self.ground], "generators": gens}

    @classmethod
    def from_json_dict(cls, d: dict) -> "GeneratorCorner":
        from fractions import Fraction

        from .graph import _tuple_label

        gens = [[float(Fraction(x)) if isinstance(x, str) else float(x) for x in g] for g in d["generators"]]
        return cls([_tuple_label(x) for x in d["ground"]], gens)

    def same_generators(self, other: "GeneratorCorner", tol: float = 1e-9) -> bool:
        if self.ground != other.ground or len(self.generators) != len(other.generators):
            return False
        a = np.round(self.generators / tol) * tol
        b = np.round(other.generators / tol) * tol
        return np.array_equal(np.unique(a, axis=0), np.unique(b, axis=0))


def _antiblocker_vertices(G: np.ndarray) -> np.ndarray:
    """Vertices of ``{b >= 0 : <g, b> <= 1 for every generator g}``."""
    d = G.shape[1]
    if d == 0:
        return np.zeros((1, 0))
    colmax = G.max(axis=0)
    if (colmax <= 0).any():
        raise ValueError("corner has empty interior; its antiblocker is unbounded")
    if d == 1:
        return np.array([[1.0 / colmax[0]]])
    if d > VERTEX_ENUM_DIM:
        raise GraphSizeError(f"vertex enumeration limited to {VERTEX_ENUM_DIM} coordinates")
    halfspaces = np.vstack([
        np.hstack([G, -np.ones((len(G), 1))]),
        np.hstack([-np.eye(d), np.zeros((d, 1))]),
    ])
    interior = np.full(d, 0.5 / G.sum(axis=1).max())
    hs = HalfspaceIntersection(halfspaces, interior)
    pts = np.clip(hs.intersections, 0.0, None)
    pts[np.abs(pts) < 1e-12] = 0.0
    return pts


class OracleCorner(ConvexCorner):
    def __init__(self, ground: Sequence, lmo: Callable, member: Callable,
                 antiblocker: Callable | None = None, name: str = "oracle"):
        self.ground = tuple(ground)
        self._lmo = lmo
        self._member = member
        self._anti = antiblocker
        self.name = name

    def __repr__(self) -> str:
        return f"OracleCorner({self.name}, dim={self.dim})"

    def lmo(self, w):
        w = np.asarray(w, dtype=float)
        wp = np.maximum(w, 0.0)
        point, upper = self._lmo(wp)
        point = np.asarray(point, dtype=float) * (w > 0)
        return point, float(max(upper, point @ wp))

    def contains(self, a, tol: float = MEMBER_TOL) -> bool:
        a = np.asarray(a, dtype=float)
        if (a < -tol).any():
            return False
        return bool(self._member(np.maximum(a, 0.0), tol))

    def antiblocker(self) -> ConvexCorner:
        if self._anti is not None:
            return self._anti()

        def member(b, tol):
            return self.support(b) <= 1 + tol

        def no_lmo(w):
            raise NotImplementedError("linear maximization over a generic oracle antiblocker")

        return OracleCorner(self.ground, no_lmo, member, lambda: self, name=f"anti({self.name})")


# standard corners

def unit_corner(ground: Sequence) -> GeneratorCorner:
    """Downward closure of the probability simplex."""
    return GeneratorCorner(ground, np.eye(len(ground)))


def cube_corner(ground: Sequence) -> GeneratorCorner:
    return GeneratorCorner(ground, np.ones((1, len(ground))))


def vertex_packing(G: Graph) -> GeneratorCorner:
    """Generated by the characteristic vectors of the maximal independent sets."""
    if G.n > 20:
        raise GraphSizeError("vertex packing polytope limited to 20 vertices")
    if G.n == 0:
        return GeneratorCorner((), np.zeros((1, 0)), prune=False)
    sets = gr.maximal_cliques(gr.complement(G))
    gens = np.zeros((len(sets), G.n))
    for i, S in enumerate(sets):
        gens[i, list(S)] = 1.0
    return GeneratorCorner(G.labels, gens, prune=False)


def theta_body(G: Graph) -> OracleCorner:
    """Theta body in the convention where ``max <w, x>`` over it is ``theta(G, w)``."""
    adj = G.adjacency
    cadj = gr.complement(G).adjacency

    def lmo(w):
        res = sdp.weighted_theta(adj, w)
        return res.maximizer, res.upper

    def member(a, tol):
        return sdp.weighted_theta(cadj, a).value <= 1 + tol

    return OracleCorner(G.labels, lmo, member, lambda: theta_body(gr.complement(G)), name="theta_body")


def antiblocker(A: ConvexCorner) -> ConvexCorner:
    return A.antiblocker()


# corner algebra

def tensor_product(A: ConvexCorner, B: ConvexCorner) -> GeneratorCorner:
    if not (isinstance(A, GeneratorCorner) and isinstance(B, GeneratorCorner)):
        raise TypeError("tensor products need generator representations on both sides")
    gens = np.array([np.kron(g, h) for g in A.generators for h in B.generators])
    ground = [(x, y) for x in A.ground for y in B.ground]
    return GeneratorCorner(ground, gens)


def direct_sum(A: ConvexCorner, B: ConvexCorner) -> GeneratorCorner:
    """Convex hull of ``A x {0}`` and ``{0} x B`` on the tagged disjoint union."""
    if not (isinstance(A, GeneratorCorner) and isinstance(B, GeneratorCorner)):
        raise TypeError("direct sums need generator representations on both sides")
    da, db = A.dim, B.dim
    gens = np.vstack([np.hstack([A.generators, np.zeros((len(A.generators), db))]),
                      np.hstack([np.zeros((len(B.generators), da)), B.generators])])
    ground = [(0, x) for x in A.ground] + [(1, y) for y in B.ground]
    return GeneratorCorner(ground, gens)


def _index_map(f, source: Sequence, B: ConvexCorner) -> np.ndarray:
    if isinstance(f, VertexMap):
        if tuple(f.target.labels) != B.ground:
            raise ValueError("map target does not match the corner's ground set")
        return f.as_array()
    fn = f.__getitem__ if isinstance(f, dict) else f
    index = {y: i for i, y in enumerate(B.ground)}
    return np.array([index[fn(x)] for x in source], dtype=int)


def pullback(f, B: ConvexCorner, source: Sequence | None = None) -> ConvexCorner:
    """``{a : a <= b o f for some b in B}`` on the source ground set."""
    if source is None:
        if not isinstance(f, VertexMap):
            raise ValueError("source ground set required unless f is a VertexMap")
        source = f.source.labels
    source = tuple(source)
    idx = _index_map(f, source, B)
    if isinstance(B, GeneratorCorner):
        return GeneratorCorner(source, B.generators[:, idx])

    def lmo(w):
        wb = np.zeros(B.dim)
        np.add.at(wb, idx, w)
        b, upper = B.lmo(wb)
        return b[idx], upper

    def member(a, tol):
        b = np.zeros(B.dim)
        np.maximum.at(b, idx, a)
        return B.contains(b, tol)

    return OracleCorner(source, lmo, member, name=f"pullback({getattr(B, 'name', 'corner')})")


# entropy of a corner

@dataclass
class EntropyResult:
    value: float  # -sum P log2 a at the returned point
    gap: float  # certified bound on value - H_A(P)
    point: np.ndarray  # minimizer on the full ground set
    iterations: int


def _as_prob(A: ConvexCorner, P) -> np.ndarray:
    if isinstance(P, Distribution):
        return P.on(A.ground).as_array()
    p = np.asarray(P, dtype=float)
    if p.shape != (A.dim,):
        raise ValueError("distribution does not match the corner's ground set")
    if (p < 0).any() or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("P must be a probability vector")
    return p


def _line_search(p, a, d, gmax):
    """Exact minimizer over [0, gmax] of the convex map t -> -sum p log(a + t d)."""

    def deriv(t):
        x = a + t * d
        if (x <= 0).any():
            return math.inf
        return -float(np.sum(p * d / x))

    if deriv(gmax) <= 0:
        return gmax
    lo, hi = 0.0, gmax
    while hi - lo > 1e-12 * max(1.0, gmax):
        mid = 0.5 * (lo + hi)
        if deriv(mid) > 0:
            hi = mid
        else:
            lo = mid
    return lo


def entropy_solve(A: ConvexCorner, P, tol: float = ENTROPY_TOL, max_iter: int = MAX_FW_ITER) -> EntropyResult:
    """Minimize ``-sum_x P(x) log2 a_x`` over ``a`` in ``A`` by Frank–Wolfe.

    The iterate is kept as a convex combination of oracle atoms, so pairwise
    (away-toward) steps are available. The stopping rule is the duality bound
    ``log2 max_{s in A} <P/a, s>``, which dominates the distance to optimum.
    """
    p_full = _as_prob(A, P)
    supp = np.flatnonzero(p_full > 0)
    if supp.size == 0:
        raise ValueError("distribution has empty support")
    p = p_full[supp]
    finite = isinstance(A, GeneratorCorner)
    if finite:
        atoms_full = A.generators
    else:
        seeds = []
        for x in supp:
            e = np.zeros(A.dim)
            e[x] = 1.0
            seeds.append(A.lmo(e)[0])
        atoms_full = np.array(seeds)
    atoms = atoms_full[:, supp]
    if (atoms.max(axis=0) <= 0).any():
        raise ValueError("corner has empty interior on the support of P")
    lam = np.zeros(len(atoms))
    if finite:
        for x in range(len(supp)):
            lam[int(np.argmax(atoms[:, x]))] += 1.0
    else:
        lam[:] = 1.0
    lam /= lam.sum()
    inner_tol = tol * math.log(2) / 2
    it = 0

    def pairwise(a, lam, atoms, stop_at):
        """Pairwise steps until the local gap drops below ``stop_at``."""
        nonlocal it
        while it < max_iter:
            scores = atoms @ (p / a)
            j = int(np.argmax(scores))
            active = np.flatnonzero(lam > 0)
            i = int(active[np.argmin(scores[active])])
            if scores[j] - scores[i] <= stop_at:
                break
            t = _line_search(p, a, atoms[j] - atoms[i], lam[i])
            lam[j] += t
            lam[i] = 0.0 if lam[i] - t < 1e-15 else lam[i] - t
            a = lam @ atoms
            it += 1
        return a

    a = lam @ atoms
    if finite:
        # every generator is an atom, so the local gap is the global one
        a = pairwise(a, lam, atoms, inner_tol)
        gap = math.log2(max(float(np.max(atoms @ (p / a))), 1.0))
    else:
        while True:
            w_full = np.zeros(A.dim)
            w_full[supp] = p / a
            s, upper = A.lmo(w_full)
            gap = math.log2(max(upper, 1.0))
            it += 1
            if gap <= tol or it >= max_iter:
                break
            keep = lam > 0
            atoms_full = np.vstack([atoms_full[keep], s])
            atoms = atoms_full[:, supp]
            lam = np.append(lam[keep], 0.0)
            a = pairwise(a, lam, atoms, max(inner_tol, (2 ** gap - 1) / 4))
    a = lam @ atoms
    point = lam @ atoms_full
    value = float(-np.sum(p * np.log2(a)))
    return EntropyResult(value, gap, point, it)


def entropy(A: ConvexCorner, P, tol: float = ENTROPY_TOL) -> float:
    """``H_A(P) = min_{a in A} -sum_x P(x) log2 a_x`` in bits."""
    return entropy_solve(A, P, tol).value


def max_entropy_closed_form(A: ConvexCorner) -> float:
    """``max_P H_A(P) = -log2 max{t : t*1 in A}`` (minimax identity)."""
    if isinstance(A, GeneratorCorner):
        k = len(A.generators)
        res = linprog(np.r_[np.zeros(k), -1.0],
                      A_ub=np.hstack([-A.generators.T, np.ones((A.dim, 1))]), b_ub=np.zeros(A.dim),
                      A_eq=np.r_[np.ones(k), 0.0].reshape(1, -1), b_eq=[1.0],
                      bounds=[(0, None)] * (k + 1), method="highs")
        return -math.log2(-res.fun)
    lo, hi = 0.0, 1.0
    while A.contains(hi * np.ones(A.dim)):
        lo, hi = hi, 2 * hi
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if A.contains(mid * np.ones(A.dim), tol=0.0):
            lo = mid
        else:
            hi = mid
    return -math.log2(lo)


# comparison and reconstruction

def _directions(d: int, count: int, seed: int) -> np.ndarray:
    if d == 0:
        return np.zeros((1, 0))
    if d == 1:
        return np.ones((1, 1))
    sampler = qmc.Sobol(d, scramble=True, seed=seed)
    U = sampler.random_base2(max(1, math.ceil(math.log2(count))))[:count] + 1e-12
    U = np.vstack([U, np.eye(d)])
    return U / np.linalg.norm(U, axis=1, keepdims=True)


def hausdorff_distance(A: ConvexCorner, B: ConvexCorner, directions: int = 1000, seed: int = 0) -> float:
    """Sampled support-function distance over nonnegative unit directions."""
    if A.dim != B.dim:
        raise ValueError("corners live on different ground sets")
    U = _directions(A.dim, directions, seed)
    return float(max(abs(A.support(u) - B.support(u)) for u in U))


def simplex_grid(d: int, N: int) -> np.ndarray:
    return np.array([t.counts for t in enumerate_ntypes(range(d), N)], dtype=float) / N


def corner_from_entropy(F: Callable, ground: Sequence, resolution: float = 1 / 64,
                        tol: float = 1e-6, seed: int = 0) -> GeneratorCorner:
    """Rebuild a corner from its entropy function on a simplex grid.

    ``F`` maps a probability vector on ``ground`` to bits. The corner is
    approximated by the points ``2^-l(Q)``, where ``l(Q)`` minimizes
    ``<Q, l>`` subject to ``<P, l> >= F(P)`` on all grid points ``P``.
    """
    ground = tuple(ground)
    d = len(ground)
    if not 1 <= d <= 3:
        raise ValueError("reconstruction supports ground sets of size 1 to 3")
    N = round(1 / resolution)
    if N < 2:
        raise ValueError("grid too coarse: resolution must be at most 1/2")
    grid = simplex_grid(d, N)
    vals = np.array([float(F(P)) for P in grid])
    _check_concavity(grid, vals, N, tol, seed)
    lmax = max(64.0, 4 * vals.max() + 1)
    gens = []
    for Q, fq in zip(grid, vals):
        res = linprog(Q, A_ub=-grid, b_ub=-vals, bounds=[(0, lmax)] * d, method="highs")
        if res.status != 0:
            raise ValueError(f"reconstruction LP failed at grid point {Q}")
        if res.fun > fq + tol * max(1.0, abs(fq)) + 1e-9:
            raise ValueError(
                f"grid too coarse or F is not a corner entropy: support at {Q} is {res.fun:.6g} > F = {fq:.6g}")
        gens.append(np.exp2(-res.x))
    return GeneratorCorner(ground, np.array(gens))


def _check_concavity(grid, vals, N, tol, seed):
    H = np.array([shannon_entropy(P) for P in grid])
    counts = np.rint(grid * N).astype(int)
    index = {tuple(c): i for i, c in enumerate(counts)}
    rng = np.random.default_rng(seed)
    n = len(grid)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if len(pairs) > 4000:
        pick = rng.choice(len(pairs), 4000, replace=False)
        pairs = [pairs[k] for k in pick]
    for i, j in pairs:
        s = counts[i] + counts[j]
        if (s % 2).any():
            continue
        m = index[tuple(s // 2)]
        for f in (vals, H - vals):
            if f[m] < (f[i] + f[j]) / 2 - 1e-6 - tol:
                raise ValueError("F or H - F fails the concavity spot check; F is not a corner entropy")

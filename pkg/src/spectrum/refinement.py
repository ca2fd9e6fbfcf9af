"""Probabilistic refinements F(G, P) and the bounds built from them.

Values are in bits. A refinement evaluator is any callable ``F(G, P)``; the
corner-based evaluators here also expose a supergradient in ``P`` so that
``max_P F(G, P)`` can be found by mirror ascent on the simplex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import graph as gr
from .corners import ConvexCorner, antiblocker, entropy_solve
from .graph import Graph
from .parameters import (GraphExpr, ParamValue, SpectralPoint, chromatic_number, evaluate_expression,
                         geometric_mean, independence_number, spectral_point)
from .prob_types import (Distribution, NType, binary_entropy, shannon_entropy, type_graph)

GRAD_CLIP = 60.0


@dataclass
class RefinementEstimate:
    graph: str
    distribution: Distribution
    method: str
    value: float
    certified_direction: str
    trace: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {"graph": self.graph, "distribution": self.distribution.to_json_dict(),
                "method": self.method, "value": self.value,
                "certified_direction": self.certified_direction, "trace": self.trace}


def _prob_vector(G: Graph, P) -> np.ndarray:
    if isinstance(P, NType):
        P = P.distribution
    if isinstance(P, Distribution):
        return P.on(G.labels).as_array()
    p = np.asarray(P, dtype=float)
    if p.shape != (G.n,):
        raise ValueError("distribution does not match the vertex set")
    return p


class CornerRefinement:
    """``F(G, P) = H_{C(G)}(P)`` for a corner construction ``C``."""

    def __init__(self, corner: Callable[[Graph], ConvexCorner], name: str = "corner"):
        self.corner_of = corner
        self.name = name
        self._cache: dict = {}

    def corner(self, G: Graph) -> ConvexCorner:
        key = (G.labels, G.key())
        if key not in self._cache:
            self._cache[key] = self.corner_of(G)
        return self._cache[key]

    def value_and_grad(self, G: Graph, P) -> tuple[float, np.ndarray]:
        p = _prob_vector(G, P)
        res = entropy_solve(self.corner(G), p)
        with np.errstate(divide="ignore"):
            g = -np.log2(res.point)
        return res.value, np.minimum(g, GRAD_CLIP)

    def __call__(self, G: Graph, P) -> float:
        return entropy_solve(self.corner(G), _prob_vector(G, P)).value


def corner_refinement(point) -> CornerRefinement:
    point = spectral_point(point) if isinstance(point, str) else point
    if point.corner is None:
        raise ValueError(f"{point.name} has no corner construction")
    return CornerRefinement(point.corner, point.name)


def refinement_via_corner(corner: ConvexCorner, P) -> float:
    p = P.on(corner.ground).as_array() if isinstance(P, Distribution) else np.asarray(P, dtype=float)
    return entropy_solve(corner, p).value


def complementary_refinement(F: Callable, G: Graph, P) -> float:
    """``F*(G, P) = H(P) - F(complement G, P)``."""
    p = _prob_vector(G, P)
    return shannon_entropy(p) - F(gr.complement(G), p)


# maximization over the simplex

def maximize_over_simplex(fn: Callable, d: int, restarts: int = 20, seed: int = 0,
                          max_iter: int = 300, grad_tol: float = 1e-6) -> tuple[float, np.ndarray]:
    """Maximize a concave ``fn(p) -> (value, supergradient)`` by mirror ascent.

    Starts from the uniform vector plus ``restarts`` seeded random points;
    each run uses multiplicative updates with a backtracking step size.
    """
    if d == 0:
        raise ValueError("empty simplex")
    if d == 1:
        v, _ = fn(np.ones(1))
        return v, np.ones(1)
    rng = np.random.default_rng(seed)
    starts = [np.full(d, 1.0 / d)] + [rng.dirichlet(np.ones(d)) for _ in range(restarts)]
    best_v, best_p = -math.inf, starts[0]
    for p in starts:
        v, g = fn(p)
        eta = 1.0
        for _ in range(max_iter):
            gc = g - p @ g
            if np.sqrt(p @ gc**2) <= grad_tol or eta < 1e-10:
                break
            q = p * np.exp2(np.clip(eta * gc, -50, 50))
            q /= q.sum()
            vq, gq = fn(q)
            if vq >= v:
                p, v, g = q, vq, gq
                eta *= 1.5
            else:
                eta *= 0.3
        if v > best_v:
            best_v, best_p = v, p
    return best_v, best_p


def maximize_refinement(F: CornerRefinement, G: Graph, restarts: int = 20, seed: int = 0) -> tuple[float, np.ndarray]:
    """``max_P F(G, P)``; ``2**`` of it recovers the parameter itself."""
    return maximize_over_simplex(lambda p: F.value_and_grad(G, p), G.n, restarts, seed)


def combine_lambda(F0: CornerRefinement, F1: CornerRefinement, lam: float, G: Graph,
                   restarts: int = 20, seed: int = 0) -> float:
    """``max_P (1-lam) F0(G,P) + lam F1(G,P)`` in bits."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")

    def fn(p):
        v0, g0 = F0.value_and_grad(G, p) if lam < 1 else (0.0, np.zeros(G.n))
        v1, g1 = F1.value_and_grad(G, p) if lam > 0 else (0.0, np.zeros(G.n))
        return (1 - lam) * v0 + lam * v1, (1 - lam) * g0 + lam * g1

    return maximize_over_simplex(fn, G.n, restarts, seed)[0]


def _join_parts(expr: GraphExpr) -> list:
    if expr.op == "join":
        return [q for a in expr.args for q in _join_parts(a)]
    return [expr]


def combined_upper_bound(f0, f1, lam, G) -> ParamValue:
    """``f0(G)^(1-lam) f1(G)^lam``, taken partwise over the summands of a join."""
    f0 = spectral_point(f0) if isinstance(f0, str) else f0
    f1 = spectral_point(f1) if isinstance(f1, str) else f1
    if isinstance(G, Graph):
        return geometric_mean(f0(G), f1(G), lam)
    best = None
    for part in _join_parts(G):
        v = geometric_mean(evaluate_expression(part, f0), evaluate_expression(part, f1), lam)
        if best is None or v.compare(best) > 0:
            best = v
    return best.with_provenance("derived")


def f_star(point, G: Graph, restarts: int = 20, seed: int = 0) -> ParamValue:
    """``max_P 2^{F*(G,P)}``, computed on the antiblocker of the complement's corner."""
    point = spectral_point(point) if isinstance(point, str) else point
    if G.n == 0:
        return ParamValue.rational(0)
    dual = antiblocker(point.corner(gr.complement(G)))
    F = CornerRefinement(lambda H: dual, f"{point.name}*")
    v, _ = maximize_refinement(F, G, restarts, seed)
    return ParamValue.approx(2.0**v, 2.0**v * 1e-6)


# estimators from type graphs

def _graph_name(G: Graph) -> str:
    return gr.to_graph6(G) if G.n <= 62 else f"graph(n={G.n})"


def fekete_estimate(point, G: Graph, P, k_max: int, cap: int | None = None) -> RefinementEstimate:
    """Lower bounds ``(1/km) log2 f(G^{km}[T_P])`` for ``k = 1..k_max`` (``P`` an ``m``-type)."""
    point = spectral_point(point) if isinstance(point, str) else point
    T = P if isinstance(P, NType) else NType.from_distribution(P)
    m = T.n
    trace = []
    best = -math.inf
    for k in range(1, k_max + 1):
        n = k * m
        H = type_graph(G, n, T.scaled(k), cap=cap)
        val = point.evaluate(H)
        raw = val.log2() / n
        best = max(best, raw)
        trace.append({"k": k, "n": n, "vertices": H.n, "f": str(val), "value": raw, "running_max": best})
    return RefinementEstimate(_graph_name(G), T.distribution, f"fekete(k_max={k_max})",
                              best, "lower", trace)


def capacity_within_type_lower(G: Graph, P, k: int = 1, cap: int | None = None) -> float:
    """``(1/km) log2 alpha`` of the type graph, a lower bound on capacity within the type."""
    T = P if isinstance(P, NType) else NType.from_distribution(P)
    H = type_graph(G, k * T.n, T.scaled(k), cap=cap)
    return math.log2(independence_number(H, guard=max(H.n, 1))) / (k * T.n)


def witsenhausen_upper(G: Graph, n: int, cap: int = 4096) -> float:
    """``(1/n) log2 chi(G^n)``, an upper bound on the Witsenhausen rate."""
    Gn = gr.strong_power(G, n, cap=cap)
    return math.log2(chromatic_number(Gn, guard=max(Gn.n, 1))) / n


def continuity_bound(vertex_count: int, l1_distance: float) -> float:
    """Bound on ``|F(G,P) - F(G,Q)|`` from ``||P - Q||_1`` and ``|V(G)|``."""
    d = float(l1_distance)
    if not -1e-12 <= d <= 2 + 1e-12:
        raise ValueError("l1 distance must lie in [0, 2]")
    d = min(max(d, 0.0), 2.0)
    t = d / 2
    head = t * math.log2(vertex_count - 1) if vertex_count > 1 and t > 0 else 0.0
    return head + binary_entropy(t) + 2 * (1 - binary_entropy((2 + d) / 4))


def disjoint_union_value(F: Callable, G: Graph, H: Graph, p, P, Q) -> float:
    """Right-hand side ``pF(G,P) + (1-p)F(H,Q) + h(p)`` of the disjoint-union formula."""
    p = float(p)
    return p * F(G, P) + (1 - p) * F(H, Q) + binary_entropy(p)


# the worked example

def incomparable_example_expressions() -> dict:
    G0 = GraphExpr.leaf("J2_12").strong(GraphExpr.edgeless(10))
    G1 = GraphExpr.leaf("C5").power(6)
    return {"G0'": G0, "G1'": G1, "G": G0.join(G1)}


def reproduce_incomparable_example() -> dict:
    """Exact theta, fractional Haemers and f_1/2 bound for ``J2_12 x Kbar10 + C5^6``.

    Only leaf fixtures and the defining identities of spectral points are used.
    """
    ex = incomparable_example_expressions()
    theta, haem = spectral_point("theta"), spectral_point("haemersF2")
    vals = {
        "theta(G0')": evaluate_expression(ex["G0'"], theta),
        "theta(G1')": evaluate_expression(ex["G1'"], theta),
        "haemersF2(G0')": evaluate_expression(ex["G0'"], haem),
        "haemersF2(G1')": evaluate_expression(ex["G1'"], haem),
        "theta(G)": evaluate_expression(ex["G"], theta),
        "haemersF2(G)": evaluate_expression(ex["G"], haem),
        "f_half_bound(G0')": combined_upper_bound(theta, haem, Fraction(1, 2), ex["G0'"]),
        "f_half_bound(G1')": combined_upper_bound(theta, haem, Fraction(1, 2), ex["G1'"]),
        "f_half_bound(G)": combined_upper_bound(theta, haem, Fraction(1, 2), ex["G"]),
    }
    t, h, f = vals["theta(G)"], vals["haemersF2(G)"], vals["f_half_bound(G)"]
    checks = {
        "theta(G) > 236": t > 236,
        "haemersF2(G) > 244": h > 244,
        "f_half_bound(G) < 175": f < 175,
        "f_half_bound(G) < min(theta(G), haemersF2(G))": f < t and f < h,
    }
    return {"graph": str(ex["G"]), "values": vals, "checks": checks}

"""Graph parameters: exact values, theta, rank certificates and fixture arithmetic."""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable

import numpy as np

from . import graph as gr
from . import lp, sdp
from .graph import Graph, GraphSizeError

COMPARE_TOL = 1e-12
THETA_TOL = 1e-7


# exact and approximate values

def _squarefree_split(n: int) -> tuple[int, int]:
    """Write ``n = s^2 * r`` with ``r`` squarefree; return ``(s, r)``."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    s, r = 1, 1
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        s *= d ** (e // 2)
        if e % 2:
            r *= d
        d += 1
    return s, r * n


class ParamValue:
    """An exact rational, an exact surd ``a*sqrt(b)``, or a float with tolerance."""

    __slots__ = ("kind", "coef", "radicand", "fval", "tol", "provenance")

    def __init__(self, kind, coef=Fraction(0), radicand=1, fval=0.0, tol=0.0, provenance="computed"):
        self.kind = kind
        self.coef = coef
        self.radicand = radicand
        self.fval = fval
        self.tol = tol
        self.provenance = provenance

    @classmethod
    def rational(cls, q, provenance="computed") -> "ParamValue":
        return cls("rational", Fraction(q), 1, provenance=provenance)

    @classmethod
    def surd(cls, a, b: int, provenance="computed") -> "ParamValue":
        a = Fraction(a)
        if a == 0:
            return cls.rational(0, provenance)
        s, r = _squarefree_split(int(b))
        if r == 1:
            return cls.rational(a * s, provenance)
        return cls("surd", a * s, r, provenance=provenance)

    @classmethod
    def approx(cls, x: float, tol: float = 0.0, provenance="computed") -> "ParamValue":
        return cls("float", fval=float(x), tol=float(tol), provenance=provenance)

    @classmethod
    def sqrt_of(cls, q, provenance="computed") -> "ParamValue":
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative number")
        return cls.surd(Fraction(1, q.denominator), q.numerator * q.denominator, provenance)

    @property
    def exact(self) -> bool:
        return self.kind != "float"

    def __float__(self) -> float:
        if self.kind == "rational":
            return float(self.coef)
        if self.kind == "surd":
            return float(self.coef) * math.sqrt(self.radicand)
        return self.fval

    def _tol(self) -> float:
        return max(self.tol, COMPARE_TOL) if self.kind == "float" else 0.0

    def with_provenance(self, provenance: str) -> "ParamValue":
        return ParamValue(self.kind, self.coef, self.radicand, self.fval, self.tol, provenance)

    @staticmethod
    def _coerce(x) -> "ParamValue":
        if isinstance(x, ParamValue):
            return x
        if isinstance(x, (int, Fraction)):
            return ParamValue.rational(x)
        return ParamValue.approx(float(x))

    def _derived(self, other) -> str:
        provs = {self.provenance, other.provenance}
        return "fixture" if provs == {"fixture"} else ("computed" if provs == {"computed"} else "derived")

    def __mul__(self, other):
        other = self._coerce(other)
        prov = self._derived(other)
        if self.exact and other.exact:
            return ParamValue.surd(self.coef * other.coef, self.radicand * other.radicand, prov)
        x = float(self) * float(other)
        tol = abs(float(self)) * other._tol() + abs(float(other)) * self._tol()
        return ParamValue.approx(x, tol, prov)

    __rmul__ = __mul__

    def inverse(self) -> "ParamValue":
        if float(self) == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "rational":
            return ParamValue.rational(1 / self.coef, self.provenance)
        if self.kind == "surd":
            return ParamValue.surd(1 / (self.coef * self.radicand), self.radicand, self.provenance)
        x = float(self)
        return ParamValue.approx(1 / x, self.tol / (x * x), self.provenance)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __add__(self, other):
        other = self._coerce(other)
        prov = self._derived(other)
        if self.exact and other.exact:
            if self.kind == "rational" and other.kind == "rational":
                return ParamValue.rational(self.coef + other.coef, prov)
            if self.radicand == other.radicand:
                return ParamValue.surd(self.coef + other.coef, self.radicand, prov)
            if float(self) == 0:
                return other.with_provenance(prov)
            if float(other) == 0:
                return self.with_provenance(prov)
        return ParamValue.approx(float(self) + float(other), self._tol() + other._tol(), prov)

    __radd__ = __add__

    def __pow__(self, k):
        if isinstance(k, int) and self.exact:
            if k < 0:
                return self.inverse() ** (-k)
            out = ParamValue.rational(1, self.provenance)
            for _ in range(k):
                out = out * self
            return out.with_provenance(self.provenance)
        x = float(self) ** float(k)
        tol = abs(float(k)) * abs(float(self)) ** (float(k) - 1) * self._tol() if float(self) > 0 else self._tol()
        return ParamValue.approx(x, tol, self.provenance)

    def sqrt(self) -> "ParamValue":
        if self.kind == "rational":
            return ParamValue.sqrt_of(self.coef, self.provenance)
        x = float(self)
        return ParamValue.approx(math.sqrt(x), self._tol() / (2 * math.sqrt(x)) if x > 0 else self._tol(),
                                 self.provenance)

    def log2(self) -> float:
        x = float(self)
        return math.log2(x) if x > 0 else -math.inf

    def compare(self, other) -> int:
        """Three-way comparison; exact for rationals and surds."""
        other = self._coerce(other)
        if self.exact and other.exact:
            a, b = self, other
            sa = (a.coef > 0) - (a.coef < 0)
            sb = (b.coef > 0) - (b.coef < 0)
            if sa != sb:
                return (sa > sb) - (sa < sb)
            qa = a.coef * a.coef * a.radicand
            qb = b.coef * b.coef * b.radicand
            c = (qa > qb) - (qa < qb)
            return c if sa >= 0 else -c
        x, y = float(self), float(other)
        if abs(x - y) <= self._tol() + other._tol():
            return 0
        return 1 if x > y else -1

    def __eq__(self, other):
        if not isinstance(other, (ParamValue, int, float, Fraction)):
            return NotImplemented
        return self.compare(other) == 0

    def __hash__(self):
        return hash((self.kind, self.coef, self.radicand, self.fval))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __str__(self) -> str:
        if self.kind == "rational":
            return str(self.coef)
        if self.kind == "surd":
            a = self.coef
            sign = "-" if a < 0 else ""
            a = abs(a)
            head = f"sqrt({self.radicand})" if a.numerator == 1 else f"{a.numerator}*sqrt({self.radicand})"
            return sign + head + (f"/{a.denominator}" if a.denominator != 1 else "")
        return repr(self.fval)

    def __repr__(self) -> str:
        extra = f" ± {self.tol:g}" if self.kind == "float" and self.tol else ""
        return f"ParamValue({self}{extra}, {self.provenance})"

    def to_json_dict(self) -> dict:
        d = {"kind": self.kind, "value": str(self), "float": float(self), "provenance": self.provenance}
        if self.kind == "float":
            d["tolerance"] = self.tol
        return d

    _SURD = re.compile(r"^\s*(-)?\s*(?:(\d+)\s*\*\s*)?sqrt\(\s*(\d+)\s*\)\s*(?:/\s*(\d+))?\s*$")

    @classmethod
    def parse(cls, text: str, provenance="computed") -> "ParamValue":
        text = str(text).strip()
        m = cls._SURD.match(text)
        if m:
            sign, num, rad, den = m.groups()
            a = Fraction(int(num or 1), int(den or 1))
            return cls.surd(-a if sign else a, int(rad), provenance)
        if re.fullmatch(r"-?\d+(/\d+)?", text):
            return cls.rational(Fraction(text), provenance)
        return cls.approx(float(text), 0.0, provenance)


def geometric_mean(x: ParamValue, y: ParamValue, lam) -> ParamValue:
    """``x^(1-lam) * y^lam``, exact when ``lam`` is 0, 1/2 or 1 and the inputs are rational."""
    lam_f = Fraction(lam) if isinstance(lam, (int, Fraction, str)) else None
    if lam_f is None and float(lam) in (0.0, 0.5, 1.0):
        lam_f = Fraction(float(lam))
    if lam_f == 0:
        return x
    if lam_f == 1:
        return y
    if x.compare(y) == 0 and x.exact and y.exact:
        return x
    if lam_f == Fraction(1, 2):
        prod = x * y
        if prod.kind == "rational":
            return prod.sqrt()
    lam_v = float(lam)
    if float(x) <= 0 or float(y) <= 0:
        return ParamValue.approx(0.0, 0.0, x._derived(y))
    val = float(x) ** (1 - lam_v) * float(y) ** lam_v
    tol = val * ((1 - lam_v) * x._tol() / float(x) + lam_v * y._tol() / float(y))
    return ParamValue.approx(val, tol, x._derived(y))


# combinatorial parameters

ALPHA_GUARD = 256
CHI_GUARD = 64
CLIQUE_LP_GUARD = 40
THETA_GUARD = 160


def _guard(G: Graph, limit: int, what: str):
    if G.n > limit:
        raise GraphSizeError(f"{what} limited to {limit} vertices (graph has {G.n})")


def independence_number(G: Graph, guard: int = ALPHA_GUARD) -> int:
    _guard(G, guard, "independence number")
    return len(gr.max_independent_set(G))


def clique_cover_number(G: Graph, guard: int = CHI_GUARD) -> int:
    _guard(G, guard, "clique cover number")
    return gr.chromatic_number(gr.complement(G))


def chromatic_number(G: Graph, guard: int = CHI_GUARD) -> int:
    _guard(G, guard, "chromatic number")
    return gr.chromatic_number(G)


def fractional_clique_cover(G: Graph, guard: int = CLIQUE_LP_GUARD) -> ParamValue:
    """Exact optimum of ``min sum y_C`` over cliques covering every vertex.

    Solved through its packing dual over the maximal cliques.
    """
    _guard(G, guard, "fractional clique cover")
    if G.n == 0:
        return ParamValue.rational(0)
    cliques = gr.maximal_cliques(G, limit=5000)
    A = [[int(v in C) for v in range(G.n)] for C in cliques]
    sol = lp.solve_packing(A, [1] * len(cliques), [1] * G.n)
    return ParamValue.rational(sol.value)


def lovasz_theta(G: Graph, w=None, guard: int = THETA_GUARD) -> ParamValue:
    _guard(G, guard, "Lovász theta")
    res = sdp.weighted_theta(G.adjacency, w)
    return ParamValue.approx(res.value, max(THETA_TOL * max(1.0, res.value), res.upper - res.value))


def shannon_capacity_lower(G: Graph, n: int, cap: int = 2_000_000) -> ParamValue:
    """``alpha(G^n)^(1/n)``, a lower bound on the Shannon capacity."""
    a = independence_number(gr.strong_power(G, n, cap=cap), guard=max(ALPHA_GUARD, G.n ** n))
    if n == 1:
        return ParamValue.rational(a)
    if n == 2:
        return ParamValue.sqrt_of(a)
    root = round(a ** (1.0 / n))
    if root ** n == a:
        return ParamValue.rational(root)
    return ParamValue.approx(a ** (1.0 / n), 1e-12 * a ** (1.0 / n))


# finite-field rank certificates

def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class GFMatrix:
    p: int
    entries: np.ndarray

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        e = np.asarray(self.entries, dtype=np.int64) % self.p
        object.__setattr__(self, "entries", e)

    @property
    def shape(self):
        return self.entries.shape

    def rank(self) -> int:
        return gf_rank(self.entries, self.p)


def gf_rank(M, p: int) -> int:
    M = np.asarray(M, dtype=np.int64) % p
    if M.size == 0:
        return 0
    if p == 2:
        rows = [int("".join("1" if v else "0" for v in row), 2) if row.any() else 0 for row in M]
        rank = 0
        pivots: dict[int, int] = {}
        for r in rows:
            while r:
                top = r.bit_length() - 1
                if top in pivots:
                    r ^= pivots[top]
                else:
                    pivots[top] = r
                    rank += 1
                    break
        return rank
    A = M.copy()
    rank = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if A[r, c]), None)
        if piv is None:
            continue
        A[[rank, piv]] = A[[piv, rank]]
        A[rank] = A[rank] * pow(int(A[rank, c]), p - 2, p) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != rank]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[rank])) % p
        rank += 1
        if rank == rows:
            break
    return rank


class FitError(ValueError):
    pass


def haemers_rank_certificate(G: Graph, M: GFMatrix) -> int:
    """Rank of ``M`` over GF(p) after checking that ``M`` fits ``G``.

    ``M`` fits when its diagonal is nonzero and it vanishes on every pair of
    distinct non-adjacent vertices; its rank then bounds ``alpha(G)`` from above.
    """
    E = M.entries
    if E.shape != (G.n, G.n):
        raise FitError(f"matrix shape {E.shape} does not match {G.n} vertices")
    for v in range(G.n):
        if E[v, v] == 0:
            raise FitError(f"diagonal entry M[{G.labels[v]!r},{G.labels[v]!r}] is zero")
    bad = (E != 0) & ~G.adjacency
    np.fill_diagonal(bad, False)
    if bad.any():
        u, v = map(int, np.argwhere(bad)[0])
        raise FitError(f"entry M[{G.labels[u]!r},{G.labels[v]!r}] is nonzero on a non-edge")
    return M.rank()


def johnson_type_graph(n: int, p: int, cap: int = 2_000_000) -> Graph:
    """``(p+1)``-subsets of ``{0..n-1}``, adjacent iff ``p`` does not divide the intersection size."""
    if p < 1 or n < p + 1:
        raise ValueError("need p >= 1 and n >= p + 1")
    size = math.comb(n, p + 1)
    if size > cap:
        raise GraphSizeError(f"J^{p}_{n} has {size} vertices, above the cap {cap}")
    subsets = list(itertools.combinations(range(n), p + 1))
    inc = np.zeros((size, n), dtype=np.int64)
    for i, S in enumerate(subsets):
        inc[i, list(S)] = 1
    inter = inc @ inc.T
    adj = inter % p != 0
    np.fill_diagonal(adj, False)
    return Graph(subsets, adj, check=False)


def johnson_inclusion_matrix(n: int, p: int) -> np.ndarray:
    subsets = list(itertools.combinations(range(n), p + 1))
    inc = np.zeros((len(subsets), n), dtype=np.int64)
    for i, S in enumerate(subsets):
        inc[i, list(S)] = 1
    return inc


# named graphs

def named_graph(name: str) -> Graph:
    """Graphs by short name: ``C5``, ``P4``, ``K3``, ``Kbar4``, ``K3_3``, ``Petersen``, ``J2_12``."""
    key = name.strip()
    if key.lower() == "petersen":
        return gr.petersen()
    if key in ("K33", "K3_3"):
        return gr.complete_bipartite(3, 3)
    m = re.fullmatch(r"C(\d+)", key)
    if m:
        return gr.cycle(int(m.group(1)))
    m = re.fullmatch(r"P(\d+)", key)
    if m:
        return gr.path(int(m.group(1)))
    m = re.fullmatch(r"K(\d+)", key)
    if m:
        return gr.complete(int(m.group(1)))
    m = re.fullmatch(r"Kbar_?(\d+)", key)
    if m:
        return gr.edgeless(int(m.group(1)))
    m = re.fullmatch(r"K(\d+)_(\d+)", key)
    if m:
        return gr.complete_bipartite(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"J(\d+)_(\d+)", key)
    if m:
        return johnson_type_graph(int(m.group(2)), int(m.group(1)))
    raise KeyError(f"unknown graph name {name!r}")


# fixtures

@dataclass(frozen=True)
class Fixture:
    param: str
    graph: str
    value: ParamValue
    source: str


def _load_fixtures() -> dict:
    text = resources.files("spectrum").joinpath("fixtures.json").read_text()
    out = {}
    for row in json.loads(text):
        val = ParamValue.parse(row["value"], provenance="fixture")
        out[(row["param"], row["graph"])] = Fixture(row["param"], row["graph"], val, row["source"])
    return out


FIXTURES = _load_fixtures()


def fixture(param: str, graph_id: str) -> ParamValue:
    param = ALIASES.get(param, param)
    try:
        return FIXTURES[(param, graph_id)].value
    except KeyError:
        raise KeyError(f"no fixture registered for ({param!r}, {graph_id!r})") from None


# spectral points

@dataclass
class SpectralPoint:
    name: str
    evaluate: Callable[[Graph], ParamValue]
    corner: Callable | None = None
    lex_multiplicative: bool = False
    tolerance: float = 0.0
    spectral: bool = True
    fixtures: dict = field(default_factory=dict)

    def __call__(self, G: Graph) -> ParamValue:
        return self.evaluate(G)

    def value_of(self, graph_id: str) -> ParamValue:
        if graph_id in self.fixtures:
            return self.fixtures[graph_id]
        return self.evaluate(named_graph(graph_id))


def _fixtures_for(name):
    return {g: f.value for (p, g), f in FIXTURES.items() if p == name}


def _chi_bar_f_corner(G):
    from .corners import vertex_packing

    return vertex_packing(gr.complement(G))


def _theta_corner(G):
    from .corners import theta_body

    return theta_body(gr.complement(G))


def _haemers(G):
    raise NotImplementedError("the fractional Haemers bound is served from fixtures only")


ALIASES = {"chi_bar_f": "fractional_clique_cover", "chibar_f": "fractional_clique_cover",
           "lovasz_theta": "theta", "haemers": "haemersF2", "clique_cover_number": "clique_cover"}

SPECTRAL_POINTS = {
    "fractional_clique_cover": SpectralPoint(
        "fractional_clique_cover", fractional_clique_cover, _chi_bar_f_corner,
        lex_multiplicative=True, tolerance=0.0),
    "theta": SpectralPoint("theta", lovasz_theta, _theta_corner, lex_multiplicative=True,
                           tolerance=1e-4, fixtures=_fixtures_for("theta")),
    "haemersF2": SpectralPoint("haemersF2", _haemers, None, tolerance=0.0,
                               fixtures=_fixtures_for("haemersF2")),
    "alpha": SpectralPoint("alpha", lambda G: ParamValue.rational(independence_number(G)),
                           tolerance=0.0, spectral=False),
    "clique_cover": SpectralPoint("clique_cover", lambda G: ParamValue.rational(clique_cover_number(G)),
                                  tolerance=0.0, spectral=False),
}


def spectral_point(name: str) -> SpectralPoint:
    key = ALIASES.get(name, name)
    if key not in SPECTRAL_POINTS:
        raise KeyError(f"unknown parameter {name!r}; choose from {sorted(SPECTRAL_POINTS)}")
    return SPECTRAL_POINTS[key]


# arithmetic over graph expressions using only the defining identities

@dataclass(frozen=True)
class GraphExpr:
    """Symbolic graph built from named graphs by products, powers, joins and unions."""

    op: str
    args: tuple = ()
    name: str | None = None
    n: int = 0

    @staticmethod
    def leaf(name: str) -> "GraphExpr":
        return GraphExpr("leaf", name=name)

    @staticmethod
    def edgeless(n: int) -> "GraphExpr":
        return GraphExpr("edgeless", n=n)

    @staticmethod
    def complete(n: int) -> "GraphExpr":
        return GraphExpr("complete", n=n)

    def strong(self, other: "GraphExpr") -> "GraphExpr":
        return GraphExpr("strong", (self, other))

    def power(self, k: int) -> "GraphExpr":
        return GraphExpr("power", (self,), n=k)

    def join(self, other: "GraphExpr") -> "GraphExpr":
        return GraphExpr("join", (self, other))

    def union(self, other: "GraphExpr") -> "GraphExpr":
        return GraphExpr("union", (self, other))

    def __str__(self) -> str:
        if self.op == "leaf":
            return self.name
        if self.op == "edgeless":
            return f"Kbar{self.n}"
        if self.op == "complete":
            return f"K{self.n}"
        if self.op == "power":
            return f"({self.args[0]})^{self.n}"
        sym = {"strong": " x ", "join": " + ", "union": " u "}[self.op]
        return "(" + sym.join(str(a) for a in self.args) + ")"


def evaluate_expression(expr: GraphExpr, point) -> ParamValue:
    """Evaluate a spectral point on ``expr`` from leaf values.

    Uses additivity under disjoint union, multiplicativity under the strong
    product, ``f(K_n) = 1``, ``f(complement K_n) = n`` and ``f(G + H) = max``.
    Leaves come from fixtures when registered, otherwise from the evaluator.
    """
    point = spectral_point(point) if isinstance(point, str) else point
    op = expr.op
    if op == "leaf":
        return point.value_of(expr.name)
    if op == "edgeless":
        return ParamValue.rational(expr.n, "derived")
    if op == "complete":
        return ParamValue.rational(1 if expr.n else 0, "derived")
    vals = [evaluate_expression(a, point) for a in expr.args]
    if op == "strong":
        return (vals[0] * vals[1]).with_provenance("derived")
    if op == "power":
        return (vals[0] ** expr.n).with_provenance("derived")
    if op == "union":
        return (vals[0] + vals[1]).with_provenance("derived")
    if op == "join":
        best = vals[0]
        for v in vals[1:]:
            if v.compare(best) > 0:
                best = v
        return best.with_provenance("derived")
    raise ValueError(f"unknown expression node {op!r}")


def build_graph(expr: GraphExpr, cap: int = 4096) -> Graph:
    """Materialize a small expression (for cross-checking the arithmetic)."""
    op = expr.op
    if op == "leaf":
        return named_graph(expr.name)
    if op == "edgeless":
        return gr.edgeless(expr.n)
    if op == "complete":
        return gr.complete(expr.n)
    parts = [build_graph(a, cap) for a in expr.args]
    if op == "strong":
        out = gr.strong_product(*parts)
    elif op == "power":
        out = gr.strong_power(parts[0], expr.n, cap=cap)
    elif op == "join":
        out = gr.join(*parts)
    elif op == "union":
        out = gr.disjoint_union(*parts)
    else:
        raise ValueError(f"unknown expression node {op!r}")
    if out.n > cap:
        raise GraphSizeError(f"expression materializes to {out.n} vertices")
    return out

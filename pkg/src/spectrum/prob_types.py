"""Distributions on vertex sets, n-types, type classes and type graphs."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import kernels
from .graph import Graph, GraphSizeError, VertexMap, _check_dense, edgeless

DEFAULT_CAP = 2_000_000
FLOAT_SUM_TOL = 1e-12


def materialization_cap(cap: int | None = None) -> int:
    if cap is not None:
        return int(cap)
    env = os.environ.get("SPECTRUM_CAP")
    return int(env) if env else DEFAULT_CAP


def _as_weight(w):
    if isinstance(w, (Fraction, int)):
        return Fraction(w)
    if isinstance(w, str):
        return Fraction(w.strip())
    if isinstance(w, (float, np.floating)):
        return float(w)
    raise TypeError(f"unsupported weight {w!r}")


class Distribution:
    """A probability vector on an ordered label set.

    Weights are exact ``Fraction`` values (rational mode) unless any weight is
    a float, in which case all are stored as floats.
    """

    __slots__ = ("labels", "weights", "exact", "_index")

    def __init__(self, labels: Sequence[Hashable], weights: Iterable):
        labels = tuple(labels)
        ws = [_as_weight(w) for w in weights]
        if len(ws) != len(labels):
            raise ValueError("labels and weights differ in length")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be unique")
        exact = all(isinstance(w, Fraction) for w in ws)
        if not exact:
            ws = [float(w) for w in ws]
        if any(w < 0 or w > 1 for w in ws):
            raise ValueError("weights must lie in [0, 1]")
        total = sum(ws)
        if exact and total != 1:
            raise ValueError(f"weights sum to {total}, not 1")
        if not exact and abs(total - 1.0) > FLOAT_SUM_TOL:
            raise ValueError(f"weights sum to {total!r}, not 1 within {FLOAT_SUM_TOL}")
        self.labels = labels
        self.weights = tuple(ws)
        self.exact = exact
        self._index = {lab: i for i, lab in enumerate(labels)}

    @classmethod
    def uniform(cls, labels: Sequence[Hashable]) -> "Distribution":
        labels = list(labels)
        return cls(labels, [Fraction(1, len(labels))] * len(labels))

    @classmethod
    def point(cls, labels: Sequence[Hashable], at) -> "Distribution":
        return cls(labels, [Fraction(int(lab == at)) for lab in labels])

    @classmethod
    def from_array(cls, labels, p) -> "Distribution":
        p = np.clip(np.asarray(p, dtype=float), 0.0, None)
        return cls(labels, (p / p.sum()).tolist())

    def __getitem__(self, label):
        i = self._index.get(label)
        return self.weights[i] if i is not None else (Fraction(0) if self.exact else 0.0)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.labels == other.labels and self.weights == other.weights

    def __hash__(self) -> int:
        return hash((self.labels, self.weights))

    def __repr__(self) -> str:
        ws = ", ".join(str(w) for w in self.weights)
        return f"Distribution({list(self.labels)!r}, [{ws}])"

    @property
    def support(self) -> tuple:
        return tuple(lab for lab, w in zip(self.labels, self.weights) if w > 0)

    def as_array(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights], dtype=float)

    def on(self, labels: Sequence[Hashable]) -> "Distribution":
        """Re-express on a superset of labels (absent labels get weight 0)."""
        labels = list(labels)
        missing = [lab for lab in self.support if lab not in set(labels)]
        if missing:
            raise ValueError(f"support label {missing[0]!r} not in target label set")
        return Distribution(labels, [self[lab] for lab in labels])

    def is_ntype(self, n: int) -> bool:
        return self.exact and all((w * n).denominator == 1 for w in self.weights)

    def denominator(self) -> int:
        if not self.exact:
            raise ValueError("float distributions have no type denominator")
        return math.lcm(*(w.denominator for w in self.weights)) if self.weights else 1

    def to_json_dict(self) -> dict:
        from .graph import _jsonable_label

        return {"labels": [_jsonable_label(lab) for lab in self.labels],
                "weights": [str(w) if self.exact else float(w) for w in self.weights]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "Distribution":
        from .graph import _tuple_label

        ws = []
        for w in d["weights"]:
            if isinstance(w, str):
                ws.append(Fraction(w))
            elif isinstance(w, int):
                ws.append(Fraction(w))
            else:
                ws.append(float(w))
        return cls([_tuple_label(x) for x in d["labels"]], ws)


def tv_distance(P: Distribution, Q: Distribution):
    """Total variation distance ``||P - Q||_1 / 2`` (exact when both are exact)."""
    labels = list(dict.fromkeys(P.labels + Q.labels))
    return sum(abs(P[x] - Q[x]) for x in labels) / 2


def l1_distance(P: Distribution, Q: Distribution):
    return 2 * tv_distance(P, Q)


# entropies (base 2)

def _xlogx_sum(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def shannon_entropy(P) -> float:
    if isinstance(P, Distribution):
        p = P.as_array()
    else:
        p = np.asarray(P, dtype=float)
    if (p < 0).any():
        raise ValueError("negative probability")
    return _xlogx_sum(p)


def binary_entropy(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError("binary entropy needs p in [0, 1]")
    return _xlogx_sum(np.array([p, 1.0 - p]))


def binary_relative_entropy(p: float, q: float) -> float:
    p, q = float(p), float(q)
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError("arguments must lie in [0, 1]")
    total = 0.0
    for a, b in ((p, q), (1.0 - p, 1.0 - q)):
        if a == 0.0:
            continue
        if b == 0.0:
            return math.inf
        total += a * math.log2(a / b)
    return max(total, 0.0)


# joint distributions

def marginals(P: Distribution) -> tuple[Distribution, Distribution]:
    """Marginals of a distribution whose labels are pairs ``(x, y)``."""
    if not all(isinstance(lab, tuple) and len(lab) == 2 for lab in P.labels):
        raise ValueError("joint distribution labels must be pairs (x, y)")
    zero = Fraction(0) if P.exact else 0.0
    px: dict = {}
    py: dict = {}
    for (x, y), w in zip(P.labels, P.weights):
        px[x] = px.get(x, zero) + w
        py[y] = py.get(y, zero) + w
    return _fix_float(px), _fix_float(py)


def _fix_float(d: dict) -> Distribution:
    labels = list(d)
    ws = list(d.values())
    if ws and isinstance(ws[0], float):
        arr = np.clip(np.array(ws), 0.0, 1.0)
        return Distribution(labels, (arr / arr.sum()).tolist())
    return Distribution(labels, ws)


def mutual_information(P: Distribution) -> float:
    PX, PY = marginals(P)
    return max(shannon_entropy(PX) + shannon_entropy(PY) - shannon_entropy(P), 0.0)


def product_dist(PX: Distribution, PY: Distribution) -> Distribution:
    labels = [(x, y) for x in PX.labels for y in PY.labels]
    ws = [a * b for a in PX.weights for b in PY.weights]
    if not (PX.exact and PY.exact):
        arr = np.array([float(w) for w in ws])
        ws = (arr / arr.sum()).tolist()
    return Distribution(labels, ws)


def mixture(p, PX: Distribution, PY: Distribution) -> Distribution:
    """``pP ⊕ (1-p)Q`` on the tagged disjoint union ``{(0,x)} ∪ {(1,y)}``."""
    p = _as_weight(p)
    if not 0 <= p <= 1:
        raise ValueError("mixture weight must lie in [0, 1]")
    labels = [(0, x) for x in PX.labels] + [(1, y) for y in PY.labels]
    if isinstance(p, Fraction) and PX.exact and PY.exact:
        ws = [p * w for w in PX.weights] + [(1 - p) * w for w in PY.weights]
        return Distribution(labels, ws)
    p = float(p)
    arr = np.concatenate([p * PX.as_array(), (1 - p) * PY.as_array()])
    return Distribution(labels, (arr / arr.sum()).tolist())


def pushforward(f, P: Distribution, target_labels: Sequence[Hashable] | None = None) -> Distribution:
    """Image distribution ``f_* P``.

    ``f`` may be a :class:`VertexMap`, a dict or a callable on labels. Without
    ``target_labels`` the result lists image labels in order of first
    appearance (a VertexMap supplies its target's labels).
    """
    if isinstance(f, VertexMap):
        fn: Callable = f
        target_labels = list(f.target.labels) if target_labels is None else target_labels
    elif isinstance(f, dict):
        fn = f.__getitem__
    else:
        fn = f
    zero = Fraction(0) if P.exact else 0.0
    acc: dict = {lab: zero for lab in (target_labels or [])}
    for x, w in zip(P.labels, P.weights):
        y = fn(x)
        if target_labels is not None and y not in acc:
            raise ValueError(f"image {y!r} not among the target labels")
        acc[y] = acc.get(y, zero) + w
    return _fix_float(acc)


# n-types

@dataclass(frozen=True)
class NType:
    """An ``n``-type on an ordered alphabet, stored as integer counts."""

    alphabet: tuple
    counts: tuple

    def __post_init__(self):
        if len(self.alphabet) != len(self.counts):
            raise ValueError("alphabet and counts differ in length")
        if any(c < 0 for c in self.counts) or sum(self.counts) < 1:
            raise ValueError("counts must be nonnegative with positive total")

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def distribution(self) -> Distribution:
        return Distribution(self.alphabet, [Fraction(c, self.n) for c in self.counts])

    @classmethod
    def from_distribution(cls, P: Distribution, n: int | None = None) -> "NType":
        if not P.exact:
            raise ValueError("n-types need exact rational weights")
        n = P.denominator() if n is None else n
        if not P.is_ntype(n):
            raise ValueError(f"distribution is not an {n}-type")
        return cls(P.labels, tuple(int(w * n) for w in P.weights))

    def scaled(self, k: int) -> "NType":
        return NType(self.alphabet, tuple(k * c for c in self.counts))


def enumerate_ntypes(X: Sequence[Hashable], n: int) -> list[NType]:
    """All ``n``-types on ``X`` in lexicographic order of their count vectors."""
    X = tuple(X)
    if n < 1:
        raise ValueError("n must be positive")
    if not X:
        return []
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(NType(X, tuple(prefix + [left])))
            return
        for c in range(left + 1):
            rec(prefix + [c], left - c, slots - 1)

    rec([], n, len(X))
    return out


def type_of(sequence: Sequence[Hashable], alphabet: Sequence[Hashable] | None = None) -> NType:
    seq = list(sequence)
    if not seq:
        raise ValueError("empty sequence has no type")
    alphabet = tuple(dict.fromkeys(sorted(seq, key=repr)) if alphabet is None else alphabet)
    counts = [0] * len(alphabet)
    index = {a: i for i, a in enumerate(alphabet)}
    for s in seq:
        if s not in index:
            raise ValueError(f"symbol {s!r} not in alphabet")
        counts[index[s]] += 1
    return NType(alphabet, tuple(counts))


def type_class_size(T: NType) -> int:
    size = math.factorial(T.n)
    for c in T.counts:
        size //= math.factorial(c)
    return size


def _multiset_permutations(counts: Sequence[int]) -> Iterable[tuple]:
    """Index sequences with the given symbol counts, in lexicographic order."""
    seq = [i for i, c in enumerate(counts) for _ in range(c)]
    n = len(seq)
    while True:
        yield tuple(seq)
        i = n - 2
        while i >= 0 and seq[i] >= seq[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while seq[j] <= seq[i]:
            j -= 1
        seq[i], seq[j] = seq[j], seq[i]
        seq[i + 1:] = reversed(seq[i + 1:])


def type_class(T: NType, cap: int | None = None) -> list[tuple]:
    size = type_class_size(T)
    if size > materialization_cap(cap):
        raise GraphSizeError(f"type class has {size} sequences, above the cap; reduce n")
    return [tuple(T.alphabet[i] for i in s) for s in _multiset_permutations(T.counts)]


# type graphs

@dataclass(frozen=True)
class TypeGraphSpec:
    """Either an exact type (``ntype``) or an open ball (``center``, ``eps``)."""

    base: Graph
    n: int
    ntype: NType | None = None
    center: Distribution | None = None
    eps: object = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if (self.ntype is None) == (self.center is None):
            raise ValueError("give exactly one of an exact type or a ball center")
        if self.center is not None and (self.eps is None or self.eps < 0):
            raise ValueError("ball radius must be given and nonnegative")


def _types_for(spec: TypeGraphSpec) -> list[NType]:
    G = spec.base
    if spec.ntype is not None:
        T = spec.ntype
        if T.n != spec.n:
            T = NType.from_distribution(T.distribution, spec.n)
        dist = T.distribution.on(G.labels)
        return [NType.from_distribution(dist, spec.n)]
    center = spec.center.on(G.labels)
    eps = spec.eps if isinstance(spec.eps, (float, np.floating)) else _as_weight(spec.eps)
    if not center.exact:
        eps = float(eps)
    out = []
    for T in enumerate_ntypes(G.labels, spec.n):
        if tv_distance(T.distribution, center) < eps:
            out.append(T)
    return out


def type_graph(spec_or_graph, n: int | None = None, P=None, eps=None, cap: int | None = None) -> Graph:
    """Induced subgraph of the ``n``-th strong power on a type class or ball.

    Accepts a :class:`TypeGraphSpec`, or ``(G, n, P)`` with ``P`` an
    ``NType``/exact ``Distribution`` and optional ``eps`` for an open ball
    around ``P``. Vertices are label tuples in lexicographic index order.
    """
    if isinstance(spec_or_graph, TypeGraphSpec):
        spec = spec_or_graph
    else:
        G = spec_or_graph
        if eps is None:
            T = P if isinstance(P, NType) else NType.from_distribution(P, n)
            spec = TypeGraphSpec(G, n, ntype=T)
        else:
            center = P.distribution if isinstance(P, NType) else P
            spec = TypeGraphSpec(G, n, center=center, eps=eps)
    G = spec.base
    types = _types_for(spec)
    if not types:
        return edgeless(0)
    total = sum(type_class_size(T) for T in types)
    if total > materialization_cap(cap):
        raise GraphSizeError(
            f"type graph would have {total} vertices, above the cap {materialization_cap(cap)}; reduce n")
    _check_dense(total)
    seqs = []
    for T in types:
        seqs.extend(_multiset_permutations(T.counts))
    seqs.sort()
    arr = np.array(seqs, dtype=np.int64).reshape(len(seqs), spec.n)
    reach = G.adjacency | np.eye(G.n, dtype=bool)
    adj = kernels.strong_adjacency(arr, reach)
    labels = [tuple(G.labels[i] for i in s) for s in seqs]
    return Graph(labels, adj, check=False)

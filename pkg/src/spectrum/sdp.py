"""Small dense semidefinite programs by a primal-dual interior-point method.

Problems are in the standard form

    minimize <C, X>  subject to  <A_k, X> = b_k,  X PSD,

with dual  maximize b'y  subject to  Z = C - sum_k y_k A_k  PSD.

Constraint matrices are sparse and symmetric. They are given as *terms*
``(k, a, b, v)``, each adding ``v * (e_a e_b' + e_b e_a')`` to ``A_k``; a
diagonal entry ``A_k[a, a] = v`` is therefore written as ``(k, a, a, v/2)``.
The search direction is HKM (the X Z^-1 scaled direction) with a Mehrotra
predictor-corrector step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy import sparse

GAP_TOL = 1e-8
FEAS_TOL = 1e-8
ACCEPT_TOL = 1e-7
MAX_ITER = 100
MAX_TERMS = 12000


class SDPConvergenceError(RuntimeError):
    def __init__(self, msg, primal=None, dual=None):
        super().__init__(msg)
        self.primal = primal
        self.dual = dual


@dataclass
class SDPResult:
    X: np.ndarray
    y: np.ndarray
    Z: np.ndarray
    primal: float
    dual: float
    iterations: int
    gap: float


class Terms:
    """Sparse symmetric constraint operator ``A`` stored as term arrays."""

    def __init__(self, n, m, k, a, b, v):
        self.n, self.m = n, m
        self.k = np.asarray(k, dtype=np.int64)
        self.a = np.asarray(a, dtype=np.int64)
        self.b = np.asarray(b, dtype=np.int64)
        self.v = np.asarray(v, dtype=float)
        t = len(self.k)
        self.S = sparse.csr_matrix((np.ones(t), (self.k, np.arange(t))), shape=(m, t))

    def apply(self, X):
        """``A(X)_k = <A_k, X>``."""
        vals = self.v * (X[self.a, self.b] + X[self.b, self.a])
        return self.S @ vals

    def adjoint(self, y):
        """``sum_k y_k A_k`` as a dense matrix."""
        out = np.zeros((self.n, self.n))
        vals = y[self.k] * self.v
        np.add.at(out, (self.a, self.b), vals)
        np.add.at(out, (self.b, self.a), vals)
        return out

    def schur(self, X, W):
        """``M_kl = tr(A_k X A_l W)`` for symmetric ``X`` and ``W``."""
        a, b, v = self.a, self.b, self.v
        # term pair (a,b),(c,d): X_bc W_da + X_bd W_ca + X_ac W_db + X_ad W_cb
        K = (X[np.ix_(b, a)] * W[np.ix_(a, b)]
             + X[np.ix_(b, b)] * W[np.ix_(a, a)]
             + X[np.ix_(a, a)] * W[np.ix_(b, b)]
             + X[np.ix_(a, b)] * W[np.ix_(b, a)])
        K *= np.outer(v, v)
        M = self.S @ (self.S @ K.T).T
        return np.asarray(M)


def _max_step(X, dX):
    """Largest ``t <= 1`` with ``X + t dX`` PSD (scaled by the caller)."""
    try:
        L = np.linalg.cholesky(X)
    except np.linalg.LinAlgError:
        return 0.0
    Li = sla.solve_triangular(L, np.eye(len(X)), lower=True)
    lam = np.linalg.eigvalsh(Li @ dX @ Li.T)
    lo = lam.min()
    return 1.0 if lo >= 0 else min(1.0, -1.0 / lo)


def solve(C, A: Terms, b, X0=None, y0=None, Z0=None, max_iter: int = MAX_ITER,
          gap_tol: float = GAP_TOL, feas_tol: float = FEAS_TOL) -> SDPResult:
    n = A.n
    C = np.asarray(C, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(A.k) > MAX_TERMS:
        raise SDPConvergenceError(f"{len(A.k)} constraint terms exceed the dense Schur guard {MAX_TERMS}")
    X = np.eye(n) if X0 is None else np.array(X0, dtype=float)
    y = np.zeros(A.m) if y0 is None else np.array(y0, dtype=float)
    Z = np.eye(n) if Z0 is None else np.array(Z0, dtype=float)
    nb, nc = 1.0 + np.linalg.norm(b), 1.0 + np.linalg.norm(C)
    best = None
    for it in range(1, max_iter + 1):
        rp = b - A.apply(X)
        Rd = C - A.adjoint(y) - Z
        pobj = float(np.sum(C * X))
        dobj = float(b @ y)
        gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        pinf = np.linalg.norm(rp) / nb
        dinf = np.linalg.norm(Rd) / nc
        err = max(gap, pinf, dinf)
        if best is None or err < best[0]:
            best = (err, pobj, dobj, X.copy(), y.copy(), Z.copy(), it)
        if gap <= gap_tol and pinf <= feas_tol and dinf <= feas_tol:
            return SDPResult(X, y, Z, pobj, dobj, it, gap)
        mu = float(np.sum(X * Z)) / n
        try:
            W = np.linalg.inv(Z)
        except np.linalg.LinAlgError:
            break
        W = (W + W.T) / 2
        M = A.schur(X, W)
        try:
            cho = sla.cho_factor(M)
            solve_M = lambda r: sla.cho_solve(cho, r)  # noqa: E731
        except sla.LinAlgError:
            solve_M = lambda r: np.linalg.lstsq(M, r, rcond=None)[0]  # noqa: E731
        XRdW = X @ Rd @ W

        def direction(Rc):
            rhs = rp - A.apply(Rc @ W) + A.apply(XRdW)
            dy = solve_M(rhs)
            dZ = Rd - A.adjoint(dy)
            dX = (Rc - X @ dZ) @ W
            return (dX + dX.T) / 2, dy, dZ

        XZ = X @ Z
        dX, dy, dZ = direction(-XZ)
        ap = _max_step(X, dX)
        ad = _max_step(Z, dZ)
        mu_aff = float(np.sum((X + ap * dX) * (Z + ad * dZ))) / n
        sigma = min(1.0, (mu_aff / mu) ** 3) if mu > 0 else 0.0
        Rc = sigma * mu * np.eye(n) - XZ - dX @ dZ
        dX, dy, dZ = direction(Rc)
        ap = min(1.0, 0.98 * _max_step(X, dX))
        ad = min(1.0, 0.98 * _max_step(Z, dZ))
        if ap < 1e-12 and ad < 1e-12:
            break
        X = X + ap * dX
        X = (X + X.T) / 2
        y = y + ad * dy
        Z = Z + ad * dZ
        Z = (Z + Z.T) / 2
    err, pobj, dobj, X, y, Z, it = best
    if err <= ACCEPT_TOL:
        return SDPResult(X, y, Z, pobj, dobj, it, err)
    raise SDPConvergenceError(
        f"SDP did not converge (best error {err:.2e}); bounds {pobj:.10g} / {dobj:.10g}",
        primal=pobj, dual=dobj)


@dataclass
class ThetaResult:
    value: float  # primal objective <s s', B>
    upper: float  # dual objective, a certified upper bound up to feasibility error
    B: np.ndarray
    maximizer: np.ndarray  # point of the theta body attaining <w, x> = value


def weighted_theta(adj, w=None, **kw) -> ThetaResult:
    """``max <sqrt(w) sqrt(w)', B>`` over PSD ``B`` with trace 1 and ``B_ij = 0`` on edges."""
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    w = np.ones(n) if w is None else np.asarray(w, dtype=float)
    if w.shape != (n,) or (w < 0).any():
        raise ValueError("weights must be a nonnegative vector, one per vertex")
    if n == 0 or not w.any():
        return ThetaResult(0.0, 0.0, np.zeros((n, n)), np.zeros(n))
    s = np.sqrt(w)
    ei, ej = np.nonzero(np.triu(adj, 1))
    m = 1 + len(ei)
    k = np.concatenate([np.zeros(n, dtype=np.int64), 1 + np.arange(len(ei))])
    a = np.concatenate([np.arange(n), ei])
    bb = np.concatenate([np.arange(n), ej])
    v = np.concatenate([np.full(n, 0.5), np.full(len(ei), 0.5)])
    A = Terms(n, m, k, a, bb, v)
    b = np.zeros(m)
    b[0] = 1.0
    C = -np.outer(s, s)
    t0 = float(s @ s) + 1.0
    y0 = np.zeros(m)
    y0[0] = -t0
    res = solve(C, A, b, X0=np.eye(n) / n, y0=y0, Z0=t0 * np.eye(n) - np.outer(s, s), **kw)
    B = res.X
    value = -res.primal
    upper = max(-res.dual, value)
    Bs = B @ s
    diag = np.diag(B)
    x = np.zeros(n)
    ok = diag > 1e-12 * max(diag.max(), 1e-300)
    if value > 0:
        x[ok] = Bs[ok] ** 2 / (diag[ok] * value)
    return ThetaResult(value, upper, B, x)

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled combinatorial kernels (same API as ``_kernels_py``)."""

import numpy as np

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy, memset

BACKEND = "cython"


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef struct MC:
    int n
    int W
    uint64_t* nbr
    uint64_t* P
    uint64_t* U
    uint64_t* Q
    int* verts
    int* cols
    int* R
    int* best
    int best_size


cdef inline bint _empty(const uint64_t* x, int W) nogil:
    cdef int w
    for w in range(W):
        if x[w]:
            return False
    return True


cdef int _colour_sort(MC* s, int depth) nogil:
    cdef int W = s.W
    cdef uint64_t* P = s.P + depth * W
    cdef uint64_t* U = s.U + depth * W
    cdef uint64_t* Q = s.Q + depth * W
    cdef int* verts = s.verts + depth * s.n
    cdef int* cols = s.cols + depth * s.n
    cdef int count = 0, k = 0, w, v, b, ww
    cdef uint64_t* nv
    memcpy(U, P, W * sizeof(uint64_t))
    while not _empty(U, W):
        k += 1
        memcpy(Q, U, W * sizeof(uint64_t))
        w = 0
        while w < W:
            if Q[w] == 0:
                w += 1
                continue
            b = __builtin_ctzll(Q[w])
            v = w * 64 + b
            nv = s.nbr + v * W
            for ww in range(W):
                Q[ww] &= ~nv[ww]
            Q[w] &= ~((<uint64_t>1) << b)
            U[w] &= ~((<uint64_t>1) << b)
            verts[count] = v
            cols[count] = k
            count += 1
    return count


cdef void _expand(MC* s, int depth, int rsize) nogil:
    cdef int W = s.W
    cdef uint64_t* P = s.P + depth * W
    cdef uint64_t* NP = s.P + (depth + 1) * W
    cdef int* verts = s.verts + depth * s.n
    cdef int* cols = s.cols + depth * s.n
    cdef int count = _colour_sort(s, depth)
    cdef int idx, v, w
    cdef uint64_t* nv
    idx = count - 1
    while idx >= 0:
        if rsize + cols[idx] <= s.best_size:
            return
        v = verts[idx]
        s.R[rsize] = v
        nv = s.nbr + v * W
        for w in range(W):
            NP[w] = P[w] & nv[w]
        if not _empty(NP, W):
            _expand(s, depth + 1, rsize + 1)
        elif rsize + 1 > s.best_size:
            s.best_size = rsize + 1
            memcpy(s.best, s.R, (rsize + 1) * sizeof(int))
        P[v // 64] &= ~((<uint64_t>1) << (v % 64))
        idx -= 1


def max_clique(adj):
    """Return the vertex indices of one maximum clique (sorted)."""
    a = np.ascontiguousarray(np.asarray(adj, dtype=np.uint8))
    cdef int n = a.shape[0]
    if n == 0:
        return []
    deg = a.sum(axis=1) - np.diagonal(a)
    order = np.asarray(sorted(range(n), key=lambda v: (-int(deg[v]), v)), dtype=np.int64)
    cdef const unsigned char[:, :] m = np.ascontiguousarray(a[np.ix_(order, order)])
    cdef MC s
    cdef int i, j
    s.n = n
    s.W = (n + 63) // 64
    s.nbr = <uint64_t*> calloc(n * s.W, sizeof(uint64_t))
    s.P = <uint64_t*> calloc((n + 2) * s.W, sizeof(uint64_t))
    s.U = <uint64_t*> calloc((n + 2) * s.W, sizeof(uint64_t))
    s.Q = <uint64_t*> calloc((n + 2) * s.W, sizeof(uint64_t))
    s.verts = <int*> calloc((n + 2) * n, sizeof(int))
    s.cols = <int*> calloc((n + 2) * n, sizeof(int))
    s.R = <int*> calloc(n + 1, sizeof(int))
    s.best = <int*> calloc(n + 1, sizeof(int))
    s.best_size = 0
    try:
        if (s.nbr == NULL or s.P == NULL or s.U == NULL or s.Q == NULL
                or s.verts == NULL or s.cols == NULL or s.R == NULL or s.best == NULL):
            raise MemoryError()
        for i in range(n):
            for j in range(n):
                if i != j and m[i, j]:
                    s.nbr[i * s.W + j // 64] |= (<uint64_t>1) << (j % 64)
            s.P[i // 64] |= (<uint64_t>1) << (i % 64)
        with nogil:
            _expand(&s, 0, 0)
        return sorted(int(order[s.best[i]]) for i in range(s.best_size))
    finally:
        free(s.nbr); free(s.P); free(s.U); free(s.Q)
        free(s.verts); free(s.cols); free(s.R); free(s.best)


cdef struct DS:
    int n
    int* adjlist
    int* deg
    int* colour
    int* cnt
    int* sat
    int* best_col
    int best_k
    int lb


cdef inline void _assign(DS* s, int v, int c) nogil:
    cdef int i, u
    s.colour[v] = c
    for i in range(s.deg[v]):
        u = s.adjlist[v * s.n + i]
        if s.cnt[u * (s.n + 1) + c] == 0:
            s.sat[u] += 1
        s.cnt[u * (s.n + 1) + c] += 1


cdef inline void _unassign(DS* s, int v, int c) nogil:
    cdef int i, u
    s.colour[v] = -1
    for i in range(s.deg[v]):
        u = s.adjlist[v * s.n + i]
        s.cnt[u * (s.n + 1) + c] -= 1
        if s.cnt[u * (s.n + 1) + c] == 0:
            s.sat[u] -= 1


cdef int _pick(DS* s) nogil:
    cdef int v, i, free_deg, best_v = -1, best_sat = -1, best_free = -1
    for v in range(s.n):
        if s.colour[v] >= 0:
            continue
        free_deg = 0
        for i in range(s.deg[v]):
            if s.colour[s.adjlist[v * s.n + i]] < 0:
                free_deg += 1
        if s.sat[v] > best_sat or (s.sat[v] == best_sat and free_deg > best_free):
            best_v = v
            best_sat = s.sat[v]
            best_free = free_deg
    return best_v


cdef bint _rec(DS* s, int ncol, int k_used) nogil:
    cdef int v, c, k2
    cdef bint done
    if ncol == s.n:
        s.best_k = k_used
        memcpy(s.best_col, s.colour, s.n * sizeof(int))
        return s.best_k == s.lb
    v = _pick(s)
    c = 0
    while c < k_used + 1 and c < s.best_k - 1:
        if s.cnt[v * (s.n + 1) + c] == 0:
            _assign(s, v, c)
            k2 = k_used if k_used > c + 1 else c + 1
            done = _rec(s, ncol + 1, k2)
            _unassign(s, v, c)
            if done:
                return True
        c += 1
    return False


def chromatic_number(adj):
    """Exact chromatic number by DSATUR branch and bound; returns (k, colouring)."""
    a = np.asarray(adj, dtype=bool)
    cdef int n = a.shape[0]
    if n == 0:
        return 0, []
    clique = max_clique(a)
    cdef DS s
    cdef int v, c, i, u, used, coloured
    s.n = n
    s.lb = len(clique)
    s.adjlist = <int*> calloc(n * n, sizeof(int))
    s.deg = <int*> calloc(n, sizeof(int))
    s.colour = <int*> malloc(n * sizeof(int))
    s.cnt = <int*> calloc(n * (n + 1), sizeof(int))
    s.sat = <int*> calloc(n, sizeof(int))
    s.best_col = <int*> calloc(n, sizeof(int))
    try:
        if (s.adjlist == NULL or s.deg == NULL or s.colour == NULL or s.cnt == NULL
                or s.sat == NULL or s.best_col == NULL):
            raise MemoryError()
        for v in range(n):
            s.colour[v] = -1
            for u in np.flatnonzero(a[v]):
                if u != v:
                    s.adjlist[v * n + s.deg[v]] = u
                    s.deg[v] += 1
        for i in range(s.lb):
            _assign(&s, clique[i], i)
        used = s.lb
        coloured = s.lb
        while coloured < n:
            v = _pick(&s)
            c = 0
            while s.cnt[v * (n + 1) + c]:
                c += 1
            _assign(&s, v, c)
            if c + 1 > used:
                used = c + 1
            coloured += 1
        s.best_k = used
        memcpy(s.best_col, s.colour, n * sizeof(int))
        if s.best_k > s.lb:
            for v in range(n):
                if s.colour[v] >= 0:
                    _unassign(&s, v, s.colour[v])
            for i in range(s.lb):
                _assign(&s, clique[i], i)
            with nogil:
                _rec(&s, s.lb, s.lb)
        return int(s.best_k), [int(s.best_col[v]) for v in range(n)]
    finally:
        free(s.adjlist); free(s.deg); free(s.colour)
        free(s.cnt); free(s.sat); free(s.best_col)


def strong_adjacency(seqs, reach):
    """Adjacency of the strong power induced on distinct sequences."""
    cdef const int64_t[:, :] S = np.ascontiguousarray(np.asarray(seqs, dtype=np.int64).reshape(len(seqs), -1))
    cdef const unsigned char[:, :] Rm = np.ascontiguousarray(np.asarray(reach, dtype=np.uint8))
    cdef Py_ssize_t N = S.shape[0], L = S.shape[1], i, j, t
    out = np.zeros((N, N), dtype=np.uint8)
    cdef unsigned char[:, :] o = out
    cdef bint ok
    with nogil:
        for i in range(N):
            for j in range(i + 1, N):
                ok = True
                for t in range(L):
                    if not Rm[S[i, t], S[j, t]]:
                        ok = False
                        break
                if ok:
                    o[i, j] = 1
                    o[j, i] = 1
    return out.view(bool)

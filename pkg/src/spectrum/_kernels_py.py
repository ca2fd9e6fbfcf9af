"""Pure-Python versions of the combinatorial kernels.

Adjacency arrives as a square boolean/uint8 numpy array. Vertex sets are held
as Python ints used as bitsets. The compiled module ``_kernels`` exposes the
same three functions with the same signatures and results.
"""

import numpy as np

BACKEND = "python"


def _bitsets(adj):
    n = adj.shape[0]
    rows = []
    for i in range(n):
        bits = 0
        for j in np.flatnonzero(adj[i]):
            if j != i:
                bits |= 1 << int(j)
        rows.append(bits)
    return rows


def max_clique(adj):
    """Return the vertex indices of one maximum clique (sorted).

    Branch and bound with a greedy colouring bound (Tomita's MCQ).
    """
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    if n == 0:
        return []
    deg = adj.sum(axis=1)
    order = sorted(range(n), key=lambda v: (-int(deg[v]), v))
    relabel = np.asarray(order)
    nbr = _bitsets(adj[np.ix_(relabel, relabel)])
    best = []

    def colour_sort(P):
        verts, cols = [], []
        k = 0
        U = P
        while U:
            k += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~nbr[v] & ~low
                U &= ~low
                verts.append(v)
                cols.append(k)
        return verts, cols

    def expand(R, P):
        nonlocal best
        verts, cols = colour_sort(P)
        for idx in range(len(verts) - 1, -1, -1):
            if len(R) + cols[idx] <= len(best):
                return
            v = verts[idx]
            R.append(v)
            NP = P & nbr[v]
            if NP:
                expand(R, NP)
            elif len(R) > len(best):
                best = list(R)
            R.pop()
            P &= ~(1 << v)

    expand([], (1 << n) - 1)
    return sorted(int(relabel[v]) for v in best)


def chromatic_number(adj):
    """Exact chromatic number by DSATUR branch and bound.

    Returns ``(k, colouring)`` where ``colouring[v]`` is in ``range(k)``.
    """
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    if n == 0:
        return 0, []
    nbrs = [[int(j) for j in np.flatnonzero(adj[v]) if j != v] for v in range(n)]
    clique = max_clique(adj)
    lb = len(clique)

    colour = [-1] * n
    cnt = [[0] * (n + 1) for _ in range(n)]
    sat = [0] * n

    def assign(v, c):
        colour[v] = c
        for u in nbrs[v]:
            if cnt[u][c] == 0:
                sat[u] += 1
            cnt[u][c] += 1

    def unassign(v, c):
        colour[v] = -1
        for u in nbrs[v]:
            cnt[u][c] -= 1
            if cnt[u][c] == 0:
                sat[u] -= 1

    def pick():
        best_v, best_key = -1, None
        for v in range(n):
            if colour[v] < 0:
                key = (sat[v], sum(1 for u in nbrs[v] if colour[u] < 0))
                if best_key is None or key > best_key:
                    best_v, best_key = v, key
        return best_v

    # greedy DSATUR upper bound
    for i, v in enumerate(clique):
        assign(v, i)
    used = lb
    coloured = lb
    while coloured < n:
        v = pick()
        c = 0
        while cnt[v][c]:
            c += 1
        assign(v, c)
        used = max(used, c + 1)
        coloured += 1
    best_k = used
    best_col = list(colour)
    if best_k == lb:
        return best_k, best_col
    for v in range(n):
        if colour[v] >= 0:
            unassign(v, colour[v])
    for i, v in enumerate(clique):
        assign(v, i)

    def rec(ncol, k_used):
        nonlocal best_k, best_col
        if ncol == n:
            best_k = k_used
            best_col = list(colour)
            return best_k == lb
        v = pick()
        c = 0
        while c < min(k_used + 1, best_k - 1):
            if not cnt[v][c]:
                assign(v, c)
                done = rec(ncol + 1, max(k_used, c + 1))
                unassign(v, c)
                if done:
                    return True
            c += 1
        return False

    rec(lb, lb)
    return best_k, best_col


def strong_adjacency(seqs, reach):
    """Adjacency of the strong power induced on distinct sequences.

    ``reach`` is the base adjacency with the diagonal set (adjacent-or-equal).
    Rows of ``seqs`` must be pairwise distinct.
    """
    seqs = np.asarray(seqs, dtype=np.int64)
    reach = np.asarray(reach, dtype=bool)
    N = seqs.shape[0]
    out = np.ones((N, N), dtype=bool)
    for t in range(seqs.shape[1] if seqs.ndim == 2 else 0):
        col = seqs[:, t]
        out &= reach[col[:, None], col[None, :]]
    np.fill_diagonal(out, False)
    return out

"""Profile-space kernels.

Each kernel comes in two flavours sharing one signature:

* ``*_numba``: scalar loops compiled with ``numba.njit``;
* ``*_numpy``: block-vectorized numpy, used when numba is unavailable or
  disabled with ``CGRR_DISABLE_NUMBA=1``.

Arrays follow one convention: ``indptr``/``indices`` is the CSR adjacency
(self excluded), ``tab[i, r, c]`` is user ``i``'s payoff on ``r`` when ``c``
*other* members of its neighborhood are on ``r`` (i.e. ``g^i_r(c + 1)``),
and profile index ``k`` encodes user ``i``'s resource as digit ``i`` of
``k`` in base ``R`` (user 0 least significant).
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("CGRR_DISABLE_NUMBA", "0") in ("", "0")

BLOCK = 1 << 14


def _njit(fn):
    if numba is None:  # pragma: no cover
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# --------------------------------------------------------------------------
# numba

@_njit
def _nash_flags_numba(indptr, indices, tab, R, start, stop):
    n = indptr.shape[0] - 1
    out = np.zeros(stop - start, dtype=np.bool_)
    prof = np.empty(n, dtype=np.int64)
    cnt = np.zeros(R, dtype=np.int64)
    x = start
    for i in range(n):
        prof[i] = x % R
        x //= R
    for k in range(start, stop):
        ok = True
        for i in range(n):
            for r in range(R):
                cnt[r] = 0
            for p in range(indptr[i], indptr[i + 1]):
                cnt[prof[indices[p]]] += 1
            s = prof[i]
            cur = tab[i, s, cnt[s]]
            for r in range(R):
                if r != s and tab[i, r, cnt[r]] > cur:
                    ok = False
                    break
            if not ok:
                break
        out[k - start] = ok
        # mixed-radix increment
        i = 0
        while i < n:
            prof[i] += 1
            if prof[i] < R:
                break
            prof[i] = 0
            i += 1
    return out


@_njit
def _fip_dfs_numba(indptr, indices, tab, R, total):
    n = indptr.shape[0] - 1
    pw = np.empty(n, dtype=np.int64)
    acc = 1
    for i in range(n):
        pw[i] = acc
        acc *= R
    color = np.zeros(total, dtype=np.uint8)  # 0 white, 1 on stack, 2 done
    st_state = np.empty(total, dtype=np.int64)
    st_next = np.empty(total, dtype=np.int64)  # next (user * R + resource) to try
    prof = np.empty(n, dtype=np.int64)
    nmoves = n * R
    empty = np.empty(0, dtype=np.int64)
    for root in range(total):
        if color[root] != 0:
            continue
        depth = 0
        st_state[0] = root
        st_next[0] = 0
        color[root] = 1
        while depth >= 0:
            state = st_state[depth]
            x = state
            for i in range(n):
                prof[i] = x % R
                x //= R
            code = st_next[depth]
            pushed = False
            while code < nmoves:
                i = code // R
                r = code - i * R
                code += 1
                s = prof[i]
                if r == s:
                    continue
                cs = 0
                cr = 0
                for p in range(indptr[i], indptr[i + 1]):
                    c = prof[indices[p]]
                    if c == s:
                        cs += 1
                    elif c == r:
                        cr += 1
                if tab[i, r, cr] <= tab[i, s, cs]:
                    continue
                nxt = state + (r - s) * pw[i]
                st_next[depth] = code
                if color[nxt] == 1:
                    j = depth
                    while st_state[j] != nxt:
                        j -= 1
                    states = st_state[j:depth + 1].copy()
                    moves = st_next[j:depth + 1] - 1
                    return states, moves
                if color[nxt] == 0:
                    depth += 1
                    st_state[depth] = nxt
                    st_next[depth] = 0
                    color[nxt] = 1
                    pushed = True
                    break
            if not pushed:
                color[state] = 2
                depth -= 1
    return empty, empty


@_njit
def _ordinal_violation_numba(indptr, indices, tab, R, start, stop):
    """First improving move that does not lower the monochromatic-edge count."""
    n = indptr.shape[0] - 1
    prof = np.empty(n, dtype=np.int64)
    cnt = np.zeros(R, dtype=np.int64)
    checked = 0
    for k in range(start, stop):
        x = k
        for i in range(n):
            prof[i] = x % R
            x //= R
        for i in range(n):
            for r in range(R):
                cnt[r] = 0
            for p in range(indptr[i], indptr[i + 1]):
                cnt[prof[indices[p]]] += 1
            s = prof[i]
            cur = tab[i, s, cnt[s]]
            for r in range(R):
                if r != s and tab[i, r, cnt[r]] > cur:
                    checked += 1
                    if cnt[r] - cnt[s] >= 0:
                        return k, i, r, checked
    return -1, -1, -1, checked


# --------------------------------------------------------------------------
# numpy

def _block_moves(adj, tab, R, start, stop):
    """Digits, neighbor counts, post-move payoffs and current payoffs for a block."""
    n = adj.shape[0]
    idx = np.arange(start, stop, dtype=np.int64)
    digits = (idx[:, None] // (R ** np.arange(n, dtype=np.int64))[None, :]) % R
    onehot = (digits[:, :, None] == np.arange(R)[None, None, :]).astype(np.int64)
    cnt = np.einsum("pjr,ij->pir", onehot, adj)
    users = np.arange(n)[None, :, None]
    vals = tab[users, np.arange(R)[None, None, :], cnt]
    cur = np.take_along_axis(vals, digits[:, :, None], axis=2)
    return idx, digits, cnt, vals, cur


def _nash_flags_numpy(adj, tab, R, start, stop):
    out = np.empty(stop - start, dtype=bool)
    for lo in range(start, stop, BLOCK):
        hi = min(lo + BLOCK, stop)
        _, _, _, vals, cur = _block_moves(adj, tab, R, lo, hi)
        out[lo - start:hi - start] = ~(vals > cur).any(axis=(1, 2))
    return out


def improvement_edges_numpy(adj, tab, R, total):
    """All strict unilateral improvements as ``(src, dst)`` arrays sorted by source."""
    n = adj.shape[0]
    pw = R ** np.arange(n, dtype=np.int64)
    srcs, dsts = [], []
    for lo in range(0, total, BLOCK):
        hi = min(lo + BLOCK, total)
        idx, digits, _, vals, cur = _block_moves(adj, tab, R, lo, hi)
        p, i, r = np.nonzero(vals > cur)
        srcs.append(idx[p])
        dsts.append(idx[p] + (r - digits[p, i]) * pw[i])
    if not srcs:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(srcs), np.concatenate(dsts)


def _fip_kahn_numpy(adj, tab, R, total):
    """Acyclicity by frontier peeling; a witness is recovered by walking predecessors."""
    n = adj.shape[0]
    src, dst = improvement_edges_numpy(adj, tab, R, total)
    ptr = np.zeros(total + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=total), out=ptr[1:])
    indeg = np.bincount(dst, minlength=total).astype(np.int64)
    frontier = np.flatnonzero(indeg == 0)
    while frontier.size:
        starts, stops = ptr[frontier], ptr[frontier + 1]
        lens = stops - starts
        m = int(lens.sum())
        if m == 0:
            break
        offs = np.repeat(starts - np.cumsum(lens) + lens, lens) + np.arange(m)
        u, c = np.unique(dst[offs], return_counts=True)
        indeg[u] -= c
        frontier = u[indeg[u] == 0]
    alive = indeg > 0
    empty = np.empty(0, dtype=np.int64)
    if not alive.any():
        return empty, empty
    # every surviving node keeps at least one surviving predecessor
    order = np.argsort(dst, kind="stable")
    src_by_dst, dst_sorted = src[order], dst[order]
    seen = {}
    path = []
    v = int(np.flatnonzero(alive)[0])
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        lo, hi = np.searchsorted(dst_sorted, [v, v + 1])
        cands = src_by_dst[lo:hi]
        v = int(cands[alive[cands]][0])
    cyc = path[seen[v]:][::-1]  # forward direction
    states = np.array(cyc, dtype=np.int64)
    moves = np.empty(len(cyc), dtype=np.int64)
    pw = R ** np.arange(n, dtype=np.int64)
    for k, a in enumerate(cyc):
        b = cyc[(k + 1) % len(cyc)]
        da, db = (a // pw) % R, (b // pw) % R
        i = int(np.flatnonzero(da != db)[0])
        moves[k] = i * R + int(db[i])
    return states, moves


def _ordinal_violation_numpy(adj, tab, R, start, stop):
    checked = 0
    for lo in range(start, stop, BLOCK):
        hi = min(lo + BLOCK, stop)
        idx, digits, cnt, vals, cur = _block_moves(adj, tab, R, lo, hi)
        p, i, r = np.nonzero(vals > cur)
        delta = cnt[p, i, r] - cnt[p, i, digits[p, i]]
        bad = np.flatnonzero(delta >= 0)
        if bad.size:
            b = bad[0]
            return int(idx[p[b]]), int(i[b]), int(r[b]), checked + int(b) + 1
        checked += p.size
    return -1, -1, -1, checked


# --------------------------------------------------------------------------
# dispatch; callers pass a Game-like object exposing graph and table_array

def nash_flags(game, start, stop, use_numba=None):
    use = USE_NUMBA if use_numba is None else use_numba
    R = game.num_resources
    if use:
        indptr, indices = game.graph.csr
        return _nash_flags_numba(indptr, indices, game.table_array, R, start, stop)
    return _nash_flags_numpy(game.graph.matrix, game.table_array, R, start, stop)


def fip_search(game, total, use_numba=None):
    """Return ``(states, moves)`` of an improvement cycle, both empty if none exists.

    ``moves[k] = user * R + resource`` leads from ``states[k]`` to ``states[k+1]``
    (cyclically).
    """
    use = USE_NUMBA if use_numba is None else use_numba
    R = game.num_resources
    if use:
        indptr, indices = game.graph.csr
        return _fip_dfs_numba(indptr, indices, game.table_array, R, total)
    return _fip_kahn_numpy(game.graph.matrix, game.table_array, R, total)


def ordinal_violation(game, start, stop, use_numba=None):
    use = USE_NUMBA if use_numba is None else use_numba
    R = game.num_resources
    if use:
        indptr, indices = game.graph.csr
        k, i, r, checked = _ordinal_violation_numba(indptr, indices, game.table_array, R,
                                                    start, stop)
        return int(k), int(i), int(r), int(checked)
    return _ordinal_violation_numpy(game.graph.matrix, game.table_array, R, start, stop)

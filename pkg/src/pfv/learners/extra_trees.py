"""Extremely randomized trees (binary classification, Gini criterion).

Each split draws candidate features at random, picks one uniform cut
point per candidate between the node's observed min and max, and keeps
the candidate with the largest Gini reduction. Trees are grown until
nodes are pure, constant, or smaller than ``min_split``.
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _grow(X, y, k, min_split, seed, feat, thr, left, right, value):
    np.random.seed(seed)
    n, m = X.shape
    idx = np.arange(n)
    feats = np.arange(m)
    st_node = np.empty(2 * n + 1, np.int64)
    st_lo = np.empty(2 * n + 1, np.int64)
    st_hi = np.empty(2 * n + 1, np.int64)
    sp = 0
    st_node[0] = 0
    st_lo[0] = 0
    st_hi[0] = n
    sp = 1
    n_nodes = 1
    while sp > 0:
        sp -= 1
        node = st_node[sp]
        lo = st_lo[sp]
        hi = st_hi[sp]
        cnt = hi - lo
        pos = 0.0
        for i in range(lo, hi):
            pos += y[idx[i]]
        value[node] = pos / cnt
        feat[node] = -1
        left[node] = -1
        right[node] = -1
        if cnt < min_split or pos == 0.0 or pos == cnt:
            continue

        best_f = -1
        best_t = 0.0
        best_imp = np.inf
        visited = 0
        found = 0
        while visited < m and found < k:
            j = visited + np.random.randint(0, m - visited)
            tmp = feats[visited]
            feats[visited] = feats[j]
            feats[j] = tmp
            f = feats[visited]
            visited += 1
            vmin = np.inf
            vmax = -np.inf
            for i in range(lo, hi):
                v = X[idx[i], f]
                if v < vmin:
                    vmin = v
                if v > vmax:
                    vmax = v
            if vmax <= vmin:
                continue
            found += 1
            t = vmin + np.random.random() * (vmax - vmin)
            nl = 0.0
            pl = 0.0
            for i in range(lo, hi):
                r = idx[i]
                if X[r, f] <= t:
                    nl += 1.0
                    pl += y[r]
            nr = cnt - nl
            if nl == 0.0 or nr == 0.0:
                continue
            pr = pos - pl
            imp = nl * (1.0 - (pl / nl) ** 2 - ((nl - pl) / nl) ** 2) + nr * (
                1.0 - (pr / nr) ** 2 - ((nr - pr) / nr) ** 2
            )
            if imp < best_imp:
                best_imp = imp
                best_f = f
                best_t = t
        if best_f < 0:
            continue

        a = lo
        b = hi - 1
        while a <= b:
            if X[idx[a], best_f] <= best_t:
                a += 1
            else:
                tmp = idx[a]
                idx[a] = idx[b]
                idx[b] = tmp
                b -= 1
        feat[node] = best_f
        thr[node] = best_t
        left[node] = n_nodes
        right[node] = n_nodes + 1
        st_node[sp] = n_nodes
        st_lo[sp] = lo
        st_hi[sp] = a
        sp += 1
        st_node[sp] = n_nodes + 1
        st_lo[sp] = a
        st_hi[sp] = hi
        sp += 1
        n_nodes += 2
    return n_nodes


@njit(cache=True, nogil=True)
def _grow_forest(X, y, k, min_split, seeds, feat, thr, left, right, value, n_nodes):
    for t in range(seeds.size):
        n_nodes[t] = _grow(X, y, k, min_split, seeds[t], feat[t], thr[t], left[t], right[t], value[t])


@njit(cache=True, nogil=True)
def _leaf_values(X, feat, thr, left, right, value):
    n_trees = feat.shape[0]
    out = np.empty((n_trees, X.shape[0]))
    for t in range(n_trees):
        for i in range(X.shape[0]):
            node = 0
            while feat[t, node] >= 0:
                if X[i, feat[t, node]] <= thr[t, node]:
                    node = left[t, node]
                else:
                    node = right[t, node]
            out[t, i] = value[t, node]
    return out


def grow_forest(X, y, n_trees, k, min_split, rng):
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = X.shape[0]
    cap = 2 * n + 1
    seeds = rng.integers(0, 2**32 - 1, size=n_trees, dtype=np.int64)
    feat = np.full((n_trees, cap), -1, np.int64)
    thr = np.zeros((n_trees, cap))
    left = np.full((n_trees, cap), -1, np.int64)
    right = np.full((n_trees, cap), -1, np.int64)
    value = np.zeros((n_trees, cap))
    n_nodes = np.zeros(n_trees, np.int64)
    _grow_forest(X, y, int(k), int(min_split), seeds, feat, thr, left, right, value, n_nodes)
    size = int(n_nodes.max())
    return {
        "feature": feat[:, :size].copy(),
        "threshold": thr[:, :size].copy(),
        "left": left[:, :size].copy(),
        "right": right[:, :size].copy(),
        "value": value[:, :size].copy(),
        "n_nodes": n_nodes,
    }


def tree_scores(forest, X):
    """Per-tree leaf positive fractions, shape (n_trees, n_rows)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    return _leaf_values(X, forest["feature"], forest["threshold"], forest["left"], forest["right"], forest["value"])

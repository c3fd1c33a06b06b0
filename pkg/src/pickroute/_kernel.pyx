# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled DP sweep, a line-for-line port of the pure-Python kernel."""
import numpy as np
cimport numpy as cnp

ctypedef long long i64

cdef i64 INF = 1LL << 62


def sweep(const i64[::1] ptr, const i64[::1] nxt, const i64[::1] act, const i64[::1] rank,
          const i64[::1] stage_base, const i64[::1] stage_ctx, const i64[:, ::1] cost,
          Py_ssize_t n_states, Py_ssize_t start):
    cdef Py_ssize_t n_stages = stage_base.shape[0]
    cdef cnp.ndarray[i64, ndim=2] be_arr = np.empty((n_stages, n_states), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2] bs_arr = np.empty((n_stages, n_states), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] ev_arr = np.zeros(n_stages, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] cur_arr = np.full(n_states, INF, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] new_arr = np.empty(n_states, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] br_arr = np.empty(n_states, dtype=np.int64)
    cdef i64[:, ::1] be = be_arr
    cdef i64[:, ::1] bs = bs_arr
    cdef i64[::1] ev = ev_arr
    cdef i64[::1] cur = cur_arr
    cdef i64[::1] new = new_arr
    cdef i64[::1] best_rank = br_arr
    cdef i64[::1] tmp
    cdef Py_ssize_t t, s, e, k, base, ctx, lo, hi
    cdef i64 cs, c, ns, count
    cur[start] = 0
    for t in range(n_stages):
        base = stage_base[t]
        ctx = stage_ctx[t]
        for s in range(n_states):
            new[s] = INF
            best_rank[s] = INF
            be[t, s] = -1
            bs[t, s] = -1
        count = 0
        for s in range(n_states):
            cs = cur[s]
            if cs >= INF:
                continue
            lo = ptr[base + s]
            hi = ptr[base + s + 1]
            count += hi - lo
            for e in range(lo, hi):
                k = 4 * e + ctx
                ns = nxt[k]
                if ns < 0:
                    continue
                c = cs + cost[t, act[k]]
                if c < new[ns] or (c == new[ns] and rank[e] < best_rank[ns]):
                    new[ns] = c
                    best_rank[ns] = rank[e]
                    be[t, ns] = e
                    bs[t, ns] = s
        ev[t] = count
        tmp = cur
        cur = new
        new = tmp
    return np.asarray(cur).copy(), be_arr, bs_arr, ev_arr

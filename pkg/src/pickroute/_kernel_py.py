"""Pure-Python DP sweep; the reference for the compiled kernel."""
import numpy as np

INF = 2 ** 62


def sweep(ptr, nxt, act, rank, stage_base, stage_ctx, cost, n_states, start):
    """Relax every stage of a stage program.

    ``ptr[stage_base[t] + s] : ptr[stage_base[t] + s + 1]`` are the entries
    available to state ``s`` at stage ``t``; ``nxt`` and ``act`` are
    flattened ``(entries, 4)`` arrays indexed by the stage context.  Ties on
    cost keep the entry of lower ``rank``.

    Returns ``(best, back_entry, back_state, evaluations)``.
    """
    ptr_l, nxt_l, act_l, rank_l = ptr.tolist(), nxt.tolist(), act.tolist(), rank.tolist()
    cost_l = cost.tolist()
    n_stages = len(stage_base)
    back_entry = [[-1] * n_states for _ in range(n_stages)]
    back_state = [[-1] * n_states for _ in range(n_stages)]
    evaluations = [0] * n_stages
    cur = [INF] * n_states
    cur[start] = 0
    for t in range(n_stages):
        base = int(stage_base[t])
        ctx = int(stage_ctx[t])
        row = cost_l[t]
        new = [INF] * n_states
        best_rank = [INF] * n_states
        be, bs = back_entry[t], back_state[t]
        count = 0
        for s in range(n_states):
            cs = cur[s]
            if cs >= INF:
                continue
            lo, hi = ptr_l[base + s], ptr_l[base + s + 1]
            count += hi - lo
            for e in range(lo, hi):
                k = 4 * e + ctx
                ns = nxt_l[k]
                if ns < 0:
                    continue
                c = cs + row[act_l[k]]
                if c < new[ns] or (c == new[ns] and rank_l[e] < best_rank[ns]):
                    new[ns] = c
                    best_rank[ns] = rank_l[e]
                    be[ns] = e
                    bs[ns] = s
        evaluations[t] = count
        cur = new
    return (np.array(cur, dtype=np.int64), np.array(back_entry, dtype=np.int64).reshape(n_stages, n_states),
            np.array(back_state, dtype=np.int64).reshape(n_stages, n_states),
            np.array(evaluations, dtype=np.int64))

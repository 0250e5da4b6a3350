"""Compiled CDCL core.

Everything lives in flat numpy arrays so the search runs under numba.
Literal encoding: ``2*v`` is variable ``v`` (0-based) positive, ``2*v+1``
its negation. Watch lists are intrusive linked lists of nodes ``2*ci+j``,
node ``(ci, j)`` hanging off the literal at position ``j`` of clause ``ci``.
"""

import numpy as np
from numba import njit

SAT = 1
UNSAT = 0
UNKNOWN = 2

_VAR_DECAY = 0.8
_CLA_DECAY = 0.999
_RESTART_BASE = 100


@njit(cache=True)
def _luby(y, x):
    size = 1
    seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y ** seq


@njit(cache=True)
def _heap_up(heap, pos, act, i):
    v = heap[i]
    while i > 0:
        parent = (i - 1) >> 1
        pv = heap[parent]
        if act[pv] > act[v] or (act[pv] == act[v] and pv < v):
            break
        heap[i] = pv
        pos[pv] = i
        i = parent
    heap[i] = v
    pos[v] = i


@njit(cache=True)
def _heap_down(heap, pos, act, size, i):
    v = heap[i]
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        r = child + 1
        if r < size:
            cv, rv = heap[child], heap[r]
            if act[rv] > act[cv] or (act[rv] == act[cv] and rv < cv):
                child = r
        cv = heap[child]
        if act[v] > act[cv] or (act[v] == act[cv] and v < cv):
            break
        heap[i] = cv
        pos[cv] = i
        i = child
    heap[i] = v
    pos[v] = i


@njit(cache=True)
def _grow_int(arr, need):
    if need <= arr.shape[0]:
        return arr
    size = arr.shape[0] * 2
    while size < need:
        size *= 2
    out = np.empty(size, arr.dtype)
    out[: arr.shape[0]] = arr
    return out


@njit(cache=True)
def _grow_float(arr, need):
    if need <= arr.shape[0]:
        return arr
    size = arr.shape[0] * 2
    while size < need:
        size *= 2
    out = np.zeros(size, arr.dtype)
    out[: arr.shape[0]] = arr
    return out


@njit(cache=True)
def solve_kernel(nv, flat, starts, init_act, max_conflicts):
    """Run CDCL on clauses ``flat[starts[i]:starts[i+1]]`` (encoded literals).

    Input clauses must be free of duplicate literals and tautologies and
    have length >= 1. Returns ``(status, values, conflicts)`` where
    ``values[v]`` is 0/1 for SAT.
    """
    nclauses = starts.shape[0] - 1
    nlits = 2 * nv

    assigns = np.full(nv, -1, np.int8)
    level = np.zeros(nv, np.int32)
    reason = np.full(nv, -1, np.int64)
    phase = np.zeros(nv, np.int8)
    seen = np.zeros(nv, np.int8)
    act = init_act.copy()
    trail = np.empty(nv, np.int64)
    trail_lim = np.empty(nv + 1, np.int64)
    trail_len = 0
    nlevels = 0
    qhead = 0

    heap = np.empty(nv, np.int64)
    hpos = np.full(nv, -1, np.int64)
    hsize = 0
    for v in range(nv):
        heap[hsize] = v
        hpos[v] = hsize
        hsize += 1
        _heap_up(heap, hpos, act, hsize - 1)

    cap = max(16, 2 * nclauses)
    arena = np.empty(max(64, 2 * flat.shape[0]), np.int64)
    c_start = np.empty(cap, np.int64)
    c_len = np.empty(cap, np.int64)
    c_learnt = np.zeros(cap, np.int8)
    c_deleted = np.zeros(cap, np.int8)
    c_lbd = np.zeros(cap, np.int64)
    c_act = np.zeros(cap, np.float64)
    wnext = np.full(2 * cap, -1, np.int64)
    whead = np.full(nlits, -1, np.int64)
    ncl = 0
    arena_len = 0

    var_inc = 1.0
    cla_inc = 1.0
    conflicts = 0
    values = np.zeros(nv, np.int8)

    units = np.empty(nclauses + 1, np.int64)
    nunits = 0
    for i in range(nclauses):
        s, e = starts[i], starts[i + 1]
        if e - s == 1:
            units[nunits] = flat[s]
            nunits += 1
            continue
        for j in range(s, e):
            arena[arena_len + j - s] = flat[j]
        c_start[ncl] = arena_len
        c_len[ncl] = e - s
        arena_len += e - s
        for j in range(2):
            node = 2 * ncl + j
            lit = arena[c_start[ncl] + j]
            wnext[node] = whead[lit]
            whead[lit] = node
        ncl += 1
    n_original = ncl

    for i in range(nunits):
        lit = units[i]
        v = lit >> 1
        want = 1 - (lit & 1)
        if assigns[v] >= 0:
            if assigns[v] != want:
                return UNSAT, values, conflicts
            continue
        assigns[v] = want
        level[v] = 0
        reason[v] = -1
        trail[trail_len] = lit
        trail_len += 1

    learnt = np.empty(nv + 1, np.int64)
    stack = np.empty(nv + 1, np.int64)
    toclear = np.empty(nv + 1, np.int64)
    lvl_stamp = np.zeros(nv + 2, np.int64)
    stamp = 0
    max_learnts = max(1000.0, nclauses / 3.0)
    nlearnts = 0
    restart_count = 0
    restart_limit = _RESTART_BASE * _luby(2.0, 0)
    conflicts_since_restart = 0

    while True:
        # ---- propagate
        confl = -1
        while qhead < trail_len and confl < 0:
            p = trail[qhead]
            qhead += 1
            fl = p ^ 1
            prev = -1
            node = whead[fl]
            while node != -1:
                nxt = wnext[node]
                ci = node >> 1
                if c_deleted[ci]:
                    if prev == -1:
                        whead[fl] = nxt
                    else:
                        wnext[prev] = nxt
                    node = nxt
                    continue
                j = node & 1
                s = c_start[ci]
                other = arena[s + 1 - j]
                ov = assigns[other >> 1]
                oval = -1 if ov < 0 else ov ^ (other & 1)
                if oval == 1:
                    prev = node
                    node = nxt
                    continue
                moved = False
                for k in range(s + 2, s + c_len[ci]):
                    lk = arena[k]
                    kv = assigns[lk >> 1]
                    if kv < 0 or (kv ^ (lk & 1)) == 1:
                        arena[k] = arena[s + j]
                        arena[s + j] = lk
                        if prev == -1:
                            whead[fl] = nxt
                        else:
                            wnext[prev] = nxt
                        wnext[node] = whead[lk]
                        whead[lk] = node
                        moved = True
                        break
                if moved:
                    node = nxt
                    continue
                if oval == 0:
                    confl = ci
                    qhead = trail_len
                    break
                v = other >> 1
                assigns[v] = 1 - (other & 1)
                level[v] = nlevels
                reason[v] = ci
                trail[trail_len] = other
                trail_len += 1
                prev = node
                node = nxt

        if confl >= 0:
            conflicts += 1
            conflicts_since_restart += 1
            if nlevels == 0:
                return UNSAT, values, conflicts

            # ---- first-UIP analysis
            path = 0
            p = -1
            nl = 1
            index = trail_len - 1
            while True:
                if c_learnt[confl]:
                    c_act[confl] += cla_inc
                    if c_act[confl] > 1e20:
                        for c2 in range(ncl):
                            if c_learnt[c2]:
                                c_act[c2] *= 1e-20
                        cla_inc *= 1e-20
                s = c_start[confl]
                for k in range(s, s + c_len[confl]):
                    q = arena[k]
                    v = q >> 1
                    if p >= 0 and v == (p >> 1):
                        continue
                    if seen[v] == 0 and level[v] > 0:
                        act[v] += var_inc
                        if act[v] > 1e100:
                            for w in range(nv):
                                act[w] *= 1e-100
                            var_inc *= 1e-100
                        if hpos[v] >= 0:
                            _heap_up(heap, hpos, act, hpos[v])
                        seen[v] = 1
                        if level[v] >= nlevels:
                            path += 1
                        else:
                            learnt[nl] = q
                            nl += 1
                while seen[trail[index] >> 1] == 0:
                    index -= 1
                p = trail[index]
                index -= 1
                confl = reason[p >> 1]
                seen[p >> 1] = 0
                path -= 1
                if path <= 0:
                    break
            learnt[0] = p ^ 1

            # ---- recursive minimisation
            stamp += 1
            for i in range(1, nl):
                lvl_stamp[level[learnt[i] >> 1]] = stamp
            tc = 0
            for i in range(1, nl):
                toclear[tc] = learnt[i]
                tc += 1
            out = 1
            for i in range(1, nl):
                q = learnt[i]
                if reason[q >> 1] < 0:
                    learnt[out] = q
                    out += 1
                    continue
                top = 0
                stack[top] = q
                top += 1
                base = tc
                redundant = True
                while top > 0:
                    top -= 1
                    cur = stack[top]
                    rc = reason[cur >> 1]
                    rs = c_start[rc]
                    for k in range(rs, rs + c_len[rc]):
                        lk = arena[k]
                        vk = lk >> 1
                        if vk == (cur >> 1) or seen[vk] or level[vk] == 0:
                            continue
                        if reason[vk] >= 0 and lvl_stamp[level[vk]] == stamp:
                            seen[vk] = 1
                            stack[top] = lk
                            top += 1
                            toclear[tc] = lk
                            tc += 1
                        else:
                            redundant = False
                            break
                    if not redundant:
                        break
                if not redundant:
                    for k in range(base, tc):
                        seen[toclear[k] >> 1] = 0
                    tc = base
                    learnt[out] = q
                    out += 1
            nl = out
            for k in range(tc):
                seen[toclear[k] >> 1] = 0

            # ---- backjump level
            bt = 0
            if nl > 1:
                best = 1
                for i in range(2, nl):
                    if level[learnt[i] >> 1] > level[learnt[best] >> 1]:
                        best = i
                tmp = learnt[1]
                learnt[1] = learnt[best]
                learnt[best] = tmp
                bt = level[learnt[1] >> 1]

            # lbd
            stamp += 1
            lbd = 0
            for i in range(nl):
                lv = level[learnt[i] >> 1]
                if lvl_stamp[lv] != stamp:
                    lvl_stamp[lv] = stamp
                    lbd += 1

            # ---- cancel until bt
            if nlevels > bt:
                lim = trail_lim[bt]
                for i in range(trail_len - 1, lim - 1, -1):
                    v = trail[i] >> 1
                    phase[v] = assigns[v]
                    assigns[v] = -1
                    reason[v] = -1
                    if hpos[v] < 0:
                        heap[hsize] = v
                        hpos[v] = hsize
                        hsize += 1
                        _heap_up(heap, hpos, act, hsize - 1)
                trail_len = lim
                qhead = lim
                nlevels = bt

            first = learnt[0]
            if nl == 1:
                v = first >> 1
                assigns[v] = 1 - (first & 1)
                level[v] = 0
                reason[v] = -1
                trail[trail_len] = first
                trail_len += 1
            else:
                if ncl + 1 > c_start.shape[0]:
                    newcap = 2 * c_start.shape[0]
                    c_start = _grow_int(c_start, newcap)
                    c_len = _grow_int(c_len, newcap)
                    c_lbd = _grow_int(c_lbd, newcap)
                    c_learnt = _grow_int(c_learnt, newcap)
                    c_deleted = _grow_int(c_deleted, newcap)
                    c_act = _grow_float(c_act, newcap)
                    old = wnext.shape[0]
                    wnext = _grow_int(wnext, 2 * newcap)
                    wnext[old:] = -1
                arena = _grow_int(arena, arena_len + nl)
                for i in range(nl):
                    arena[arena_len + i] = learnt[i]
                ci = ncl
                ncl += 1
                c_start[ci] = arena_len
                c_len[ci] = nl
                c_learnt[ci] = 1
                c_deleted[ci] = 0
                c_lbd[ci] = lbd
                c_act[ci] = cla_inc
                arena_len += nl
                nlearnts += 1
                for j in range(2):
                    node = 2 * ci + j
                    lit = arena[c_start[ci] + j]
                    wnext[node] = whead[lit]
                    whead[lit] = node
                v = first >> 1
                assigns[v] = 1 - (first & 1)
                level[v] = nlevels
                reason[v] = ci
                trail[trail_len] = first
                trail_len += 1

            var_inc /= _VAR_DECAY
            cla_inc /= _CLA_DECAY

            if max_conflicts >= 0 and conflicts >= max_conflicts:
                return UNKNOWN, values, conflicts
            continue

        # ---- no conflict
        if conflicts_since_restart >= restart_limit:
            restart_count += 1
            restart_limit = _RESTART_BASE * _luby(2.0, restart_count)
            conflicts_since_restart = 0
            if nlevels > 0:
                lim = trail_lim[0]
                for i in range(trail_len - 1, lim - 1, -1):
                    v = trail[i] >> 1
                    phase[v] = assigns[v]
                    assigns[v] = -1
                    reason[v] = -1
                    if hpos[v] < 0:
                        heap[hsize] = v
                        hpos[v] = hsize
                        hsize += 1
                        _heap_up(heap, hpos, act, hsize - 1)
                trail_len = lim
                qhead = lim
                nlevels = 0

        if nlearnts - trail_len >= max_learnts:
            # ---- reduce learnt clause database
            cand = np.empty(nlearnts, np.int64)
            nc = 0
            for ci in range(n_original, ncl):
                if c_deleted[ci] or not c_learnt[ci]:
                    continue
                s = c_start[ci]
                locked = False
                for j in range(2):
                    v = arena[s + j] >> 1
                    if assigns[v] >= 0 and reason[v] == ci:
                        locked = True
                if locked or c_lbd[ci] <= 2:
                    continue
                cand[nc] = ci
                nc += 1
            keys = np.empty(nc, np.float64)
            for i in range(nc):
                ci = cand[i]
                # high lbd first, then low activity
                keys[i] = -c_lbd[ci] * 1e6 + min(c_act[ci] / cla_inc, 1.0) * 1e5 + i * 1e-9
            order = np.argsort(keys, kind="mergesort")
            for i in range(nc // 2):
                c_deleted[cand[order[i]]] = 1
                nlearnts -= 1
            max_learnts *= 1.1

        # ---- decide
        nxt_var = -1
        while hsize > 0:
            v = heap[0]
            hsize -= 1
            hpos[v] = -1
            if hsize > 0:
                heap[0] = heap[hsize]
                hpos[heap[0]] = 0
                _heap_down(heap, hpos, act, hsize, 0)
            if assigns[v] < 0:
                nxt_var = v
                break
        if nxt_var < 0:
            for v in range(nv):
                values[v] = assigns[v]
            return SAT, values, conflicts
        trail_lim[nlevels] = trail_len
        nlevels += 1
        lit = 2 * nxt_var + (1 if phase[nxt_var] == 0 else 0)
        assigns[nxt_var] = phase[nxt_var]
        level[nxt_var] = nlevels
        reason[nxt_var] = -1
        trail[trail_len] = lit
        trail_len += 1

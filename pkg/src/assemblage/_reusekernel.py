"""Compiled branch-and-bound over reuse sets.

Candidates are decided in a fixed order, include before exclude.  The state
lives in caller-owned arrays so a search can pause after a slice of nodes and
resume, which lets the caller enforce a wall-clock budget.

``status`` per object: 0 excluded or not a candidate, 1 included, 2 undecided.
``frame`` per depth: 0 fresh, 1 include tried, 2 exclude tried.
``regs`` = [depth, best, nodes, done flag].
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _bound(basic, off, sa, sb, target, status, candpos, uses, root, piece, weight, rootw):
    n = basic.shape[0]
    for i in range(n):
        if basic[i]:
            piece[i] = 1
            weight[i] = 1.0
            continue
        best = 1 << 30
        bw = 1e18
        for s in range(off[i], off[i + 1]):
            a = sa[s]
            b = sb[s]
            v = piece[a] + piece[b]
            if v < best:
                best = v
            w = weight[a] + weight[b]
            if w < bw:
                bw = w
        root[i] = best
        rootw[i] = bw
        st = status[i]
        if st == 1:
            piece[i] = 1
            weight[i] = 1.0
        elif st == 2:
            piece[i] = 1
            row = candpos[i]
            m = uses[row, target]
            for t in range(n):
                if status[t] == 1:
                    m += uses[row, t]
            if m < 1:
                m = 1
            weight[i] = 1.0 + (best - 1) / m
        else:
            piece[i] = best
            weight[i] = bw
    total = rootw[target] - 1.0
    for t in range(n):
        if status[t] == 1:
            total += rootw[t] - 1.0
    return int(np.ceil(total - 1e-9))


@njit(cache=True)
def reuse_search(basic, off, sa, sb, target, cands, candpos, uses, lower, status, frame, regs, out, slice_nodes):
    """Advance the search by at most ``slice_nodes`` nodes.

    Returns 1 when finished (``regs[3]`` set) and 0 when paused.  ``out``
    holds the include flags of the best complete reuse set found so far.
    """
    n = basic.shape[0]
    K = cands.shape[0]
    root = np.zeros(n, np.int64)
    piece = np.ones(n, np.int64)
    weight = np.ones(n, np.float64)
    rootw = np.zeros(n, np.float64)
    k = regs[0]
    used = 0
    while k >= 0:
        f = frame[k]
        if f == 0:
            if used >= slice_nodes:
                regs[0] = k
                return 0
            used += 1
            regs[2] += 1
            b = _bound(basic, off, sa, sb, target, status, candpos, uses, root, piece, weight, rootw)
            if b >= regs[1]:
                k -= 1
                continue
            if k == K:
                regs[1] = b
                for i in range(n):
                    out[i] = 1 if status[i] == 1 else 0
                if b <= lower:
                    break
                k -= 1
                continue
            status[cands[k]] = 1
            frame[k] = 1
            k += 1
            frame[k] = 0
        elif f == 1:
            status[cands[k]] = 0
            frame[k] = 2
            k += 1
            frame[k] = 0
        else:
            status[cands[k]] = 2
            frame[k] = 0
            k -= 1
    regs[0] = -1
    regs[3] = 1
    return 1

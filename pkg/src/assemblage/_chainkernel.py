"""Compiled depth-limited search for addition chains.

The search walks strictly increasing chains in descending candidate order.
Pruning:

* vertical bound: the element added with ``k`` steps left must satisfy
  ``v * 2**k >= n``;
* one-non-doubling bound: unless ``n == v * 2**k``, at least one remaining step
  is not a doubling, which caps the reachable value at
  ``max((v + prev) * 2**(k-1), 3 * v * 2**(k-2))``;
* table bound: an element at position ``i`` must have ``l(v) <= i`` whenever
  ``l(v)`` is already known;
* the last two steps are resolved in closed form (pair sums against the
  chain) instead of being expanded.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _in_chain(chain, top, r):
    lo = 0
    hi = top
    while lo <= hi:
        mid = (lo + hi) // 2
        c = chain[mid]
        if c == r:
            return True
        elif c < r:
            lo = mid + 1
        else:
            hi = mid - 1
    return False


@njit(cache=True)
def _feasible(m, prev, k, n):
    top = m << k
    if top < n:
        return False
    if top == n:
        return True
    if k == 1:
        return m + prev >= n
    a = (m + prev) << (k - 1)
    b = (3 * m) << (k - 2)
    return max(a, b) >= n


@njit(cache=True)
def search_chain(n, depth, out, known):
    """Find a chain for ``n`` of at most ``depth`` steps.

    Writes the chain into ``out`` and returns its step count, or -1 when no
    such chain exists.  ``known[v]`` holds exact lengths for ``v < len(known)``
    (zeros disable the table bound).
    """
    if n == 1:
        out[0] = 1
        return 0
    if depth <= 0:
        return -1
    maxc = (depth + 2) * (depth + 3) // 2 + 2
    chain = np.zeros(depth + 2, np.int64)
    cand = np.zeros((depth + 2, maxc), np.int64)
    ncand = np.zeros(depth + 2, np.int64)
    pos = np.zeros(depth + 2, np.int64)
    nknown = known.shape[0]
    chain[0] = 1
    lvl = 0
    gen = True
    while True:
        if gen:
            last = chain[lvl]
            left = depth - lvl
            if 2 * last >= n:
                for i in range(lvl + 1):
                    r = n - chain[i]
                    if r > 0 and _in_chain(chain, lvl, r):
                        for q in range(lvl + 1):
                            out[q] = chain[q]
                        out[lvl + 1] = n
                        return lvl + 1
            cnt = 0
            if left == 2:
                half = (n + 1) >> 1
                for i in range(lvl, -1, -1):
                    ai = chain[i]
                    if ai + ai <= last or ai + ai < half:
                        break
                    for j in range(i, -1, -1):
                        v = ai + chain[j]
                        if v <= last or v < half:
                            break
                        if v >= n:
                            continue
                        if v + v == n or _in_chain(chain, lvl, n - v):
                            for q in range(lvl + 1):
                                out[q] = chain[q]
                            out[lvl + 1] = v
                            out[lvl + 2] = n
                            return lvl + 2
            elif left > 2:
                k = left - 1
                lim = (n + (1 << k) - 1) >> k
                for i in range(lvl, -1, -1):
                    ai = chain[i]
                    if ai + ai <= last:
                        break
                    for j in range(i, -1, -1):
                        v = ai + chain[j]
                        if v <= last:
                            break
                        if v >= n or v < lim:
                            continue
                        if v < nknown and known[v] > lvl + 1:
                            continue
                        if not _feasible(v, last, k, n):
                            continue
                        dup = False
                        for q in range(cnt):
                            if cand[lvl, q] == v:
                                dup = True
                                break
                        if not dup:
                            cand[lvl, cnt] = v
                            cnt += 1
                for a in range(1, cnt):
                    x = cand[lvl, a]
                    b = a - 1
                    while b >= 0 and cand[lvl, b] < x:
                        cand[lvl, b + 1] = cand[lvl, b]
                        b -= 1
                    cand[lvl, b + 1] = x
            ncand[lvl] = cnt
            pos[lvl] = 0
            gen = False
        if pos[lvl] < ncand[lvl]:
            v = cand[lvl, pos[lvl]]
            pos[lvl] += 1
            lvl += 1
            chain[lvl] = v
            gen = True
        else:
            if lvl == 0:
                return -1
            lvl -= 1


@njit(cache=True)
def _key_greater(a, sa, b, sb):
    """(sum, components) order: is ``a`` after ``b``?"""
    if sa != sb:
        return sa > sb
    for i in range(a.shape[0]):
        if a[i] != b[i]:
            return a[i] > b[i]
    return False


@njit(cache=True)
def search_vector_chain(vec, depth, out, max_nodes, stats):
    """Vectorial analogue of ``search_chain``.

    Chains are kept sorted by (component sum, components), which loses no
    generality because operands always have smaller sums.  Returns the number
    of added terms (rows ``k..`` of ``out``), -1 when no chain of at most
    ``depth`` added terms exists, or -2 when ``max_nodes`` is exceeded.
    ``stats[0]`` receives the number of nodes expanded.
    """
    k = vec.shape[0]
    total = 0
    for i in range(k):
        total += vec[i]
    size = k + depth + 1
    chain = np.zeros((size, k), np.int64)
    sums = np.zeros(size, np.int64)
    for i in range(k):
        chain[i, i] = 1
        sums[i] = 1
    maxc = size * (size + 1) // 2 + 1
    cand = np.zeros((depth + 1, maxc, k), np.int64)
    csum = np.zeros((depth + 1, maxc), np.int64)
    ncand = np.zeros(depth + 1, np.int64)
    pos = np.zeros(depth + 1, np.int64)
    s = np.zeros(k, np.int64)
    nodes = 0
    lvl = 0
    gen = True
    while True:
        if gen:
            nodes += 1
            stats[0] = nodes
            if nodes > max_nodes:
                return -2
            m = k + lvl
            left = depth - lvl
            top = sums[m - 1]
            cnt = 0
            if left > 0 and (top << left) >= total:
                for i in range(m):
                    for j in range(i, m):
                        ok = True
                        ssum = 0
                        for c in range(k):
                            s[c] = chain[i, c] + chain[j, c]
                            if s[c] > vec[c]:
                                ok = False
                                break
                            ssum += s[c]
                        if not ok:
                            continue
                        if lvl > 0 and not _key_greater(s, ssum, chain[m - 1], top):
                            continue
                        if ssum == total:
                            # componentwise <= vec with equal sum means s == vec
                            for q in range(m):
                                for c in range(k):
                                    out[q, c] = chain[q, c]
                            for c in range(k):
                                out[m, c] = vec[c]
                            return lvl + 1
                        if left < 2 or (ssum << (left - 1)) < total:
                            continue
                        dup = False
                        for q in range(cnt):
                            if csum[lvl, q] == ssum:
                                same = True
                                for c in range(k):
                                    if cand[lvl, q, c] != s[c]:
                                        same = False
                                        break
                                if same:
                                    dup = True
                                    break
                        if dup:
                            continue
                        # insertion keeping descending (sum, components) order
                        p = cnt
                        while p > 0 and _key_greater(s, ssum, cand[lvl, p - 1], csum[lvl, p - 1]):
                            for c in range(k):
                                cand[lvl, p, c] = cand[lvl, p - 1, c]
                            csum[lvl, p] = csum[lvl, p - 1]
                            p -= 1
                        for c in range(k):
                            cand[lvl, p, c] = s[c]
                        csum[lvl, p] = ssum
                        cnt += 1
            ncand[lvl] = cnt
            pos[lvl] = 0
            gen = False
        if pos[lvl] < ncand[lvl]:
            q = pos[lvl]
            pos[lvl] += 1
            m = k + lvl
            for c in range(k):
                chain[m, c] = cand[lvl, q, c]
            sums[m] = csum[lvl, q]
            lvl += 1
            gen = True
        else:
            if lvl == 0:
                return -1
            lvl -= 1

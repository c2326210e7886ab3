"""Compiled inner loops (numba).

Two kernels:

* ``fp_search`` walks the Fincke–Pohst tree.  Interior levels prune with
  floating-point intervals widened by ``SLACK`` (so they only ever admit a
  superset of the true candidates); the last coordinate is solved with an
  exact integer quadratic, so every reported vector and every count is exact.
* ``tuple_count`` counts ordered tuples drawn from per-column vector pools
  whose pairwise inner products are encoded as bitset masks.

Callers must check the int64 safety preconditions documented on each wrapper.
"""
from __future__ import annotations

import numpy as np

try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

SLACK = 1e-6
# tuple totals beyond this are handed back to the big-integer path
LIMIT = 2 ** 62

if numba is not None:

    @njit(cache=True)
    def _isqrt64(v):
        if v <= 0:
            return 0
        r = np.int64(np.sqrt(np.float64(v)))
        while r * r > v:
            r -= 1
        while (r + 1) * (r + 1) <= v:
            r += 1
        return r

    @njit(cache=True)
    def _fp_walk(low, d, gram, bound, exact, out, fill):
        n = d.shape[0]
        x = np.zeros(n, np.int64)
        hi = np.zeros(n, np.int64)
        rem = np.zeros(n + 1)
        pn = np.zeros(n + 1, np.int64)
        gx = np.zeros((n + 1, n), np.int64)
        flag = np.zeros(n + 1, np.bool_)
        rem[n] = bound + SLACK
        flag[n] = True
        count = 0

        i = n - 1
        # open level i
        c = 0.0
        r = np.sqrt(rem[i + 1] / d[i]) + SLACK
        lo = np.int64(np.ceil(-c - r))
        hi[i] = np.int64(np.floor(-c + r))
        if lo < 0:
            lo = 0
        x[i] = lo
        while True:
            if x[i] > hi[i]:
                i += 1
                if i == n:
                    break
                x[i] += 1
                continue
            c = 0.0
            for j in range(i + 1, n):
                c += low[j, i] * x[j]
            y = x[i] + c
            left = rem[i + 1] - d[i] * y * y
            if left < -SLACK:
                x[i] += 1
                continue
            rem[i] = left
            xi = x[i]
            flag[i] = flag[i + 1] and xi == 0
            pn[i] = pn[i + 1] + 2 * xi * gx[i + 1, i] + xi * xi * gram[i, i]
            for k in range(n):
                gx[i, k] = gx[i + 1, k] + xi * gram[i, k]
            if i == 1:
                # exact last coordinate: (g00·x0 + gx0)² ≤ or = disc
                g00 = gram[0, 0]
                b0 = gx[1, 0]
                disc = b0 * b0 - g00 * (pn[1] - bound)
                if disc >= 0:
                    s = _isqrt64(disc)
                    if exact:
                        if s * s == disc:
                            for sgn in (1, -1):
                                if s == 0 and sgn == -1:
                                    break
                                num = sgn * s - b0
                                if num % g00 == 0:
                                    x0 = num // g00
                                    if flag[1] and x0 <= 0:
                                        continue
                                    if fill:
                                        for k in range(n):
                                            out[count, k] = x[k]
                                        out[count, 0] = x0
                                    count += 1
                    else:
                        a = -((s + b0) // g00)
                        bb = (s - b0) // g00
                        if flag[1] and a < 1:
                            a = 1
                        if bb >= a:
                            if fill:
                                for x0 in range(a, bb + 1):
                                    for k in range(n):
                                        out[count, k] = x[k]
                                    out[count, 0] = x0
                                    count += 1
                            else:
                                count += bb - a + 1
                x[i] += 1
                continue
            # descend
            i -= 1
            c = 0.0
            for j in range(i + 1, n):
                c += low[j, i] * x[j]
            r = np.sqrt(max(rem[i + 1], 0.0) / d[i]) + SLACK
            lo = np.int64(np.ceil(-c - r))
            hi[i] = np.int64(np.floor(-c + r))
            if flag[i + 1] and lo < 0:
                lo = 0
            x[i] = lo
        return count

    @njit(cache=True)
    def _popcount(v):
        v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
        v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
        v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return np.int64((v * np.uint64(0x0101010101010101)) >> np.uint64(56))

    @njit(cache=True)
    def _ctz(v):
        # v has exactly one bit set
        return _popcount(v - np.uint64(1))

    @njit(cache=True)
    def _tuple_walk(n, full, masks, w_lo, w_hi):
        # level-0 candidates are restricted to words [w_lo, w_hi)
        nw = full.shape[1]
        cand = np.zeros((n, n, nw), np.uint64)
        for k in range(n):
            for w in range(nw):
                cand[0, k, w] = full[k, w]
        word = np.zeros(n, np.int64)
        bits = np.zeros(n, np.uint64)
        total = np.int64(0)
        level = 0
        word[0] = w_lo
        bits[0] = cand[0, 0, w_lo]
        one = np.uint64(1)
        while level >= 0:
            if bits[level] == 0:
                word[level] += 1
                if word[level] >= (w_hi if level == 0 else nw):
                    level -= 1
                    continue
                bits[level] = cand[level, level, word[level]]
                continue
            b = bits[level]
            low = b & (~b + one)
            bits[level] = b ^ low
            idx = word[level] * 64 + _ctz(low)
            nxt = level + 1
            dead = False
            for k in range(nxt, n):
                any_bit = np.uint64(0)
                for w in range(nw):
                    v = cand[level, k, w] & masks[level, k, idx, w]
                    cand[nxt, k, w] = v
                    any_bit |= v
                if any_bit == 0:
                    dead = True
                    break
            if dead:
                continue
            if nxt == n - 1:
                for w in range(nw):
                    total += _popcount(cand[nxt, n - 1, w])
                if total > LIMIT:
                    return -1
                continue
            level = nxt
            word[level] = 0
            bits[level] = cand[level, level, 0]
        return total

    @njit(cache=True, parallel=True)
    def _tuple_par(n, full, masks):
        nw = full.shape[1]
        parts = np.zeros(nw, np.int64)
        for w in numba.prange(nw):
            parts[w] = _tuple_walk(n, full, masks, w, w + 1)
        total = np.int64(0)
        for w in range(nw):
            if parts[w] < 0 or total > LIMIT - parts[w]:
                return -1
            total += parts[w]
        return total


def available() -> bool:
    return numba is not None


def fp_search(low: np.ndarray, d: np.ndarray, gram: np.ndarray, bound: int,
              exact: bool, collect: bool):
    """Half enumeration (one of ``±x``) of vectors with norm ``<= bound`` (``== bound`` if exact).

    Requires rank >= 2 and all intermediate integers to fit in int64; the
    caller guarantees ``bound`` and the Gram entries are small.
    """
    empty = np.zeros((0, low.shape[0]), np.int64)
    count = _fp_walk(low, d, gram, np.int64(bound), exact, empty, False)
    if not collect:
        return count
    out = np.zeros((count, low.shape[0]), np.int64)
    _fp_walk(low, d, gram, np.int64(bound), exact, out, True)
    return out


def tuple_count(full: np.ndarray, masks: np.ndarray, threads: int = 1) -> int | None:
    """Number of tuples ``(i_0, …, i_{n-1})`` with ``i_k`` in ``full[k]`` and
    ``i_k`` in ``masks[j, k, i_j]`` for all ``j < k`` (bit ``i`` of a row
    lives in word ``i // 64``, position ``i % 64``).

    ``n >= 2``.  Returns ``None`` if the total would pass ``LIMIT``.  With
    ``threads > 1`` level-0 words are shared out across numba threads; the
    integer sum is the same in any order.
    """
    n = full.shape[0]
    if threads > 1:
        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
        total = int(_tuple_par(n, full, masks))
    else:
        total = int(_tuple_walk(n, full, masks, 0, full.shape[1]))
    return None if total < 0 else total

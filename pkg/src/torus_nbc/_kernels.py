"""Compiled inner loops: survival classification, fault trials, subset search.

Everything here is numba-compiled and operates on flat arrays only.  The
readable reference implementations live in :mod:`torus_nbc.graphs` and
:mod:`torus_nbc._rng`; the test suite pins kernel and reference together.

All kernels release the GIL, and none of them shares mutable state across
calls, so chunked work can be farmed out to a thread pool with results
written into disjoint slices of preallocated arrays.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from ._rng import GOLDEN as _GOLDEN_INT

U64 = np.uint64
GOLDEN = U64(_GOLDEN_INT)
_M1 = U64(0xBF58476D1CE4E5B9)
_M2 = U64(0x94D049BB133111EB)

# classification codes; graphs.GraphState mirrors these values
EMPTY = 0
COMPLETE = 1
DISCONNECTED = 2
OTHER = 3


@njit(cache=True, nogil=True, inline="always")
def _mix64(z):
    z = z + GOLDEN
    z = (z ^ (z >> U64(30))) * _M1
    z = (z ^ (z >> U64(27))) * _M2
    return z ^ (z >> U64(31))


@njit(cache=True, nogil=True, inline="always")
def _next_u64(state):
    state = state + GOLDEN
    z = (state ^ (state >> U64(30))) * _M1
    z = (z ^ (z >> U64(27))) * _M2
    return z ^ (z >> U64(31)), state


@njit(cache=True, nogil=True, inline="always")
def _randbelow(state, n):
    # unbiased bounded draw by rejection; n is uint64, n >= 1
    threshold = (U64(0) - n) % n
    while True:
        x, state = _next_u64(state)
        if x >= threshold:
            return x % n, state


@njit(cache=True, nogil=True)
def classify_kernel(nbr, alive, alive_count, queue, seen, stamp):
    """Classify the subgraph induced by ``alive``.

    ``seen`` is stamp-based visited scratch: entries equal to ``stamp``
    mean visited in this call, so the array never needs clearing between
    calls as long as the caller increments ``stamp`` each time.
    """
    v_total = nbr.shape[0]
    deg = nbr.shape[1]
    if alive_count == 0:
        return EMPTY
    first = -1
    if alive_count <= 3:
        # cliques in these meshes never exceed 3 vertices, so completeness
        # is out of reach for anything larger
        edges2 = 0
        for v in range(v_total):
            if alive[v] == 1:
                if first < 0:
                    first = v
                for e in range(deg):
                    if alive[nbr[v, e]] == 1:
                        edges2 += 1
        if edges2 == alive_count * (alive_count - 1):
            return COMPLETE
    else:
        for v in range(v_total):
            if alive[v] == 1:
                first = v
                break
    head = 0
    tail = 1
    queue[0] = first
    seen[first] = stamp
    reached = 1
    while head < tail:
        u = queue[head]
        head += 1
        for e in range(deg):
            w = nbr[u, e]
            if alive[w] == 1 and seen[w] != stamp:
                seen[w] = stamp
                queue[tail] = w
                tail += 1
                reached += 1
    if reached == alive_count:
        return OTHER
    return DISCONNECTED


@njit(cache=True, nogil=True, inline="always")
def _pool_drop(pool, pos, pool_size, v):
    # swap v with the last in-pool entry; returns the shrunk size
    j = pos[v]
    last = pool_size - 1
    w = pool[last]
    pool[j] = w
    pos[w] = j
    pool[last] = v
    pos[v] = last
    return last


@njit(cache=True, nogil=True)
def trial_kernel(nbr, trial_seed, policy, alive, pool, pos, queue, seen, stamp, sources):
    """One fault-accumulation trial; returns ``(mu, terminal, stamp)``.

    policy 0 draws sources from vertices not yet chosen as a source;
    policy 1 draws only from vertices still alive.  Scratch arrays are
    caller-owned so chunk loops can reuse them.
    """
    v_total = nbr.shape[0]
    deg = nbr.shape[1]
    state = trial_seed
    for i in range(v_total):
        alive[i] = 1
        pool[i] = i
        pos[i] = i
    alive_count = v_total
    pool_size = v_total
    mu = 0
    while True:
        # pool cannot empty before a terminal class: exhausting it would
        # mean every vertex is faulty, which classifies as empty earlier
        idx, state = _randbelow(state, U64(pool_size))
        v = pool[idx]
        sources[mu] = v
        mu += 1
        changed = False
        if alive[v] == 1:
            alive[v] = 0
            alive_count -= 1
            changed = True
            if policy == 1:
                pool_size = _pool_drop(pool, pos, pool_size, v)
        if policy == 0:
            pool_size = _pool_drop(pool, pos, pool_size, v)
        for e in range(deg):
            w = nbr[v, e]
            if alive[w] == 1:
                alive[w] = 0
                alive_count -= 1
                changed = True
                if policy == 1:
                    pool_size = _pool_drop(pool, pos, pool_size, w)
        if changed:
            stamp += 1
            cls = classify_kernel(nbr, alive, alive_count, queue, seen, stamp)
            if cls != OTHER:
                return mu, cls, stamp


@njit(cache=True, nogil=True)
def trial_chunk_kernel(nbr, master_seed, start, count, policy, mu_out, cls_out):
    """Run trials ``start .. start+count-1`` into per-trial result slots.

    Each trial reseeds from the master stream by its own index, so the
    mapping of trials to chunks (and chunks to threads) cannot change any
    result.
    """
    v_total = nbr.shape[0]
    alive = np.empty(v_total, np.uint8)
    pool = np.empty(v_total, np.int64)
    pos = np.empty(v_total, np.int64)
    queue = np.empty(v_total, np.int64)
    seen = np.zeros(v_total, np.int64)
    sources = np.empty(v_total, np.int64)
    stamp = 0
    for t in range(count):
        sub = _mix64(master_seed + U64(start + t) * GOLDEN)
        mu, cls, stamp = trial_kernel(
            nbr, sub, policy, alive, pool, pos, queue, seen, stamp, sources
        )
        mu_out[start + t] = mu
        cls_out[start + t] = cls


@njit(cache=True, nogil=True)
def single_trial_kernel(nbr, trial_seed, policy, sources_out):
    """One trial with its source sequence captured; returns ``(mu, terminal)``."""
    v_total = nbr.shape[0]
    alive = np.empty(v_total, np.uint8)
    pool = np.empty(v_total, np.int64)
    pos = np.empty(v_total, np.int64)
    queue = np.empty(v_total, np.int64)
    seen = np.zeros(v_total, np.int64)
    mu, cls, _ = trial_kernel(
        nbr, trial_seed, policy, alive, pool, pos, queue, seen, 1, sources_out
    )
    return mu, cls


@njit(cache=True, nogil=True, inline="always")
def _colex_unrank(rank, k, binom, comb):
    # fill comb[0..k-1] (ascending) with the rank-th k-subset in colex order
    r = rank
    for j in range(k, 0, -1):
        c = j - 1
        while binom[c + 1, j] <= r:
            c += 1
        comb[j - 1] = c
        r -= binom[c, j]


@njit(cache=True, nogil=True, inline="always")
def _colex_next(comb, k):
    for j in range(k):
        nxt = comb[j] + 1
        if j + 1 < k and nxt == comb[j + 1]:
            continue
        comb[j] = nxt
        for i in range(j):
            comb[i] = i
        return


@njit(cache=True, nogil=True)
def search_chunk_kernel(nbr, k, rank_start, rank_count, binom, best_out):
    """Scan ``rank_count`` source sets of size ``k+1`` in colex rank order.

    Every candidate set contains vertex 0 plus ``k`` vertices drawn from
    ``1..v_total-1`` (fixing vertex 0 is sound for these vertex-transitive
    graphs, and keeps the search space a single combination level).
    Returns the number of candidates whose survival graph left the
    ordinary class; ``best_out`` (caller-initialized to -1) receives the
    lexicographically least such source set, compared as sorted flat
    tuples, when there was at least one hit in this chunk.
    """
    v_total = nbr.shape[0]
    deg = nbr.shape[1]
    comb = np.empty(max(k, 1), np.int64)
    cand = np.empty(k + 1, np.int64)
    alive = np.empty(v_total, np.uint8)
    queue = np.empty(v_total, np.int64)
    seen = np.zeros(v_total, np.int64)
    stamp = 0
    hits = 0
    if k > 0:
        _colex_unrank(rank_start, k, binom, comb)
    for it in range(rank_count):
        cand[0] = 0
        for j in range(k):
            cand[j + 1] = comb[j] + 1
        for i in range(v_total):
            alive[i] = 1
        alive_count = v_total
        for j in range(k + 1):
            s = cand[j]
            if alive[s] == 1:
                alive[s] = 0
                alive_count -= 1
            for e in range(deg):
                w = nbr[s, e]
                if alive[w] == 1:
                    alive[w] = 0
                    alive_count -= 1
        stamp += 1
        cls = classify_kernel(nbr, alive, alive_count, queue, seen, stamp)
        if cls != OTHER:
            hits += 1
            if best_out[0] < 0:
                take = True
            else:
                take = False
                for j in range(k + 1):
                    if cand[j] != best_out[j]:
                        take = cand[j] < best_out[j]
                        break
            if take:
                for j in range(k + 1):
                    best_out[j] = cand[j]
        if it + 1 < rank_count and k > 0:
            _colex_next(comb, k)
    return hits

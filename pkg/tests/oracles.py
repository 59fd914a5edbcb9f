"""Independent reference implementations used to check the library.

Everything here works from the adjacency definition alone, with plain
Python data structures, and deliberately shares no code with the package:
no neighbor tables, no flow machinery, no compiled kernels.
"""
from __future__ import annotations

import itertools
from collections import deque


def all_vertices(dims):
    return list(itertools.product(*(range(d) for d in dims)))


def adjacent(dims, u, v):
    """Adjacency straight from the definition."""
    diffs = 0
    for x, y, d in zip(u, v, dims):
        if x == y:
            continue
        if (x - y) % d not in (1, d - 1):
            return False
        diffs += 1
    return diffs == 1


def neighbors(dims, v):
    return {u for u in all_vertices(dims) if adjacent(dims, u, v)}


def closed_neighborhood(dims, sources):
    out = set(sources)
    for s in sources:
        out |= neighbors(dims, s)
    return out


def survivors(dims, sources):
    return set(all_vertices(dims)) - closed_neighborhood(dims, sources)


def components(dims, alive):
    """Connected components of the induced subgraph, as a list of sets."""
    alive = set(alive)
    seen = set()
    comps = []
    for start in alive:
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        q = deque([start])
        while q:
            u = q.popleft()
            for w in neighbors(dims, u):
                if w in alive and w not in seen:
                    seen.add(w)
                    comp.add(w)
                    q.append(w)
        comps.append(comp)
    return comps


def is_connected(dims, alive):
    return len(components(dims, alive)) <= 1


def is_complete(dims, alive):
    return all(
        adjacent(dims, u, v) for u, v in itertools.combinations(alive, 2)
    )


def classify(dims, alive):
    """Returns one of 'empty', 'complete', 'disconnected', 'other'."""
    if not alive:
        return "empty"
    if is_complete(dims, alive):
        return "complete"
    if not is_connected(dims, alive):
        return "disconnected"
    return "other"


def vertex_connectivity(dims, alive):
    """Brute-force connectivity: smallest vertex set whose removal
    disconnects the induced subgraph or leaves a single vertex.

    Exponential in the alive count; keep it at a dozen vertices or so.
    """
    alive = set(alive)
    a = len(alive)
    if a == 0:
        return 0
    if not is_connected(dims, alive):
        return 0
    if is_complete(dims, alive):
        return a - 1
    for size in range(a - 1):
        for cut in itertools.combinations(sorted(alive), size):
            rest = alive - set(cut)
            if len(rest) <= 1 or not is_connected(dims, rest):
                return size
    return a - 1


def nb_threshold(dims, max_size):
    """Smallest source-set size whose survival graph is empty, complete,
    or disconnected; exhaustive over all subsets, no symmetry tricks.

    Returns (size, witness) or (None, None) if nothing up to max_size
    works.
    """
    verts = all_vertices(dims)
    for size in range(1, max_size + 1):
        for cand in itertools.combinations(verts, size):
            if classify(dims, survivors(dims, cand)) != "other":
                return size, cand
    return None, None

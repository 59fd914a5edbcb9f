"""Unit-capacity max flow on vertex-split graphs; exact vertex connectivity.

Internally removed vertices are modeled the classic way: each alive vertex
``v`` splits into ``in(v) = 2i`` and ``out(v) = 2i+1`` (``i`` its position
in the ascending alive list) joined by a capacity-1 arc, and each
undirected edge ``{u, w}`` becomes two independent capacity-1 arcs
``out(u) -> in(w)`` and ``out(w) -> in(u)``.  Arcs are stored in pairs
(forward ``2p``, residual reverse ``2p+1``), in a fixed creation order:
split arcs by ascending vertex, then edge arcs by ascending tail and head.
Every tie-break downstream (path decomposition order, in particular)
inherits from this ordering, which is what makes results reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

NO_CUTOFF = 1 << 60


@dataclass(frozen=True)
class SplitGraph:
    """Arc-level representation of an alive-induced subgraph."""

    n_nodes: int
    estart: np.ndarray  # (n_nodes+1,) CSR offsets into eadj
    eadj: np.ndarray  # arc ids grouped by tail node, ascending id
    eto: np.ndarray  # head node of each arc
    ecap: np.ndarray  # template capacities; copy before running a flow
    alive_list: np.ndarray  # ascending flat indices of alive vertices
    idx_of: np.ndarray  # flat -> alive index, -1 for removed
    degrees: np.ndarray  # alive-induced degree per alive vertex
    super_node: Optional[int]  # target-side collector node, if any


def build_split_graph(nbr: np.ndarray, alive_mask: np.ndarray,
                      collect: Optional[np.ndarray] = None) -> SplitGraph:
    """Build the split-arc structure for the subgraph induced by
    ``alive_mask``.

    ``collect``, if given, is an array of alive flat indices Y: a collector
    node is appended with a capacity-1 arc ``in(y) -> collector`` for each
    ``y``, and the split arcs of Y are zeroed so flows must terminate on
    hitting Y.
    """
    v_total = nbr.shape[0]
    deg = nbr.shape[1]
    alive_list = np.flatnonzero(alive_mask).astype(np.int64)
    a = alive_list.shape[0]
    idx_of = np.full(v_total, -1, dtype=np.int64)
    idx_of[alive_list] = np.arange(a, dtype=np.int64)

    rows = nbr[alive_list]  # (a, deg) flat neighbor ids
    amask = alive_mask[rows]
    src = np.repeat(np.arange(a, dtype=np.int64), deg)[amask.ravel()]
    dst = idx_of[rows.ravel()[amask.ravel()]]
    degrees = np.bincount(src, minlength=a).astype(np.int64)

    split_tails = 2 * np.arange(a, dtype=np.int64)
    split_heads = split_tails + 1
    fwd_tails = [split_tails, 2 * src + 1]
    fwd_heads = [split_heads, 2 * dst]
    fwd_caps = [np.ones(a, dtype=np.int64), np.ones(src.shape[0], dtype=np.int64)]

    n_nodes = 2 * a
    super_node = None
    if collect is not None:
        super_node = 2 * a
        n_nodes = 2 * a + 1
        y_idx = idx_of[np.asarray(collect, dtype=np.int64)]
        fwd_caps[0][y_idx] = 0  # flows end at collector members
        fwd_tails.append(2 * y_idx)
        fwd_heads.append(np.full(y_idx.shape[0], super_node, dtype=np.int64))
        fwd_caps.append(np.ones(y_idx.shape[0], dtype=np.int64))

    ft = np.concatenate(fwd_tails)
    fh = np.concatenate(fwd_heads)
    fc = np.concatenate(fwd_caps)
    m = ft.shape[0]

    tails = np.empty(2 * m, dtype=np.int64)
    eto = np.empty(2 * m, dtype=np.int64)
    ecap = np.empty(2 * m, dtype=np.int64)
    tails[0::2] = ft
    tails[1::2] = fh
    eto[0::2] = fh
    eto[1::2] = ft
    ecap[0::2] = fc
    ecap[1::2] = 0

    counts = np.bincount(tails, minlength=n_nodes)
    estart = np.zeros(n_nodes + 1, dtype=np.int64)
    np.cumsum(counts, out=estart[1:])
    eadj = np.argsort(tails, kind="stable").astype(np.int64)

    return SplitGraph(n_nodes, estart, eadj, eto, ecap, alive_list, idx_of,
                      degrees, super_node)


@njit(cache=True, nogil=True)
def dinic_kernel(estart, eadj, eto, ecap, s, t, cutoff, level, itp, queue, stack):
    """Max flow from node ``s`` to node ``t``, stopping early once the
    value reaches ``cutoff``.  Mutates ``ecap`` into the residual and
    returns the flow value."""
    n = level.shape[0]
    flow = 0
    while flow < cutoff:
        for i in range(n):
            level[i] = -1
        head = 0
        tail = 1
        queue[0] = s
        level[s] = 0
        while head < tail:
            u = queue[head]
            head += 1
            for ai in range(estart[u], estart[u + 1]):
                k = eadj[ai]
                if ecap[k] > 0:
                    v = eto[k]
                    if level[v] < 0:
                        level[v] = level[u] + 1
                        queue[tail] = v
                        tail += 1
        if level[t] < 0:
            break
        for i in range(n):
            itp[i] = estart[i]
        depth = 0
        u = s
        while True:
            if u == t:
                for i in range(depth):
                    k = stack[i]
                    ecap[k] -= 1
                    ecap[k ^ 1] += 1
                flow += 1
                if flow >= cutoff:
                    return flow
                depth = 0
                u = s
                continue
            advanced = False
            while itp[u] < estart[u + 1]:
                k = eadj[itp[u]]
                v = eto[k]
                if ecap[k] > 0 and level[v] == level[u] + 1:
                    stack[depth] = k
                    depth += 1
                    u = v
                    advanced = True
                    break
                itp[u] += 1
            if not advanced:
                if u == s:
                    break
                level[u] = -1  # dead end, prune for the rest of the phase
                depth -= 1
                k = stack[depth]
                u = eto[k ^ 1]
                itp[u] += 1
    return flow


@njit(cache=True, nogil=True)
def connectivity_scheme_kernel(estart, eadj, eto, ecap0, n_nodes, a, s):
    """Exact vertex connectivity for a connected, non-complete alive graph.

    Runs max flow from the fixed vertex ``s`` to every vertex outside its
    closed neighborhood, then between every nonadjacent pair of neighbors
    of ``s``; the minimum over all runs is the connectivity.  ``s`` should
    be a minimum-degree vertex so the first loop is as cheap as possible.
    """
    ecap = np.empty_like(ecap0)
    level = np.empty(n_nodes, np.int64)
    itp = np.empty(n_nodes, np.int64)
    queue = np.empty(n_nodes, np.int64)
    stack = np.empty(n_nodes, np.int64)
    is_nbr = np.zeros(a, np.uint8)
    for ai in range(estart[2 * s + 1], estart[2 * s + 2]):
        k = eadj[ai]
        if k % 2 == 0:
            is_nbr[eto[k] // 2] = 1
    best = a - 1
    for t in range(a):
        if t == s or is_nbr[t] == 1:
            continue
        for q in range(ecap0.shape[0]):
            ecap[q] = ecap0[q]
        f = dinic_kernel(estart, eadj, eto, ecap, 2 * s + 1, 2 * t, best,
                         level, itp, queue, stack)
        if f < best:
            best = f
    for i in range(a):
        if is_nbr[i] == 0:
            continue
        for j in range(i + 1, a):
            if is_nbr[j] == 0:
                continue
            adjacent = False
            for ai in range(estart[2 * i + 1], estart[2 * i + 2]):
                k = eadj[ai]
                if k % 2 == 0 and eto[k] == 2 * j:
                    adjacent = True
                    break
            if adjacent:
                continue
            for q in range(ecap0.shape[0]):
                ecap[q] = ecap0[q]
            f = dinic_kernel(estart, eadj, eto, ecap, 2 * i + 1, 2 * j, best,
                             level, itp, queue, stack)
            if f < best:
                best = f
    return best


def run_max_flow(sg: SplitGraph, s_idx: int, sink_node: int,
                 cutoff: int = NO_CUTOFF) -> tuple[int, np.ndarray]:
    """Run Dinic from ``out(s_idx)`` to ``sink_node`` on a fresh capacity
    copy; returns ``(flow, residual_caps)``."""
    ecap = sg.ecap.copy()
    level = np.empty(sg.n_nodes, np.int64)
    itp = np.empty(sg.n_nodes, np.int64)
    queue = np.empty(sg.n_nodes, np.int64)
    stack = np.empty(sg.n_nodes, np.int64)
    flow = dinic_kernel(sg.estart, sg.eadj, sg.eto, ecap, 2 * s_idx + 1,
                        sink_node, cutoff, level, itp, queue, stack)
    return int(flow), ecap


def exact_connectivity(sg: SplitGraph) -> int:
    """Connectivity of a connected, non-complete split graph."""
    a = sg.alive_list.shape[0]
    s = int(np.argmin(sg.degrees))  # first minimum: lowest flat wins ties
    return int(connectivity_scheme_kernel(sg.estart, sg.eadj, sg.eto, sg.ecap,
                                          sg.n_nodes, a, s))


def decompose_paths(sg: SplitGraph, residual: np.ndarray, s_idx: int,
                    sink_node: int, flow: int) -> list[list[int]]:
    """Recover ``flow`` vertex-disjoint paths from a residual.

    Paths are returned as lists of flat vertex ids, source first.  At each
    step the walk takes the lowest-numbered usable arc, and arcs were laid
    out by ascending head flat, so route choice is deterministic: the
    lowest-flat continuation wins.
    """
    used = np.zeros(sg.ecap.shape[0] // 2, dtype=np.int64)
    for p in range(used.shape[0]):
        used[p] = sg.ecap[2 * p] - residual[2 * p]
    paths = []
    for _ in range(flow):
        path = [int(sg.alive_list[s_idx])]
        node = 2 * s_idx + 1
        while True:
            taken = -1
            for ai in range(sg.estart[node], sg.estart[node + 1]):
                k = int(sg.eadj[ai])
                if k % 2 == 0 and used[k // 2] > 0:
                    taken = k
                    break
            if taken < 0:
                raise RuntimeError("flow decomposition ran out of arcs")
            used[taken // 2] -= 1
            node = int(sg.eto[taken])
            if node % 2 == 0 and node != sg.super_node:
                path.append(int(sg.alive_list[node // 2]))
            if node == sink_node:
                break
        paths.append(path)
    return paths

"""Induced subgraphs of a mesh and the analyses that run on them.

The classification and component code here is deliberately plain Python
over the neighbor table; the compiled kernels in :mod:`torus_nbc._kernels`
repeat the classification logic for the hot loops and the test suite
holds the two implementations together.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from . import _flow
from .errors import (
    EmptyTargetSetError,
    SameVertexError,
    VertexDeadError,
)
from .mesh import Coords, Mesh, VertexLike


class GraphState(Enum):
    """Classification of an induced subgraph.

    Values match the codes used by the compiled kernels.  EMPTY means no
    vertices at all; a single vertex counts as COMPLETE.
    """

    EMPTY = 0
    COMPLETE = 1
    DISCONNECTED = 2
    OTHER = 3

    @property
    def token(self) -> str:
        return self.name.lower()

    @classmethod
    def from_token(cls, token: str) -> "GraphState":
        return cls[token.upper()]


@dataclass(frozen=True, eq=False)
class AliveGraph:
    """The subgraph of ``mesh`` induced by the vertices left alive."""

    mesh: Mesh
    alive_mask: np.ndarray

    def __post_init__(self):
        mask = np.asarray(self.alive_mask, dtype=bool)
        if mask.shape != (self.mesh.vertex_count,):
            raise ValueError(
                f"alive mask must have shape ({self.mesh.vertex_count},)"
            )
        mask = mask.copy()
        mask.setflags(write=False)
        object.__setattr__(self, "alive_mask", mask)

    @classmethod
    def full(cls, mesh: Mesh) -> "AliveGraph":
        return cls(mesh, np.ones(mesh.vertex_count, dtype=bool))

    @classmethod
    def from_vertices(cls, mesh: Mesh, vertices: Iterable[VertexLike]) -> "AliveGraph":
        mask = np.zeros(mesh.vertex_count, dtype=bool)
        for v in vertices:
            mask[mesh.as_flat(v)] = True
        return cls(mesh, mask)

    @cached_property
    def alive_count(self) -> int:
        return int(self.alive_mask.sum())

    @property
    def alive_flats(self) -> np.ndarray:
        return np.flatnonzero(self.alive_mask)

    def alive_vertices(self) -> list[Coords]:
        return [self.mesh.decode(f) for f in self.alive_flats]

    def is_alive(self, v: VertexLike) -> bool:
        return bool(self.alive_mask[self.mesh.as_flat(v)])

    def induced_neighbors(self, v: VertexLike) -> list[Coords]:
        """Alive neighbors of an alive vertex, ascending by flat index."""
        flat = self.mesh.as_flat(v)
        if not self.alive_mask[flat]:
            raise VertexDeadError(f"vertex {self.mesh.decode(flat)} is removed")
        row = self.mesh.neighbor_table[flat]
        return [self.mesh.decode(int(w)) for w in row if self.alive_mask[w]]


def connected_components(g: AliveGraph) -> list[tuple[Coords, ...]]:
    """Components of the induced subgraph, each a tuple of coordinate
    tuples ascending by flat index; components ordered by their least
    vertex."""
    table = g.mesh.neighbor_table
    seen = np.zeros(g.mesh.vertex_count, dtype=bool)
    out = []
    for start in g.alive_flats:
        start = int(start)
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        q = deque([start])
        while q:
            u = q.popleft()
            for w in table[u]:
                w = int(w)
                if g.alive_mask[w] and not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    q.append(w)
        comp.sort()
        out.append(tuple(g.mesh.decode(f) for f in comp))
    return out


def classify(g: AliveGraph) -> GraphState:
    """Classify the induced subgraph: EMPTY, COMPLETE, DISCONNECTED, or
    OTHER, checked in that order of precedence."""
    a = g.alive_count
    if a == 0:
        return GraphState.EMPTY
    flats = g.alive_flats
    # ordered adjacent pairs within the alive set
    edges2 = int(g.alive_mask[g.mesh.neighbor_table[flats]].sum())
    if edges2 == a * (a - 1):
        return GraphState.COMPLETE
    table = g.mesh.neighbor_table
    seen = np.zeros(g.mesh.vertex_count, dtype=bool)
    root = int(flats[0])
    seen[root] = True
    q = deque([root])
    reached = 1
    while q:
        u = q.popleft()
        for w in table[u]:
            w = int(w)
            if g.alive_mask[w] and not seen[w]:
                seen[w] = True
                reached += 1
                q.append(w)
    if reached < a:
        return GraphState.DISCONNECTED
    return GraphState.OTHER


def vertex_connectivity(g: AliveGraph) -> int:
    """Exact vertex connectivity of the induced subgraph.

    Degenerate cases follow the usual conventions: the empty and
    one-vertex graphs have connectivity 0, a complete graph on m vertices
    has m - 1, a disconnected graph has 0.  Everything else is settled by
    unit-capacity max flow over the vertex-split graph: flows from one
    fixed minimum-degree vertex to every vertex outside its closed
    neighborhood, plus flows between nonadjacent pairs of its neighbors.
    """
    state = classify(g)
    if state is GraphState.EMPTY:
        return 0
    if state is GraphState.COMPLETE:
        return g.alive_count - 1
    if state is GraphState.DISCONNECTED:
        return 0
    sg = _flow.build_split_graph(g.mesh.neighbor_table, g.alive_mask)
    return _flow.exact_connectivity(sg)


@dataclass(frozen=True)
class PathBundle:
    """A set of internally vertex-disjoint paths out of one source."""

    source: Coords
    targets: tuple[Coords, ...]
    paths: tuple[tuple[Coords, ...], ...]
    partial: bool

    @property
    def count(self) -> int:
        return len(self.paths)


def _require_alive(g: AliveGraph, v: VertexLike) -> int:
    flat = g.mesh.as_flat(v)
    if not g.alive_mask[flat]:
        raise VertexDeadError(f"vertex {g.mesh.decode(flat)} is removed")
    return flat


def disjoint_paths(g: AliveGraph, x: VertexLike, y: VertexLike,
                   k: Optional[int] = None) -> PathBundle:
    """A maximum set of internally disjoint paths from ``x`` to ``y`` in
    the induced subgraph, capped at ``k`` paths when given.

    ``partial`` is set when the cap cut the search short of ``k``.
    """
    xf = _require_alive(g, x)
    yf = _require_alive(g, y)
    if xf == yf:
        raise SameVertexError("need two distinct endpoints")
    if k is not None and k < 0:
        raise ValueError("path cap must be nonnegative")
    sg = _flow.build_split_graph(g.mesh.neighbor_table, g.alive_mask)
    s_idx = int(sg.idx_of[xf])
    t_idx = int(sg.idx_of[yf])
    cutoff = _flow.NO_CUTOFF if k is None else k
    flow, residual = _flow.run_max_flow(sg, s_idx, 2 * t_idx, cutoff)
    raw = _flow.decompose_paths(sg, residual, s_idx, 2 * t_idx, flow)
    paths = tuple(tuple(g.mesh.decode(f) for f in p) for p in raw)
    return PathBundle(
        source=g.mesh.decode(xf),
        targets=(g.mesh.decode(yf),),
        paths=paths,
        partial=(k is not None and flow < k),
    )


def fan(g: AliveGraph, x: VertexLike, targets: Iterable[VertexLike]) -> PathBundle:
    """Disjoint paths from ``x`` to a set of targets, one per target,
    pairwise sharing only ``x``.

    ``partial`` is set when fewer than ``len(targets)`` paths exist; the
    bundle then carries a maximum-size partial fan.
    """
    xf = _require_alive(g, x)
    yflats = sorted({_require_alive(g, y) for y in targets})
    if not yflats:
        raise EmptyTargetSetError("fan needs at least one target")
    if xf in yflats:
        raise SameVertexError("fan source cannot be one of its targets")
    sg = _flow.build_split_graph(g.mesh.neighbor_table, g.alive_mask,
                                 collect=np.array(yflats, dtype=np.int64))
    s_idx = int(sg.idx_of[xf])
    flow, residual = _flow.run_max_flow(sg, s_idx, sg.super_node)
    raw = _flow.decompose_paths(sg, residual, s_idx, sg.super_node, flow)
    paths = tuple(tuple(g.mesh.decode(f) for f in p) for p in raw)
    return PathBundle(
        source=g.mesh.decode(xf),
        targets=tuple(g.mesh.decode(f) for f in yflats),
        paths=paths,
        partial=(flow < len(yflats)),
    )


def validate_path_bundle(g: AliveGraph, bundle: PathBundle) -> None:
    """Check a path bundle against the graph it claims to live in.

    Checks run straight off the adjacency definition, not the flow
    machinery, so a bundle this accepts is a genuine certificate.  Raises
    ``ValueError`` on the first violation.
    """
    m = g.mesh
    src = m.as_coords(bundle.source)
    target_set = {m.as_coords(t) for t in bundle.targets}
    if not g.is_alive(src):
        raise ValueError("bundle source is not alive")
    for t in target_set:
        if not g.is_alive(t):
            raise ValueError(f"bundle target {t} is not alive")
    for p in bundle.paths:
        if len(p) < 2:
            raise ValueError("paths must have at least two vertices")
        if m.as_coords(p[0]) != src:
            raise ValueError(f"path {p} does not start at the source")
        if m.as_coords(p[-1]) not in target_set:
            raise ValueError(f"path {p} does not end at a target")
        if len(set(p)) != len(p):
            raise ValueError(f"path {p} repeats a vertex")
        for u, w in zip(p, p[1:]):
            if not g.is_alive(u) or not g.is_alive(w):
                raise ValueError(f"path {p} passes through a removed vertex")
            if not m.adjacent(u, w):
                raise ValueError(f"path {p} has non-adjacent step {u} -> {w}")
    ends = [m.as_coords(p[-1]) for p in bundle.paths]
    if len(target_set) > 1 and len(set(ends)) != len(ends):
        raise ValueError("fan paths must end at pairwise distinct targets")
    for i, p in enumerate(bundle.paths):
        for q in bundle.paths[i + 1 :]:
            shared = set(p) & set(q)
            allowed = {src}
            if p[-1] == q[-1]:
                allowed.add(p[-1])
            if not shared <= allowed:
                raise ValueError(
                    f"paths share interior vertices: {sorted(shared - allowed)}"
                )

"""Neighbor-fault analysis: survival graphs, exact thresholds, witnesses.

A fault set is a set U of source vertices; everything in the closed
neighborhood N[U] is faulty.  The survival graph is the mesh minus N[U],
and the neighbor-fault threshold of a mesh is the size of the smallest U
whose survival graph is disconnected, complete, or empty.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import _flow, _kernels
from .errors import (
    BudgetExceededError,
    LayersNotAdjacentError,
    PreconditionViolatedError,
    SameVertexError,
    UnsupportedMeshError,
)
from .graphs import AliveGraph, GraphState, classify
from .mesh import Coords, Mesh, PartitionView, VertexLike

DEFAULT_SUBSET_BUDGET = 10_000_000
_SEARCH_CHUNK = 1 << 16
_BINOM_CLAMP = 1 << 62


@dataclass(frozen=True, eq=False)
class FaultSet:
    """A set of fault sources together with its closed neighborhood."""

    mesh: Mesh
    sources: tuple[Coords, ...]  # deduplicated, ascending by flat index
    closed_mask: np.ndarray  # True at every vertex of N[U]

    @property
    def size(self) -> int:
        return len(self.sources)

    @property
    def closed_count(self) -> int:
        return int(self.closed_mask.sum())

    def closed_vertices(self) -> list[Coords]:
        return [self.mesh.decode(int(f)) for f in np.flatnonzero(self.closed_mask)]


def closed_neighborhood(mesh: Mesh, sources: Iterable[VertexLike]) -> FaultSet:
    """Build the fault set for the given sources."""
    flats = sorted({mesh.as_flat(v) for v in sources})
    mask = np.zeros(mesh.vertex_count, dtype=bool)
    for f in flats:
        mask[f] = True
        mask[mesh.neighbor_table[f]] = True
    return FaultSet(mesh, tuple(mesh.decode(f) for f in flats), mask)


@dataclass(frozen=True, eq=False)
class SurvivalGraph(AliveGraph):
    """The subgraph left after removing a fault set's closed neighborhood."""

    faults: FaultSet


def survival_graph(mesh: Mesh, sources: Iterable[VertexLike]) -> SurvivalGraph:
    fs = closed_neighborhood(mesh, sources)
    return SurvivalGraph(mesh, ~fs.closed_mask, fs)


def common_neighbor_count(mesh: Mesh, x: VertexLike, y: VertexLike) -> int:
    """Number of common neighbors of two distinct vertices."""
    a = mesh.as_coords(x)
    b = mesh.as_coords(y)
    if a == b:
        raise SameVertexError("need two distinct vertices")
    return len(mesh.neighbors(a) & mesh.neighbors(b))


# -- layer-level structure -------------------------------------------------


@dataclass(frozen=True)
class PartitionFaultProfile:
    """A fault set split along one axis: per layer, the sources it holds
    and the faulty vertices it holds."""

    view: PartitionView
    sources_by_layer: tuple[tuple[Coords, ...], ...]
    faulty_by_layer: tuple[tuple[Coords, ...], ...]

    @property
    def mu(self) -> tuple[int, ...]:
        """Source counts per layer."""
        return tuple(len(s) for s in self.sources_by_layer)

    @property
    def faulty_counts(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.faulty_by_layer)


def fault_profile(mesh: Mesh, sources: Iterable[VertexLike], axis: int) -> PartitionFaultProfile:
    """Split a fault set by layer along ``axis`` (1-based)."""
    fs = closed_neighborhood(mesh, sources)
    view = mesh.partition(axis)
    per_src: list[list[Coords]] = [[] for _ in range(view.layer_count)]
    per_bad: list[list[Coords]] = [[] for _ in range(view.layer_count)]
    for c in fs.sources:
        per_src[view.layer_of(c)].append(c)
    for c in fs.closed_vertices():
        per_bad[view.layer_of(c)].append(c)
    return PartitionFaultProfile(
        view,
        tuple(tuple(layer) for layer in per_src),
        tuple(tuple(layer) for layer in per_bad),
    )


def _require_layer_scope(mesh: Mesh, ell: int, ell_limit: int) -> None:
    if not mesh.all_dims_ge_3:
        raise PreconditionViolatedError("every dimension must be at least 3")
    if mesh.n < 3:
        raise PreconditionViolatedError("needs at least three dimensions")
    if ell > ell_limit:
        raise PreconditionViolatedError(
            f"fault set too large: {ell} sources, at most {ell_limit} allowed"
        )


def healthy_layer_check(mesh: Mesh, sources: Iterable[VertexLike], axis: int) -> bool:
    """Does every layer along ``axis`` keep at least one healthy vertex?

    Requires n >= 3, every dimension >= 3, and fewer sources than
    dimensions; under those conditions the answer is always yes, and the
    check exists to be checked.
    """
    fs = closed_neighborhood(mesh, sources)
    _require_layer_scope(mesh, fs.size, mesh.n - 1)
    view = mesh.partition(axis)
    for j in range(view.layer_count):
        if fs.closed_mask[view.layer(j)].all():
            return False
    return True


@dataclass(frozen=True)
class HealthyPairReport:
    """Healthy adjacent-layer pairs versus the structural threshold."""

    count: int
    threshold: int

    @property
    def exceeds_threshold(self) -> bool:
        return self.count > self.threshold


def healthy_pair_count(mesh: Mesh, sources: Iterable[VertexLike], axis: int,
                       i: int, j: int) -> HealthyPairReport:
    """Count healthy vertices of layer ``i`` whose neighbor in adjacent
    layer ``j`` is also healthy, against the threshold
    ``2n - 2 - ell - mu_i - mu_j``."""
    fs = closed_neighborhood(mesh, sources)
    _require_layer_scope(mesh, fs.size, mesh.n - 1)
    view = mesh.partition(axis)
    d = view.layer_count
    for idx in (i, j):
        if not 0 <= idx < d:
            raise LayersNotAdjacentError(f"no layer {idx} along axis {axis}")
    if (i - j) % d not in (1, d - 1):
        raise LayersNotAdjacentError(
            f"layers {i} and {j} are not adjacent along axis {axis}"
        )
    profile = fault_profile(mesh, fs.sources, axis)
    count = 0
    for flat in view.layer(i):
        flat = int(flat)
        if fs.closed_mask[flat]:
            continue
        partner = mesh.outer_neighbor(flat, axis, j)
        if not fs.closed_mask[mesh.encode(partner)]:
            count += 1
    threshold = 2 * mesh.n - 2 - fs.size - profile.mu[i] - profile.mu[j]
    return HealthyPairReport(count, threshold)


# -- survival bounds -------------------------------------------------------


@dataclass(frozen=True)
class SurvivalBoundReport:
    """Exact survival connectivity compared against ``2n - 2*ell``."""

    mesh: Mesh
    ell: int
    kappa_survival: int
    bound: int
    survival_state: GraphState

    @property
    def holds(self) -> bool:
        return self.kappa_survival >= self.bound


def verify_survival_lower_bound(mesh: Mesh, sources: Iterable[VertexLike]) -> SurvivalBoundReport:
    """Compute the survival graph's exact connectivity and compare it to
    the structural lower bound ``2n - 2*ell``.

    This reports rather than asserts; a violation emits a loud warning
    and comes back with ``holds`` False.  Requires every dimension >= 3,
    n >= 2, and at most n sources.
    """
    if not mesh.all_dims_ge_3:
        raise PreconditionViolatedError("every dimension must be at least 3")
    if mesh.n < 2:
        raise PreconditionViolatedError("needs at least two dimensions")
    g = survival_graph(mesh, sources)
    ell = g.faults.size
    if ell > mesh.n:
        raise PreconditionViolatedError(
            f"fault set too large: {ell} sources, at most {mesh.n} allowed"
        )
    state = classify(g)
    if state is GraphState.EMPTY:
        kappa = 0
    elif state is GraphState.COMPLETE:
        kappa = g.alive_count - 1
    elif state is GraphState.DISCONNECTED:
        kappa = 0
    else:
        sg = _flow.build_split_graph(mesh.neighbor_table, g.alive_mask)
        kappa = _flow.exact_connectivity(sg)
    report = SurvivalBoundReport(mesh, ell, kappa, 2 * mesh.n - 2 * ell, state)
    if not report.holds:
        warnings.warn(
            f"survival connectivity {kappa} fell below the bound "
            f"{report.bound} on {mesh} with sources {g.faults.sources}",
            stacklevel=2,
        )
    return report


# -- exact threshold search ------------------------------------------------


@dataclass(frozen=True)
class KappaNBResult:
    """Outcome of the exhaustive neighbor-fault threshold search."""

    mesh: Mesh
    value: Optional[int]
    witness: Optional[tuple[Coords, ...]]
    subsets_examined: int
    resolved: bool
    max_size_searched: int


def _binom_table(universe: int, k: int) -> np.ndarray:
    table = np.empty((universe + 1, k + 1), dtype=np.int64)
    for m in range(universe + 1):
        for j in range(k + 1):
            table[m, j] = min(math.comb(m, j), _BINOM_CLAMP)
    return table


def _scan_level(mesh: Mesh, ell: int, workers: int) -> tuple[int, Optional[tuple[int, ...]]]:
    """Scan every size-``ell`` source set containing vertex 0.  Returns
    the hit count and the lexicographically least hit."""
    nbr = mesh.neighbor_table
    universe = mesh.vertex_count - 1
    k = ell - 1
    total = math.comb(universe, k)
    binom = _binom_table(universe, k)
    chunks = []
    at = 0
    while at < total:
        chunks.append((at, min(_SEARCH_CHUNK, total - at)))
        at += _SEARCH_CHUNK
    bests = [np.full(ell, -1, dtype=np.int64) for _ in chunks]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hit_counts = list(
                pool.map(
                    lambda args: int(
                        _kernels.search_chunk_kernel(nbr, k, args[0][0], args[0][1], binom, args[1])
                    ),
                    zip(chunks, bests),
                )
            )
    else:
        hit_counts = [
            int(_kernels.search_chunk_kernel(nbr, k, start, count, binom, best))
            for (start, count), best in zip(chunks, bests)
        ]
    hits = sum(hit_counts)
    best: Optional[tuple[int, ...]] = None
    for h, arr in zip(hit_counts, bests):
        if h > 0:
            cand = tuple(int(x) for x in arr)
            if best is None or cand < best:
                best = cand
    return hits, best


def kappa_nb_exact(mesh: Mesh, ell_max: Optional[int] = None,
                   max_subsets: int = DEFAULT_SUBSET_BUDGET,
                   workers: int = 1) -> KappaNBResult:
    """Exact neighbor-fault threshold by exhaustive search.

    Searches fault sizes 1, 2, ... up to ``ell_max`` (default: the number
    of dimensions).  Candidate source sets are restricted to those
    containing vertex 0; the translation symmetry of these meshes makes
    that lossless, and among minimum fault sets the lexicographically
    least one always contains vertex 0, so the returned witness is the
    lexicographically least minimum witness overall.

    Enumeration of a size is all-or-nothing against ``max_subsets``: if
    the next size does not fit in the remaining budget the search raises
    ``BudgetExceededError`` carrying the progress so far.
    """
    if ell_max is None:
        ell_max = mesh.n
    if ell_max < 1:
        raise ValueError("ell_max must be at least 1")
    examined = 0
    for ell in range(1, ell_max + 1):
        total = math.comb(mesh.vertex_count - 1, ell - 1)
        if examined + total > max_subsets:
            raise BudgetExceededError(
                f"scanning {total} source sets of size {ell} would exceed "
                f"the budget of {max_subsets}",
                examined=examined,
                next_size=ell,
            )
        hits, best = _scan_level(mesh, ell, workers)
        examined += total
        if hits > 0:
            assert best is not None
            witness = tuple(mesh.decode(f) for f in best)
            return KappaNBResult(mesh, ell, witness, examined, True, ell)
    return KappaNBResult(mesh, None, None, examined, False, ell_max)


# -- constructive witnesses ------------------------------------------------


def upper_bound_witness(mesh: Mesh) -> tuple[Coords, ...]:
    """A fault set of size n whose survival graph is complete or
    disconnected, built coordinate-wise.

    Source i (1-based, i < n) has a 1 at axis i and d_{i+1}-1 at axis
    i+1; the last source has d_1-1 at axis 1 and a 1 at axis n.  Its
    closed neighborhood surrounds the all-zeros vertex.  Defined for
    n >= 2 with every dimension >= 3.
    """
    if mesh.n < 2 or not mesh.all_dims_ge_3:
        raise UnsupportedMeshError(
            "witness construction needs n >= 2 and every dimension >= 3"
        )
    n = mesh.n
    sources = []
    for i in range(n - 1):
        c = [0] * n
        c[i] = 1
        c[i + 1] = mesh.dims[i + 1] - 1
        sources.append(tuple(c))
    last = [0] * n
    last[0] = mesh.dims[0] - 1
    last[n - 1] = 1
    sources.append(tuple(last))
    return tuple(sorted(sources, key=mesh.encode))

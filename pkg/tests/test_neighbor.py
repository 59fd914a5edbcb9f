import itertools

import numpy as np
import pytest

import oracles
from torus_nbc.errors import (
    BudgetExceededError,
    LayersNotAdjacentError,
    PreconditionViolatedError,
    SameVertexError,
    UnsupportedMeshError,
)
from torus_nbc.graphs import GraphState, classify, connected_components
from torus_nbc.mesh import Mesh
from torus_nbc.neighbor import (
    closed_neighborhood,
    common_neighbor_count,
    fault_profile,
    healthy_layer_check,
    healthy_pair_count,
    kappa_nb_exact,
    survival_graph,
    upper_bound_witness,
    verify_survival_lower_bound,
)


@pytest.mark.parametrize("dims", [(3, 3), (3, 4), (2, 3, 3)])
def test_closed_neighborhood_matches_oracle(dims, rng):
    m = Mesh(dims)
    for _ in range(25):
        size = int(rng.integers(1, 4))
        flats = rng.choice(m.vertex_count, size=size, replace=False)
        sources = [m.decode(int(f)) for f in flats]
        fs = closed_neighborhood(m, sources)
        want = oracles.closed_neighborhood(dims, sources)
        assert set(fs.closed_vertices()) == want
        assert fs.sources == tuple(sorted(sources, key=m.encode))
        assert fs.size == size


def test_closed_neighborhood_deduplicates():
    m = Mesh((3, 3))
    fs = closed_neighborhood(m, [(1, 1), 4, (1, 1)])  # all the same vertex
    assert fs.size == 1


def test_survival_graph_alive_set():
    m = Mesh((3, 3))
    g = survival_graph(m, [(1, 2), (2, 1)])
    assert g.alive_vertices() == [(0, 0)]
    assert g.faults.size == 2
    assert classify(g) is GraphState.COMPLETE


@pytest.mark.parametrize("dims", [(3, 3), (3, 4), (4, 4), (5, 5), (3, 3, 3), (4, 5)])
def test_common_neighbor_ranges_exhaustively(dims):
    m = Mesh(dims)
    for x, y in itertools.combinations(list(m.vertices()), 2):
        c = common_neighbor_count(m, x, y)
        assert c == len(oracles.neighbors(dims, x) & oracles.neighbors(dims, y))
        if m.adjacent(x, y):
            assert c in (0, 1)
        else:
            assert c in (0, 1, 2)


def test_common_neighbor_count_rejects_same_vertex():
    m = Mesh((3, 3))
    with pytest.raises(SameVertexError):
        common_neighbor_count(m, (1, 1), 4)


@pytest.mark.parametrize(
    "dims,want",
    [((3, 3), 2), ((3, 4), 2), ((4, 4), 2), ((3, 3, 3), 3)],
)
def test_threshold_matches_unpruned_oracle(dims, want):
    m = Mesh(dims)
    result = kappa_nb_exact(m)
    oracle_value, _ = oracles.nb_threshold(dims, max_size=len(dims))
    assert result.value == oracle_value == want
    assert result.resolved
    # the witness does what it claims
    g = survival_graph(m, result.witness)
    assert classify(g) is not GraphState.OTHER


def test_threshold_witness_is_lex_least():
    dims = (3, 3)
    m = Mesh(dims)
    result = kappa_nb_exact(m)
    # all minimum witnesses, compared as sorted flat tuples
    candidates = []
    for cand in itertools.combinations(list(m.vertices()), result.value):
        if oracles.classify(dims, oracles.survivors(dims, cand)) != "other":
            candidates.append(tuple(sorted(m.encode(v) for v in cand)))
    best = min(candidates)
    assert tuple(m.encode(v) for v in result.witness) == best
    assert result.witness == ((0, 0), (0, 1))


def test_threshold_counts_scanned_subsets():
    m = Mesh((3, 3))
    result = kappa_nb_exact(m)
    # one singleton level plus the eight pairs containing vertex 0
    assert result.subsets_examined == 1 + 8
    assert result.max_size_searched == 2


def test_threshold_unresolved_when_capped():
    m = Mesh((3, 3))
    result = kappa_nb_exact(m, ell_max=1)
    assert not result.resolved
    assert result.value is None and result.witness is None
    assert result.max_size_searched == 1


def test_threshold_budget_is_all_or_nothing():
    m = Mesh((3, 3))
    with pytest.raises(BudgetExceededError) as exc:
        kappa_nb_exact(m, max_subsets=3)
    assert exc.value.examined == 1  # the singleton level fit, pairs did not
    assert exc.value.next_size == 2


def test_threshold_respects_worker_count():
    m = Mesh((3, 3, 3))
    lone = kappa_nb_exact(m)
    pooled = kappa_nb_exact(m, workers=4)
    assert lone.value == pooled.value == 3
    assert lone.witness == pooled.witness
    assert lone.subsets_examined == pooled.subsets_examined


@pytest.mark.parametrize(
    "dims,want",
    [
        ((3, 3), ((1, 2), (2, 1))),
        ((3, 4), ((1, 3), (2, 1))),
        ((4, 4), ((1, 3), (3, 1))),
        ((3, 4, 5), ((0, 1, 4), (1, 3, 0), (2, 0, 1))),
    ],
)
def test_witness_construction_values(dims, want):
    assert upper_bound_witness(Mesh(dims)) == want


@pytest.mark.parametrize(
    "dims", [(3, 3), (3, 4), (4, 4), (3, 3, 3), (3, 4, 5), (3, 4, 5, 6)]
)
def test_witness_breaks_the_mesh(dims):
    m = Mesh(dims)
    witness = upper_bound_witness(m)
    assert len(witness) == m.n
    assert len(set(witness)) == m.n
    g = survival_graph(m, witness)
    state = classify(g)
    assert state in (GraphState.COMPLETE, GraphState.DISCONNECTED)
    # the all-zeros vertex survives with no surviving neighbors
    zero = (0,) * m.n
    comps = connected_components(g)
    assert ((zero,)) in [c for c in comps if len(c) == 1] or comps == [(zero,)]


def test_witness_needs_scope():
    with pytest.raises(UnsupportedMeshError):
        upper_bound_witness(Mesh((5,)))
    with pytest.raises(UnsupportedMeshError):
        upper_bound_witness(Mesh((2, 3)))


def test_survival_bound_reports():
    m = Mesh((3, 3, 3))
    report = verify_survival_lower_bound(m, [(0, 0, 0)])
    assert report.ell == 1
    assert report.bound == 4
    assert report.kappa_survival >= 4
    assert report.holds
    empty = verify_survival_lower_bound(m, [])
    assert empty.ell == 0 and empty.bound == 6 and empty.holds


def test_survival_bound_preconditions():
    with pytest.raises(PreconditionViolatedError):
        verify_survival_lower_bound(Mesh((2, 3)), [(0, 0)])
    with pytest.raises(PreconditionViolatedError):
        verify_survival_lower_bound(Mesh((9,)), [(0,)])
    with pytest.raises(PreconditionViolatedError):
        verify_survival_lower_bound(Mesh((3, 3)), [(0, 0), (1, 1), (2, 2)])


def test_fault_profile_splits_by_layer():
    m = Mesh((3, 4))
    profile = fault_profile(m, [(0, 1), (2, 1), (1, 3)], axis=1)
    assert profile.mu == (1, 1, 1)
    assert profile.sources_by_layer == (((0, 1),), ((1, 3),), ((2, 1),))
    fs = closed_neighborhood(m, [(0, 1), (2, 1), (1, 3)])
    for j, faulty in enumerate(profile.faulty_by_layer):
        assert set(faulty) == {
            v for v in fs.closed_vertices() if v[0] == j
        }
    assert sum(profile.faulty_counts) == fs.closed_count


def test_healthy_layer_check_holds_in_scope(rng):
    m = Mesh((3, 3, 3))
    for _ in range(30):
        ell = int(rng.integers(1, 3))
        flats = rng.choice(27, size=ell, replace=False)
        sources = [int(f) for f in flats]
        for axis in (1, 2, 3):
            assert healthy_layer_check(m, sources, axis)


def test_healthy_layer_check_preconditions():
    with pytest.raises(PreconditionViolatedError):
        healthy_layer_check(Mesh((3, 3)), [(0, 0)], 1)  # n < 3
    with pytest.raises(PreconditionViolatedError):
        healthy_layer_check(Mesh((2, 3, 3)), [(0, 0, 0)], 1)  # a dim of 2
    with pytest.raises(PreconditionViolatedError):
        healthy_layer_check(Mesh((3, 3, 3)), [0, 1, 2], 1)  # too many sources


def test_healthy_pair_count_against_direct_enumeration(rng):
    dims = (3, 3, 4)
    m = Mesh(dims)
    for _ in range(25):
        ell = int(rng.integers(1, 3))
        flats = [int(f) for f in rng.choice(m.vertex_count, size=ell, replace=False)]
        sources = [m.decode(f) for f in flats]
        axis = int(rng.integers(1, 4))
        d = m.dims[axis - 1]
        i = int(rng.integers(0, d))
        j = (i + 1) % d
        report = healthy_pair_count(m, sources, axis, i, j)
        healthy = oracles.survivors(dims, sources)
        want = 0
        for v in healthy:
            if v[axis - 1] != i:
                continue
            partner = list(v)
            partner[axis - 1] = j
            if tuple(partner) in healthy:
                want += 1
        assert report.count == want
        mu = fault_profile(m, sources, axis).mu
        assert report.threshold == 2 * m.n - 2 - ell - mu[i] - mu[j]
        assert report.exceeds_threshold


def test_healthy_pair_count_layer_errors():
    m = Mesh((3, 3, 4))
    with pytest.raises(LayersNotAdjacentError):
        healthy_pair_count(m, [(0, 0, 0)], 3, 0, 2)  # two steps apart
    with pytest.raises(LayersNotAdjacentError):
        healthy_pair_count(m, [(0, 0, 0)], 3, 1, 1)
    with pytest.raises(LayersNotAdjacentError):
        healthy_pair_count(m, [(0, 0, 0)], 3, 0, 4)
    # wrap-around counts as adjacent
    report = healthy_pair_count(m, [(0, 0, 0)], 3, 3, 0)
    assert report.count > 0

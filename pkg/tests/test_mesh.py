import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from torus_nbc.errors import (
    AxisOutOfRangeError,
    DimensionTooSmallError,
    InvalidVertexError,
    MeshParseError,
    NotAdjacentLayerError,
    UnsupportedMeshError,
)
from torus_nbc.mesh import Mesh, new_mesh, parse_mesh

dims_strategy = st.lists(st.integers(2, 6), min_size=1, max_size=4)


def test_parse_basic():
    m = parse_mesh("3x4x5")
    assert m.dims == (3, 4, 5)
    assert m.literal == "3x4x5"
    assert parse_mesh("7").dims == (7,)


@pytest.mark.parametrize(
    "literal,position",
    [
        ("", 0),
        ("3x", 2),
        ("x4", 0),
        ("3x-4", 2),
        ("3x4.5", 3),
        ("3 x4", 1),
        ("3xx4", 2),
    ],
)
def test_parse_errors_carry_position(literal, position):
    with pytest.raises(MeshParseError) as exc:
        parse_mesh(literal)
    assert exc.value.position == position


def test_dimension_validation():
    with pytest.raises(DimensionTooSmallError):
        Mesh((3, 1))
    with pytest.raises(DimensionTooSmallError):
        Mesh(())
    with pytest.raises(OverflowError):
        Mesh((2**32, 2**32, 2))
    with pytest.raises(OverflowError):
        Mesh((2**32, 2**16, 2**16))  # exactly 2^64
    # 2^64 - 1 vertices is still representable
    assert Mesh((2**64 - 1,)).vertex_count == 2**64 - 1


def test_flat_order_is_row_major():
    m = Mesh((3, 4))
    assert [m.encode(v) for v in m.vertices()] == list(range(12))
    assert m.encode((1, 0)) == 4  # most significant digit first
    assert m.decode(11) == (2, 3)


@given(dims=dims_strategy, data=st.data())
@settings(max_examples=200, deadline=None)
def test_encode_decode_roundtrip(dims, data):
    m = Mesh(tuple(dims))
    coords = tuple(data.draw(st.integers(0, d - 1)) for d in dims)
    flat = m.encode(coords)
    assert 0 <= flat < m.vertex_count
    assert m.decode(flat) == coords
    assert m.as_flat(coords) == flat
    assert m.as_coords(flat) == coords


def test_vertex_validation():
    m = Mesh((3, 4))
    with pytest.raises(InvalidVertexError):
        m.encode((3, 0))
    with pytest.raises(InvalidVertexError):
        m.encode((0, -1))
    with pytest.raises(InvalidVertexError):
        m.encode((0, 0, 0))
    with pytest.raises(InvalidVertexError):
        m.decode(12)
    with pytest.raises(InvalidVertexError):
        m.as_flat("nope")
    assert (2, 3) in m and 11 in m and 12 not in m


@pytest.mark.parametrize("dims", [(3,), (2, 2), (3, 2), (3, 4), (4, 4), (2, 3, 4)])
def test_neighbors_match_definition(dims):
    m = Mesh(dims)
    for v in m.vertices():
        assert m.neighbors(v) == oracles.neighbors(dims, v)
        assert len(m.neighbors(v)) == m.degree


def test_degree_counts_wrap_once_for_extent_two():
    m = Mesh((3, 2))
    # along the extent-2 axis, +1 and -1 reach the same vertex
    assert m.degree == 3
    assert m.neighbors((0, 0)) == {(1, 0), (2, 0), (0, 1)}


@given(dims=dims_strategy, data=st.data())
@settings(max_examples=100, deadline=None)
def test_adjacency_is_symmetric_and_irreflexive(dims, data):
    m = Mesh(tuple(dims))
    u = tuple(data.draw(st.integers(0, d - 1)) for d in dims)
    v = tuple(data.draw(st.integers(0, d - 1)) for d in dims)
    assert m.adjacent(u, v) == m.adjacent(v, u)
    assert m.adjacent(u, v) == oracles.adjacent(dims, u, v)
    assert not m.adjacent(u, u)


@pytest.mark.parametrize("dims", [(5,), (3, 4), (2, 3, 4), (3, 3, 3)])
def test_neighbor_table(dims):
    m = Mesh(dims)
    table = m.neighbor_table
    assert table.shape == (m.vertex_count, m.degree)
    for flat in range(m.vertex_count):
        row = [m.decode(int(f)) for f in table[flat]]
        assert set(row) == oracles.neighbors(dims, m.decode(flat))
        assert list(table[flat]) == sorted(table[flat])


def test_outer_neighbor():
    m = Mesh((3, 4))
    assert m.outer_neighbor((1, 2), 1, 2) == (2, 2)
    assert m.outer_neighbor((1, 2), 1, 0) == (0, 2)
    assert m.outer_neighbor((1, 3), 2, 0) == (1, 0)  # wraps
    with pytest.raises(AxisOutOfRangeError):
        m.outer_neighbor((1, 2), 3, 0)
    with pytest.raises(AxisOutOfRangeError):
        m.outer_neighbor((1, 2), 0, 0)
    with pytest.raises(NotAdjacentLayerError):
        m.outer_neighbor((1, 2), 2, 0)  # layer 0 is two steps from layer 2
    with pytest.raises(NotAdjacentLayerError):
        m.outer_neighbor((1, 2), 2, 2)  # own layer
    with pytest.raises(NotAdjacentLayerError):
        m.outer_neighbor((1, 2), 2, 4)  # no such layer


def test_partition_layers():
    m = Mesh((3, 4, 5))
    view = m.partition(2)
    assert view.layer_count == 4
    assert view.sub_mesh.dims == (3, 5)
    seen = []
    for j in range(4):
        layer = view.layer(j)
        assert len(layer) == 15
        assert all(view.layer_of(int(f)) == j for f in layer)
        seen.extend(int(f) for f in layer)
    assert sorted(seen) == list(range(60))
    with pytest.raises(AxisOutOfRangeError):
        m.partition(4)
    with pytest.raises(IndexError):
        view.layer(4)


def test_partition_project_lift():
    m = Mesh((3, 4, 5))
    view = m.partition(2)
    for v in [(0, 0, 0), (2, 3, 4), (1, 2, 3)]:
        sub = view.project(v)
        assert view.lift(sub, v[1]) == v
    one_dim = Mesh((5,)).partition(1)
    with pytest.raises(UnsupportedMeshError):
        one_dim.sub_mesh


def test_layers_induce_sub_mesh_adjacency():
    m = Mesh((3, 4))
    view = m.partition(1)
    sub = view.sub_mesh
    for j in range(view.layer_count):
        flats = [int(f) for f in view.layer(j)]
        for a in flats:
            for b in flats:
                if a == b:
                    continue
                assert m.adjacent(a, b) == sub.adjacent(
                    view.project(a), view.project(b)
                )


def test_new_mesh():
    assert new_mesh([3, 4]).dims == (3, 4)

"""Toroidal mesh construction and coordinate arithmetic.

A mesh ``C(d1, ..., dn)`` has vertex set ``Z_d1 x ... x Z_dn``; two vertices
are adjacent exactly when they differ in a single coordinate, by +-1 modulo
the extent of that coordinate.  Vertices travel through the API either as
coordinate tuples or as flat row-major indices (most significant digit
first), interchangeably.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import (
    AxisOutOfRangeError,
    DimensionTooSmallError,
    InvalidVertexError,
    MeshParseError,
    NotAdjacentLayerError,
    UnsupportedMeshError,
)

Coords = tuple[int, ...]
VertexLike = Union[int, Sequence[int]]

#: Largest admissible vertex count; flat indices must fit in an unsigned
#: 64-bit word.
MAX_VERTICES = 2**64 - 1


def parse_mesh(literal: str) -> "Mesh":
    """Parse a mesh literal such as ``"3x4x5"`` into a :class:`Mesh`.

    Raises :class:`MeshParseError` (with the offending character position)
    for malformed input, and the usual constructor errors for dimensions
    that parse but are out of range.
    """
    if not isinstance(literal, str):
        raise MeshParseError("mesh literal must be a string", 0)
    if literal == "":
        raise MeshParseError("empty mesh literal", 0)
    dims = []
    pos = 0
    for part in literal.split("x"):
        if part == "":
            raise MeshParseError("expected a dimension", pos)
        for k, ch in enumerate(part):
            if not ch.isascii() or not ch.isdigit():
                raise MeshParseError(f"unexpected character {ch!r}", pos + k)
        dims.append(int(part))
        pos += len(part) + 1  # skip the separating 'x'
    return Mesh(tuple(dims))


@dataclass(frozen=True)
class Mesh:
    """An n-dimensional toroidal mesh, defined by its dimension vector."""

    dims: Coords

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) == 0:
            raise DimensionTooSmallError("a mesh needs at least one dimension")
        for i, d in enumerate(dims):
            if d < 2:
                raise DimensionTooSmallError(
                    f"dimension {i + 1} is {d}; every dimension must be >= 2"
                )
        if math.prod(dims) > MAX_VERTICES:
            raise OverflowError("vertex count does not fit in 64 bits")

    # -- basic shape ---------------------------------------------------

    @property
    def n(self) -> int:
        """Number of dimensions."""
        return len(self.dims)

    @cached_property
    def vertex_count(self) -> int:
        return math.prod(self.dims)

    @cached_property
    def degree(self) -> int:
        # An axis of extent 2 contributes one neighbor, not two: +1 and -1
        # wrap to the same vertex.
        return sum(2 if d >= 3 else 1 for d in self.dims)

    @property
    def all_dims_ge_3(self) -> bool:
        return all(d >= 3 for d in self.dims)

    @property
    def literal(self) -> str:
        return "x".join(str(d) for d in self.dims)

    def __str__(self) -> str:
        return f"C({', '.join(str(d) for d in self.dims)})"

    # -- coordinate codec ----------------------------------------------

    @cached_property
    def _weights(self) -> Coords:
        # Row-major place values: weight of the last axis is 1.
        w = [1] * self.n
        for i in range(self.n - 2, -1, -1):
            w[i] = w[i + 1] * self.dims[i + 1]
        return tuple(w)

    def encode(self, coords: Sequence[int]) -> int:
        """Flat index of a coordinate tuple."""
        if len(coords) != self.n:
            raise InvalidVertexError(
                f"expected {self.n} coordinates, got {len(coords)}"
            )
        flat = 0
        for c, d, w in zip(coords, self.dims, self._weights):
            c = int(c)
            if not 0 <= c < d:
                raise InvalidVertexError(f"coordinate {c} out of range 0..{d - 1}")
            flat += c * w
        return flat

    def decode(self, flat: int) -> Coords:
        """Coordinate tuple of a flat index."""
        flat = int(flat)
        if not 0 <= flat < self.vertex_count:
            raise InvalidVertexError(
                f"flat index {flat} out of range 0..{self.vertex_count - 1}"
            )
        return tuple((flat // w) % d for d, w in zip(self.dims, self._weights))

    def as_flat(self, v: VertexLike) -> int:
        """Normalize a vertex given either way to its flat index."""
        if isinstance(v, (int, np.integer)):
            flat = int(v)
            if not 0 <= flat < self.vertex_count:
                raise InvalidVertexError(f"flat index {flat} out of range")
            return flat
        try:
            return self.encode(tuple(v))
        except TypeError:
            raise InvalidVertexError(f"not a vertex: {v!r}") from None

    def as_coords(self, v: VertexLike) -> Coords:
        """Normalize a vertex given either way to its coordinate tuple."""
        if isinstance(v, (int, np.integer)):
            return self.decode(int(v))
        coords = tuple(int(c) for c in v)
        self.encode(coords)  # validates
        return coords

    def __contains__(self, v) -> bool:
        try:
            self.as_flat(v)
        except InvalidVertexError:
            return False
        return True

    def vertices(self) -> Iterator[Coords]:
        """All vertices in flat-index order."""
        return itertools.product(*(range(d) for d in self.dims))

    # -- adjacency -----------------------------------------------------

    def adjacent(self, u: VertexLike, v: VertexLike) -> bool:
        """Definitional adjacency test, straight off the coordinates."""
        a = self.as_coords(u)
        b = self.as_coords(v)
        diff_axis = -1
        for i, (x, y, d) in enumerate(zip(a, b, self.dims)):
            if x == y:
                continue
            if diff_axis >= 0:
                return False
            if (x - y) % d not in (1, d - 1):
                return False
            diff_axis = i
        return diff_axis >= 0

    def neighbors(self, v: VertexLike) -> set[Coords]:
        """The open neighborhood of ``v``, as coordinate tuples."""
        coords = self.as_coords(v)
        out: set[Coords] = set()
        for i, d in enumerate(self.dims):
            for delta in (1, -1):
                w = list(coords)
                w[i] = (w[i] + delta) % d
                out.add(tuple(w))
        return out

    def outer_neighbor(self, v: VertexLike, axis: int, layer: int) -> Coords:
        """The unique neighbor of ``v`` lying in the given adjacent layer
        along ``axis`` (1-based)."""
        coords = self.as_coords(v)
        if not 1 <= axis <= self.n:
            raise AxisOutOfRangeError(f"axis {axis} out of range 1..{self.n}")
        d = self.dims[axis - 1]
        c = coords[axis - 1]
        if not 0 <= layer < d:
            raise NotAdjacentLayerError(f"no layer {layer} along axis {axis}")
        if (layer - c) % d not in (1, d - 1):
            raise NotAdjacentLayerError(
                f"layer {layer} is not adjacent to layer {c} along axis {axis}"
            )
        w = list(coords)
        w[axis - 1] = layer
        return tuple(w)

    @cached_property
    def neighbor_table(self) -> np.ndarray:
        """Dense adjacency, shape ``(vertex_count, degree)``, ``int64`` flat
        indices, each row sorted ascending.  Built vectorized; the sorted
        rows are what the flow and simulation kernels iterate over, so the
        ordering here fixes all their tie-breaking."""
        v = self.vertex_count
        flats = np.arange(v, dtype=np.int64)
        cols = []
        for i, d in enumerate(self.dims):
            w = self._weights[i]
            c = (flats // w) % d
            deltas = (1,) if d == 2 else (1, -1)
            for delta in deltas:
                cols.append(flats + (((c + delta) % d) - c) * w)
        table = np.stack(cols, axis=1)
        table.sort(axis=1)
        table.setflags(write=False)
        return table

    # -- partitions ----------------------------------------------------

    def partition(self, axis: int) -> "PartitionView":
        """View of the mesh as ``dims[axis-1]`` layers along ``axis``
        (1-based); each layer induces a copy of the mesh with that axis
        removed."""
        if not 1 <= axis <= self.n:
            raise AxisOutOfRangeError(f"axis {axis} out of range 1..{self.n}")
        return PartitionView(self, axis)


@dataclass(frozen=True)
class PartitionView:
    """The layers of a mesh along one fixed axis."""

    mesh: Mesh
    axis: int  # 1-based

    @property
    def layer_count(self) -> int:
        return self.mesh.dims[self.axis - 1]

    @cached_property
    def sub_mesh(self) -> Mesh:
        """The mesh each layer induces (the partition axis removed)."""
        if self.mesh.n == 1:
            raise UnsupportedMeshError(
                "layers of a one-dimensional mesh are single vertices"
            )
        dims = self.mesh.dims
        return Mesh(dims[: self.axis - 1] + dims[self.axis :])

    def layer_of(self, v: VertexLike) -> int:
        return self.mesh.as_coords(v)[self.axis - 1]

    def layer(self, j: int) -> np.ndarray:
        """Flat indices of layer ``j``, ascending."""
        if not 0 <= j < self.layer_count:
            raise IndexError(f"layer {j} out of range 0..{self.layer_count - 1}")
        m = self.mesh
        flats = np.arange(m.vertex_count, dtype=np.int64)
        w = m._weights[self.axis - 1]
        d = m.dims[self.axis - 1]
        return flats[(flats // w) % d == j]

    def layers(self) -> Iterator[np.ndarray]:
        for j in range(self.layer_count):
            yield self.layer(j)

    def project(self, v: VertexLike) -> Coords:
        """Coordinates of ``v`` within its layer's sub-mesh."""
        self.sub_mesh  # n >= 2 check
        c = self.mesh.as_coords(v)
        return c[: self.axis - 1] + c[self.axis :]

    def lift(self, sub_coords: Sequence[int], j: int) -> Coords:
        """Inverse of :meth:`project`: place sub-mesh coordinates into
        layer ``j``."""
        if not 0 <= j < self.layer_count:
            raise IndexError(f"layer {j} out of range 0..{self.layer_count - 1}")
        sub = self.sub_mesh.as_coords(tuple(sub_coords))
        return sub[: self.axis - 1] + (j,) + sub[self.axis - 1 :]


def new_mesh(dims: Iterable[int]) -> Mesh:
    """Construct a mesh from a dimension vector."""
    return Mesh(tuple(dims))

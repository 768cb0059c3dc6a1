"""Finite subgraphs of the integer lattice: boxes, induced regions, boundaries."""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property

from .errors import ResourceLimitError
from .unionfind import UnionFind

DEFAULT_VERTEX_CAP = 1_000_000

Coord = tuple[int, ...]


def sup_norm(x: Coord) -> int:
    return max(abs(c) for c in x)


def lattice_neighbors(x: Coord) -> list[Coord]:
    """Nearest neighbors of x in Z^d, in lexicographic order."""
    out = []
    for axis in range(len(x)):
        for step in (-1, 1):
            y = list(x)
            y[axis] += step
            out.append(tuple(y))
    out.sort()
    return out


@dataclass(frozen=True)
class Region:
    """A finite graph embedded in Z^d.

    ``vertices`` are integer coordinate tuples, ``edges`` are index pairs into
    the vertex list (normalized so i < j), and ``couplings`` is an optional
    list of positive per-edge weights aligned with ``edges``.
    """

    dimension: int
    vertices: tuple[Coord, ...]
    edges: tuple[tuple[int, int], ...]
    couplings: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        vertices = tuple(tuple(int(c) for c in v) for v in self.vertices)
        for v in vertices:
            if len(v) != self.dimension:
                raise ValueError(f"vertex {v} does not have dimension {self.dimension}")
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertices")
        n = len(vertices)
        edges = []
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ValueError(f"self-loop at vertex index {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) references a missing vertex")
            edges.append((i, j) if i < j else (j, i))
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edges")
        if self.couplings is not None:
            couplings = tuple(float(c) for c in self.couplings)
            if len(couplings) != len(edges):
                raise ValueError("couplings length must equal the edge count")
            if any(c <= 0 or not math.isfinite(c) for c in couplings):
                raise ValueError("couplings must be positive and finite")
            object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def vertex_index(self) -> dict[Coord, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex: tuple of (neighbor index, edge index)."""
        adj: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for e, (i, j) in enumerate(self.edges):
            adj[i].append((j, e))
            adj[j].append((i, e))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def n_components(self) -> int:
        uf = UnionFind(self.n_vertices)
        for i, j in self.edges:
            uf.union(i, j)
        return uf.n_components

    @property
    def is_forest(self) -> bool:
        return self.n_edges == self.n_vertices - self.n_components

    def index_of(self, x: Coord) -> int:
        try:
            return self.vertex_index[tuple(x)]
        except KeyError:
            raise ValueError(f"vertex {tuple(x)} is not in the region") from None

    def edge_between(self, x: Coord, y: Coord) -> int:
        """Index of the edge {x, y}; raises if absent."""
        i, j = self.index_of(x), self.index_of(y)
        key = (i, j) if i < j else (j, i)
        try:
            return self._edge_lookup[key]
        except KeyError:
            raise ValueError(f"no edge between {tuple(x)} and {tuple(y)}") from None

    @cached_property
    def _edge_lookup(self) -> dict[tuple[int, int], int]:
        return {e: idx for idx, e in enumerate(self.edges)}

    def to_json_dict(self) -> dict:
        return {
            "d": self.dimension,
            "vertices": [list(v) for v in self.vertices],
            "edges": [list(e) for e in self.edges],
            "couplings": list(self.couplings) if self.couplings is not None else None,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Region":
        return cls(
            dimension=data["d"],
            vertices=tuple(tuple(v) for v in data["vertices"]),
            edges=tuple(tuple(e) for e in data["edges"]),
            couplings=tuple(data["couplings"]) if data.get("couplings") is not None else None,
        )

    def dumps(self) -> str:
        """Canonical JSON form; byte-stable for equal regions."""
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    def fingerprint(self) -> str:
        return hashlib.sha1(self.dumps().encode()).hexdigest()[:12]


@dataclass(frozen=True)
class EdgeBoundary:
    """Edges with exactly one endpoint in ``inner``, oriented (inside, outside)."""

    inner: Region
    boundary_edges: tuple[tuple[Coord, Coord], ...]


def _check_vertex_cap(count: int, cap: int) -> None:
    if count > cap:
        raise ResourceLimitError(f"{count} vertices exceeds the cap of {cap}")


def make_rect(lo: Coord, hi: Coord, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Region:
    """Axis-aligned block of lattice points {lo_1..hi_1} x ... with all nearest-neighbor edges."""
    if len(lo) != len(hi):
        raise ValueError("lo and hi must have the same dimension")
    if any(a > b for a, b in zip(lo, hi)):
        raise ValueError("need lo <= hi coordinatewise")
    count = math.prod(b - a + 1 for a, b in zip(lo, hi))
    _check_vertex_cap(count, vertex_cap)
    vertices = tuple(itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))))
    index = {v: i for i, v in enumerate(vertices)}
    edges = []
    for v in vertices:
        i = index[v]
        for axis in range(len(lo)):
            w = list(v)
            w[axis] += 1
            j = index.get(tuple(w))
            if j is not None:
                edges.append((i, j))
    edges.sort()
    return Region(dimension=len(lo), vertices=vertices, edges=tuple(edges))


def make_box(d: int, n: int, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Region:
    """The box of radius n around the origin in the sup-norm: {-n..n}^d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")
    return make_rect((-n,) * d, (n,) * d, vertex_cap=vertex_cap)


def from_vertices(d: int, vertices, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Region:
    """Region induced on a vertex set: all nearest-neighbor pairs present in it."""
    vs = sorted({tuple(int(c) for c in v) for v in vertices})
    _check_vertex_cap(len(vs), vertex_cap)
    index = {v: i for i, v in enumerate(vs)}
    edges = set()
    for v in vs:
        for w in lattice_neighbors(v):
            j = index.get(w)
            if j is not None:
                i = index[v]
                edges.add((i, j) if i < j else (j, i))
    return Region(dimension=d, vertices=tuple(vs), edges=tuple(sorted(edges)))


def candidate_sets(d: int, max_radius: int, vertex_cap: int = DEFAULT_VERTEX_CAP) -> list[Region]:
    """The nested box family [box(d,0), ..., box(d,max_radius)]; each contains 0."""
    if max_radius < 0:
        raise ValueError("max_radius must be >= 0")
    return [make_box(d, k, vertex_cap=vertex_cap) for k in range(max_radius + 1)]


def edge_boundary(S: Region, ambient: Region | str | None = None) -> EdgeBoundary:
    """All ambient nearest-neighbor edges with exactly one endpoint in S.

    ``ambient`` is a Region, or None / "Z^d" for the full lattice. Edges are
    oriented (inside, outside) and sorted lexicographically.
    """
    inside = set(S.vertices)
    pairs: list[tuple[Coord, Coord]] = []
    if ambient is None or ambient == "Z^d":
        for x in S.vertices:
            for y in lattice_neighbors(x):
                if y not in inside:
                    pairs.append((x, y))
    else:
        if not isinstance(ambient, Region):
            raise TypeError("ambient must be a Region, 'Z^d', or None")
        ambient_vertices = set(ambient.vertices)
        if not inside <= ambient_vertices:
            raise ValueError("S is not contained in the ambient region")
        for i, j in ambient.edges:
            x, y = ambient.vertices[i], ambient.vertices[j]
            if (x in inside) != (y in inside):
                pairs.append((x, y) if x in inside else (y, x))
    pairs.sort()
    return EdgeBoundary(inner=S, boundary_edges=tuple(pairs))


def boundary_vertices(region: Region) -> tuple[Coord, ...]:
    """Vertices of the region with at least one lattice neighbor outside it."""
    inside = set(region.vertices)
    out = [
        x
        for x in region.vertices
        if any(y not in inside for y in lattice_neighbors(x))
    ]
    out.sort()
    return tuple(out)


def region_radius(region: Region) -> int:
    """Smallest n with the region contained in the box of radius n."""
    return max(sup_norm(v) for v in region.vertices)

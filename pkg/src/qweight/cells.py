"""Plain 2D cell complexes over F2.

A complex is a vertex count, a list of edges (vertex pairs), and a list
of faces (cycles of edge ids). Faces only need a mod-2 condition: every
vertex on the cycle is met an even number of times, so the boundary of a
boundary vanishes. Subsets of vertices and edges can be marked as the
attaching region for later gluing.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from qweight.gf2 import BitMatrix, rank


@dataclass(frozen=True)
class CellComplex2:
    n_vertices: int
    edges: list[tuple[int, int]]
    faces: list[tuple[int, ...]]
    marked_vertices: frozenset[int] = field(default_factory=frozenset)
    marked_edges: frozenset[int] = field(default_factory=frozenset)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_cells(self) -> int:
        return self.n_vertices + self.n_edges + self.n_faces


def validate_complex(c: CellComplex2) -> None:
    """Raise ValueError on dangling references, odd face boundaries, or
    marks outside the complex."""
    for i, (u, v) in enumerate(c.edges):
        if not (0 <= u < c.n_vertices and 0 <= v < c.n_vertices):
            raise ValueError(f"edge {i} references missing vertex: ({u}, {v})")
    for i, cycle in enumerate(c.faces):
        hits: Counter = Counter()
        for e in cycle:
            if not 0 <= e < len(c.edges):
                raise ValueError(f"face {i} references missing edge {e}")
            u, v = c.edges[e]
            hits[u] += 1
            hits[v] += 1
        odd = [v for v, k in hits.items() if k % 2]
        if odd:
            raise ValueError(f"face {i} has an open boundary at vertices {odd}")
    if any(not 0 <= v < c.n_vertices for v in c.marked_vertices):
        raise ValueError("marked vertex out of range")
    if any(not 0 <= e < len(c.edges) for e in c.marked_edges):
        raise ValueError("marked edge out of range")


def boundary_matrices(c: CellComplex2) -> tuple[BitMatrix, BitMatrix]:
    """Mod-2 incidence matrices (edges x vertices, faces x edges)."""
    d1 = BitMatrix.zeros(len(c.edges), c.n_vertices)
    for i, (u, v) in enumerate(c.edges):
        if u != v:
            d1.set(i, u, 1)
            d1.set(i, v, 1)
    d2 = BitMatrix.zeros(len(c.faces), len(c.edges))
    for i, cycle in enumerate(c.faces):
        for e, k in Counter(cycle).items():
            if k % 2:
                d2.set(i, e, 1)
    return d1, d2


def homology_ranks(c: CellComplex2) -> tuple[int, int, int]:
    """F2 homology ranks (h0, h1, h2) from the incidence matrices."""
    d1, d2 = boundary_matrices(c)
    r1 = rank(d1)
    r2 = rank(d2)
    h0 = c.n_vertices - r1
    h1 = len(c.edges) - r1 - r2
    h2 = len(c.faces) - r2
    return (h0, h1, h2)

"""Square complex attached to a CSS code.

Each commuting X/Z check pair shares an even number of qubits; pairing
those qubits two by two attaches one square face per pair. The result is
a 2D complex whose 1-skeleton is the Tanner graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from qweight.css import CssCode

PAIRINGS = ("index-order", "greedy-adjacent")


@dataclass(frozen=True)
class SquareComplex:
    """Tripartite 2-complex: X-check, qubit, and Z-check vertices, Tanner
    edges, and faces (x, q, q2, z) with q < q2."""

    n_x: int
    n_q: int
    n_z: int
    xq_edges: tuple[tuple[int, int], ...]
    qz_edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[int, int, int, int], ...]

    def to_dot(self) -> str:
        lines = ["graph square_complex {"]
        for x, q in self.xq_edges:
            lines.append(f"  x{x} -- q{q};")
        for q, z in self.qz_edges:
            lines.append(f"  q{q} -- z{z};")
        for idx, (x, q, q2, z) in enumerate(self.faces):
            lines.append(f'  f{idx} [shape=point, xlabel="x{x} q{q} q{q2} z{z}"];')
        lines.append("}")
        return "\n".join(lines)


def _pair_index_order(shared: list[int], incident: dict[int, frozenset]) -> list[tuple[int, int]]:
    return [(shared[i], shared[i + 1]) for i in range(0, len(shared), 2)]


def _pair_greedy_adjacent(shared: list[int], incident: dict[int, frozenset]) -> list[tuple[int, int]]:
    remaining = list(shared)
    pairs = []
    while remaining:
        q = remaining.pop(0)
        best = max(range(len(remaining)), key=lambda i: (len(incident[q] & incident[remaining[i]]), -remaining[i]))
        q2 = remaining.pop(best)
        pairs.append((q, q2) if q < q2 else (q2, q))
    return pairs


def build_square_complex(code: CssCode, pairing: str = "index-order") -> SquareComplex:
    """Pair the shared qubits of every commuting check pair into faces.

    "index-order" pairs shared qubits sorted ascending, consecutively;
    "greedy-adjacent" pairs each qubit with the remaining one sharing the
    most checks. Raises if some check pair overlaps on an odd set.
    """
    if pairing not in PAIRINGS:
        raise ValueError(f"unknown pairing strategy {pairing!r}; expected one of {PAIRINGS}")
    pair_fn = _pair_index_order if pairing == "index-order" else _pair_greedy_adjacent

    x_supports = [frozenset(code.hx.row_support(i)) for i in range(code.hx.rows)]
    z_supports = [frozenset(code.hz.row_support(l)) for l in range(code.hz.rows)]
    incident: dict[int, frozenset] = {
        q: frozenset(
            [("x", i) for i, s in enumerate(x_supports) if q in s]
            + [("z", l) for l, s in enumerate(z_supports) if q in s]
        )
        for q in range(code.n)
    }

    faces = []
    for i, sx in enumerate(x_supports):
        for l, sz in enumerate(z_supports):
            shared = sorted(sx & sz)
            if len(shared) % 2:
                raise ValueError(
                    f"checks x={i} and z={l} share {len(shared)} qubits; "
                    "an even overlap is required"
                )
            for q, q2 in pair_fn(shared, incident):
                faces.append((i, q, q2, l))

    xq = tuple((i, q) for i, s in enumerate(x_supports) for q in sorted(s))
    qz = tuple((q, l) for l, s in enumerate(z_supports) for q in sorted(s))
    return SquareComplex(
        n_x=code.hx.rows,
        n_q=code.n,
        n_z=code.hz.rows,
        xq_edges=xq,
        qz_edges=qz,
        faces=tuple(faces),
    )


def local_star(sq: SquareComplex, v: tuple[str, int]):
    """Describe the neighborhood of one vertex.

    For a qubit ("q", j): the pair (n_x, n_z) of incident check counts,
    whose local piece is a product of stars. For a check ("x", i) or
    ("z", l): the link multigraph whose vertices are the incident qubits
    and whose edges are the incident faces.
    """
    kind, idx = v
    if kind == "q":
        if not 0 <= idx < sq.n_q:
            raise ValueError(f"no qubit {idx}")
        n_x = sum(1 for _, q in sq.xq_edges if q == idx)
        n_z = sum(1 for q, _ in sq.qz_edges if q == idx)
        return (n_x, n_z)
    if kind == "x":
        if not 0 <= idx < sq.n_x:
            raise ValueError(f"no X-check {idx}")
        stubs = [q for i, q in sq.xq_edges if i == idx]
        face_edges = [(q, q2) for x, q, q2, z in sq.faces if x == idx]
    elif kind == "z":
        if not 0 <= idx < sq.n_z:
            raise ValueError(f"no Z-check {idx}")
        stubs = [q for q, l in sq.qz_edges if l == idx]
        face_edges = [(q, q2) for x, q, q2, z in sq.faces if z == idx]
    else:
        raise ValueError(f"unknown vertex kind {kind!r}")
    link = nx.MultiGraph()
    link.add_nodes_from(stubs)
    link.add_edges_from(face_edges)
    return link

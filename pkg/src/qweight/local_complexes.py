"""Per-qubit product grids and per-check boundary graphs.

Each qubit of a square complex is replaced by the product of two combs,
one tooth per incident check on each side. A check's attachment region
inside that grid is the row (or column) of cells sitting on its tooth
tip. The boundary graph of a check is the union of its rows across all
incident qubits, with one vertex identification per square face.

Uniformization pads both comb factors to 4w teeth so every grid has the
same shape; in each group of four teeth one tip is the live port and the
other three are dummies. The dummies absorb the overflow when a random
3-regular expander is superimposed on the live ports, keeping the
boundary graph at max degree 3.
"""

from __future__ import annotations

import hashlib
import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from qweight.cells import CellComplex2, validate_complex
from qweight.cone import sparsify_star
from qweight.css import CssCode
from qweight.gf2 import BitMatrix
from qweight.square_complex import SquareComplex

GRID_VERTEX_DEGREE_BOUND = 6
GRID_EDGE_FACE_BOUND = 3
GRID_FACE_SIZE_BOUND = 4
BOUNDARY_DEGREE_BOUND = 3
DEFAULT_GAP_THRESHOLD = 0.1
MAX_EXPANDER_RETRIES = 64
CHEEGER_EXACT_LIMIT = 16


@dataclass(frozen=True)
class BoundaryRow:
    """One check's attachment region in a grid.

    The row is a full copy of the opposite comb factor translated to the
    check's tooth tip. ``vertices[b]`` is the grid vertex over opposite
    comb vertex b; ``edges[j]`` the grid edge over opposite comb edge j;
    ``rungs[b]`` the grid edge over (tooth edge, b), crossing out of the
    row. ``port_vertices[j]`` is the tip where the opposite side's port
    j crosses this row. On uniformized grids ``group_live`` lists one
    representative tip per group of four teeth (these carry the
    superimposed expander) and ``group_dummies`` their three dummy
    companions; both are empty on plain grids. All cell ids are grid
    ids.
    """

    tooth: int
    tip: int
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    rungs: tuple[int, ...]
    port_vertices: tuple[int, ...]
    group_live: tuple[int, ...]
    group_dummies: tuple[tuple[int, ...], ...]


@dataclass(frozen=True, eq=False)
class QubitGrid:
    """Product of two combs with port bookkeeping.

    Vertices are numbered a * shape[1] + b for factor vertices (a, b);
    horizontal edges (x-comb edge, z-comb vertex) come first in the edge
    list, then vertical ones. Faces are (x-comb edge, z-comb edge)
    squares. ``port_map[(side, i)]`` is the boundary row of port i.
    """

    complex: CellComplex2
    n_x_slots: int
    n_z_slots: int
    m_x: int
    m_z: int
    uniform_w: int | None
    shape: tuple[int, int]
    horizontal_edges: tuple[int, ...]
    vertical_edges: tuple[int, ...]
    port_map: dict[tuple[str, int], BoundaryRow]

    def vertex_id(self, a: int, b: int) -> int:
        return a * self.shape[1] + b

    def port_corner(self, x_port: int, z_port: int) -> int:
        """Grid vertex where the two ports' rows cross."""
        row = self.port_map[("x", x_port)]
        col = self.port_map[("z", z_port)]
        return row.vertices[col.tip]


def _live_tooth(i: int, uniform: bool) -> int:
    return 4 * i if uniform else i


def build_qubit_grid(n_x: int, n_z: int, uniform_w: int | None = None) -> QubitGrid:
    """Comb-product grid for a qubit with n_x X- and n_z Z-neighbors.

    Without uniformization the combs have exactly n_x and n_z teeth (a
    zero count degenerates that factor to a point, leaving a single
    comb). With uniform_w both factors get 4w teeth and each group of
    four consecutive teeth carries one live port and three dummies,
    which requires max(n_x, n_z) <= w.
    """
    if n_x < 0 or n_z < 0:
        raise ValueError(f"check counts must be nonnegative, got ({n_x}, {n_z})")
    if uniform_w is not None:
        if uniform_w < 1:
            raise ValueError(f"uniform width must be positive, got {uniform_w}")
        if 4 * uniform_w < max(n_x, n_z):
            raise ValueError(
                f"capacity violation: 4*{uniform_w} teeth cannot host "
                f"{max(n_x, n_z)} ports"
            )
        if uniform_w < max(n_x, n_z):
            raise ValueError(
                f"capacity violation: {uniform_w} groups of four teeth carry one "
                f"live port each, but {max(n_x, n_z)} ports are needed"
            )
        m_x = m_z = 4 * uniform_w
    else:
        m_x, m_z = n_x, n_z

    fx = sparsify_star(m_x)
    fz = sparsify_star(m_z)
    va, vb = fx.n_vertices, fz.n_vertices
    ea, eb = fx.edges, fz.edges

    def vid(a: int, b: int) -> int:
        return a * vb + b

    def hid(ei: int, b: int) -> int:
        return ei * vb + b

    def vid_e(a: int, ej: int) -> int:
        return len(ea) * vb + a * len(eb) + ej

    edges: list[tuple[int, int]] = []
    for a1, a2 in ea:
        for b in range(vb):
            edges.append((vid(a1, b), vid(a2, b)))
    for a in range(va):
        for b1, b2 in eb:
            edges.append((vid(a, b1), vid(a, b2)))
    faces: list[tuple[int, ...]] = []
    for ei, (a1, a2) in enumerate(ea):
        for ej, (b1, b2) in enumerate(eb):
            faces.append((hid(ei, b1), hid(ei, b2), vid_e(a1, ej), vid_e(a2, ej)))

    horizontal = tuple(range(len(ea) * vb))
    vertical = tuple(range(len(ea) * vb, len(edges)))

    uniform = uniform_w is not None
    port_map: dict[tuple[str, int], BoundaryRow] = {}
    n_groups = uniform_w if uniform else 0
    for i in range(n_x):
        tooth = _live_tooth(i, uniform)
        tip = m_x + tooth
        tooth_edge = (m_x - 1) + tooth
        port_map[("x", i)] = BoundaryRow(
            tooth=tooth,
            tip=tip,
            vertices=tuple(vid(tip, b) for b in range(vb)),
            edges=tuple(vid_e(tip, ej) for ej in range(len(eb))),
            rungs=tuple(hid(tooth_edge, b) for b in range(vb)),
            port_vertices=tuple(
                vid(tip, m_z + _live_tooth(j, uniform)) for j in range(n_z)
            ),
            group_live=tuple(vid(tip, m_z + 4 * g) for g in range(n_groups)),
            group_dummies=tuple(
                tuple(vid(tip, m_z + 4 * g + o) for o in (1, 2, 3))
                for g in range(n_groups)
            ),
        )
    for j in range(n_z):
        tooth = _live_tooth(j, uniform)
        tip = m_z + tooth
        tooth_edge = (m_z - 1) + tooth
        port_map[("z", j)] = BoundaryRow(
            tooth=tooth,
            tip=tip,
            vertices=tuple(vid(a, tip) for a in range(va)),
            edges=tuple(hid(ei, tip) for ei in range(len(ea))),
            rungs=tuple(vid_e(a, tooth_edge) for a in range(va)),
            port_vertices=tuple(
                vid(m_x + _live_tooth(i, uniform), tip) for i in range(n_x)
            ),
            group_live=tuple(vid(m_x + 4 * g, tip) for g in range(n_groups)),
            group_dummies=tuple(
                tuple(vid(m_x + 4 * g + o, tip) for o in (1, 2, 3))
                for g in range(n_groups)
            ),
        )

    grid = QubitGrid(
        complex=CellComplex2(va * vb, edges, faces),
        n_x_slots=n_x,
        n_z_slots=n_z,
        m_x=m_x,
        m_z=m_z,
        uniform_w=uniform_w,
        shape=(va, vb),
        horizontal_edges=horizontal,
        vertical_edges=vertical,
        port_map=port_map,
    )
    _check_grid_bounds(grid)
    return grid


def _check_grid_bounds(grid: QubitGrid) -> None:
    c = grid.complex
    validate_complex(c)
    degree = [0] * c.n_vertices
    for u, v in c.edges:
        degree[u] += 1
        degree[v] += 1
    if degree and max(degree) > GRID_VERTEX_DEGREE_BOUND:
        raise AssertionError(f"grid vertex degree {max(degree)} exceeds bound")
    face_count: defaultdict[int, int] = defaultdict(int)
    for cyc in c.faces:
        if len(cyc) > GRID_FACE_SIZE_BOUND:
            raise AssertionError(f"grid face with {len(cyc)} edges exceeds bound")
        for e in cyc:
            face_count[e] += 1
    if face_count and max(face_count.values()) > GRID_EDGE_FACE_BOUND:
        raise AssertionError("grid edge sits on too many faces")


def grid_local_code(grid: QubitGrid) -> CssCode:
    """CSS code of a grid: qubits on vertices and faces, X-checks on
    horizontal edges, Z-checks on vertical edges.

    A check's support is its edge's two endpoints plus the faces the
    edge borders. Commutation is structural: every face has exactly two
    horizontal and two vertical edges, so any crossing pair of checks
    shares exactly the face qubit and the corner vertex qubit.
    """
    c = grid.complex
    n = c.n_vertices + c.n_faces
    faces_at: defaultdict[int, list[int]] = defaultdict(list)
    for fi, cyc in enumerate(c.faces):
        for e in set(cyc):
            faces_at[e].append(fi)

    def support(eid: int) -> list[int]:
        u, v = c.edges[eid]
        return [u, v] + [c.n_vertices + f for f in faces_at[eid]]

    hx = BitMatrix.from_support(
        len(grid.horizontal_edges), n, [support(e) for e in grid.horizontal_edges]
    )
    hz = BitMatrix.from_support(
        len(grid.vertical_edges), n, [support(e) for e in grid.vertical_edges]
    )
    return CssCode(hx, hz, label=f"grid{grid.m_x}x{grid.m_z}")


def cheeger_exact(g: nx.Graph) -> Fraction:
    """Edge expansion by exhaustive cut enumeration.

    min over cuts of |boundary edges| / |smaller side|; only feasible
    for small graphs, so the vertex count is capped.
    """
    nodes = list(g.nodes())
    n = len(nodes)
    if n < 2:
        raise ValueError("expansion needs at least two vertices")
    if n > CHEEGER_EXACT_LIMIT:
        raise ValueError(f"{n} vertices exceed the exact enumeration cap")
    idx = {v: i for i, v in enumerate(nodes)}
    adj = [0] * n
    for u, v in g.edges():
        if u == v:
            continue
        adj[idx[u]] |= 1 << idx[v]
        adj[idx[v]] |= 1 << idx[u]
    best: Fraction | None = None
    # fixing the last vertex outside S visits every cut exactly once
    for mask in range(1, 1 << (n - 1)):
        size = mask.bit_count()
        cut = 0
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            cut += (adj[i] & ~mask).bit_count()
        h = Fraction(cut, min(size, n - size))
        if best is None or h < best:
            best = h
    assert best is not None
    return best


def spectral_gap(g: nx.Graph) -> float:
    """Second-smallest eigenvalue of the graph Laplacian."""
    if g.number_of_nodes() < 2:
        raise ValueError("spectral gap needs at least two vertices")
    lap = nx.laplacian_matrix(g).toarray().astype(float)
    return float(np.linalg.eigvalsh(lap)[1])


def _derive_seed(*parts) -> int:
    digest = hashlib.sha256(repr(parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _cheeger_or_bound(g: nx.Graph, gap: float) -> Fraction:
    if g.number_of_nodes() <= CHEEGER_EXACT_LIMIT:
        return cheeger_exact(g)
    # gap/2 is only a lower-bound estimate; six digits is plenty
    return Fraction(round(gap / 2 * 10**6), 10**6)


def sample_regular_expander(
    n: int,
    seed: int,
    gap_threshold: float = DEFAULT_GAP_THRESHOLD,
    max_retries: int = MAX_EXPANDER_RETRIES,
) -> nx.Graph:
    """Random 3-regular graph, reseeded until it is connected with
    Laplacian gap above the threshold."""
    if n < 4 or n % 2:
        raise ValueError(f"a 3-regular graph needs an even count >= 4, got {n}")
    for attempt in range(max_retries):
        rng = random.Random(_derive_seed(seed, attempt))
        g = nx.random_regular_graph(3, n, seed=rng)
        if nx.is_connected(g) and spectral_gap(g) > gap_threshold:
            return g
    raise RuntimeError(
        f"no {n}-vertex regular expander after {max_retries} attempts (seed {seed})"
    )


def expander_superimpose(
    g: nx.Graph,
    dummies: dict,
    seed: int,
    gap_threshold: float = DEFAULT_GAP_THRESHOLD,
    max_retries: int = MAX_EXPANDER_RETRIES,
    pinned: frozenset = frozenset(),
) -> nx.Graph:
    """Superimpose a random 3-regular graph on the live vertices.

    ``dummies`` maps each live vertex to its >= 3 dummy companions. An
    expander edge whose endpoint already has degree 3 is rerouted
    round-robin to that endpoint's dummies, so the result stays at max
    degree 3. Vertices in ``pinned`` never take a direct placement, only
    their dummies do; identified corners go there because they stand in
    for two qubit cells and have no degree headroom left. Regular graphs
    are rejected and reseeded until they are connected with Laplacian
    gap above the threshold and the combined graph is connected. The
    result records ``expander_edges``, ``cheeger_estimate`` (exact cut
    enumeration up to 16 vertices, else the gap/2 lower-bound estimate)
    and ``spectral_gap`` in its graph attributes.
    """
    lives = sorted(dummies)
    owner: dict = {}
    for v, ds in dummies.items():
        if v not in g:
            raise ValueError(f"live vertex {v!r} is not in the graph")
        if len(ds) < 3:
            raise ValueError(
                f"insufficient dummies: live vertex {v!r} has {len(ds)}, needs 3"
            )
        for d in ds:
            if d not in g:
                raise ValueError(f"dummy vertex {d!r} is not in the graph")
            owner[d] = v

    participants = list(lives)
    if len(participants) >= 4 and len(participants) % 2:
        # a 3-regular graph needs an even vertex count; borrow one dummy
        participants.append(dummies[lives[0]][0])

    if len(participants) < 2:
        out = g.copy()
        out.graph["expander_edges"] = frozenset()
        gap = spectral_gap(out) if out.number_of_nodes() >= 2 else 0.0
        out.graph["spectral_gap"] = gap
        out.graph["cheeger_estimate"] = (
            _cheeger_or_bound(out, gap) if out.number_of_nodes() >= 2 else Fraction(0)
        )
        return out

    rr: defaultdict = defaultdict(int)

    def place(out: nx.Graph, vertex, avoid) -> object:
        if out.degree(vertex) < 3 and vertex not in avoid and vertex not in pinned:
            return vertex
        group = dummies.get(vertex) or dummies[owner[vertex]]
        for step in range(len(group)):
            cand = group[(rr[vertex] + step) % len(group)]
            if out.degree(cand) < 3 and cand not in avoid:
                rr[vertex] += step + 1
                return cand
        raise RuntimeError(f"no spare dummy near {vertex!r}")

    for attempt in range(max_retries):
        if len(participants) == 2:
            extra = [(participants[0], participants[1])]
        elif len(participants) == 3:
            extra = [
                (participants[0], participants[1]),
                (participants[1], participants[2]),
                (participants[2], participants[0]),
            ]
        else:
            reg = sample_regular_expander(
                len(participants), _derive_seed(seed, attempt),
                gap_threshold=gap_threshold, max_retries=max_retries,
            )
            relabel = dict(enumerate(participants))
            extra = [(relabel[u], relabel[v]) for u, v in reg.edges()]

        out = g.copy()
        added = []
        for u, v in sorted(extra, key=repr):
            u2 = place(out, u, avoid=(v,))
            v2 = place(out, v, avoid=(u2, *out.neighbors(u2)))
            out.add_edge(u2, v2)
            added.append((u2, v2))
        if not nx.is_connected(out):
            continue
        if max(d for _, d in out.degree()) > BOUNDARY_DEGREE_BOUND:
            raise AssertionError("redistribution exceeded the degree bound")
        gap = spectral_gap(out)
        out.graph["expander_edges"] = frozenset(frozenset(e) for e in added)
        out.graph["spectral_gap"] = gap
        out.graph["cheeger_estimate"] = _cheeger_or_bound(out, gap)
        return out
    raise RuntimeError(
        f"no usable expander after {max_retries} attempts (seed {seed})"
    )


@dataclass(frozen=True, eq=False)
class CheckBoundaryGraph:
    """Boundary graph of one check: the union of its rows across the
    incident qubit grids, corners identified face by face, dummies
    carrying the superimposed expander.

    Nodes are (qubit, grid vertex id) pairs; identified corners keep the
    lexicographically smallest pair as representative, and ``node_map``
    sends every original pair to its representative.
    """

    check: tuple[str, int]
    graph: nx.Graph
    ports: dict[int, int]
    node_map: dict[tuple[int, int], tuple[int, int]]
    expander_edges: frozenset
    cheeger_estimate: Fraction
    spectral_gap: float


def qubit_ports(sq: SquareComplex, q: int) -> tuple[list[int], list[int]]:
    """Incident X- and Z-check ids of a qubit, in port order."""
    xs = sorted(i for i, qq in sq.xq_edges if qq == q)
    zs = sorted(l for qq, l in sq.qz_edges if qq == q)
    return xs, zs


def build_all_grids(sq: SquareComplex, uniform_w: int | None = None) -> dict[int, QubitGrid]:
    """One grid per qubit, sized by its check incidences."""
    out = {}
    for q in range(sq.n_q):
        xs, zs = qubit_ports(sq, q)
        out[q] = build_qubit_grid(len(xs), len(zs), uniform_w)
    return out


def build_check_boundary(
    sq: SquareComplex,
    v: tuple[str, int],
    grids: dict[int, QubitGrid],
    seed: int,
    gap_threshold: float = DEFAULT_GAP_THRESHOLD,
    max_retries: int = MAX_EXPANDER_RETRIES,
) -> CheckBoundaryGraph:
    """Assemble the boundary graph of check v from the incident rows.

    Every face at v identifies one pair of corner vertices between the
    two qubits it couples. Uniformized grids then receive the dummy
    expander, with the identified corners pinned so they keep degree 2;
    plain grids are left as built and only checked for connectivity.
    """
    kind, idx = v
    if kind == "x":
        if not 0 <= idx < sq.n_x:
            raise ValueError(f"no X-check {idx}")
        incident = sorted(q for i, q in sq.xq_edges if i == idx)
        face_triples = [(q, q2, z) for x, q, q2, z in sq.faces if x == idx]
    elif kind == "z":
        if not 0 <= idx < sq.n_z:
            raise ValueError(f"no Z-check {idx}")
        incident = sorted(q for q, l in sq.qz_edges if l == idx)
        face_triples = [(q, q2, x) for x, q, q2, z in sq.faces if z == idx]
    else:
        raise ValueError(f"unknown check kind {kind!r}")
    if not incident:
        raise ValueError(f"check {v} has no incident qubits")

    other = "z" if kind == "x" else "x"
    ports: dict[int, int] = {}
    rows: dict[int, BoundaryRow] = {}
    for q in incident:
        if q not in grids:
            raise ValueError(f"port exhaustion: no grid for qubit {q}")
        xs, zs = qubit_ports(sq, q)
        own = xs if kind == "x" else zs
        if idx not in own:
            raise ValueError(f"port exhaustion: qubit {q} has no port for {v}")
        slots = grids[q].n_x_slots if kind == "x" else grids[q].n_z_slots
        if len(own) != slots:
            raise ValueError(
                f"port exhaustion: grid of qubit {q} has {slots} {kind}-ports "
                f"for {len(own)} incidences"
            )
        ports[q] = own.index(idx)
        rows[q] = grids[q].port_map[(kind, ports[q])]

    # union-find over (qubit, grid vertex) pairs, smallest pair wins
    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(a: tuple[int, int]) -> tuple[int, int]:
        while parent.get(a, a) != a:
            parent[a] = parent.get(parent[a], parent[a])
            a = parent[a]
        return a

    def union(a: tuple[int, int], b: tuple[int, int]) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            lo, hi = (ra, rb) if ra < rb else (rb, ra)
            parent[hi] = lo

    all_corners: list[tuple[int, int]] = []
    for q, q2, partner in face_triples:
        corners = []
        for qq in (q, q2):
            xs, zs = qubit_ports(sq, qq)
            partner_port = (zs if kind == "x" else xs).index(partner)
            grid = grids[qq]
            if kind == "x":
                corner = grid.port_corner(ports[qq], partner_port)
            else:
                corner = grid.port_corner(partner_port, ports[qq])
            corners.append((qq, corner))
        union(corners[0], corners[1])
        all_corners.extend(corners)

    node_map: dict[tuple[int, int], tuple[int, int]] = {}
    graph = nx.Graph()
    for q in incident:
        grid = grids[q]
        row = rows[q]
        for vid in row.vertices:
            node_map[(q, vid)] = find((q, vid))
        for eid in row.edges:
            a, b = grid.complex.edges[eid]
            graph.add_edge(find((q, a)), find((q, b)))
    graph.add_nodes_from(node_map.values())

    dummies: dict[tuple[int, int], list[tuple[int, int]]] = {}
    uniform = all(grids[q].uniform_w is not None for q in incident)
    if uniform:
        # Identified corners sit at live tips, so two groups can land on
        # one representative; it keeps both dummy sets, standing in for
        # two cells' worth of rerouting capacity.
        for q in incident:
            for live, ds in zip(rows[q].group_live, rows[q].group_dummies):
                rep = node_map[(q, live)]
                dummies.setdefault(rep, []).extend(node_map[(q, d)] for d in ds)
        final = expander_superimpose(
            graph, dummies, _derive_seed(seed, kind, idx),
            gap_threshold=gap_threshold, max_retries=max_retries,
            pinned=frozenset(find(c) for c in all_corners),
        )
    else:
        if not nx.is_connected(graph):
            raise RuntimeError(
                f"boundary of {v} is disconnected and has no dummies to "
                "expand over; uniformize the grids"
            )
        final = graph.copy()
        gap = spectral_gap(final)
        final.graph["expander_edges"] = frozenset()
        final.graph["spectral_gap"] = gap
        final.graph["cheeger_estimate"] = _cheeger_or_bound(final, gap)

    if max(d for _, d in final.degree()) > BOUNDARY_DEGREE_BOUND:
        raise AssertionError(f"boundary of {v} exceeds degree {BOUNDARY_DEGREE_BOUND}")
    if not nx.is_connected(final):
        raise RuntimeError(f"boundary of {v} is disconnected")
    return CheckBoundaryGraph(
        check=v,
        graph=final,
        ports=ports,
        node_map=node_map,
        expander_edges=final.graph["expander_edges"],
        cheeger_estimate=final.graph["cheeger_estimate"],
        spectral_gap=final.graph["spectral_gap"],
    )

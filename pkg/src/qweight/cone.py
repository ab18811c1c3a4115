"""Cone complexes over degree-limited graphs.

The builder collapses the graph layer by layer. Each round picks a
parallel set of moves with disjoint supports and stacks the mapping
cylinder of the round onto the complex:

- kill: one of a doubled edge pair dies across a quad face;
- contract: an edge with endpoint degree sum at most 4 collapses
  across a triangle, and the at most two surviving side edges reattach
  to the image vertex through quad faces;
- merge: an isolated vertex joins a low-degree vertex, no face needed;
- plug: an interior cycle of length 3 to 5 is closed by a single face
  made of its own edges, and its oldest edge is cut from the next
  layer, the plug being that edge's only incidence;
- shrink: on a cycle of length 6 or more, two edges three steps apart
  gain midpoint stations joined by a chord, which manufactures a
  five-cycle that the next round plugs.

Kills, contracts, and plugs each remove an edge, merges remove a
vertex, and every shrink is answered by a plug one round later, so the
layers end at a single apex: the complex carries the input graph as
its marked boundary and retracts onto a point. Each build is audited
(degree, face incidence, face size, and homology ranks) before the
certificate is returned.
"""

from __future__ import annotations

from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field

from qweight.cells import CellComplex2, homology_ranks

VERTEX_DEGREE_BOUND = 5
EDGE_FACE_BOUND = 4
FACE_SIZE_BOUND = 5
BOUNDARY_VERTEX_DEGREE_BOUND = 4
BOUNDARY_EDGE_FACE_BOUND = 1


@dataclass(frozen=True)
class ConeCertificate:
    vertex_degree_max: int
    edge_face_max: int
    face_size_max: int
    boundary_vertex_degree_max: int
    boundary_edge_face_max: int
    cells_total: int
    h0_rank: int
    h1_rank: int


def sparsify_star(n: int) -> CellComplex2:
    """Comb replacement for an n-pronged star: n backbone vertices on a
    path, one pendant tooth each, max degree 3. The tooth tips are the
    marked attachment points. n=0 degenerates to a single marked vertex."""
    if n < 0:
        raise ValueError(f"tooth count must be nonnegative, got {n}")
    if n == 0:
        return CellComplex2(1, [], [], marked_vertices=frozenset({0}))
    edges = [(i, i + 1) for i in range(n - 1)]
    edges += [(i, n + i) for i in range(n)]
    return CellComplex2(2 * n, edges, [], marked_vertices=frozenset(range(n, 2 * n)))


def boundary_maps(g) -> tuple[dict, dict]:
    """Canonical correspondence between a graph and its cone's marked
    cells: nodes and edges in graph iteration order map to vertex ids
    0.. and edge ids 0.. respectively."""
    vmap = {node: i for i, node in enumerate(g.nodes())}
    edge_iter = g.edges(keys=True) if g.is_multigraph() else g.edges()
    emap = {e: i for i, e in enumerate(edge_iter)}
    return vmap, emap


@dataclass
class _Moves:
    kills: list = field(default_factory=list)      # (keep_idx, dead_idx)
    merges: list = field(default_factory=list)     # (u, v) sharing an image
    contracts: list = field(default_factory=list)  # (edge_idx, side_idxs)
    plugs: list = field(default_factory=list)      # (cycle_idxs, cut_idx)
    shrinks: list = field(default_factory=list)    # (edge_idx_a, edge_idx_b)

    def __bool__(self) -> bool:
        return bool(self.kills or self.merges or self.contracts
                    or self.plugs or self.shrinks)


def _shortest_cycle(es, banned_v: set[int], banned_e: set[int]) -> list[int] | None:
    """Vertices of a shortest cycle avoiding the banned cells, or None."""
    adj: defaultdict = defaultdict(list)
    live = []
    for idx, (_, u, v) in enumerate(es):
        if idx in banned_e or u in banned_v or v in banned_v:
            continue
        adj[u].append((idx, v))
        adj[v].append((idx, u))
        live.append(idx)
    best: list[int] | None = None
    for idx in live:
        _, u, v = es[idx]
        prev: dict[int, int | None] = {u: None}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if x == v:
                break
            for j, y in adj[x]:
                if j == idx or y in prev:
                    continue
                prev[y] = x
                queue.append(y)
        if v in prev:
            path = [v]
            while path[-1] != u:
                path.append(prev[path[-1]])
            if best is None or len(path) < len(best):
                best = path
                if len(best) == 2:
                    break
    return best


def _select_moves(vs, es, first_round: bool) -> _Moves:
    deg: Counter = Counter()
    adj: defaultdict = defaultdict(list)
    pair_edges: defaultdict = defaultdict(list)
    for idx, (_, u, v) in enumerate(es):
        deg[u] += 1
        deg[v] += 1
        adj[u].append(idx)
        adj[v].append(idx)
        pair_edges[frozenset((u, v))].append(idx)

    moves = _Moves()
    used_v: set[int] = set()
    used_e: set[int] = set()

    for key in sorted((k for k, ix in pair_edges.items() if len(ix) >= 2),
                      key=lambda k: min(pair_edges[k])):
        u, v = tuple(key)
        if u in used_v or v in used_v:
            continue
        keep, dead = pair_edges[key][0], pair_edges[key][1]
        moves.kills.append((keep, dead))
        used_v |= {u, v}
        used_e |= {keep, dead}

    isolated = sorted(v for v in vs if deg[v] == 0 and v not in used_v)
    for i in range(0, len(isolated) - 1, 2):
        moves.merges.append((isolated[i], isolated[i + 1]))
        used_v |= {isolated[i], isolated[i + 1]}
    if len(isolated) % 2 and len(vs) > 1:
        u = isolated[-1]
        targets = sorted((deg[v], v) for v in vs
                         if v != u and v not in used_v and deg[v] <= 2)
        if targets:
            v = targets[0][1]
            moves.merges.append((u, v))
            used_v |= {u, v}

    order = sorted(range(len(es)), key=lambda i: (deg[es[i][1]] + deg[es[i][2]], i))
    for idx in order:
        _, u, v = es[idx]
        if deg[u] + deg[v] > 4:
            break
        if idx in used_e or u in used_v or v in used_v:
            continue
        if len(pair_edges[frozenset((u, v))]) > 1:
            continue
        side = sorted(set(i for i in adj[u] + adj[v] if i != idx))
        if any(i in used_e for i in side):
            continue
        moves.contracts.append((idx, side))
        used_v |= {u, v}
        used_e.add(idx)
        used_e |= set(side)

    searched_e: set[int] = set(used_e)
    for _ in range(len(es)):
        cyc = _shortest_cycle(es, used_v, searched_e)
        if cyc is None:
            break
        length = len(cyc)
        if length < 3:
            searched_e |= set(pair_edges[frozenset(cyc)])
            continue
        eids = []
        for i in range(length):
            key = frozenset((cyc[i], cyc[(i + 1) % length]))
            eids.append(min(j for j in pair_edges[key] if j not in searched_e))
        if length <= 5:
            if not first_round:
                cut = min(eids, key=lambda j: es[j][0])
                moves.plugs.append((eids, cut))
                used_v |= set(cyc)
                used_e |= set(eids)
            searched_e |= set(eids)
        else:
            a, b = eids[0], eids[3]
            moves.shrinks.append((a, b))
            used_v |= set(es[a][1:]) | set(es[b][1:])
            used_e |= {a, b}
            searched_e |= set(eids)
    return moves


def _apply_round(vs, es, moves, edges, faces, n_vertices):
    phi: dict[int, int] = {}
    next_vs: list[int] = []

    def fresh() -> int:
        nonlocal n_vertices
        vid = n_vertices
        n_vertices += 1
        next_vs.append(vid)
        return vid

    contract_image: dict[int, int] = {}
    for idx, _ in moves.contracts:
        _, u, v = es[idx]
        w = fresh()
        phi[u] = phi[v] = w
        contract_image[idx] = w
    for u, v in moves.merges:
        phi[u] = phi[v] = fresh()
    for v in vs:
        if v not in phi:
            phi[v] = fresh()

    vert: dict[int, int] = {}
    for v in vs:
        vert[v] = len(edges)
        edges.append((v, phi[v]))

    next_es: list[tuple[int, int, int]] = []

    def new_edge(a: int, b: int) -> int:
        geid = len(edges)
        edges.append((a, b))
        next_es.append((geid, a, b))
        return geid

    dead_of = {dead: keep for keep, dead in moves.kills}
    sides = {s for _, side in moves.contracts for s in side}
    cuts = {cut for _, cut in moves.plugs}
    stations: dict[int, tuple[int, int, int]] = {}
    for a, b in moves.shrinks:
        for idx in (a, b):
            geid, u, v = es[idx]
            s = fresh()
            e1 = new_edge(phi[u], s)
            e2 = new_edge(s, phi[v])
            stations[idx] = (s, e1, e2)

    img: dict[int, int] = {}
    for idx, (_, u, v) in enumerate(es):
        if idx in dead_of or idx in contract_image or idx in sides:
            continue
        if idx in cuts or idx in stations:
            continue
        img[idx] = new_edge(phi[u], phi[v])

    for a, b in moves.shrinks:
        new_edge(stations[a][0], stations[b][0])

    for idx, side in moves.contracts:
        geid, u, v = es[idx]
        w = contract_image[idx]
        faces.append((geid, vert[u], vert[v]))
        for s in side:
            s_geid, a, b = es[s]
            near, far = (a, b) if a in (u, v) else (b, a)
            direct = new_edge(w, phi[far])
            faces.append((s_geid, vert[near], direct, vert[far]))

    for eids, _ in moves.plugs:
        faces.append(tuple(es[j][0] for j in eids))

    for idx, (geid, u, v) in enumerate(es):
        if idx in contract_image or idx in sides or idx in cuts:
            continue
        if idx in stations:
            s, e1, e2 = stations[idx]
            faces.append((geid, vert[u], e1, e2, vert[v]))
        elif idx in dead_of:
            faces.append((geid, vert[u], img[dead_of[idx]], vert[v]))
        else:
            faces.append((geid, vert[u], img[idx], vert[v]))

    return next_vs, next_es, n_vertices


def cone_over_graph(g, max_rounds: int | None = None) -> tuple[CellComplex2, ConeCertificate]:
    """Build a 2-complex that contains g as its marked boundary and
    collapses onto a point, with every cell meeting the degree and
    incidence bounds asserted by the returned certificate."""
    if g.number_of_nodes() == 0:
        raise ValueError("cannot cone an empty graph")
    degrees = dict(g.degree())
    worst = max(degrees, key=lambda v: degrees[v])
    if degrees[worst] > 3:
        raise ValueError(f"vertex {worst!r} has degree {degrees[worst]}, limit is 3")
    vmap, emap = boundary_maps(g)
    for e in emap:
        if e[0] == e[1]:
            raise ValueError(f"self-loop at {e[0]!r} is not supported")

    n_vertices = g.number_of_nodes()
    edges: list[tuple[int, int]] = []
    faces: list[tuple[int, ...]] = []
    cur_vs = list(range(n_vertices))
    cur_es: list[tuple[int, int, int]] = []
    for e, eid in emap.items():
        edges.append((vmap[e[0]], vmap[e[1]]))
        cur_es.append((eid, vmap[e[0]], vmap[e[1]]))
    marked_v = frozenset(range(n_vertices))
    marked_e = frozenset(range(len(edges)))

    if max_rounds is None:
        max_rounds = 64 + 16 * (n_vertices + len(edges)).bit_length()

    for rnd in range(max_rounds):
        if len(cur_vs) == 1 and not cur_es:
            break
        moves = _select_moves(cur_vs, cur_es, first_round=(rnd == 0))
        if not moves and rnd > 0:
            raise RuntimeError("no applicable move; the collapse is stuck")
        cur_vs, cur_es, n_vertices = _apply_round(
            cur_vs, cur_es, moves, edges, faces, n_vertices)
    else:
        raise RuntimeError(f"graph failed to collapse within {max_rounds} rounds")

    cone = CellComplex2(n_vertices, edges, faces, marked_v, marked_e)
    return cone, _certify(cone)


def _certify(c: CellComplex2) -> ConeCertificate:
    deg = [0] * c.n_vertices
    for u, v in c.edges:
        deg[u] += 1
        deg[v] += 1
    edge_faces = [0] * c.n_edges
    for cyc in c.faces:
        for e in set(cyc):
            edge_faces[e] += 1
    h0, h1, h2 = homology_ranks(c)
    cert = ConeCertificate(
        vertex_degree_max=max(deg, default=0),
        edge_face_max=max(edge_faces, default=0),
        face_size_max=max((len(cyc) for cyc in c.faces), default=0),
        boundary_vertex_degree_max=max((deg[v] for v in c.marked_vertices), default=0),
        boundary_edge_face_max=max((edge_faces[e] for e in c.marked_edges), default=0),
        cells_total=c.n_cells,
        h0_rank=h0,
        h1_rank=h1,
    )
    sound = (cert.vertex_degree_max <= VERTEX_DEGREE_BOUND
             and cert.edge_face_max <= EDGE_FACE_BOUND
             and cert.face_size_max <= FACE_SIZE_BOUND
             and cert.boundary_vertex_degree_max <= BOUNDARY_VERTEX_DEGREE_BOUND
             and cert.boundary_edge_face_max <= BOUNDARY_EDGE_FACE_BOUND
             and cert.h0_rank == 1 and cert.h1_rank == 0 and h2 == 0)
    if not sound:
        raise RuntimeError(f"cone audit failed: {cert}, h2={h2}")
    return cert


def to_obj(c: CellComplex2, coords: dict[int, tuple[float, float, float]] | None = None) -> str:
    """Mesh text for inspection: one v line per vertex, l per edge, f per
    face (vertex loop recovered by walking the face's edge cycle)."""
    lines = []
    for vid in range(c.n_vertices):
        x, y, z = coords[vid] if coords else (float(vid % 16), float(vid // 16), 0.0)
        lines.append(f"v {x:g} {y:g} {z:g}")
    for u, v in c.edges:
        lines.append(f"l {u + 1} {v + 1}")
    for cyc in c.faces:
        loop = _vertex_cycle(c, cyc)
        lines.append("f " + " ".join(str(v + 1) for v in loop))
    return "\n".join(lines) + "\n"


def _vertex_cycle(c: CellComplex2, cycle: tuple[int, ...]) -> list[int]:
    remaining = list(cycle)
    u, v = c.edges[remaining.pop(0)]
    path = [u, v]
    while remaining:
        for i, e in enumerate(remaining):
            a, b = c.edges[e]
            if a == path[-1]:
                path.append(b)
                remaining.pop(i)
                break
            if b == path[-1]:
                path.append(a)
                remaining.pop(i)
                break
        else:
            return sorted(set(path))
    return path[:-1]

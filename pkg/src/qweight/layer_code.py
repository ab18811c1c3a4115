"""Axis-aligned plane stacking: a 3D-local embedding for dense CSS codes.

Every vertex of the input's Tanner graph gets its own plane in a cubic
lattice: X-check i the plane x = 2i, qubit j the plane y = 2j, Z-check l
the plane z = 2l. Each plane carries a rotated grid code whose cell roles
alternate with the parity of the two in-plane coordinates:

    plane    in-plane axes   X-checks     Z-checks     qubits
    x        (y, z)          even, even   odd, odd     mixed parity
    q        (x, z)          odd, even    even, odd    equal parity
    z        (x, y)          odd, odd     even, even   mixed parity

In-plane checks act on their lattice neighbours, so every plane is a
small surface-code patch; the patch shapes are chosen so that an x plane
contributes one redundant X-stabilizer product, a q plane one encoded
qubit, and a z plane one redundant Z product, and nothing else. Two
planes from adjacent Tanner-graph classes cross along a grid line whose
cells alternate between check and qubit roles in both planes at once.
A Tanner edge is realized on that line: each check cell of one plane
picks up the co-located qubit of the other. Where an x plane crosses a
z plane, the crossings at shared qubit planes would each leave one
anticommuting check pair; the shared crossings come in pairs (that is
exactly the input's commutation constraint), are paired left to right
along y, and a defect seam runs along each paired segment: the x plane's
odd-line qubits join the Z-check one lattice step to the left, and the
z plane's odd-line qubits join the X-check one step to the right. The
seam cancels both crossing conflicts without moving any cell, so every
stabilizer keeps its support inside a box of side 2.

Cell ids are assigned plane by plane (x planes, then q, then z; row-major
within a plane), so a build is a pure function of the input matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

from qweight.assembler import VerificationError
from qweight.css import CssCode, validate
from qweight.gf2 import BitMatrix, rank

STABILIZER_WEIGHT_BOUND = 6

CellKey = tuple[str, int]
PlaneKey = tuple[str, int]
Point = tuple[int, int, int]

_ROLES = {
    # (plane kind, first-axis parity, second-axis parity) -> cell role
    ("x", 0, 0): "x_check", ("x", 1, 1): "z_check",
    ("x", 0, 1): "qubit", ("x", 1, 0): "qubit",
    ("q", 1, 0): "x_check", ("q", 0, 1): "z_check",
    ("q", 0, 0): "qubit", ("q", 1, 1): "qubit",
    ("z", 1, 1): "x_check", ("z", 0, 0): "z_check",
    ("z", 0, 1): "qubit", ("z", 1, 0): "qubit",
}


def _lift(plane: PlaneKey, u: int, v: int) -> Point:
    """3D position of the in-plane point (u, v)."""
    kind, index = plane
    if kind == "x":
        return (2 * index, u, v)
    if kind == "q":
        return (u, 2 * index, v)
    return (u, v, 2 * index)


@dataclass(frozen=True)
class LayerEmbedding:
    """A layered code with its lattice placement.

    coords maps every output cell ("qubit" | "x_check" | "z_check", index)
    to its integer lattice point; co-located cells from different planes
    are distinct keys with equal coordinates. layer_index maps the same
    keys to the source plane ("x" | "q" | "z", input index).
    locality_radius is the largest bounding-box side over all stabilizer
    supports, the check's own position included.
    """

    code: CssCode
    coords: dict[CellKey, Point]
    locality_radius: int
    layer_index: dict[CellKey, PlaneKey]

    @property
    def plane_count(self) -> int:
        return len(set(self.layer_index.values()))


@dataclass(frozen=True)
class LocalityAudit:
    """Recomputed bounding boxes: (min corner, max corner) per check."""

    boxes: dict[CellKey, tuple[Point, Point]]
    max_side: int
    violations: tuple[CellKey, ...]


def _support_boxes(code: CssCode, coords: dict[CellKey, Point]) -> dict[CellKey, tuple[Point, Point]]:
    boxes: dict[CellKey, tuple[Point, Point]] = {}
    for role, m in (("x_check", code.hx), ("z_check", code.hz)):
        for r in range(m.rows):
            pts = [coords[(role, r)]]
            pts += [coords[("qubit", q)] for q in m.row_support(r)]
            lo = tuple(min(p[axis] for p in pts) for axis in range(3))
            hi = tuple(max(p[axis] for p in pts) for axis in range(3))
            boxes[(role, r)] = (lo, hi)
    return boxes


def build_layer_code(code: CssCode) -> LayerEmbedding:
    """Lay the code out as one plane per check and per qubit.

    The output commutes, keeps k (verified by rank), and has every check
    and qubit weight at most STABILIZER_WEIGHT_BOUND; checks fit in
    bounding boxes of constant side regardless of the input size. Qubit
    count grows as the product of the three class sizes, cubic in n for
    dense inputs. Raises ValueError on an input that fails validation and
    VerificationError if any of the output guarantees does not hold.
    """
    report = validate(code)
    if not report.ok:
        i, l = report.anticommuting_pairs[0]
        raise ValueError(
            f"input failed validation: X check {i} and Z check {l} overlap oddly"
        )
    n, m_x, m_z = code.n, code.hx.rows, code.hz.rows
    if n == 0:
        raise ValueError("cannot lay out a code with no qubits")

    # In-plane extents; a class with no planes still leaves a width-1 slab
    # so the remaining planes stay two-dimensional complexes (possibly a
    # single line or point, which the role pattern handles).
    x_extent = 2 * (m_x - 1) if m_x else 0
    y_extent = 2 * (n - 1)
    z_extent = 2 * (m_z - 1) if m_z else 0
    extents = {"x": (y_extent, z_extent), "q": (x_extent, z_extent), "z": (x_extent, y_extent)}

    planes: list[PlaneKey] = (
        [("x", i) for i in range(m_x)]
        + [("q", j) for j in range(n)]
        + [("z", l) for l in range(m_z)]
    )

    ids = {"qubit": {}, "x_check": {}, "z_check": {}}
    coords: dict[CellKey, Point] = {}
    layer_index: dict[CellKey, PlaneKey] = {}
    for plane in planes:
        u_max, v_max = extents[plane[0]]
        for u in range(u_max + 1):
            for v in range(v_max + 1):
                role = _ROLES[(plane[0], u % 2, v % 2)]
                cell = (role, len(ids[role]))
                ids[role][(plane, (u, v))] = cell[1]
                coords[cell] = _lift(plane, u, v)
                layer_index[cell] = plane
    qubit_id, x_id, z_id = ids["qubit"], ids["x_check"], ids["z_check"]
    n_new = len(qubit_id)

    hx_rows: list[set[int]] = [set() for _ in range(len(x_id))]
    hz_rows: list[set[int]] = [set() for _ in range(len(z_id))]

    # In-plane stars: every check acts on its lattice neighbours, which are
    # qubit cells whenever they exist (the role pattern alternates).
    for (check_ids, out_rows) in ((x_id, hx_rows), (z_id, hz_rows)):
        for (plane, (u, v)), cid in check_ids.items():
            for du, dv in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                q = qubit_id.get((plane, (u + du, v + dv)))
                if q is not None:
                    out_rows[cid].add(q)

    x_supports = [code.hx.row_support(i) for i in range(m_x)]
    z_supports = [code.hz.row_support(l) for l in range(m_z)]

    # Tanner edge (x_i, q_j): both planes own the line x=2i, y=2j. At even
    # z the x plane holds an X-check over the q plane's qubit; at odd z the
    # x plane holds a qubit over the q plane's Z-check.
    for i, js in enumerate(x_supports):
        for j in js:
            for z in range(z_extent + 1):
                if z % 2 == 0:
                    hx_rows[x_id[(("x", i), (2 * j, z))]].add(
                        qubit_id[(("q", j), (2 * i, z))]
                    )
                else:
                    hz_rows[z_id[(("q", j), (2 * i, z))]].add(
                        qubit_id[(("x", i), (2 * j, z))]
                    )

    # Tanner edge (q_j, z_l): the line y=2j, z=2l. At odd x the q plane
    # holds an X-check over the z plane's qubit; at even x the z plane
    # holds a Z-check under the q plane's qubit.
    for l, js in enumerate(z_supports):
        for j in js:
            for x in range(x_extent + 1):
                if x % 2 == 1:
                    hx_rows[x_id[(("q", j), (x, 2 * l))]].add(
                        qubit_id[(("z", l), (x, 2 * j))]
                    )
                else:
                    hz_rows[z_id[(("z", l), (x, 2 * j))]].add(
                        qubit_id[(("q", j), (x, 2 * l))]
                    )

    # Defect seams: where the x plane of check i crosses the z plane of
    # check l, each qubit plane they share leaves the co-located check
    # pair overlapping on exactly one qubit. Shared planes are paired left
    # to right along y; on the odd lines of each paired segment the x
    # plane's qubit joins the Z-check a step left while the z plane's
    # qubit joins the X-check a step right, which adds one more common
    # qubit to both conflicted pairs and leaves all other pairs even.
    for i, js in enumerate(x_supports):
        xset = set(js)
        for l, zs in enumerate(z_supports):
            shared = sorted(xset.intersection(zs))
            if len(shared) % 2:
                raise ValueError(  # unreachable once validate() passed
                    f"X check {i} and Z check {l} share an odd number of qubits"
                )
            for ja, jb in zip(shared[0::2], shared[1::2]):
                for y in range(2 * ja + 1, 2 * jb, 2):
                    hz_rows[z_id[(("z", l), (2 * i, y - 1))]].add(
                        qubit_id[(("x", i), (y, 2 * l))]
                    )
                    hx_rows[x_id[(("x", i), (y + 1, 2 * l))]].add(
                        qubit_id[(("z", l), (2 * i, y))]
                    )

    hx = BitMatrix.from_support(len(hx_rows), n_new, [sorted(r) for r in hx_rows])
    hz = BitMatrix.from_support(len(hz_rows), n_new, [sorted(r) for r in hz_rows])
    layered = CssCode(hx, hz, label=f"{code.label or 'code'}-layered")

    out_report = validate(layered)
    if not out_report.ok:
        i, l = out_report.anticommuting_pairs[0]
        raise VerificationError(
            f"layered code fails commutation: X check {i} against Z check {l}"
        )
    for side, m in (("X", hx), ("Z", hz)):
        if m.rows and int(m.row_weights().max()) > STABILIZER_WEIGHT_BOUND:
            worst = int(m.row_weights().argmax())
            raise VerificationError(
                f"{side} check {worst} has weight {int(m.row_weights()[worst])}"
            )
    col_w = hx.col_weights() + hz.col_weights()
    if n_new and int(col_w.max()) > STABILIZER_WEIGHT_BOUND:
        worst = int(col_w.argmax())
        raise VerificationError(f"qubit {worst} has weight {int(col_w[worst])}")
    k_in = n - rank(code.hx) - rank(code.hz)
    k_out = n_new - rank(hx) - rank(hz)
    if k_out != k_in:
        raise VerificationError(
            f"dimension changed: input k={k_in}, layered k={k_out}"
        )

    boxes = _support_boxes(layered, coords)
    radius = 0
    for lo, hi in boxes.values():
        radius = max(radius, max(h - low for h, low in zip(hi, lo)))
    return LayerEmbedding(
        code=layered, coords=coords, locality_radius=radius, layer_index=layer_index
    )


def locality_audit(embedding: LayerEmbedding) -> LocalityAudit:
    """Recompute every stabilizer's bounding box from the embedding's own
    coordinates; any check whose box side exceeds the claimed
    locality_radius lands on the violation list."""
    boxes = _support_boxes(embedding.code, embedding.coords)
    max_side = 0
    violations = []
    for cell in sorted(boxes):
        lo, hi = boxes[cell]
        side = max(h - low for h, low in zip(hi, lo))
        max_side = max(max_side, side)
        if side > embedding.locality_radius:
            violations.append(cell)
    return LocalityAudit(boxes=boxes, max_side=max_side, violations=tuple(violations))

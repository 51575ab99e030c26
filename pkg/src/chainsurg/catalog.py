"""Constructors for the codes and worked examples used throughout.

Qubit and check indexing conventions are fixed here once so file dumps,
docs, and tests agree bit-for-bit:

* surface patches: horizontal edges in row-major order first, then
  vertical edges; X-checks on vertices, Z-checks on faces, both
  row-major.
* the 7-qubit code uses the triangle layout with faces
  a = {1,2,3,5}, b = {3,4,5,6}, c = {2,5,6,7} (1-based), identical
  supports for X- and Z-checks.
* the 15-qubit code labels qubits by the nonzero 4-bit strings
  1..15; cell i is {v : bit_i(v) = 1}; the face of qubits with
  bit_4 = 0 carries a 7-qubit-code layout compatible with the
  code-switch subcode.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .chaincomplex import ChainComplex, direct_sum
from .csscode import CssCode, from_parity_checks
from .errors import DimensionMismatch, UnknownExample
from .f2linalg import F2Matrix, Subspace
from .surgery import Subcode, validate_subcode


def _code(hx_rows: list[list[int]], hz_rows: list[list[int]], n: int, d: int | None = None) -> CssCode:
    hx = F2Matrix.from_rows(hx_rows, cols=n) if hx_rows else F2Matrix.zeros(0, n)
    hz = F2Matrix.from_rows(hz_rows, cols=n) if hz_rows else F2Matrix.zeros(0, n)
    code = from_parity_checks(hx, hz)
    return code.with_distance(d) if d is not None else code


def trivial_qubit() -> CssCode:
    """One qubit, no checks: [[1,1,1]]."""
    return _code([], [], 1, d=1)


def no_check(n: int) -> CssCode:
    """n qubits without stabilizers: [[n,n,1]]."""
    if n < 1:
        raise DimensionMismatch("need at least one qubit")
    return _code([], [], n, d=1)


def steane() -> CssCode:
    """The 7-qubit self-dual code, [[7,1,3]], in the triangle layout."""
    faces = [_support_to_row(s, 7) for s in ([1, 2, 3, 5], [3, 4, 5, 6], [2, 5, 6, 7])]
    return _code(faces, faces, 7, d=3)


def _support_to_row(support: list[int], n: int) -> list[int]:
    row = [0] * n
    for q in support:
        row[q - 1] = 1
    return row


def reed_muller_15() -> CssCode:
    """The 15-qubit code, [[15,1,3]]: cells as X-checks, faces as Z-checks.

    Qubit j (1-based) is the 4-bit string of j. X-check i is the cell
    {j : bit_i(j) = 1} (weight 8). Z-checks are ten weight-4 flats: the
    six cell intersections and four boundary faces.
    """
    n = 15

    def bit(j: int, i: int) -> int:  # i in 1..4, j in 1..15
        return (j >> (i - 1)) & 1

    cells = [[bit(j, i) for j in range(1, 16)] for i in range(1, 5)]
    faces = []
    for i in range(1, 5):
        for j in range(i + 1, 5):
            faces.append([bit(q, i) & bit(q, j) for q in range(1, 16)])
    for i in (1, 2, 3):  # faces of the bit4 = 0 boundary tetrahedron face
        faces.append([bit(q, i) & (1 - bit(q, 4)) for q in range(1, 16)])
    faces.append([bit(q, 4) & (1 - bit(q, 1)) for q in range(1, 16)])
    return _code(cells, faces, n, d=3)


@dataclass(frozen=True)
class _PatchLayout:
    """Index bookkeeping for a planar patch of width w and height h."""

    w: int
    h: int

    @property
    def n_horizontal(self) -> int:
        return self.w * self.h

    @property
    def n(self) -> int:
        return self.w * self.h + (self.w - 1) * (self.h - 1)

    def horizontal(self, r: int, c: int) -> int:
        return r * self.w + c

    def vertical(self, r: int, c: int) -> int:
        return self.n_horizontal + r * (self.w - 1) + c

    def vertex(self, r: int, c: int) -> int:
        return r * (self.w - 1) + c

    def face(self, r: int, c: int) -> int:
        return r * self.w + c

    def vertex_support(self, r: int, c: int) -> list[int]:
        out = [self.horizontal(r, c), self.horizontal(r, c + 1)]
        if r > 0:
            out.append(self.vertical(r - 1, c))
        if r < self.h - 1:
            out.append(self.vertical(r, c))
        return out

    def face_support(self, r: int, c: int) -> list[int]:
        out = [self.horizontal(r, c), self.horizontal(r + 1, c)]
        if c > 0:
            out.append(self.vertical(r, c - 1))
        if c < self.w - 1:
            out.append(self.vertical(r, c))
        return out


def surface_patch(w: int, h: int) -> CssCode:
    """Planar patch: qubits on edges, X-checks on vertices, Z-checks on faces.

    For w = h = d this is the [[d*d + (d-1)*(d-1), 1, d]] patch; the
    Z-logical runs along a row of horizontal edges, the X-logical along
    a column.
    """
    if w < 1 or h < 1:
        raise DimensionMismatch("patch needs w, h >= 1")
    lay = _PatchLayout(w, h)
    hx_rows = []
    for r in range(lay.h):
        for c in range(lay.w - 1):
            row = [0] * lay.n
            for q in lay.vertex_support(r, c):
                row[q] = 1
            hx_rows.append(row)
    hz_rows = []
    for r in range(lay.h - 1):
        for c in range(lay.w):
            row = [0] * lay.n
            for q in lay.face_support(r, c):
                row[q] = 1
            hz_rows.append(row)
    return _code(hx_rows, hz_rows, lay.n, d=min(w, h))


def toric(L: int) -> CssCode:
    """Toric code on an L x L periodic lattice: [[2*L*L, 2, L]]."""
    if L < 2:
        raise DimensionMismatch("toric code needs L >= 2")
    n = 2 * L * L

    def h_edge(r: int, c: int) -> int:
        return (r % L) * L + (c % L)

    def v_edge(r: int, c: int) -> int:
        return L * L + (r % L) * L + (c % L)

    hx_rows = []
    for r in range(L):
        for c in range(L):
            row = [0] * n
            for q in (h_edge(r, c), h_edge(r, c - 1), v_edge(r, c), v_edge(r - 1, c)):
                row[q] ^= 1
            hx_rows.append(row)
    hz_rows = []
    for r in range(L):
        for c in range(L):
            row = [0] * n
            for q in (h_edge(r, c), h_edge(r + 1, c), v_edge(r, c), v_edge(r, c + 1)):
                row[q] ^= 1
            hz_rows.append(row)
    return _code(hx_rows, hz_rows, n, d=L)


_CATALOG = {
    "steane": steane,
    "reed_muller_15": reed_muller_15,
    "trivial_qubit": trivial_qubit,
    "surface_2": lambda: surface_patch(2, 2),
    "surface_3": lambda: surface_patch(3, 3),
    "toric_2": lambda: toric(2),
    "toric_3": lambda: toric(3),
}


def catalog_code(name: str) -> CssCode:
    if name not in _CATALOG:
        raise UnknownExample(f"unknown catalog code {name!r}; known: {sorted(_CATALOG)}")
    return _CATALOG[name]()


def catalog_names() -> list[str]:
    return sorted(_CATALOG)


@dataclass(frozen=True)
class WorkedExample:
    """A worked surgery example with a machine-checkable expectation record."""

    name: str
    parent: ChainComplex
    subcode: Optional[Subcode]
    codes: tuple[CssCode, ...]
    expect: dict = field(default_factory=dict)
    # For invalid examples the raw subspaces are kept so tests can re-run
    # validation and watch it fail.
    raw_spaces: Optional[tuple[Subspace, Subspace, Subspace]] = None
    raw_orientation: str = "Z"


def _pair_vector(dim_a: int, dim_b: int, ia: int, ib: int) -> np.ndarray:
    v = np.zeros(dim_a + dim_b, dtype=np.uint8)
    v[ia] = 1
    v[dim_a + ib] = 1
    return v


def _welding_pair() -> tuple[CssCode, CssCode, _PatchLayout, _PatchLayout]:
    c = surface_patch(3, 2)
    d = surface_patch(3, 2)
    return c, d, _PatchLayout(3, 2), _PatchLayout(3, 2)


def worked_example(name: str) -> WorkedExample:
    """Catalogued surgery scenarios; see the module docstring for layouts."""
    builders = {
        "welding": _example_welding,
        "partial_boundary": _example_partial_boundary,
        "internal_cylinder": _example_internal_cylinder,
        "wrong_merge": _example_wrong_merge,
        "virtual_merge": _example_virtual_merge,
        "steane_z_subcode": _example_steane_z_subcode,
        "steane_x_subcode": _example_steane_x_subcode,
        "steane_invalid_subcode": _example_steane_invalid_subcode,
        "worked_quotient_matrix": _example_worked_quotient_matrix,
        "code_switch": _example_code_switch,
    }
    if name not in builders:
        raise UnknownExample(f"unknown example {name!r}; known: {sorted(builders)}")
    return builders[name]()


def example_names() -> list[str]:
    return [
        "welding",
        "partial_boundary",
        "internal_cylinder",
        "wrong_merge",
        "virtual_merge",
        "steane_z_subcode",
        "steane_x_subcode",
        "steane_invalid_subcode",
        "worked_quotient_matrix",
        "code_switch",
    ]


def _boundary_pairs(
    c_lay: _PatchLayout, d_lay: _PatchLayout
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Qubit pairs (c bottom row, d top row) and vertex pairs for welding."""
    n_c = c_lay.n
    n0_c = c_lay.h * (c_lay.w - 1)
    qubit_pairs = [
        _pair_vector(n_c, d_lay.n, c_lay.horizontal(c_lay.h - 1, col), d_lay.horizontal(0, col))
        for col in range(c_lay.w)
    ]
    vertex_pairs = [
        _pair_vector(n0_c, d_lay.h * (d_lay.w - 1), c_lay.vertex(c_lay.h - 1, col), d_lay.vertex(0, col))
        for col in range(c_lay.w - 1)
    ]
    return qubit_pairs, vertex_pairs


def _example_welding() -> WorkedExample:
    c, d, c_lay, d_lay = _welding_pair()
    total = direct_sum(c.complex, d.complex)
    qubit_pairs, vertex_pairs = _boundary_pairs(c_lay, d_lay)
    sub = validate_subcode(
        total,
        Subspace.zero(total.dim2),
        Subspace.from_vectors(qubit_pairs, total.dim1),
        Subspace.from_vectors(vertex_pairs, total.dim0),
        "Z",
    )
    return WorkedExample(
        name="welding",
        parent=total,
        subcode=sub,
        codes=(c, d),
        expect={
            "valid": True,
            "h0_subcode": 0,
            "h1_subcode": 1,
            "surjective": True,
            "killed_count": 1,
            "killed_class_coords": [1, 1],
            "merged_qubits": c.n + d.n - 3,
            "quotient_h1": c.k + d.k - 1,
        },
    )


def _example_partial_boundary() -> WorkedExample:
    c, d, c_lay, d_lay = _welding_pair()
    total = direct_sum(c.complex, d.complex)
    qubit_pairs, vertex_pairs = _boundary_pairs(c_lay, d_lay)
    sub = validate_subcode(
        total,
        Subspace.zero(total.dim2),
        Subspace.from_vectors([qubit_pairs[1]], total.dim1),  # middle pair only
        Subspace.from_vectors(vertex_pairs, total.dim0),
        "Z",
    )
    return WorkedExample(
        name="partial_boundary",
        parent=total,
        subcode=sub,
        codes=(c, d),
        expect={
            "valid": True,
            "h1_subcode": 0,
            "h0_subcode": 1,
            "injective": True,
            "created_count": 1,
        },
    )


def _example_internal_cylinder() -> WorkedExample:
    c = surface_patch(3, 3)
    lay = _PatchLayout(3, 3)
    cplx = c.complex
    qubit_pairs = []
    for col in range(3):
        v = np.zeros(lay.n, dtype=np.uint8)
        v[lay.horizontal(0, col)] = 1
        v[lay.horizontal(2, col)] = 1
        qubit_pairs.append(v)
    vertex_pairs = []
    for col in range(2):
        v = np.zeros(3 * 2, dtype=np.uint8)
        v[lay.vertex(0, col)] = 1
        v[lay.vertex(2, col)] = 1
        vertex_pairs.append(v)
    sub = validate_subcode(
        cplx,
        Subspace.zero(cplx.dim2),
        Subspace.from_vectors(qubit_pairs, cplx.dim1),
        Subspace.from_vectors(vertex_pairs, cplx.dim0),
        "Z",
    )
    return WorkedExample(
        name="internal_cylinder",
        parent=cplx,
        subcode=sub,
        codes=(c,),
        expect={
            "valid": True,
            "h0_subcode": 0,
            "h1_subcode": 1,
            "surjective": True,
            # top and bottom rows are homologous, so nothing is killed
            "killed_count": 0,
            "quotient_h1": 1,
        },
    )


def _example_wrong_merge() -> WorkedExample:
    c, d, c_lay, d_lay = _welding_pair()
    total = direct_sum(c.complex, d.complex)
    one_pair = _pair_vector(c_lay.n, d_lay.n, c_lay.horizontal(c_lay.h - 1, 1), d_lay.horizontal(0, 1))
    return WorkedExample(
        name="wrong_merge",
        parent=total,
        subcode=None,
        codes=(c, d),
        expect={"valid": False, "closure_degree": 1},
        raw_spaces=(
            Subspace.zero(total.dim2),
            Subspace.from_vectors([one_pair], total.dim1),
            Subspace.zero(total.dim0),
        ),
        raw_orientation="Z",
    )


def _example_virtual_merge() -> WorkedExample:
    """Two tiny codes merged along an operator that is no graph gluing."""
    c_cplx = ChainComplex(d2=F2Matrix([[1], [1]]), d1=F2Matrix.zeros(0, 2))
    d_cplx = ChainComplex(d2=F2Matrix.zeros(1, 0), d1=F2Matrix([[1]]))
    c = from_parity_checks(hx=F2Matrix.zeros(0, 2), hz=F2Matrix([[1, 1]]))
    d = from_parity_checks(hx=F2Matrix([[1]]), hz=F2Matrix.zeros(0, 1))
    total = direct_sum(c_cplx, d_cplx)
    sub = validate_subcode(
        total,
        Subspace.zero(total.dim2),
        Subspace.from_vectors([np.array([1, 1, 1], dtype=np.uint8)], total.dim1),
        Subspace.from_vectors([np.array([1], dtype=np.uint8)], total.dim0),
        "Z",
    )
    return WorkedExample(
        name="virtual_merge",
        parent=total,
        subcode=sub,
        codes=(c, d),
        expect={
            "valid": True,
            "quotient_dims": [1, 2, 0],
            # p1 in the basis {[z1], [z2]} of the quotient degree-1 space
            "p1_in_z1_z2_basis": [[1, 0, 1], [0, 1, 1]],
            "quotient_basis_degree1": [[1, 0, 0], [0, 1, 0]],
        },
    )


def _steane_check_supports() -> list[list[int]]:
    return [[1, 2, 3, 5], [3, 4, 5, 6], [2, 5, 6, 7]]


def _example_steane_z_subcode() -> WorkedExample:
    c = steane()
    cplx = c.complex
    v2 = Subspace.from_vectors([np.array([1, 0, 1], dtype=np.uint8)], 3)  # alpha + gamma
    z13 = _support_to_row([1, 3], 7)
    z67 = _support_to_row([6, 7], 7)
    v1 = Subspace.from_vectors([np.array(z13, dtype=np.uint8), np.array(z67, dtype=np.uint8)], 7)
    v0 = Subspace.from_vectors([np.array([0, 1, 0], dtype=np.uint8)], 3)  # check b
    sub = validate_subcode(cplx, v2, v1, v0, "Z")
    return WorkedExample(
        name="steane_z_subcode",
        parent=cplx,
        subcode=sub,
        codes=(c,),
        expect={"valid": True},
    )


def _example_steane_x_subcode() -> WorkedExample:
    """X-subcode spanned by four single-qubit X operators.

    Closure forces the degree-2 space to be the full Z-syndrome space;
    the interesting content is W^1 = {x1, x4, x5, x7} with
    W^0 = span{a+b+c}.
    """
    c = steane()
    cplx = c.complex
    w1 = Subspace.from_vectors(
        [np.array(_support_to_row([q], 7), dtype=np.uint8) for q in (1, 4, 5, 7)], 7
    )
    w0 = Subspace.from_vectors([np.array([1, 1, 1], dtype=np.uint8)], 3)
    w2 = Subspace.full(3)
    sub = validate_subcode(cplx, w2, w1, w0, "X")
    return WorkedExample(
        name="steane_x_subcode",
        parent=cplx,
        subcode=sub,
        codes=(c,),
        expect={"valid": True},
    )


def _example_steane_invalid_subcode() -> WorkedExample:
    c = steane()
    cplx = c.complex
    return WorkedExample(
        name="steane_invalid_subcode",
        parent=cplx,
        subcode=None,
        codes=(c,),
        expect={"valid": False, "closure_degree": 1},
        raw_spaces=(
            Subspace.zero(3),
            Subspace.from_vectors([np.array(_support_to_row([1, 2], 7), dtype=np.uint8)], 7),
            Subspace.from_vectors([np.array([1, 0, 1], dtype=np.uint8)], 3),
        ),
        raw_orientation="Z",
    )


def _example_worked_quotient_matrix() -> WorkedExample:
    """The echelonized-quotient worked case on four free logical qubits.

    Basis u1..u4; kill span{u1+u3, u2+u3+u4}; the induced map in the
    pivot-complement basis {[u3], [u4]} is [[1,1,1,0],[0,1,0,1]].
    """
    c = no_check(4)
    cplx = c.complex
    v1 = Subspace.from_vectors(
        [np.array([1, 0, 1, 0], dtype=np.uint8), np.array([0, 1, 1, 1], dtype=np.uint8)], 4
    )
    sub = validate_subcode(cplx, Subspace.zero(0), v1, Subspace.zero(0), "Z")
    return WorkedExample(
        name="worked_quotient_matrix",
        parent=cplx,
        subcode=sub,
        codes=(c,),
        expect={
            "valid": True,
            "induced_matrix": [[1, 1, 1, 0], [0, 1, 0, 1]],
        },
    )


def switch_subcode(
    steane_code: CssCode, rm_code: CssCode
) -> Subcode:
    """Pairwise identification of the 7-qubit code with the bit4 = 0 face.

    Returns the Z-subcode of (steane + rm) whose quotient is again a
    15-qubit code: 7 qubit pairs, 3 Z-check pairs, 3 X-check pairs.
    """
    total = direct_sum(steane_code.complex, rm_code.complex)

    def rm_index(steane_q: int) -> int:
        # steane qubit q (1-based) has bit pattern column; face qubit is the
        # same 3-bit string with bit4 = 0, i.e. the integer value itself.
        return _steane_bits(steane_q) - 1

    qubit_pairs = [
        _pair_vector(7, 15, q - 1, rm_index(q)) for q in range(1, 8)
    ]
    # Z-check pairs: steane face i <-> rm boundary face x_i(1+x4), which is
    # row 6 + i of the rm hz (construction order: six x_i x_j rows first).
    z_pairs = [_pair_vector(3, 10, i, 6 + i) for i in range(3)]
    # X-check pairs: steane check i <-> rm cell i.
    x_pairs = [_pair_vector(3, 4, i, i) for i in range(3)]
    return validate_subcode(
        total,
        Subspace.from_vectors(z_pairs, total.dim2),
        Subspace.from_vectors(qubit_pairs, total.dim1),
        Subspace.from_vectors(x_pairs, total.dim0),
        "Z",
    )


def _steane_bits(q: int) -> int:
    """Bit pattern of steane qubit q under the triangle layout.

    Qubit q belongs to face i iff bit_i is set; the triangle layout was
    chosen so this is exactly the check membership pattern.
    """
    supports = _steane_check_supports()
    return sum((1 << i) for i, s in enumerate(supports) if q in s)


def _example_code_switch() -> WorkedExample:
    s = steane()
    rm = reed_muller_15()
    sub = switch_subcode(s, rm)
    return WorkedExample(
        name="code_switch",
        parent=direct_sum(s.complex, rm.complex),
        subcode=sub,
        codes=(s, rm),
        expect={
            "valid": True,
            "merged_params": [15, 1, 3],
            "p1_star": [[1, 1]],
            "h0_subcode": 0,
        },
    )

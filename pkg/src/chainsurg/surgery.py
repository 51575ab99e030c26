"""Subcodes, quotient merges, splits, and the induced logical maps.

A merge is the quotient of a code complex by a subcode; the projection
is a surjective preserving code map and the induced homology map is the
logical operation. X-type surgery runs the same machinery on transposed
complexes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chaincomplex import (
    ChainComplex,
    ChainMap,
    HomologyBasis,
    direct_sum,
    homology,
    induced_on_homology,
    validate,
    validate_chain_map,
)
from .errors import (
    ClosureViolated,
    DimensionMismatch,
    NotSurjective,
)
from .f2linalg import (
    F2Matrix,
    Subspace,
    as_bit_vector,
    format_matrix,
    image_basis,
    kernel_basis,
    parse_matrix,
    quotient_basis,
    rank,
    solve,
    split_sections,
    vstack,
)


@dataclass(frozen=True)
class Subcode:
    """Degree-wise subspaces of a parent complex, closed under boundaries.

    For orientation "Z" closure means d2(v2) <= v1 and d1(v1) <= v0; for
    orientation "X" the transposed conditions hold (d2.T(v1) <= v2 and
    d1.T(v0) <= v1), i.e. the same data is a chain subcode of the
    transposed parent with degrees relabelled 2 <-> 0.
    """

    parent: ChainComplex
    v2: Subspace
    v1: Subspace
    v0: Subspace
    orientation: str = "Z"

    def oriented_parent(self) -> ChainComplex:
        return self.parent if self.orientation == "Z" else self.parent.transpose()

    def oriented_spaces(self) -> tuple[Subspace, Subspace, Subspace]:
        """(degree2, degree1, degree0) spaces of the oriented parent."""
        if self.orientation == "Z":
            return (self.v2, self.v1, self.v0)
        return (self.v0, self.v1, self.v2)

    def dims(self) -> tuple[int, int, int]:
        return (self.v2.dim, self.v1.dim, self.v0.dim)

    def own_complex(self) -> ChainComplex:
        """The subcode as a standalone complex in its own basis coordinates.

        Boundaries are the parent's, restricted and re-expressed in the
        RREF bases of the oriented subspaces.
        """
        parent = self.oriented_parent()
        s2, s1, s0 = self.oriented_spaces()
        d2 = _restricted_boundary(parent.d2, s2, s1)
        d1 = _restricted_boundary(parent.d1, s1, s0)
        return validate(d2=d2, d1=d1)

    def to_text(self) -> str:
        text = f"orientation: {self.orientation}\n"
        for name, space in (("v2", self.v2), ("v1", self.v1), ("v0", self.v0)):
            text += f"{name}:\n" + format_matrix(space.basis)
        return text

    @classmethod
    def from_text(cls, text: str, parent: ChainComplex) -> "Subcode":
        sections = split_sections(text)
        orientation = sections.get("orientation", "Z").strip().upper()
        spaces = {}
        for name in ("v2", "v1", "v0"):
            m = parse_matrix(sections[name])
            spaces[name] = Subspace.from_matrix_rows(m)
        return validate_subcode(
            parent, spaces["v2"], spaces["v1"], spaces["v0"], orientation
        )


def _restricted_boundary(d: F2Matrix, src: Subspace, tgt: Subspace) -> F2Matrix:
    """Matrix of d restricted to src, in the bases of src and tgt."""
    cols = []
    tgt_t = tgt.basis.T
    for b in src.basis_vectors():
        image = d @ b
        c = solve(tgt_t, image)
        if c is None:
            raise ClosureViolated(0, "restricted boundary leaves the target subspace")
        cols.append(c)
    if not cols:
        return F2Matrix.zeros(tgt.dim, 0)
    return F2Matrix.from_rows(cols, cols=tgt.dim).T


def validate_subcode(
    parent: ChainComplex,
    v2: Subspace,
    v1: Subspace,
    v0: Subspace,
    orientation: str = "Z",
) -> Subcode:
    """Check ambient dimensions and boundary closure; raise ClosureViolated."""
    if orientation not in ("Z", "X"):
        raise DimensionMismatch("orientation must be 'Z' or 'X'")
    expect = (parent.dim2, parent.dim1, parent.dim0)
    got = (v2.ambient_dim, v1.ambient_dim, v0.ambient_dim)
    if expect != got:
        raise DimensionMismatch(f"subspace ambient dims {got} do not match parent {expect}")
    sub = Subcode(parent=parent, v2=v2, v1=v1, v0=v0, orientation=orientation)
    oriented = sub.oriented_parent()
    s2, s1, s0 = sub.oriented_spaces()
    for b in s2.basis_vectors():
        if not s1.contains(oriented.d2 @ b):
            raise ClosureViolated(2)
    for b in s1.basis_vectors():
        if not s0.contains(oriented.d1 @ b):
            raise ClosureViolated(1)
    return sub


def _complement_reps(ambient: int, sub: Subspace, supplied: Sequence | None) -> list[np.ndarray]:
    """Representatives of a basis of F2^ambient / sub.

    Defaults to the non-pivot unit vectors of sub's RREF; a user-supplied
    list is validated to be a genuine complement basis.
    """
    if supplied is None:
        return quotient_basis(ambient, Subspace.full(ambient), sub)
    reps = [as_bit_vector(v, ambient) for v in supplied]
    if len(reps) != ambient - sub.dim:
        raise DimensionMismatch(
            f"need {ambient - sub.dim} quotient basis vectors, got {len(reps)}"
        )
    stacked = list(sub.basis_vectors()) + reps
    if reps and rank(F2Matrix.from_rows(stacked, cols=ambient)) != len(stacked):
        raise DimensionMismatch("supplied quotient basis is not a complement of the subcode")
    return reps


def _projection_matrix(ambient: int, sub: Subspace, reps: list[np.ndarray]) -> F2Matrix:
    """Matrix of the coset projection in the basis [reps]."""
    if not reps:
        return F2Matrix.zeros(0, ambient)
    system = F2Matrix.from_rows(reps + list(sub.basis_vectors()), cols=ambient).T
    cols = []
    for j in range(ambient):
        full = solve(system, np.eye(ambient, dtype=np.uint8)[j])
        if full is None:
            raise DimensionMismatch("projection solve failed; quotient basis invalid")
        cols.append(full[: len(reps)])
    return F2Matrix.from_rows(cols, cols=len(reps)).T


@dataclass(frozen=True)
class MergeResult:
    """A quotient merge: complexes, the projection p, and the inclusion i.

    All maps live in the oriented frame (transposed complexes for
    X-orientation); ``merged_complex()`` converts back to the code frame.
    """

    source: ChainComplex
    quotient: ChainComplex
    p: ChainMap
    i: ChainMap
    subcode: Subcode
    quotient_reps: tuple[tuple[np.ndarray, ...], tuple[np.ndarray, ...], tuple[np.ndarray, ...]]

    @property
    def orientation(self) -> str:
        return self.subcode.orientation

    def merged_complex(self) -> ChainComplex:
        """The merged code's complex in chain (Z) orientation."""
        if self.orientation == "Z":
            return self.quotient
        return self.quotient.transpose()

    def reps_at(self, degree: int) -> tuple[np.ndarray, ...]:
        return self.quotient_reps[2 - degree]


def quotient_merge(
    parent: ChainComplex,
    sub: Subcode,
    quotient_bases: dict[int, Sequence] | None = None,
) -> MergeResult:
    """Quotient of parent by the subcode, with deterministic bases.

    ``quotient_bases`` optionally supplies coset representatives per
    degree (in the oriented frame) replacing the pivot-complement rule.
    """
    if sub.parent != parent:
        raise DimensionMismatch("subcode was validated against a different parent")
    oriented = sub.oriented_parent()
    spaces = sub.oriented_spaces()
    supplied = quotient_bases or {}
    reps = []
    for degree, space in zip((2, 1, 0), spaces):
        reps.append(_complement_reps(oriented.dim(degree), space, supplied.get(degree)))
    p2 = _projection_matrix(oriented.dim2, spaces[0], reps[0])
    p1 = _projection_matrix(oriented.dim1, spaces[1], reps[1])
    p0 = _projection_matrix(oriented.dim0, spaces[2], reps[2])
    sec2 = _section_matrix(oriented.dim2, reps[0])
    sec1 = _section_matrix(oriented.dim1, reps[1])
    q_d2 = p1 @ oriented.d2 @ sec2
    q_d1 = p0 @ oriented.d1 @ sec1
    quotient = validate(d2=q_d2, d1=q_d1)
    p = validate_chain_map(oriented, quotient, p2, p1, p0)
    own = sub.own_complex()
    i = validate_chain_map(
        own,
        oriented,
        _inclusion_matrix(spaces[0]),
        _inclusion_matrix(spaces[1]),
        _inclusion_matrix(spaces[2]),
    )
    return MergeResult(
        source=oriented,
        quotient=quotient,
        p=p,
        i=i,
        subcode=sub,
        quotient_reps=(tuple(reps[0]), tuple(reps[1]), tuple(reps[2])),
    )


def _section_matrix(ambient: int, reps: list[np.ndarray]) -> F2Matrix:
    if not reps:
        return F2Matrix.zeros(ambient, 0)
    return F2Matrix.from_rows(reps, cols=ambient).T


def _inclusion_matrix(space: Subspace) -> F2Matrix:
    return space.basis.T


def split_from_merge(m: MergeResult) -> ChainMap:
    """The injective preserving code map dual to the merge (its transpose)."""
    split = m.p.transpose()
    for deg in (2, 1, 0):
        comp = split.component(deg)
        if rank(comp) != comp.cols:
            raise DimensionMismatch("split component is not injective; merge corrupted")
    return split


def span_merge(f: ChainMap, g: ChainMap) -> MergeResult:
    """Merge of f.tgt and g.tgt along a common apex, as a quotient merge.

    The subcode is the image of (f, g) inside the direct sum; the result
    equals the pushout of the span.
    """
    if f.src != g.src:
        raise DimensionMismatch("span legs have different apex complexes")
    total = direct_sum(f.tgt, g.tgt)
    spaces = []
    for deg in (2, 1, 0):
        fa = f.component(deg)
        ga = g.component(deg)
        stacked = vstack([fa, ga])  # (dim f.tgt + dim g.tgt) x dim apex
        spaces.append(image_basis(stacked))
    sub = validate_subcode(total, spaces[0], spaces[1], spaces[2], orientation="Z")
    return quotient_merge(total, sub)


def merge_decompose(p: ChainMap) -> tuple[MergeResult, ChainMap]:
    """Factor a surjective preserving code map as iso . quotient_merge.

    ``p`` lives in whatever frame the caller works in (pass transposed
    maps for X-type surgery). Returns the quotient merge along ker(p)
    and the isomorphism sigma with sigma . p_tilde = p degree-wise.
    """
    for deg in (2, 1, 0):
        comp = p.component(deg)
        if rank(comp) != comp.rows:
            raise NotSurjective(deg)
    kernels = {deg: kernel_basis(p.component(deg)) for deg in (2, 1, 0)}
    sub = validate_subcode(p.src, kernels[2], kernels[1], kernels[0], orientation="Z")
    merge = quotient_merge(p.src, sub)
    sigma_parts = {}
    for deg in (2, 1, 0):
        reps = merge.reps_at(deg)
        cols = [p.component(deg) @ r for r in reps]
        if cols:
            sigma_parts[deg] = F2Matrix.from_rows(cols, cols=p.component(deg).rows).T
        else:
            sigma_parts[deg] = F2Matrix.zeros(p.component(deg).rows, 0)
    sigma = validate_chain_map(
        merge.quotient, p.tgt, sigma_parts[2], sigma_parts[1], sigma_parts[0]
    )
    for deg in (2, 1, 0):
        comp = sigma.component(deg)
        if comp.rows != comp.cols or rank(comp) != comp.rows:
            raise NotSurjective(deg, "sigma is not an isomorphism; decomposition failed")
    return merge, sigma


@dataclass(frozen=True)
class ExactSequenceReport:
    """What the homology long exact sequence says about one merge.

    ``surjective_guaranteed`` / ``injective_guaranteed`` are the
    exact-sequence flags (H0(V) = 0 resp. H1(V) = 0); when both are False the
    sequence alone makes no claim and callers must inspect the matrix.
    ``matrix_surjective`` / ``matrix_injective`` report the actual rank
    facts of the induced map.
    """

    orientation: str
    h1_subcode_dim: int
    h0_subcode_dim: int
    surjective_guaranteed: bool
    injective_guaranteed: bool
    matrix_surjective: bool
    matrix_injective: bool
    induced_matrix: F2Matrix
    killed_coords: F2Matrix  # classes of im(i1*) in source logical coordinates
    killed_reps: tuple[np.ndarray, ...]
    created_coords: F2Matrix  # complement basis of im(p1*) in quotient coordinates
    created_reps: tuple[np.ndarray, ...]
    source_basis: HomologyBasis
    quotient_basis: HomologyBasis

    @property
    def killed_count(self) -> int:
        return self.killed_coords.rows

    @property
    def created_count(self) -> int:
        return self.created_coords.rows

    def dims_label(self) -> dict[str, int]:
        if self.orientation == "Z":
            return {"H1(V)": self.h1_subcode_dim, "H0(V)": self.h0_subcode_dim}
        return {"H^1(W)": self.h1_subcode_dim, "H^2(W)": self.h0_subcode_dim}

    def to_json_dict(self) -> dict:
        return {
            "orientation": self.orientation,
            "subcode_homology": self.dims_label(),
            "surjective_guaranteed": self.surjective_guaranteed,
            "injective_guaranteed": self.injective_guaranteed,
            "matrix_surjective": self.matrix_surjective,
            "matrix_injective": self.matrix_injective,
            "induced_matrix": self.induced_matrix.to_lists(),
            "killed": self.killed_coords.to_lists(),
            "created": self.created_coords.to_lists(),
        }


def analyze_merge(
    m: MergeResult,
    src_basis: HomologyBasis | None = None,
    tgt_basis: HomologyBasis | None = None,
) -> ExactSequenceReport:
    """Homology analysis of a merge via the subcode's own complex."""
    own = m.subcode.own_complex()
    h1v = homology(own, 1)
    h0v = homology(own, 0)
    src_basis = src_basis or homology(m.source, 1)
    tgt_basis = tgt_basis or homology(m.quotient, 1)
    induced = induced_on_homology(m.p, 1, src_basis, tgt_basis)
    r = rank(induced)
    matrix_surjective = r == tgt_basis.dim
    matrix_injective = r == src_basis.dim

    # killed classes: im(i1*) expressed in the source logical basis
    killed_coords_rows = []
    killed_reps = []
    s1 = m.subcode.oriented_spaces()[1]
    for rep in h1v.representatives:
        embedded = s1.basis.T @ rep
        if src_basis.is_trivial_class(embedded):
            continue
        killed_coords_rows.append(src_basis.class_coordinates(embedded))
        killed_reps.append(embedded)
    killed = _independent_rows(killed_coords_rows, src_basis.dim)
    killed_reps = tuple(killed_reps[i] for i in killed.kept)

    # created classes: complement of im(p1*) in the quotient basis
    img = Subspace.from_vectors(
        [induced.col(j) for j in range(induced.cols)], tgt_basis.dim
    )
    created_coord_vecs = quotient_basis(tgt_basis.dim, Subspace.full(tgt_basis.dim), img)
    created_reps = []
    for c in created_coord_vecs:
        v = np.zeros(tgt_basis.ambient_dim, dtype=np.uint8)
        for j, bit in enumerate(c):
            if bit:
                v ^= tgt_basis.representatives[j]
        created_reps.append(as_bit_vector(v))
    return ExactSequenceReport(
        orientation=m.orientation,
        h1_subcode_dim=h1v.dim,
        h0_subcode_dim=h0v.dim,
        surjective_guaranteed=h0v.dim == 0,
        injective_guaranteed=h1v.dim == 0,
        matrix_surjective=matrix_surjective,
        matrix_injective=matrix_injective,
        induced_matrix=induced,
        killed_coords=killed.matrix,
        killed_reps=killed_reps,
        created_coords=F2Matrix.from_rows(created_coord_vecs, cols=tgt_basis.dim),
        created_reps=tuple(created_reps),
        source_basis=src_basis,
        quotient_basis=tgt_basis,
    )


@dataclass(frozen=True)
class _IndependentRows:
    matrix: F2Matrix
    kept: tuple[int, ...]


def _independent_rows(rows: list[np.ndarray], width: int) -> _IndependentRows:
    kept: list[int] = []
    current: list[np.ndarray] = []
    for idx, row in enumerate(rows):
        candidate = current + [row]
        if rank(F2Matrix.from_rows(candidate, cols=width)) == len(candidate):
            current = candidate
            kept.append(idx)
    return _IndependentRows(F2Matrix.from_rows(current, cols=width), tuple(kept))


def induced_logical_matrix(
    m: MergeResult,
    src_basis: HomologyBasis,
    tgt_basis: HomologyBasis,
) -> F2Matrix:
    """Matrix of the induced degree-1 logical map in the given bases."""
    return induced_on_homology(m.p, 1, src_basis, tgt_basis)


def merge_report_json(m: MergeResult, report: ExactSequenceReport) -> str:
    doc = {
        "schema": "chainsurg-report/1",
        "type": "merge",
        "orientation": m.orientation,
        "source_dims": [m.source.dim2, m.source.dim1, m.source.dim0],
        "quotient_dims": [m.quotient.dim2, m.quotient.dim1, m.quotient.dim0],
        "subcode_dims": list(m.subcode.dims()),
        "p1": m.p.f1.to_lists(),
        "analysis": report.to_json_dict(),
    }
    return json.dumps(doc, indent=2, sort_keys=True)

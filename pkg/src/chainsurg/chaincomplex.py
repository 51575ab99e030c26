"""Length-2 chain complexes over GF(2), their homology, and chain maps.

A complex is the pair (d2: C2 -> C1, d1: C1 -> C0) with d1 @ d2 = 0.
Cochain statements are implemented by transposition: the cochain complex
of C is the chain complex (d1.T, d2.T), with degree n mapped to 2 - n.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonZeroComposition, SquareDoesNotCommute
from .f2linalg import (
    F2Matrix,
    Subspace,
    block_diag,
    format_matrix,
    image_basis,
    kernel_basis,
    parse_matrix,
    quotient_basis,
    solve,
    split_sections,
)


@dataclass(frozen=True)
class ChainComplex:
    """Boundary pair (d2, d1) with d1 @ d2 = 0."""

    d2: F2Matrix
    d1: F2Matrix

    @property
    def dim2(self) -> int:
        return self.d2.cols

    @property
    def dim1(self) -> int:
        return self.d1.cols

    @property
    def dim0(self) -> int:
        return self.d1.rows

    def dim(self, degree: int) -> int:
        return (self.dim0, self.dim1, self.dim2)[degree]

    def boundary(self, degree: int) -> F2Matrix:
        """The boundary map out of the given degree (degree 0 has none)."""
        if degree == 2:
            return self.d2
        if degree == 1:
            return self.d1
        raise DimensionMismatch(f"no boundary map out of degree {degree}")

    def transpose(self) -> "ChainComplex":
        """The cochain complex viewed as a chain complex (degree n -> 2 - n)."""
        return ChainComplex(d2=self.d1.T, d1=self.d2.T)

    def to_text(self) -> str:
        return "d2:\n" + format_matrix(self.d2) + "d1:\n" + format_matrix(self.d1)

    @classmethod
    def from_text(cls, text: str) -> "ChainComplex":
        sections = split_sections(text)
        return validate(parse_matrix(sections["d2"]), parse_matrix(sections["d1"]))


def validate(d2: F2Matrix, d1: F2Matrix) -> ChainComplex:
    """Build a ChainComplex, rejecting pairs whose composition is nonzero."""
    if d1.cols != d2.rows:
        raise DimensionMismatch(
            f"middle space mismatch: d1 has {d1.cols} columns, d2 has {d2.rows} rows"
        )
    if d2.cols and d1.rows and not (d1 @ d2).is_zero():
        raise NonZeroComposition("d1 @ d2 != 0")
    return ChainComplex(d2=d2, d1=d1)


@dataclass(frozen=True)
class HomologyBasis:
    """Chosen representatives of ker/im at one degree of a complex.

    ``degree`` records the degree in the complex the basis was computed
    on; for cohomology that complex is the transpose.
    """

    degree: int
    representatives: tuple[np.ndarray, ...]
    kernel: Subspace
    image: Subspace

    @property
    def dim(self) -> int:
        return len(self.representatives)

    @property
    def ambient_dim(self) -> int:
        return self.kernel.ambient_dim

    def matrix(self) -> F2Matrix:
        """Representatives stacked as rows (dim x ambient)."""
        return F2Matrix.from_rows(list(self.representatives), cols=self.ambient_dim)

    def contains_cycle(self, v) -> bool:
        return self.kernel.contains(v)

    def class_coordinates(self, v) -> np.ndarray:
        """Coordinates of [v] in this basis; v must lie in the kernel."""
        if not self.kernel.contains(v):
            raise DimensionMismatch("vector is not a cycle at this degree")
        cols = [np.asarray(r, dtype=np.uint8) for r in self.representatives]
        cols += [np.asarray(b, dtype=np.uint8) for b in self.image.basis_vectors()]
        if not cols:
            return np.zeros(0, dtype=np.uint8)
        system = F2Matrix.from_rows(cols, cols=self.ambient_dim).T
        x = solve(system, v)
        if x is None:
            raise DimensionMismatch("cycle not expressible in basis + boundaries")
        return x[: self.dim]

    def is_trivial_class(self, v) -> bool:
        return self.kernel.contains(v) and self.image.contains(v)


def homology(c: ChainComplex, degree: int = 1) -> HomologyBasis:
    """Pivot-complement basis of ker/im at the given degree."""
    if degree == 1:
        ker = kernel_basis(c.d1)
        img = image_basis(c.d2)
    elif degree == 2:
        ker = kernel_basis(c.d2)
        img = Subspace.zero(c.dim2)
    elif degree == 0:
        ker = Subspace.full(c.dim0)
        img = image_basis(c.d1)
    else:
        raise DimensionMismatch(f"degree must be 0, 1 or 2, got {degree}")
    reps = quotient_basis(ker.ambient_dim, ker, img)
    return HomologyBasis(degree=degree, representatives=tuple(reps), kernel=ker, image=img)


def cohomology(c: ChainComplex, degree: int = 1) -> HomologyBasis:
    """Cohomology at ``degree``, computed as homology of the transpose."""
    return homology(c.transpose(), 2 - degree)


@dataclass(frozen=True)
class ChainMap:
    """Three matrices making both squares with the boundary maps commute."""

    src: ChainComplex
    tgt: ChainComplex
    f2: F2Matrix
    f1: F2Matrix
    f0: F2Matrix

    def component(self, degree: int) -> F2Matrix:
        return (self.f0, self.f1, self.f2)[degree]

    def transpose(self) -> "ChainMap":
        """The cochain map tgt^ -> src^ of the transposed complexes."""
        return ChainMap(
            src=self.tgt.transpose(),
            tgt=self.src.transpose(),
            f2=self.f0.T,
            f1=self.f1.T,
            f0=self.f2.T,
        )

    def compose(self, earlier: "ChainMap") -> "ChainMap":
        """self after earlier (matrix product degree-wise)."""
        if earlier.tgt != self.src:
            raise DimensionMismatch("chain maps are not composable")
        return ChainMap(
            src=earlier.src,
            tgt=self.tgt,
            f2=self.f2 @ earlier.f2,
            f1=self.f1 @ earlier.f1,
            f0=self.f0 @ earlier.f0,
        )


def validate_chain_map(
    src: ChainComplex, tgt: ChainComplex, f2: F2Matrix, f1: F2Matrix, f0: F2Matrix
) -> ChainMap:
    shapes = {
        2: (f2, tgt.dim2, src.dim2),
        1: (f1, tgt.dim1, src.dim1),
        0: (f0, tgt.dim0, src.dim0),
    }
    for deg, (f, r, c) in shapes.items():
        if f.shape != (r, c):
            raise DimensionMismatch(f"f{deg} must be {r}x{c}, got {f.shape}")
    if (f1 @ src.d2) != (tgt.d2 @ f2):
        raise SquareDoesNotCommute(2)
    if (f0 @ src.d1) != (tgt.d1 @ f1):
        raise SquareDoesNotCommute(1)
    return ChainMap(src=src, tgt=tgt, f2=f2, f1=f1, f0=f0)


def identity_chain_map(c: ChainComplex) -> ChainMap:
    return ChainMap(
        src=c,
        tgt=c,
        f2=F2Matrix.identity(c.dim2),
        f1=F2Matrix.identity(c.dim1),
        f0=F2Matrix.identity(c.dim0),
    )


def induced_on_homology(
    f: ChainMap, degree: int, src_basis: HomologyBasis, tgt_basis: HomologyBasis
) -> F2Matrix:
    """Matrix of the homology lift [x] -> [f(x)] in the given bases."""
    comp = f.component(degree)
    cols = []
    for r in src_basis.representatives:
        pushed = comp @ r
        if not tgt_basis.kernel.contains(pushed):
            raise DimensionMismatch(
                "pushed representative is not a cycle; chain map or basis corrupted"
            )
        cols.append(tgt_basis.class_coordinates(pushed))
    if not cols:
        return F2Matrix.zeros(tgt_basis.dim, 0)
    return F2Matrix.from_rows(cols, cols=tgt_basis.dim).T


def direct_sum(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Block-diagonal sum; a's coordinates come first in every degree."""
    return ChainComplex(d2=block_diag(a.d2, b.d2), d1=block_diag(a.d1, b.d1))


def embed_vector(v, a_dim: int, b_dim: int, side: str) -> np.ndarray:
    """Embed a degree-space vector of one summand into the direct sum."""
    out = np.zeros(a_dim + b_dim, dtype=np.uint8)
    if side == "a":
        out[:a_dim] = np.asarray(v, dtype=np.uint8)
    elif side == "b":
        out[a_dim:] = np.asarray(v, dtype=np.uint8)
    else:
        raise DimensionMismatch("side must be 'a' or 'b'")
    return out

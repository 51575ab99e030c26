"""CSS codes: chain complex plus chosen logical data.

A code stores its complex (d2 = hz.T, d1 = hx), a Z-logical basis
(degree-1 homology classes) and the dual X-logical basis (degree-1
cohomology classes with pairing x_i . z_j = delta_ij).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .chaincomplex import ChainComplex, HomologyBasis, cohomology, homology, validate
from .errors import DimensionMismatch, NonCommutingChecks, SingularMatrix
from .f2linalg import (
    F2Matrix,
    Subspace,
    as_bit_vector,
    format_matrix,
    image_basis,
    kernel_basis,
    left_inverse_block,
    parse_matrix,
    rref,
    split_sections,
)


@dataclass(frozen=True)
class PauliOperator:
    """A Pauli in (x|z) coordinates with a bookkeeping sign.

    The sign plays no role in the code algebra; it only records phases
    picked up while commuting corrections around.
    """

    x: np.ndarray
    z: np.ndarray
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "x", as_bit_vector(self.x))
        object.__setattr__(self, "z", as_bit_vector(self.z, len(self.x)))
        if self.sign not in (1, -1):
            raise DimensionMismatch("sign must be +1 or -1")

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(x=np.zeros(n, dtype=np.uint8), z=np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_x(cls, x, sign: int = 1) -> "PauliOperator":
        x = as_bit_vector(x)
        return cls(x=x, z=np.zeros(len(x), dtype=np.uint8), sign=sign)

    @classmethod
    def from_z(cls, z, sign: int = 1) -> "PauliOperator":
        z = as_bit_vector(z)
        return cls(x=np.zeros(len(z), dtype=np.uint8), z=z, sign=sign)

    @property
    def n(self) -> int:
        return len(self.x)

    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    def compose(self, other: "PauliOperator") -> "PauliOperator":
        """Product modulo phase i; signs multiply (bookkeeping only)."""
        if self.n != other.n:
            raise DimensionMismatch("Pauli lengths differ")
        return PauliOperator(x=self.x ^ other.x, z=self.z ^ other.z, sign=self.sign * other.sign)

    def label(self) -> str:
        out = []
        for xi, zi in zip(self.x, self.z):
            out.append("IXZY"[int(xi) + 2 * int(zi)])
        return ("+" if self.sign == 1 else "-") + "".join(out)


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    """0 iff the two Paulis commute."""
    if a.n != b.n:
        raise DimensionMismatch("Pauli lengths differ")
    return int((int(a.x @ b.z) + int(a.z @ b.x)) % 2)


@dataclass(frozen=True)
class CssCode:
    """A CSS code with fixed dual logical bases."""

    complex: ChainComplex
    z_logicals: HomologyBasis
    x_logicals: HomologyBasis
    d: Optional[int] = None

    @property
    def n(self) -> int:
        return self.complex.dim1

    @property
    def k(self) -> int:
        return self.z_logicals.dim

    @property
    def hx(self) -> F2Matrix:
        return self.complex.d1

    @property
    def hz(self) -> F2Matrix:
        return self.complex.d2.T

    def z_logical(self, i: int) -> np.ndarray:
        return self.z_logicals.representatives[i]

    def x_logical(self, i: int) -> np.ndarray:
        return self.x_logicals.representatives[i]

    def z_stabilizer_space(self) -> Subspace:
        return image_basis(self.complex.d2)

    def x_stabilizer_space(self) -> Subspace:
        return image_basis(self.complex.d1.T)

    def params(self) -> str:
        return f"[[{self.n},{self.k},{self.d if self.d is not None else '?'}]]"

    def with_distance(self, d: int) -> "CssCode":
        return replace(self, d=d)

    def to_text(self) -> str:
        text = "hx:\n" + format_matrix(self.hx) + "hz:\n" + format_matrix(self.hz)
        text += "zl:\n" + format_matrix(self.z_logicals.matrix())
        text += "xl:\n" + format_matrix(self.x_logicals.matrix())
        return text

    @classmethod
    def from_text(cls, text: str) -> "CssCode":
        sections = split_sections(text)
        hx = parse_matrix(sections["hx"])
        hz = parse_matrix(sections["hz"])
        zl = parse_matrix(sections["zl"]) if "zl" in sections else None
        xl = parse_matrix(sections["xl"]) if "xl" in sections else None
        return from_parity_checks(hx, hz, z_basis=zl, x_basis=xl)


def _basis_from_rows(rows: F2Matrix, kernel: Subspace, image: Subspace, degree: int) -> HomologyBasis:
    reps = []
    for i in range(rows.rows):
        v = rows.row(i)
        if not kernel.contains(v):
            raise DimensionMismatch("supplied logical representative is not a cycle")
        reps.append(v)
    basis = HomologyBasis(degree=degree, representatives=tuple(reps), kernel=kernel, image=image)
    stacked = [np.asarray(r) for r in reps] + [b for b in image.basis_vectors()]
    if reps:
        got = rref(F2Matrix.from_rows(stacked, cols=kernel.ambient_dim)).rank
        if got != len(reps) + image.dim:
            raise DimensionMismatch("supplied logical representatives are dependent mod stabilizers")
    return basis


def from_parity_checks(
    hx: F2Matrix,
    hz: F2Matrix,
    z_basis: F2Matrix | None = None,
    x_basis: F2Matrix | None = None,
) -> CssCode:
    """Build a code from parity checks; logical bases are auto-computed.

    The Z basis defaults to the pivot-complement homology basis and the X
    basis to its unique dual. Supplying ``z_basis`` (and optionally
    ``x_basis``) overrides the choice; duality is always enforced.
    """
    if hx.cols != hz.cols:
        raise DimensionMismatch(f"hx has {hx.cols} columns, hz has {hz.cols}")
    if hx.rows and hz.rows and not (hx @ hz.T).is_zero():
        raise NonCommutingChecks("hx @ hz.T != 0")
    cplx = validate(d2=hz.T, d1=hx)
    if z_basis is None:
        zb = homology(cplx, 1)
    else:
        zb = _basis_from_rows(z_basis, kernel_basis(cplx.d1), image_basis(cplx.d2), degree=1)
    if x_basis is None:
        xb = dual_x_basis(cplx, zb)
    else:
        co = cohomology(cplx, 1)
        xb = _basis_from_rows(x_basis, co.kernel, co.image, degree=1)
        _check_duality(xb, zb)
    return CssCode(complex=cplx, z_logicals=zb, x_logicals=xb)


def _check_duality(xb: HomologyBasis, zb: HomologyBasis) -> None:
    k = zb.dim
    for i in range(k):
        for j in range(k):
            got = int(xb.representatives[i] @ zb.representatives[j]) % 2
            if got != (1 if i == j else 0):
                raise DimensionMismatch(
                    f"supplied bases are not dual: x_{i} . z_{j} = {got}"
                )


def _injective_column_selection(m: F2Matrix) -> F2Matrix:
    """Columns of m restricted to an independent generating subset."""
    keep = rref(m).pivots  # pivot columns are an independent generating set
    if not keep:
        return F2Matrix.zeros(m.rows, 0)
    return F2Matrix(np.array([m.a[:, j] for j in keep]).T)


def quotient_basis_units(ambient: int, sub: Subspace) -> F2Matrix:
    """Complement of ``sub`` spanned by its non-pivot unit vectors, as columns."""
    from .f2linalg import quotient_basis

    reps = quotient_basis(ambient, Subspace.full(ambient), sub)
    if not reps:
        return F2Matrix.zeros(ambient, 0)
    return F2Matrix.from_rows(reps, cols=ambient).T


def dual_x_basis(cplx: ChainComplex, z_basis: HomologyBasis) -> HomologyBasis:
    """The unique degree-1 cohomology basis with x_i . z_j = delta_ij.

    Assembles (L_Z | generators of im d2 | complement of ker d1),
    inverts, and reads the first k rows. The first two blocks span
    ker d1, so the concatenation is invertible; rows of the inverse pair
    to delta with the z-representatives and annihilate im d2, i.e. they
    are cocycles. (A generating set of ker(d1)-perp would not do as the
    third block: it can meet ker d1 itself, e.g. for self-dual checks.)
    """
    n = cplx.dim1
    k = z_basis.dim
    ker = kernel_basis(cplx.d2.T)
    img = image_basis(cplx.d1.T)
    if k == 0:
        return HomologyBasis(degree=1, representatives=(), kernel=ker, image=img)
    lz = z_basis.matrix().T  # n x k, columns are z representatives
    d2_gen = _injective_column_selection(cplx.d2)
    kernel_complement = quotient_basis_units(n, kernel_basis(cplx.d1))
    try:
        inv = left_inverse_block([lz, d2_gen, kernel_complement])
    except (SingularMatrix, DimensionMismatch) as exc:
        raise SingularMatrix(f"dual basis assembly failed: {exc}") from exc
    reps = tuple(inv.row(i) for i in range(k))
    basis = HomologyBasis(degree=1, representatives=reps, kernel=ker, image=img)
    for r in reps:
        if not ker.contains(r):
            raise SingularMatrix("dual basis construction produced a non-cycle")
    return basis


def dual_z_basis(cplx: ChainComplex, x_basis: HomologyBasis) -> HomologyBasis:
    """Dual construction in the other direction (Z basis from X basis)."""
    flipped = dual_x_basis(cplx.transpose(), x_basis)
    return HomologyBasis(
        degree=1,
        representatives=flipped.representatives,
        kernel=flipped.kernel,
        image=flipped.image,
    )


def dual_basis(code: CssCode, z_basis: HomologyBasis) -> HomologyBasis:
    """The unique X-logical basis pairing to delta with ``z_basis``."""
    return dual_x_basis(code.complex, z_basis)


def distance_bruteforce(code: CssCode, cap: int = 1 << 24) -> Optional[int]:
    """Minimum weight over nontrivial Z- and X-logical coset members.

    Enumerates the full kernels on both sides; returns None when the
    enumeration would exceed ``cap`` elements.
    """
    best: Optional[int] = None
    for kernel, image in (
        (kernel_basis(code.complex.d1), image_basis(code.complex.d2)),
        (kernel_basis(code.complex.d2.T), image_basis(code.complex.d1.T)),
    ):
        if kernel.dim == image.dim:
            continue  # no logicals on this side
        if (1 << kernel.dim) > cap:
            return None
        for v in kernel.enumerate():
            if not v.any():
                continue
            if image.contains(v):
                continue
            w = int(np.count_nonzero(v))
            if best is None or w < best:
                best = w
    return best


@dataclass(frozen=True)
class Encoder:
    """Isometry from k logical qubits into the codespace.

    Columns are indexed by logical labels u (qubit 0 is the most
    significant bit); column u is the uniform superposition over the
    X-stabilizer orbit of the logical-X representative sum G @ u.
    """

    code: CssCode
    matrix: np.ndarray  # complex, 2**n x 2**k

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def k(self) -> int:
        return self.code.k

    def column(self, label: int) -> np.ndarray:
        return self.matrix[:, label]


def bits_to_index(bits: np.ndarray) -> int:
    """Computational-basis index; qubit 0 is the most significant bit."""
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def index_to_bits(index: int, n: int) -> np.ndarray:
    return np.array([(index >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


SIMULATOR_QUBIT_LIMIT = 20


def encoder_isometry(code: CssCode) -> Encoder:
    """Type-preserving encoder built from the stored dual bases."""
    n, k = code.n, code.k
    if n > SIMULATOR_QUBIT_LIMIT:
        raise DimensionMismatch(f"{n} qubits exceeds the simulator limit {SIMULATOR_QUBIT_LIMIT}")
    row_basis = rref(code.hx)
    gen_rows = [row_basis.reduced.row(i) for i in range(row_basis.rank)]
    orbit = []
    for mask in range(1 << len(gen_rows)):
        v = np.zeros(n, dtype=np.uint8)
        for i, g in enumerate(gen_rows):
            if (mask >> i) & 1:
                v ^= g
        orbit.append(v)
    amp = 1.0 / np.sqrt(len(orbit))
    mat = np.zeros((1 << n, 1 << k), dtype=np.complex128)
    for label in range(1 << k):
        base = np.zeros(n, dtype=np.uint8)
        for i in range(k):
            if (label >> (k - 1 - i)) & 1:
                base ^= code.x_logical(i)
        for s in orbit:
            mat[bits_to_index(base ^ s), label] += amp
    return Encoder(code=code, matrix=mat)


def tensor_encoders(a: Encoder, b: Encoder, code: CssCode) -> Encoder:
    """Encoder of a direct-sum code from its summands' encoders."""
    return Encoder(code=code, matrix=np.kron(a.matrix, b.matrix))


def encoder_with_fixed_logical(e: Encoder, index: int, state: np.ndarray) -> np.ndarray:
    """Contract one logical input of the isometry with a 1-qubit state.

    Returns a 2**n x 2**(k-1) matrix; remaining logical qubits keep
    their order.
    """
    k = e.k
    m = e.matrix.reshape((e.matrix.shape[0],) + (2,) * k)
    m = np.tensordot(m, np.asarray(state, dtype=np.complex128), axes=([1 + index], [0]))
    return m.reshape(e.matrix.shape[0], 1 << (k - 1))

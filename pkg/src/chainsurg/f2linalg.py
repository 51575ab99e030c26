"""Exact dense linear algebra over GF(2).

Matrices are immutable wrappers around uint8 numpy arrays with entries in
{0, 1}; all arithmetic is mod 2. Everything here is deterministic: equal
inputs produce bit-identical outputs, which the rest of the package relies
on for reproducible bases and reports.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotContained, SingularMatrix


def as_bit_vector(v, length: int | None = None) -> np.ndarray:
    """Coerce ``v`` to a read-only 1-D uint8 array of 0/1 entries."""
    a = np.asarray(v, dtype=np.uint8) % 2
    if a.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {a.shape}")
    if length is not None and a.shape[0] != length:
        raise DimensionMismatch(f"expected length {length}, got {a.shape[0]}")
    a = a.copy()
    a.flags.writeable = False
    return a


def zeros_vector(length: int) -> np.ndarray:
    return as_bit_vector(np.zeros(length, dtype=np.uint8))


def unit_vector(length: int, index: int) -> np.ndarray:
    v = np.zeros(length, dtype=np.uint8)
    v[index] = 1
    return as_bit_vector(v)


def vector_weight(v: np.ndarray) -> int:
    return int(np.sum(v) % (1 << 62)) if v.size else 0


class F2Matrix:
    """Immutable dense matrix over GF(2).

    ``@`` is mod-2 matrix product (also accepts a vector on the right),
    ``+`` is entrywise XOR, ``.T`` the transpose.
    """

    __slots__ = ("_a",)

    def __init__(self, data):
        a = np.asarray(data, dtype=np.uint8)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        if a.ndim != 2:
            raise DimensionMismatch(f"expected a matrix, got shape {a.shape}")
        a = (a % 2).copy()
        a.flags.writeable = False
        self._a = a

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_rows(cls, rows: Sequence, cols: int | None = None) -> "F2Matrix":
        rows = list(rows)
        if not rows:
            if cols is None:
                raise DimensionMismatch("empty row list needs an explicit column count")
            return cls.zeros(0, cols)
        return cls(np.array([np.asarray(r, dtype=np.uint8) for r in rows]))

    @property
    def a(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def T(self) -> "F2Matrix":
        return F2Matrix(self._a.T)

    def row(self, i: int) -> np.ndarray:
        return as_bit_vector(self._a[i])

    def col(self, j: int) -> np.ndarray:
        return as_bit_vector(self._a[:, j])

    def is_zero(self) -> bool:
        return not self._a.any()

    def __matmul__(self, other):
        if isinstance(other, F2Matrix):
            if self.cols != other.rows:
                raise DimensionMismatch(f"{self.shape} @ {other.shape}")
            return F2Matrix(self._a.astype(np.int64) @ other._a.astype(np.int64) % 2)
        v = np.asarray(other, dtype=np.uint8)
        if v.ndim == 1:
            if self.cols != v.shape[0]:
                raise DimensionMismatch(f"{self.shape} @ vector of length {v.shape[0]}")
            return as_bit_vector(self._a.astype(np.int64) @ v.astype(np.int64) % 2)
        return NotImplemented

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return F2Matrix(self._a ^ other._a)

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    def __eq__(self, other) -> bool:
        return isinstance(other, F2Matrix) and self.shape == other.shape and bool(
            np.array_equal(self._a, other._a)
        )

    def __hash__(self) -> int:
        return hash((self.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        body = "\n".join("".join(str(int(x)) for x in row) for row in self._a)
        return f"F2Matrix({self.rows}x{self.cols})\n{body}"

    def to_lists(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self._a]


def hstack(blocks: Sequence[F2Matrix]) -> F2Matrix:
    if not blocks:
        raise DimensionMismatch("need at least one block")
    return F2Matrix(np.hstack([b.a for b in blocks]))


def vstack(blocks: Sequence[F2Matrix]) -> F2Matrix:
    if not blocks:
        raise DimensionMismatch("need at least one block")
    return F2Matrix(np.vstack([b.a for b in blocks]))


def block_diag(a: F2Matrix, b: F2Matrix) -> F2Matrix:
    out = np.zeros((a.rows + b.rows, a.cols + b.cols), dtype=np.uint8)
    out[: a.rows, : a.cols] = a.a
    out[a.rows :, a.cols :] = b.a
    return F2Matrix(out)


@dataclass(frozen=True)
class RrefResult:
    reduced: F2Matrix
    pivots: tuple[int, ...]
    transform: F2Matrix  # invertible; transform @ input == reduced

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(m: F2Matrix) -> RrefResult:
    """Reduced row-echelon form with the invertible row transform."""
    a = m.a.copy()
    rows, cols = a.shape
    t = np.eye(rows, dtype=np.uint8)
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if a[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
            t[[r, pivot]] = t[[pivot, r]]
        hit = np.nonzero(a[:, c])[0]
        for i in hit:
            if i != r:
                a[i, :] ^= a[r, :]
                t[i, :] ^= t[r, :]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return RrefResult(F2Matrix(a), tuple(pivots), F2Matrix(t))


def rank(m: F2Matrix) -> int:
    return rref(m).rank


class Subspace:
    """A subspace of F2^n held as a canonical RREF row basis.

    Two equal subspaces always carry bit-identical bases, so Subspace
    equality is plain matrix equality.
    """

    __slots__ = ("_ambient", "_basis", "_pivots")

    def __init__(self, ambient_dim: int, basis: F2Matrix, pivots: tuple[int, ...]):
        # Internal constructor; use from_vectors / zero / full.
        self._ambient = ambient_dim
        self._basis = basis
        self._pivots = pivots

    @classmethod
    def from_vectors(cls, vectors: Iterable, ambient_dim: int) -> "Subspace":
        vecs = [as_bit_vector(v, ambient_dim) for v in vectors]
        if not vecs:
            return cls.zero(ambient_dim)
        res = rref(F2Matrix.from_rows(vecs, cols=ambient_dim))
        basis = F2Matrix(res.reduced.a[: res.rank])
        return cls(ambient_dim, basis, res.pivots)

    @classmethod
    def from_matrix_rows(cls, m: F2Matrix) -> "Subspace":
        return cls.from_vectors([m.row(i) for i in range(m.rows)], m.cols)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, F2Matrix.zeros(0, ambient_dim), ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, F2Matrix.identity(ambient_dim), tuple(range(ambient_dim)))

    @property
    def ambient_dim(self) -> int:
        return self._ambient

    @property
    def dim(self) -> int:
        return self._basis.rows

    @property
    def basis(self) -> F2Matrix:
        return self._basis

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    def basis_vectors(self) -> list[np.ndarray]:
        return [self._basis.row(i) for i in range(self.dim)]

    def reduce(self, v) -> np.ndarray:
        """Canonical coset representative of v + self (pivot entries cleared)."""
        return coset_reduce(v, self)

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.ambient_dim != self._ambient:
            raise DimensionMismatch("ambient dimensions differ")
        return all(self.contains(b) for b in other.basis_vectors())

    def sum(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self._ambient:
            raise DimensionMismatch("ambient dimensions differ")
        return Subspace.from_vectors(self.basis_vectors() + other.basis_vectors(), self._ambient)

    def perp(self) -> "Subspace":
        """Orthogonal complement w.r.t. the standard bilinear form."""
        if self.dim == 0:
            return Subspace.full(self._ambient)
        return kernel_basis(self._basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        return self.perp().sum(other.perp()).perp()

    def enumerate(self):
        """Yield every element (2**dim of them); caller checks the dimension."""
        k = self.dim
        b = self._basis.a
        for mask in range(1 << k):
            v = np.zeros(self._ambient, dtype=np.uint8)
            for i in range(k):
                if (mask >> i) & 1:
                    v ^= b[i]
            yield v

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self._ambient == other._ambient
            and self._basis == other._basis
        )

    def __hash__(self) -> int:
        return hash((self._ambient, self._basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self._ambient})"


def kernel_basis(m: F2Matrix) -> Subspace:
    """Basis of {x : m @ x = 0}, canonicalized to RREF."""
    res = rref(m)
    a = res.reduced.a
    pivots = list(res.pivots)
    cols = m.cols
    free = [c for c in range(cols) if c not in pivots]
    vecs = []
    for f in free:
        v = np.zeros(cols, dtype=np.uint8)
        v[f] = 1
        for i, p in enumerate(pivots):
            if a[i, f]:
                v[p] = 1
        vecs.append(v)
    return Subspace.from_vectors(vecs, cols)


def image_basis(m: F2Matrix) -> Subspace:
    """Column-space basis of m (as a map into F2^rows)."""
    return Subspace.from_vectors([m.col(j) for j in range(m.cols)], m.rows)


def row_space(m: F2Matrix) -> Subspace:
    return Subspace.from_matrix_rows(m)


def solve(m: F2Matrix, b) -> np.ndarray | None:
    """One solution of m @ x = b (pivot solution, free variables 0), or None."""
    bv = as_bit_vector(b)
    if bv.shape[0] != m.rows:
        raise DimensionMismatch(f"rhs length {bv.shape[0]} != rows {m.rows}")
    res = rref(m)
    rb = (res.transform @ bv).astype(np.uint8)
    if rb[res.rank :].any():
        return None
    x = np.zeros(m.cols, dtype=np.uint8)
    for i, p in enumerate(res.pivots):
        x[p] = rb[i]
    return as_bit_vector(x)


def coset_reduce(v, w: Subspace) -> np.ndarray:
    """The unique representative of v + w with zeros in w's pivot columns."""
    out = np.array(as_bit_vector(v, w.ambient_dim))
    b = w.basis.a
    for i, p in enumerate(w.pivots):
        if out[p]:
            out ^= b[i]
    return as_bit_vector(out)


def quotient_basis(ambient: int, u: Subspace, w: Subspace) -> list[np.ndarray]:
    """Coset representatives of a basis of u/w.

    Echelonizes w inside u's basis coordinates and keeps the non-pivot
    members of u's basis, so the output is deterministic and ordered by
    u's basis order.
    """
    if u.ambient_dim != ambient or w.ambient_dim != ambient:
        raise DimensionMismatch("ambient dimensions differ")
    if not u.contains_subspace(w):
        raise NotContained("quotient_basis: w is not contained in u")
    if w.dim == 0:
        return u.basis_vectors()
    ub_t = u.basis.T
    coords = []
    for r in w.basis_vectors():
        c = solve(ub_t, r)
        if c is None:  # unreachable after containment check
            raise NotContained("quotient_basis: w is not contained in u")
        coords.append(c)
    res = rref(F2Matrix.from_rows(coords, cols=u.dim))
    pivot_set = set(res.pivots)
    return [u.basis.row(j) for j in range(u.dim) if j not in pivot_set]


def left_inverse_block(blocks: Sequence[F2Matrix]) -> F2Matrix:
    """Inverse of the horizontal concatenation of blocks (must be square)."""
    m = hstack(list(blocks))
    if m.rows != m.cols:
        raise DimensionMismatch(f"concatenation is {m.rows}x{m.cols}, not square")
    res = rref(m)
    if res.rank != m.rows:
        raise SingularMatrix("block concatenation is singular")
    return res.transform


def invert(m: F2Matrix) -> F2Matrix:
    return left_inverse_block([m])


# --- shared text format -----------------------------------------------------
#
# Matrix files: first line "rows cols", then one line of space-free 0/1
# characters per row. Section files: "name:" lines introduce a block whose
# body is a matrix (or other literal) in this format.


def format_matrix(m: F2Matrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    for i in range(m.rows):
        lines.append("".join(str(int(x)) for x in m.a[i]))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> F2Matrix:
    lines = text.splitlines()
    if not lines:
        raise DimensionMismatch("empty matrix text")
    head = lines[0].split()
    if len(head) != 2:
        raise DimensionMismatch(f"bad matrix header: {lines[0]!r}")
    rows, cols = int(head[0]), int(head[1])
    body = lines[1 : 1 + rows]
    if len(body) != rows:
        raise DimensionMismatch(f"expected {rows} rows, found {len(body)}")
    a = np.zeros((rows, cols), dtype=np.uint8)
    for i, line in enumerate(body):
        line = line.strip()
        if len(line) != cols:
            raise DimensionMismatch(f"row {i} has {len(line)} entries, expected {cols}")
        for j, ch in enumerate(line):
            if ch not in "01":
                raise DimensionMismatch(f"bad character {ch!r} in matrix row {i}")
            a[i, j] = ch == "1"
    return F2Matrix(a)


_SECTION_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*):\s*(.*)$")


def split_sections(text: str) -> dict[str, str]:
    """Split "name:"-introduced blocks of a section file into raw bodies.

    A header with trailing content on the same line ("orientation: Z")
    becomes a plain key/value entry.
    """
    sections: dict[str, str] = {}
    name = None
    buf: list[str] = []

    def flush():
        nonlocal name, buf
        if name is not None:
            sections[name] = "\n".join(buf).strip("\n")
        name = None
        buf = []

    for line in text.splitlines():
        m = _SECTION_RE.match(line.strip())
        if m:
            flush()
            if m.group(2):
                sections[m.group(1)] = m.group(2).strip()
            else:
                name = m.group(1)
        elif name is not None:
            buf.append(line)
        elif line.strip():
            raise DimensionMismatch(f"unexpected line outside any section: {line!r}")
    flush()
    return sections

"""Hilbert-space verification of preserving code maps.

Physical operations are parity maps, Hadamard-conjugated parity maps,
post-selected stabilizer projections, and Pauli gates; channels are
extracted by conjugating an operation list with encoders. Everything is
exact linear algebra on dense state vectors (n <= 20 qubits).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .chaincomplex import ChainMap
from .csscode import (
    Encoder,
    PauliOperator,
    SIMULATOR_QUBIT_LIMIT,
    bits_to_index,
    from_parity_checks,
)
from .errors import DimensionMismatch, ZeroProbabilityOutcome
from .f2linalg import F2Matrix, Subspace, image_basis, quotient_basis

PHASE_TOL = 1e-9


@dataclass(frozen=True)
class StateVector:
    """Dense amplitudes over n qubits; qubit 0 is the most significant bit."""

    n: int
    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        if self.n > SIMULATOR_QUBIT_LIMIT:
            raise DimensionMismatch(
                f"{self.n} qubits exceeds the simulator limit {SIMULATOR_QUBIT_LIMIT}"
            )
        if self.amplitudes.shape != (1 << self.n,):
            raise DimensionMismatch("amplitude array has the wrong length")
        if self.normalized:
            norm = np.linalg.norm(self.amplitudes)
            if abs(norm - 1.0) > 1e-12:
                raise DimensionMismatch(f"state marked normalized but |psi| = {norm}")

    @classmethod
    def basis_state(cls, n: int, index: int = 0) -> "StateVector":
        a = np.zeros(1 << n, dtype=np.complex128)
        a[index] = 1.0
        return cls(n=n, amplitudes=a, normalized=True)

    @classmethod
    def from_amplitudes(cls, amps) -> "StateVector":
        a = np.asarray(amps, dtype=np.complex128)
        n = int(np.log2(len(a)))
        if (1 << n) != len(a):
            raise DimensionMismatch("amplitude count is not a power of two")
        return cls(n=n, amplitudes=a)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0.0:
            raise ZeroProbabilityOutcome("cannot normalize the zero vector")
        return StateVector(n=self.n, amplitudes=self.amplitudes / nrm, normalized=True)


def states_equal_up_to_phase(a: StateVector, b: StateVector, tol: float = PHASE_TOL) -> bool:
    if a.n != b.n:
        return False
    va, vb = a.amplitudes, b.amplitudes
    ia = int(np.argmax(np.abs(va)))
    if abs(va[ia]) < tol and np.linalg.norm(vb) < tol:
        return True
    if abs(vb[ia]) < tol:
        return False
    phase = va[ia] / vb[ia]
    return bool(np.allclose(va, phase * vb, atol=tol * max(1.0, abs(phase))))


# --- physical operations -----------------------------------------------------


@dataclass(frozen=True)
class ParityMap:
    """|x> -> |A x| ... the basis-state parity map of a binary matrix."""

    matrix: F2Matrix

    @property
    def n_in(self) -> int:
        return self.matrix.cols

    @property
    def n_out(self) -> int:
        return self.matrix.rows


@dataclass(frozen=True)
class HadamardConjugatedParityMap:
    """H^out . ParityMap(matrix) . H^in; equivalently the transpose-fiber map.

    On basis states: |x> -> 2^{(in-out)/2} * sum_{y : matrix^T y = x} |y>.
    """

    matrix: F2Matrix

    @property
    def n_in(self) -> int:
        return self.matrix.cols

    @property
    def n_out(self) -> int:
        return self.matrix.rows


@dataclass(frozen=True)
class Projection:
    """Post-selected projection (I + outcome * S)/2 for a stabilizer Pauli S."""

    pauli: PauliOperator
    outcome: int = 1

    @property
    def n_in(self) -> int:
        return self.pauli.n

    @property
    def n_out(self) -> int:
        return self.pauli.n


@dataclass(frozen=True)
class PauliGate:
    pauli: PauliOperator

    @property
    def n_in(self) -> int:
        return self.pauli.n

    @property
    def n_out(self) -> int:
        return self.pauli.n


PhysicalOp = Union[ParityMap, HadamardConjugatedParityMap, Projection, PauliGate]


def _basis_bits(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)


def _parity_indices(a: F2Matrix) -> np.ndarray:
    """Output basis index A @ x for every input index x."""
    bits = _basis_bits(a.cols)
    out_bits = bits @ a.a.T.astype(np.int64) % 2
    powers = 1 << np.arange(a.rows - 1, -1, -1, dtype=np.int64) if a.rows else np.zeros(0, dtype=np.int64)
    return out_bits @ powers if a.rows else np.zeros(1 << a.cols, dtype=np.int64)


def _fwht(v: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform."""
    out = v.copy()
    size = len(out)
    h = 1
    while h < size:
        out = out.reshape(-1, 2 * h)
        left = out[:, :h].copy()
        right = out[:, h:].copy()
        out[:, :h] = left + right
        out[:, h:] = left - right
        out = out.reshape(size)
        h *= 2
    return out


def _apply_parity(a: F2Matrix, amps: np.ndarray) -> np.ndarray:
    out = np.zeros(1 << a.rows, dtype=np.complex128)
    np.add.at(out, _parity_indices(a), amps)
    return out


def _apply_hconj_parity(a: F2Matrix, amps: np.ndarray) -> np.ndarray:
    n_in, n_out = a.cols, a.rows
    v = _fwht(amps) / np.sqrt(1 << n_in)
    v = _apply_parity(a, v)
    return _fwht(v) / np.sqrt(1 << n_out)


def _apply_pauli(p: PauliOperator, amps: np.ndarray) -> np.ndarray:
    """Amplitudes of gamma(x|z)|psi> = X^x Z^z |psi| (sign included)."""
    zpar = _basis_bits(p.n) @ p.z.astype(np.int64) % 2
    shifted = amps * np.where(zpar, -1.0, 1.0) * p.sign
    xmask = bits_to_index(p.x)
    if xmask:
        idx = np.arange(1 << p.n, dtype=np.int64) ^ xmask
        shifted = shifted[idx]
    return shifted


def apply_linear(op: PhysicalOp, amps: np.ndarray) -> np.ndarray:
    """Raw linear action of an op; no renormalization."""
    if isinstance(op, ParityMap):
        return _apply_parity(op.matrix, amps)
    if isinstance(op, HadamardConjugatedParityMap):
        return _apply_hconj_parity(op.matrix, amps)
    if isinstance(op, Projection):
        return (amps + op.outcome * _apply_pauli(op.pauli, amps)) / 2.0
    if isinstance(op, PauliGate):
        return _apply_pauli(op.pauli, amps)
    raise DimensionMismatch(f"unknown physical op {op!r}")


def apply(op: PhysicalOp, state: StateVector) -> tuple[StateVector, float]:
    """Apply one op; projections renormalize and report the branch amplitude."""
    if state.n != op.n_in:
        raise DimensionMismatch(f"op expects {op.n_in} qubits, state has {state.n}")
    out = apply_linear(op, state.amplitudes)
    if isinstance(op, Projection):
        before = np.linalg.norm(state.amplitudes)
        after = np.linalg.norm(out)
        if after <= 1e-300:
            raise ZeroProbabilityOutcome("post-selected branch has zero amplitude")
        amp = float(after / before) if before else 0.0
        return StateVector(n=op.n_out, amplitudes=out / after), amp
    return StateVector(n=op.n_out, amplitudes=out), float(np.linalg.norm(out))


def apply_sequence_linear(ops: Sequence[PhysicalOp], amps: np.ndarray) -> np.ndarray:
    for op in ops:
        amps = apply_linear(op, amps)
    return amps


# --- interpretation of preserving code maps ----------------------------------


def omega_complement(image: Subspace, ambient: int) -> list[np.ndarray]:
    """Pivot-complement basis of a supplementary space of ``image``."""
    return quotient_basis(ambient, Subspace.full(ambient), image)


def physical_op_sequence(f: ChainMap, orientation: str = "Z") -> list[PhysicalOp]:
    """Interpretation of a preserving code map on the physical Hilbert space.

    Z orientation: f is a chain map between code complexes; the op is the
    Hadamard-conjugated parity map of f1 followed by post-selected
    projections onto the target Z-stabilizers d2 @ w for a complement
    basis {w} of im(f2). X orientation: f is the corresponding chain map
    of transposed complexes; the op is the plain parity map of f1
    followed by X-stabilizer projections (same formula in the transposed
    frame). Surjective f2 means no projections are emitted.
    """
    if orientation not in ("Z", "X"):
        raise DimensionMismatch("orientation must be 'Z' or 'X'")
    ops: list[PhysicalOp] = []
    if orientation == "Z":
        ops.append(HadamardConjugatedParityMap(f.f1))
    else:
        ops.append(ParityMap(f.f1))
    img = image_basis(f.f2)
    for w in omega_complement(img, f.tgt.dim2):
        vec = f.tgt.d2 @ w
        if orientation == "Z":
            ops.append(Projection(PauliOperator.from_z(vec), outcome=1))
        else:
            ops.append(Projection(PauliOperator.from_x(vec), outcome=1))
    return ops


# --- logical channel extraction ----------------------------------------------


def extract_logical_channel(
    ops: Sequence[PhysicalOp],
    e_in,
    e_out,
) -> np.ndarray:
    """E_out^dagger . (composed ops) . E_in, column by column.

    ``e_in`` and ``e_out`` are Encoder objects or isometry matrices
    (2^n x 2^k). Projections are applied linearly so relative column
    norms are meaningful; the result is normalized so its
    largest-magnitude entry is exactly 1 (real positive). Raises
    ZeroProbabilityOutcome if everything post-selects to zero.
    """
    e_in = e_in.matrix if isinstance(e_in, Encoder) else np.asarray(e_in)
    e_out = e_out.matrix if isinstance(e_out, Encoder) else np.asarray(e_out)
    k_in = int(np.log2(e_in.shape[1]))
    k_out = int(np.log2(e_out.shape[1]))
    mat = np.zeros((1 << k_out, 1 << k_in), dtype=np.complex128)
    for u in range(1 << k_in):
        amps = np.ascontiguousarray(e_in[:, u])
        amps = apply_sequence_linear(ops, amps)
        mat[:, u] = e_out.conj().T @ amps
    return fix_phase_and_scale(mat)


def fix_phase_and_scale(mat: np.ndarray) -> np.ndarray:
    flat = np.abs(mat).ravel()
    idx = int(np.argmax(flat))
    if flat[idx] <= 1e-300:
        raise ZeroProbabilityOutcome("extracted channel is identically zero")
    return mat / mat.ravel()[idx]


def channels_close(a: np.ndarray, b: np.ndarray, tol: float = PHASE_TOL) -> bool:
    if a.shape != b.shape:
        return False
    return bool(np.max(np.abs(fix_phase_and_scale(a) - fix_phase_and_scale(b))) < tol)


def pauli_expectation(p: PauliOperator, state: StateVector) -> complex:
    nrm2 = np.vdot(state.amplitudes, state.amplitudes)
    if abs(nrm2) < 1e-300:
        raise ZeroProbabilityOutcome("zero state has no expectation values")
    return complex(np.vdot(state.amplitudes, _apply_pauli(p, state.amplitudes)) / nrm2)


# --- the two-qubit counterexample ---------------------------------------------


@dataclass(frozen=True)
class CounterexampleReport:
    """Outcome of the projection-necessity check on the two-qubit codes."""

    z1_expectation_without: float
    stabilizer_expectations_with: tuple[float, ...]
    violates_without: bool
    preserved_with: bool


def counterexample_check() -> CounterexampleReport:
    """Drop the complement projections and watch a stabilizer fail.

    Source code: one Z-check Z1Z2 and one X-check X1X2 (the Bell pair).
    Target code: Z-checks Z1 and Z2. The chain map has f1 = identity and
    a non-surjective f2, so the honest interpretation carries a
    projection; omitting it leaves the Bell state, which is not fixed by
    Z1.
    """
    src = from_parity_checks(hx=F2Matrix([[1, 1]]), hz=F2Matrix([[1, 1]]))
    tgt = from_parity_checks(hx=F2Matrix.zeros(0, 2), hz=F2Matrix.identity(2))
    from .chaincomplex import validate_chain_map

    f = validate_chain_map(
        src.complex,
        tgt.complex,
        f2=F2Matrix([[1], [1]]),
        f1=F2Matrix.identity(2),
        f0=F2Matrix.zeros(0, 1),
    )
    bell = StateVector.from_amplitudes(
        np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)
    )
    ops = physical_op_sequence(f, "Z")
    middle_only = [op for op in ops if not isinstance(op, Projection)]

    out_without = StateVector.from_amplitudes(
        apply_sequence_linear(middle_only, bell.amplitudes)
    )
    z1 = PauliOperator.from_z([1, 0])
    z2 = PauliOperator.from_z([0, 1])
    z1_exp = float(np.real(pauli_expectation(z1, out_without)))

    out_with = StateVector.from_amplitudes(apply_sequence_linear(ops, bell.amplitudes))
    exps = tuple(
        float(np.real(pauli_expectation(p, out_with))) for p in (z1, z2)
    )
    return CounterexampleReport(
        z1_expectation_without=z1_exp,
        stabilizer_expectations_with=exps,
        violates_without=abs(z1_exp - 1.0) > 1e-6,
        preserved_with=all(abs(e - 1.0) < 1e-12 for e in exps),
    )

"""GF(2) kernel tests; expected values come from brute-force enumeration."""
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chainsurg.errors import DimensionMismatch, NotContained, SingularMatrix
from chainsurg.f2linalg import (
    F2Matrix,
    Subspace,
    coset_reduce,
    format_matrix,
    hstack,
    image_basis,
    kernel_basis,
    left_inverse_block,
    parse_matrix,
    quotient_basis,
    rank,
    rref,
    solve,
    split_sections,
)

STEANE_HX = [
    [1, 1, 1, 0, 1, 0, 0],
    [0, 0, 1, 1, 1, 1, 0],
    [0, 1, 0, 0, 1, 1, 1],
]


def brute_rank(rows, width):
    """Rank via enumeration: count distinct nonzero row combinations."""
    seen = set()
    for mask in range(1, 1 << len(rows)):
        v = np.zeros(width, dtype=np.uint8)
        for i in range(len(rows)):
            if (mask >> i) & 1:
                v ^= np.array(rows[i], dtype=np.uint8)
        if v.any():
            seen.add(tuple(v))
    count = len(seen)
    r = 0
    while (1 << r) - 1 < count:
        r += 1
    assert (1 << r) - 1 == count, "row combinations do not form a subspace minus zero"
    return r


class TestRref:
    def test_duplicate_rows(self):
        res = rref(F2Matrix([[1, 1], [1, 1]]))
        assert res.rank == 1
        assert res.pivots == (0,)

    def test_identity_fixed(self):
        m = F2Matrix.identity(3)
        res = rref(m)
        assert res.reduced == m
        assert res.pivots == (0, 1, 2)

    def test_steane_rank_vs_bruteforce(self):
        res = rref(F2Matrix(STEANE_HX))
        assert res.rank == brute_rank(STEANE_HX, 7) == 3

    def test_transform_property(self):
        m = F2Matrix([[1, 0, 1, 1], [1, 1, 0, 0], [0, 1, 1, 1]])
        res = rref(m)
        assert res.transform @ m == res.reduced
        # transform invertible
        assert rank(res.transform) == m.rows

    def test_rref_fixpoint(self):
        m = F2Matrix([[1, 0, 1, 1], [1, 1, 0, 0], [0, 1, 1, 1]])
        once = rref(m).reduced
        assert rref(once).reduced == once


class TestKernelImage:
    def test_zero_matrix_full_kernel(self):
        k = kernel_basis(F2Matrix.zeros(2, 3))
        assert k.dim == 3

    def test_repetition_pair(self):
        k = kernel_basis(F2Matrix([[1, 1]]))
        assert k.dim == 1
        assert k.contains([1, 1])

    def test_steane_kernel_vs_enumeration(self):
        m = F2Matrix(STEANE_HX)
        k = kernel_basis(m)
        brute = [v for v in itertools.product([0, 1], repeat=7) if not (m @ np.array(v, dtype=np.uint8)).any()]
        assert (1 << k.dim) == len(brute) == 16
        for v in brute:
            assert k.contains(np.array(v, dtype=np.uint8))

    def test_image_identity_and_zero(self):
        assert image_basis(F2Matrix.identity(4)).dim == 4
        assert image_basis(F2Matrix.zeros(3, 2)).dim == 0

    def test_steane_hzT_image(self):
        hz_t = F2Matrix(STEANE_HX).T  # 7x3
        img = image_basis(hz_t)
        # enumerate the 2^3 column combinations
        brute = set()
        for mask in range(8):
            v = np.zeros(7, dtype=np.uint8)
            for i in range(3):
                if (mask >> i) & 1:
                    v ^= hz_t.col(i)
            brute.add(tuple(v))
        assert img.dim == 3 and len(brute) == 8

    def test_rank_nullity(self):
        r = np.random.RandomState(7)
        for _ in range(25):
            m = F2Matrix(r.randint(0, 2, size=(r.randint(1, 6), r.randint(1, 7))))
            assert kernel_basis(m).dim + image_basis(m).dim == m.cols


class TestSolve:
    def test_identity(self):
        b = np.array([1, 0, 1], dtype=np.uint8)
        assert np.array_equal(solve(F2Matrix.identity(3), b), b)

    def test_pivot_solution(self):
        x = solve(F2Matrix([[1, 1]]), [1])
        assert np.array_equal(x, [1, 0])  # free variable set to 0

    def test_steane_weight_one_syndrome(self):
        m = F2Matrix(STEANE_HX)
        syndrome = m @ np.eye(7, dtype=np.uint8)[1]
        x = solve(m, syndrome)
        assert x is not None and (m @ x == syndrome).all()
        # exhaustive search confirms a weight-1 solution exists
        found = [
            v
            for v in itertools.product([0, 1], repeat=7)
            if np.array_equal(m @ np.array(v, dtype=np.uint8), syndrome) and sum(v) == 1
        ]
        assert found

    def test_unsolvable(self):
        assert solve(F2Matrix.zeros(1, 2), [1]) is None

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            solve(F2Matrix.identity(2), [1, 0, 0])


class TestCosetReduce:
    def test_member_reduces_to_zero(self):
        w = Subspace.from_vectors([[1, 1]], 2)
        assert not coset_reduce([1, 1], w).any()

    def test_pivot_cleared(self):
        w = Subspace.from_vectors([[1, 1]], 2)
        assert np.array_equal(coset_reduce([1, 0], w), [0, 1])

    def test_steane_stabilizers_reduce_to_zero(self):
        hz_t = F2Matrix(STEANE_HX).T
        img = image_basis(hz_t)
        for mask in range(8):
            v = np.zeros(7, dtype=np.uint8)
            for i in range(3):
                if (mask >> i) & 1:
                    v ^= hz_t.col(i)
            assert not coset_reduce(v, img).any()

    def test_idempotent_and_coset_constant(self):
        r = np.random.RandomState(3)
        for _ in range(50):
            n = r.randint(2, 8)
            w = Subspace.from_vectors(r.randint(0, 2, size=(r.randint(1, 4), n)), n)
            v = r.randint(0, 2, size=n).astype(np.uint8)
            red = coset_reduce(v, w)
            assert np.array_equal(coset_reduce(red, w), red)
            for el in w.basis_vectors():
                assert np.array_equal(coset_reduce(v ^ el, w), red)


class TestQuotientBasis:
    def test_plane_mod_diagonal(self):
        u = Subspace.full(2)
        w = Subspace.from_vectors([[1, 1]], 2)
        reps = quotient_basis(2, u, w)
        assert len(reps) == 1
        assert np.array_equal(reps[0], [0, 1])

    def test_worked_pivot_complement(self):
        # u basis e1..e4, w = span{u1+u3, u2+u3+u4}: representatives u3, u4
        u = Subspace.full(4)
        w = Subspace.from_vectors([[1, 0, 1, 0], [0, 1, 1, 1]], 4)
        reps = quotient_basis(4, u, w)
        assert [list(map(int, r)) for r in reps] == [[0, 0, 1, 0], [0, 0, 0, 1]]

    def test_w_equals_u(self):
        u = Subspace.from_vectors([[1, 0, 1], [0, 1, 0]], 3)
        assert quotient_basis(3, u, u) == []

    def test_not_contained(self):
        with pytest.raises(NotContained):
            quotient_basis(2, Subspace.from_vectors([[1, 0]], 2), Subspace.from_vectors([[0, 1]], 2))

    def test_representatives_independent_mod_w(self):
        r = np.random.RandomState(11)
        for _ in range(30):
            n = r.randint(2, 8)
            u = Subspace.from_vectors(r.randint(0, 2, size=(r.randint(1, n + 1), n)), n)
            take = r.randint(0, 2, size=(r.randint(0, 3), max(u.dim, 1)))
            w_vecs = [sum((row[i] * u.basis.row(i) for i in range(u.dim)), np.zeros(n, dtype=np.uint8)) % 2 for row in take] if u.dim else []
            w = Subspace.from_vectors(w_vecs, n)
            reps = quotient_basis(n, u, w)
            stacked = list(w.basis_vectors()) + reps
            if stacked:
                assert rank(F2Matrix.from_rows(stacked, cols=n)) == len(stacked)


class TestLeftInverse:
    def test_identity_block(self):
        assert left_inverse_block([F2Matrix.identity(3)]) == F2Matrix.identity(3)

    def test_upper_triangular_self_inverse(self):
        m = F2Matrix([[1, 1], [0, 1]])
        assert left_inverse_block([m]) == m

    def test_steane_dual_basis_assembly(self):
        # (L_Z | generators of im d2 | complement of ker d1): the first row of
        # the inverse is an X-logical representative. (Using ker(d1)-perp
        # generators as the third block is singular here because the checks
        # are self-dual; the complement is the invertible assembly.)
        from chainsurg.csscode import quotient_basis_units

        hx = F2Matrix(STEANE_HX)
        d2 = hx.T  # self-dual code: hz = hx
        lz = F2Matrix([[0, 0, 0, 1, 0, 1, 1]]).T  # a Z-logical representative
        complement = quotient_basis_units(7, kernel_basis(hx))
        assembled = hstack([lz, d2, complement])
        inv = left_inverse_block([lz, d2, complement])
        assert inv @ assembled == F2Matrix.identity(7)
        x = inv.row(0)
        assert not (d2.T @ x).any()  # commutes with the Z checks
        assert int(x @ lz.col(0)) % 2 == 1

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrix):
            left_inverse_block([F2Matrix([[1, 1], [1, 1]])])

    def test_not_square_rejected(self):
        with pytest.raises(DimensionMismatch):
            left_inverse_block([F2Matrix([[1, 0]])])


class TestTextFormat:
    def test_round_trip_bit_exact(self):
        r = np.random.RandomState(5)
        for _ in range(20):
            m = F2Matrix(r.randint(0, 2, size=(r.randint(0, 5), r.randint(0, 6))))
            assert parse_matrix(format_matrix(m)) == m

    def test_header(self):
        assert format_matrix(F2Matrix([[1, 0], [0, 1]])).splitlines()[0] == "2 2"

    def test_sections(self):
        text = "orientation: Z\nv1:\n1 2\n01\nv0:\n0 2\n"
        sections = split_sections(text)
        assert sections["orientation"] == "Z"
        assert parse_matrix(sections["v1"]).rows == 1


@settings(max_examples=120, deadline=None)
@given(
    st.integers(1, 5),
    st.integers(1, 6),
    st.integers(0, 2**30 - 1),
)
def test_rank_nullity_hypothesis(rows, cols, seed):
    r = np.random.RandomState(seed)
    m = F2Matrix(r.randint(0, 2, size=(rows, cols)))
    res = rref(m)
    assert kernel_basis(m).dim == cols - res.rank
    assert res.transform @ m == res.reduced


@settings(max_examples=120, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**30 - 1))
def test_coset_reduce_canonical_hypothesis(n, seed):
    r = np.random.RandomState(seed)
    w = Subspace.from_vectors(r.randint(0, 2, size=(r.randint(1, n), n)), n)
    v = r.randint(0, 2, size=n).astype(np.uint8)
    shift = np.zeros(n, dtype=np.uint8)
    for b in w.basis_vectors():
        if r.randint(0, 2):
            shift ^= b
    assert np.array_equal(coset_reduce(v, w), coset_reduce(v ^ shift, w))

"""Chain complex, homology, and chain-map tests."""
import itertools

import numpy as np
import pytest

from chainsurg import catalog
from chainsurg.chaincomplex import (
    ChainComplex,
    cohomology,
    direct_sum,
    homology,
    identity_chain_map,
    induced_on_homology,
    validate,
    validate_chain_map,
)
from chainsurg.errors import NonZeroComposition, SquareDoesNotCommute
from chainsurg.f2linalg import F2Matrix


class TestValidate:
    def test_steane_complex_valid(self, steane):
        c = validate(steane.complex.d2, steane.complex.d1)
        assert c.dim1 == 7

    def test_nonzero_composition(self):
        with pytest.raises(NonZeroComposition):
            validate(F2Matrix([[1]]), F2Matrix([[1]]))

    def test_zero_composes_with_anything(self):
        c = validate(F2Matrix.zeros(3, 2), F2Matrix([[1, 0, 1], [0, 1, 1]]))
        assert c.dim2 == 2

    def test_file_round_trip(self, steane):
        c = steane.complex
        again = ChainComplex.from_text(c.to_text())
        assert again == c


class TestHomology:
    def test_steane_h1(self, steane):
        assert homology(steane.complex, 1).dim == 1

    def test_toric2_h1_vs_enumeration(self, toric2):
        h = homology(toric2.complex, 1)
        assert h.dim == 2
        # exhaustive check over all 2^8 vectors: count cycles and boundaries
        d1, d2 = toric2.complex.d1, toric2.complex.d2
        cycles = [
            v
            for v in itertools.product([0, 1], repeat=8)
            if not (d1 @ np.array(v, dtype=np.uint8)).any()
        ]
        boundaries = set()
        for mask in range(1 << d2.cols):
            v = np.zeros(8, dtype=np.uint8)
            for i in range(d2.cols):
                if (mask >> i) & 1:
                    v ^= d2.col(i)
            boundaries.add(tuple(v))
        assert len(cycles) // len(boundaries) == 1 << h.dim

    def test_single_free_qubit(self):
        c = validate(F2Matrix.zeros(1, 0), F2Matrix.zeros(0, 1))
        assert homology(c, 1).dim == 1

    def test_representatives_are_nontrivial_cycles(self, surface3):
        h = homology(surface3.complex, 1)
        for r in h.representatives:
            assert h.kernel.contains(r)
            assert not h.image.contains(r)


class TestCohomology:
    def test_steane_h1_cohomology(self, steane):
        assert cohomology(steane.complex, 1).dim == 1

    def test_toric2(self, toric2):
        assert cohomology(toric2.complex, 1).dim == 2

    def test_no_checks(self):
        c = validate(F2Matrix.zeros(4, 0), F2Matrix.zeros(0, 4))
        assert cohomology(c, 1).dim == 4

    def test_h1_equals_cohomology_dim_on_catalog(self):
        for name in catalog.catalog_names():
            code = catalog.catalog_code(name)
            assert homology(code.complex, 1).dim == cohomology(code.complex, 1).dim


class TestChainMap:
    def test_identity_valid(self, steane):
        identity_chain_map(steane.complex)

    def test_counterexample_map_valid(self):
        src = validate(F2Matrix([[1], [1]]), F2Matrix([[1, 1]]))
        tgt = validate(F2Matrix.identity(2), F2Matrix.zeros(0, 2))
        f = validate_chain_map(
            src, tgt, F2Matrix([[1], [1]]), F2Matrix.identity(2), F2Matrix.zeros(0, 1)
        )
        assert f.f2.rows == 2

    def test_square_does_not_commute(self):
        src = validate(F2Matrix([[1], [1]]), F2Matrix([[1, 1]]))
        with pytest.raises(SquareDoesNotCommute) as err:
            validate_chain_map(
                src, src, F2Matrix.identity(1), F2Matrix.zeros(2, 2), F2Matrix.identity(1)
            )
        assert err.value.degree == 2

    def test_induced_identity(self, steane):
        h = homology(steane.complex, 1)
        mat = induced_on_homology(identity_chain_map(steane.complex), 1, h, h)
        assert mat == F2Matrix.identity(1)

    def test_functoriality_on_composed_merges(self, surface3):
        # two successive quotient merges of a patch give composable chain maps
        from chainsurg.f2linalg import Subspace
        from chainsurg.surgery import quotient_merge, validate_subcode

        cplx = surface3.complex
        r = np.random.RandomState(2)
        cases = 0
        while cases < 10:
            v1_vec = r.randint(0, 2, size=cplx.dim1).astype(np.uint8)
            if not v1_vec.any():
                continue
            v1 = Subspace.from_vectors([v1_vec], cplx.dim1)
            v0 = Subspace.from_vectors([cplx.d1 @ v1_vec], cplx.dim0)
            sub = validate_subcode(cplx, Subspace.zero(cplx.dim2), v1, v0, "Z")
            m1 = quotient_merge(cplx, sub)
            q = m1.quotient
            w_vec = r.randint(0, 2, size=q.dim1).astype(np.uint8)
            if not w_vec.any():
                continue
            w1 = Subspace.from_vectors([w_vec], q.dim1)
            w0 = Subspace.from_vectors([q.d1 @ w_vec], q.dim0)
            sub2 = validate_subcode(q, Subspace.zero(q.dim2), w1, w0, "Z")
            m2 = quotient_merge(q, sub2)
            composed = m2.p.compose(m1.p)
            h_src = homology(cplx, 1)
            h_mid = homology(q, 1)
            h_tgt = homology(m2.quotient, 1)
            lhs = induced_on_homology(composed, 1, h_src, h_tgt)
            rhs = induced_on_homology(m2.p, 1, h_mid, h_tgt) @ induced_on_homology(
                m1.p, 1, h_src, h_mid
            )
            assert lhs == rhs
            cases += 1


class TestDirectSum:
    def test_dims_add(self, steane, toric2):
        s = direct_sum(steane.complex, toric2.complex)
        assert s.dim1 == steane.complex.dim1 + toric2.complex.dim1

    def test_sum_with_free_qubit(self, steane):
        free = validate(F2Matrix.zeros(1, 0), F2Matrix.zeros(0, 1))
        s = direct_sum(steane.complex, free)
        assert s.dim1 == 8
        assert homology(s, 1).dim == 2

    def test_homology_additive(self, surface2, toric2):
        s = direct_sum(surface2.complex, toric2.complex)
        assert homology(s, 1).dim == homology(surface2.complex, 1).dim + homology(
            toric2.complex, 1
        ).dim

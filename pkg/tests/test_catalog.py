"""Catalog constructors and worked-example records."""
import numpy as np
import pytest

from chainsurg import catalog
from chainsurg.chaincomplex import cohomology, homology
from chainsurg.csscode import distance_bruteforce
from chainsurg.errors import UnknownExample
from chainsurg.surgery import quotient_merge


class TestParameters:
    def test_steane(self):
        code = catalog.steane()
        assert (code.n, code.k, distance_bruteforce(code)) == (7, 1, 3)

    def test_reed_muller_15(self):
        code = catalog.reed_muller_15()
        assert (code.n, code.k, distance_bruteforce(code)) == (15, 1, 3)

    def test_trivial_qubit(self):
        code = catalog.trivial_qubit()
        assert (code.n, code.k, code.d) == (1, 1, 1)

    def test_no_check(self):
        code = catalog.no_check(3)
        assert (code.n, code.k, distance_bruteforce(code)) == (3, 3, 1)

    @pytest.mark.parametrize("d,expected_n", [(1, 1), (2, 5), (3, 13), (4, 25)])
    def test_surface_patch_qubit_count(self, d, expected_n):
        code = catalog.surface_patch(d, d)
        assert code.n == d * d + (d - 1) * (d - 1) == expected_n
        assert code.k == 1

    @pytest.mark.parametrize("d", [2, 3])
    def test_surface_patch_distance(self, d):
        assert distance_bruteforce(catalog.surface_patch(d, d)) == d

    def test_surface_patch_d1(self):
        code = catalog.surface_patch(1, 1)
        assert (code.n, code.k) == (1, 1)

    @pytest.mark.parametrize("L,d", [(2, 2), (3, 3)])
    def test_toric(self, L, d):
        code = catalog.toric(L)
        assert (code.n, code.k) == (2 * L * L, 2)
        assert distance_bruteforce(code) == d

    def test_homology_equals_cohomology_dims(self):
        for name in catalog.catalog_names():
            code = catalog.catalog_code(name)
            for deg in (0, 1, 2):
                assert homology(code.complex, deg).dim == cohomology(code.complex, deg).dim


class TestExamples:
    def test_all_names_build(self):
        for name in catalog.example_names():
            ex = catalog.worked_example(name)
            assert ex.name == name

    def test_unknown_name(self):
        with pytest.raises(UnknownExample):
            catalog.worked_example("nope")

    def test_wrong_merge_expectation(self):
        ex = catalog.worked_example("wrong_merge")
        assert ex.expect == {"valid": False, "closure_degree": 1}
        assert ex.subcode is None

    def test_partial_boundary_expectation(self):
        ex = catalog.worked_example("partial_boundary")
        assert ex.expect["created_count"] == 1

    def test_virtual_merge_expectation(self):
        ex = catalog.worked_example("virtual_merge")
        assert ex.expect["quotient_dims"] == [1, 2, 0]

    def test_code_switch_merged_params(self):
        ex = catalog.worked_example("code_switch")
        m = quotient_merge(ex.parent, ex.subcode)
        merged = m.merged_complex()
        from chainsurg.csscode import from_parity_checks

        code = from_parity_checks(merged.d1, merged.d2.T)
        assert (code.n, code.k) == (15, 1)
        assert distance_bruteforce(code) == 3

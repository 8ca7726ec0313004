"""Morita scenario checks, the eigenvalue law, and the assembled report."""

import itertools

import numpy as np
import pytest

from partspec import finring as fr
from partspec.budget import Budget
from partspec.commlattice import enumerate_commutative_subrings
from partspec.obstruction import (
    InapplicableError,
    build_report,
    derive_contradiction,
    eigenvalue_check,
    make_morita_scenario,
    power_ring,
    render_report_text,
    verify_corner_commutation,
    verify_fixed_point_free,
    _mat_mul,
)
from partspec.partial import PartialMorphism, standard_structure
from partspec.primespec import enumerate_partial_morphisms


FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1)]


@pytest.fixture(scope="module")
def scenario_grid():
    grid = {}
    for pk in FIELDS:
        k = fr.make_gf(*pk)
        for n in (2, 3, 4):
            grid[(pk, n)] = make_morita_scenario(k, n)
    return grid


class TestMoritaScenario:
    @pytest.mark.parametrize("pk", FIELDS)
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_grid_corner_and_fixed_point(self, pk, n, scenario_grid):
        s = scenario_grid[(pk, n)]
        assert verify_corner_commutation(s)
        assert verify_fixed_point_free(s)  # also asserts a single n-cycle

    @pytest.mark.parametrize("pk", FIELDS)
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_grid_contradiction_chain(self, pk, n, scenario_grid):
        entry = derive_contradiction(scenario_grid[(pk, n)])
        assert entry.verified
        assert "fixed" in entry.details["deduction"]

    def test_n1_inapplicable(self, f2):
        s = make_morita_scenario(f2, 1)
        with pytest.raises(InapplicableError):
            verify_fixed_point_free(s)
        entry = derive_contradiction(s)
        assert not entry.verified
        assert entry.details["status"] == "inapplicable"

    def test_all_fixed_point_free_perms_of_s3(self, f3):
        count = 0
        for perm in itertools.permutations(range(3)):
            if all(perm[i] != i for i in range(3)):
                s = make_morita_scenario(f3, 3, perm=perm)
                assert verify_corner_commutation(s)
                count += 1
        assert count == 2  # the two 3-cycles

    def test_non_permutation_conjugator_can_fail_corner(self, f2):
        # replace P by an invertible non-permutation matrix; the corner
        # identity then fails with a witness
        import dataclasses

        s = make_morita_scenario(f2, 2)
        Q = np.array([[1, 1], [0, 1]], dtype=np.int64)  # invertible, not a permutation
        Q_inv = Q.copy()  # self-inverse over F2
        assert np.array_equal(_mat_mul(f2, Q, Q_inv), np.eye(2, dtype=np.int64))
        tampered = dataclasses.replace(s, P=Q, P_inv=Q_inv)
        verdict = verify_corner_commutation(tampered)
        assert not verdict
        assert verdict.witness is not None

    def test_power_ring_indexing(self, f3):
        from partspec.obstruction import power_digits, power_index

        kn = power_ring(f3, 3)
        assert kn.size == 27
        for idx in range(27):
            assert power_index(f3, power_digits(f3, 3, idx)) == idx


class TestEigenvalueCheck:
    def test_t2f2_morphisms_pass(self, t2f2, f2):
        lat = enumerate_commutative_subrings(t2f2)
        morphisms = enumerate_partial_morphisms(t2f2, f2, lat)
        assert morphisms
        for m in morphisms:
            assert eigenvalue_check(m)

    def test_t2f3_morphisms_pass(self, f3):
        t2f3 = fr.make_triangular_ring(f3, 2)
        lat = enumerate_commutative_subrings(t2f3)
        morphisms = enumerate_partial_morphisms(t2f3, f3, lat)
        assert len(morphisms) == 8
        for m in morphisms:
            assert eigenvalue_check(m)

    def test_hom_from_commutative_ring_passes(self, f2, f2xf2):
        from partspec.partial import hom_as_partial_morphism

        proj = fr.RingMap(f2xf2, f2, [fr.product_pair(f2xf2, i)[0] for i in range(4)])
        assert eigenvalue_check(hom_as_partial_morphism(proj))

    def test_corrupted_table_rejected(self, t2f2, f2):
        table = [int(fr.matrix_entries(t2f2, i)[0, 0]) for i in range(8)]
        table[t2f2.one] = f2.zero  # breaks f(1) = 1
        corrupted = PartialMorphism(standard_structure(t2f2), f2, table)
        with pytest.raises(ValueError):
            eigenvalue_check(corrupted)

    def test_diagonal_membership_enforced_for_triangular_sources(self, t2f2, f2):
        lat = enumerate_commutative_subrings(t2f2)
        for m in enumerate_partial_morphisms(t2f2, f2, lat):
            for r in range(t2f2.size):
                diag = np.diagonal(fr.matrix_entries(t2f2, r))
                assert m(r) in diag


class TestReport:
    def test_full_report_verdict(self):
        report = build_report()
        assert report.verdict is True
        ids = {e.claim_id for e in report.entries}
        assert "ks.peres.unsat" in ids
        assert "partspec.M2(GF(2)).count" in ids
        assert any(i.startswith("morita.chain.GF(5)") for i in ids)

    def test_budget_truncation_withholds_verdict(self):
        report = build_report(budget=Budget(max_nodes=2))
        assert report.verdict is None
        assert any(
            e.details.get("status") == "incomplete" for e in report.entries
        )

    def test_report_serializes_and_renders(self):
        report = build_report(morita_fields=[(2, 1)], morita_ns=[2])
        payload = report.as_dict()
        assert payload["verdict"] is True
        text = render_report_text(payload)
        assert "ks.peres.unsat" in text
        import json

        json.dumps(payload)  # must be JSON-serializable

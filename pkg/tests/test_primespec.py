"""Spec, partSpec, their functorial actions, and morphism enumeration."""

import numpy as np
import pytest

from partspec import finring as fr
from partspec.budget import Budget, BudgetExhaustedError
from partspec.commlattice import enumerate_commutative_subrings
from partspec.partial import is_prime_partial_ideal, partial_ideal, standard_structure
from partspec.primespec import (
    enumerate_ideals,
    enumerate_partial_morphisms,
    part_spec,
    part_spec_map,
    spec,
    spec_map,
)

import oracles


def f2eps(m2f2):
    """F2[eps] realized as the nil subring of M2(F2)."""
    nil = [x for x in fr.classify_elements(m2f2).nilpotents if x != m2f2.zero]
    table, _ = fr.subring_table(fr.closure(m2f2, [nil[0]]), label="F2[eps]")
    return table


class TestIdeals:
    def test_zmod12_has_six_ideals(self):
        assert len(enumerate_ideals(fr.make_zmod(12))) == 6

    def test_fields_have_two_ideals(self, f4, f9):
        for field in (f4, f9):
            assert len(enumerate_ideals(field)) == 2

    def test_dual_numbers_have_three_ideals(self, m2f2):
        ring = f2eps(m2f2)
        assert len(enumerate_ideals(ring)) == 3

    def test_rejects_noncommutative(self, m2f2):
        with pytest.raises(ValueError):
            enumerate_ideals(m2f2)

    def test_ideal_lattice_of_product(self, f2xf2):
        assert len(enumerate_ideals(f2xf2)) == 4


class TestSpec:
    def test_zmod12(self):
        result = spec(fr.make_zmod(12))
        assert len(result) == 2
        assert sorted(fr.mask_indices(m) for m in result.primes) == [
            [0, 2, 4, 6, 8, 10],
            [0, 3, 6, 9],
        ]

    def test_split_product(self, f2xf2):
        assert len(spec(f2xf2)) == 2

    def test_field_spec_is_zero_ideal(self, f4):
        result = spec(f4)
        assert result.primes == (1 << f4.zero,)

    def test_primes_pass_prime_partial_ideal_checker(self, f2xf2):
        s = standard_structure(f2xf2)
        for mask in spec(f2xf2).primes:
            assert is_prime_partial_ideal(partial_ideal(s, mask))


class TestSpecMap:
    def test_identity(self, f2xf2):
        assert spec_map(fr.identity_map(f2xf2)) == [0, 1]

    def test_diagonal_pulls_both_primes_to_zero(self, f2, f2xf2):
        diag = fr.RingMap(
            f2, f2xf2, [f2xf2.zero, f2xf2.one]
        )
        assert fr.is_ring_hom(diag)
        assert spec_map(diag) == [0, 0]

    def test_projection_pulls_prime_to_factor_kernel(self, f2, f2xf2):
        proj = fr.RingMap(f2xf2, f2, [fr.product_pair(f2xf2, i)[0] for i in range(4)])
        mapping = spec_map(proj)
        assert len(mapping) == 1
        dom_spec = spec(f2xf2)
        pulled = dom_spec.primes[mapping[0]]
        assert fr.mask_indices(pulled) == [
            i for i in range(4) if fr.product_pair(f2xf2, i)[0] == 0
        ]

    def test_contravariant_on_composition(self, f2, f2xf2):
        diag = fr.RingMap(f2, f2xf2, [f2xf2.zero, f2xf2.one])
        proj = fr.RingMap(f2xf2, f2, [fr.product_pair(f2xf2, i)[0] for i in range(4)])
        comp = fr.compose_maps(proj, diag)  # identity on F2
        m_comp = spec_map(comp)
        m_diag = spec_map(diag)
        m_proj = spec_map(proj)
        assert m_comp == [m_diag[m_proj[i]] for i in range(len(m_proj))]


class TestPartSpec:
    def test_fields_are_singletons(self, f2, f4, f9):
        for field in (f2, f4, fr.make_gf(2, 3), f9, fr.make_gf(2, 4)):
            lat = enumerate_commutative_subrings(field)
            result = part_spec(field, lat)
            assert len(result) == 1
            assert result.ideals[0].mask == 1 << field.zero

    def test_restriction_to_commutative_equals_spec(self, f4, f9, f2xf2, m2f2):
        rings = [
            fr.make_zmod(2),
            fr.make_zmod(4),
            fr.make_zmod(12),
            f4,
            f9,
            f2xf2,
            f2eps(m2f2),
        ]
        for ring in rings:
            lat = enumerate_commutative_subrings(ring)
            result = part_spec(ring, lat)
            assert set(result.masks()) == set(spec(ring).primes)

    def test_m2f2_has_eight_points(self, m2f2):
        lat = enumerate_commutative_subrings(m2f2)
        result = part_spec(m2f2, lat)
        assert len(result) == 8
        assert result.stats.complete

    def test_m2f2_matches_exhaustive_subset_filter(self, m2f2):
        lat = enumerate_commutative_subrings(m2f2)
        result = part_spec(m2f2, lat)
        assert sorted(result.masks()) == oracles.all_prime_partial_ideal_masks(m2f2)

    def test_t2f2_matches_exhaustive_subset_filter(self, t2f2):
        lat = enumerate_commutative_subrings(t2f2)
        result = part_spec(t2f2, lat)
        assert sorted(result.masks()) == oracles.all_prime_partial_ideal_masks(t2f2)

    def test_m2f2_count_is_two_to_the_split_count(self, m2f2):
        # all pairwise intersections of maximal subrings are the scalars,
        # so the family count is the product of the per-subring prime counts
        lat = enumerate_commutative_subrings(m2f2)
        scalars = fr.closure(m2f2, []).members
        for a in lat.maximal:
            for b in lat.maximal:
                if a != b:
                    inter = lat.subrings[a].members & lat.subrings[b].members
                    assert inter == scalars
        counts = []
        for i in lat.maximal:
            table, _ = fr.subring_table(lat.subrings[i])
            counts.append(len(spec(table)))
        expect = 1
        for c in counts:
            expect *= c
        assert len(part_spec(m2f2, lat)) == expect == 8

    def test_m2f3_count(self, m2f3):
        lat = enumerate_commutative_subrings(m2f3)
        result = part_spec(m2f3, lat)
        split = sum(
            1
            for i in lat.maximal
            if len(spec(fr.subring_table(lat.subrings[i])[0])) == 2
        )
        assert split == 6
        assert len(result) == 2**split == 64

    def test_every_glued_ideal_is_verified_prime(self, t2f2):
        lat = enumerate_commutative_subrings(t2f2)
        result = part_spec(t2f2, lat)
        s = standard_structure(t2f2)
        for ideal in result.ideals:
            assert is_prime_partial_ideal(partial_ideal(s, ideal.mask))

    def test_budget_exhaustion_raises(self, m2f3):
        lat = enumerate_commutative_subrings(m2f3)
        with pytest.raises(BudgetExhaustedError):
            part_spec(m2f3, lat, budget=Budget(max_nodes=3))


class TestPartSpecMap:
    def test_identity_on_m2f2(self, m2f2):
        lat = enumerate_commutative_subrings(m2f2)
        result = part_spec(m2f2, lat)
        mapping = part_spec_map(fr.identity_map(m2f2), result, result)
        assert mapping == list(range(8))

    def test_diagonal_inclusion_chain(self, f2, f2xf2, m2f2):
        e11 = fr.matrix_index(m2f2, [[1, 0], [0, 0]])
        e22 = fr.matrix_index(m2f2, [[0, 0], [0, 1]])
        incl2 = fr.RingMap(
            f2xf2,
            m2f2,
            [
                int(m2f2.add[m2f2.mul[_scal(m2f2, a)[0], e11], m2f2.mul[_scal(m2f2, b)[0], e22]])
                for (a, b) in (fr.product_pair(f2xf2, i) for i in range(4))
            ],
        )
        assert fr.is_ring_hom(incl2)
        incl1 = fr.RingMap(f2, f2xf2, [f2xf2.zero, f2xf2.one])

        res_f2 = part_spec(f2, enumerate_commutative_subrings(f2))
        res_p = part_spec(f2xf2, enumerate_commutative_subrings(f2xf2))
        res_m = part_spec(m2f2, enumerate_commutative_subrings(m2f2))

        m2_to_p = part_spec_map(incl2, res_p, res_m)
        assert len(m2_to_p) == 8 and set(m2_to_p) <= {0, 1}
        p_to_f2 = part_spec_map(incl1, res_f2, res_p)
        composed = part_spec_map(fr.compose_maps(incl2, incl1), res_f2, res_m)
        assert composed == [p_to_f2[m2_to_p[i]] for i in range(8)]


def _scal(m2f2, bit):
    """0 or 1 as a scalar matrix index."""
    return (m2f2.one if bit else m2f2.zero,)


class TestPartialMorphisms:
    def test_m2f2_to_f2_has_none(self, m2f2, f2):
        lat = enumerate_commutative_subrings(m2f2)
        assert enumerate_partial_morphisms(m2f2, f2, lat) == []

    def test_regression_pair_counts(self, m2f2, f2):
        # no morphisms to F2, yet eight prime partial ideals
        lat = enumerate_commutative_subrings(m2f2)
        assert len(enumerate_partial_morphisms(m2f2, f2, lat)) == 0
        assert len(part_spec(m2f2, lat)) == 8

    def test_commutative_ring_counts_equal_hom_counts(self, f2, f4, f2xf2):
        for ring in (f4, f2xf2, fr.make_zmod(4)):
            lat = enumerate_commutative_subrings(ring)
            morphisms = enumerate_partial_morphisms(ring, f2, lat)
            homs = oracles.find_ring_homs(ring, f2)
            assert len(morphisms) == len(homs)
            assert sorted(tuple(int(v) for v in m.table) for m in morphisms) == sorted(
                homs
            )

    def test_t2f2_contains_corner_maps(self, t2f2, f2):
        lat = enumerate_commutative_subrings(t2f2)
        morphisms = enumerate_partial_morphisms(t2f2, f2, lat)
        tables = {tuple(int(v) for v in m.table) for m in morphisms}
        top_left = tuple(
            int(fr.matrix_entries(t2f2, i)[0, 0]) for i in range(t2f2.size)
        )
        bottom_right = tuple(
            int(fr.matrix_entries(t2f2, i)[1, 1]) for i in range(t2f2.size)
        )
        assert top_left in tables and bottom_right in tables
        assert len(morphisms) == 4

    def test_t2f2_zero_preimages_are_partspec_points(self, t2f2, f2):
        lat = enumerate_commutative_subrings(t2f2)
        morphisms = enumerate_partial_morphisms(t2f2, f2, lat)
        masks = set(part_spec(t2f2, lat).masks())
        for m in morphisms:
            pre = sum(1 << i for i in range(t2f2.size) if m(i) == f2.zero)
            assert pre in masks

    def test_split_bijection_on_t2f2(self, t2f2, f2):
        # all maximal subrings split over F2, so morphisms biject with points
        lat = enumerate_commutative_subrings(t2f2)
        morphisms = enumerate_partial_morphisms(t2f2, f2, lat)
        points = part_spec(t2f2, lat)
        pres = {
            sum(1 << i for i in range(t2f2.size) if m(i) == f2.zero)
            for m in morphisms
        }
        assert pres == set(points.masks())
        assert len(morphisms) == len(points)

    def test_rejects_non_field_target(self, t2f2):
        z4 = fr.make_zmod(4)
        lat = enumerate_commutative_subrings(t2f2)
        with pytest.raises(ValueError):
            enumerate_partial_morphisms(t2f2, z4, lat)

"""Partial structures, partial ideals, morphisms, gluing and idempotents."""

import numpy as np
import pytest

from partspec import finring as fr
from partspec.commlattice import enumerate_commutative_subrings
from partspec.partial import (
    CompatibilityError,
    PartialMorphism,
    PartialStructure,
    check_axioms,
    glue_family,
    hom_as_partial_morphism,
    is_partial_ideal,
    is_partial_morphism,
    is_prime_partial_ideal,
    partial_ideal,
    partition_idempotents,
    preimage,
    restrict_family,
    standard_structure,
)

import oracles


def corner_map(t2f2, f2):
    return fr.RingMap(
        t2f2, f2, [int(fr.matrix_entries(t2f2, i)[0, 0]) for i in range(t2f2.size)]
    )


class TestStandardStructure:
    def test_total_on_commutative_rings(self, f9, f2xf2):
        for ring in (f9, f2xf2, fr.make_zmod(12)):
            assert standard_structure(ring).comm.all()

    def test_off_diagonal_units_not_commeasurable(self, m2f2):
        s = standard_structure(m2f2)
        e12 = fr.matrix_index(m2f2, [[0, 1], [0, 0]])
        e21 = fr.matrix_index(m2f2, [[0, 0], [1, 0]])
        assert not s.comm[e12, e21]
        # E12*E21 = E11 differs from E21*E12 = E22
        assert m2f2.mul[e12, e21] != m2f2.mul[e21, e12]

    def test_zero_one_self_always_commeasurable(self, m2f2, t2f2):
        for ring in (m2f2, t2f2):
            s = standard_structure(ring)
            assert s.comm[:, ring.zero].all()
            assert s.comm[:, ring.one].all()
            assert np.diagonal(s.comm).all()


class TestAxiomChecker:
    def test_standard_structures_pass(self, m2f2, m2f3, t2f2):
        for ring in (m2f2, m2f3, t2f2, fr.make_zmod(12)):
            report = check_axioms(standard_structure(ring))
            assert report.ok, report.failures()

    def test_broken_symmetry_reported_with_witness(self, m2f2):
        comm = standard_structure(m2f2).comm.copy()
        e12 = fr.matrix_index(m2f2, [[0, 1], [0, 0]])
        e11 = fr.matrix_index(m2f2, [[1, 0], [0, 0]])
        comm[e11, e12] = True  # one-sided edit
        report = check_axioms(PartialStructure(m2f2, comm))
        failed = {c.axiom for c in report.failures()}
        assert "symmetric" in failed
        witness = [c.witness for c in report.failures() if c.axiom == "symmetric"]
        assert witness[0] is not None

    def test_removing_one_commeasurability_fails_axiom_1(self, m2f2):
        comm = standard_structure(m2f2).comm.copy()
        comm[5, m2f2.one] = False
        comm[m2f2.one, 5] = False
        report = check_axioms(PartialStructure(m2f2, comm))
        assert any("(1)" in c.axiom for c in report.failures())


class TestPartialIdeals:
    def test_nilpotent_set_is_partial_ideal(self, m2f2, m2f3, t2f2):
        for ring in (m2f2, m2f3, t2f2):
            s = standard_structure(ring)
            nil = fr.classify_elements(ring).nilpotents
            assert is_partial_ideal(partial_ideal(s, nil))

    def test_zero_is_partial_ideal(self, m2f2):
        s = standard_structure(m2f2)
        assert is_partial_ideal(partial_ideal(s, [m2f2.zero]))

    def test_nonunits_of_split_ring_fail(self, f2xf2):
        s = standard_structure(f2xf2)
        units = set(fr.classify_elements(f2xf2).units)
        nonunits = [i for i in range(4) if i not in units]
        verdict = is_partial_ideal(partial_ideal(s, nonunits))
        assert not verdict
        assert verdict.witness is not None

    def test_empty_set_is_not_a_partial_ideal(self, m2f2):
        # zero membership keeps the pairwise and per-subring readings equal
        assert not is_partial_ideal(partial_ideal(standard_structure(m2f2), []))

    def test_matches_subset_oracle_on_small_rings(self, m2f2, t2f2, f2xf2):
        for ring in (t2f2, f2xf2, m2f2, fr.make_zmod(12)):
            s = standard_structure(ring)
            expected = set(oracles.all_partial_ideal_masks(ring))
            got = {
                mask
                for mask in range(1 << ring.size)
                if is_partial_ideal(partial_ideal(s, mask))
            }
            assert got == expected

    def test_improper_law_on_enumerated_ideals(self, m2f2, t2f2):
        # a partial ideal contains 1 iff it is everything
        for ring in (m2f2, t2f2):
            full = (1 << ring.size) - 1
            for mask in oracles.all_partial_ideal_masks(ring):
                assert ((mask >> ring.one) & 1) == (mask == full)


class TestPrimePartialIdeals:
    def test_zero_prime_in_fields(self, f4, f9):
        for field in (f4, f9):
            s = standard_structure(field)
            assert is_prime_partial_ideal(partial_ideal(s, [field.zero]))

    def test_whole_ring_not_prime(self, f4):
        s = standard_structure(f4)
        assert not is_prime_partial_ideal(partial_ideal(s, range(4)))

    def test_two_torsion_prime_in_z4(self):
        z4 = fr.make_zmod(4)
        assert is_prime_partial_ideal(partial_ideal(standard_structure(z4), [0, 2]))

    def test_rejects_non_ideal_input(self, m2f2):
        # {0, 1} absorbs nothing: 1 is a member, so every element would
        # have to be
        s = standard_structure(m2f2)
        with pytest.raises(ValueError):
            is_prime_partial_ideal(partial_ideal(s, [m2f2.zero, m2f2.one]))

    def test_nilpotents_are_an_ideal_but_not_prime_in_m2f2(self, m2f2):
        # e(1-e) = 0 is nilpotent while neither idempotent factor is
        s = standard_structure(m2f2)
        nil = partial_ideal(s, fr.classify_elements(m2f2).nilpotents)
        assert is_partial_ideal(nil)
        verdict = is_prime_partial_ideal(nil)
        assert not verdict
        x, y = verdict.witness
        assert m2f2.mul[x, y] in set(fr.classify_elements(m2f2).nilpotents)

    def test_division_ring_law_exhaustive(self, f2, f4, f9):
        # fields up to 16 elements: subsets passing the ideal law are {0}, D
        for field in (f2, f4, fr.make_gf(2, 3), f9, fr.make_gf(2, 4)):
            masks = oracles.all_partial_ideal_masks(field)
            expected = [1 << field.zero, (1 << field.size) - 1]
            assert sorted(masks) == sorted(expected)

    def test_pairwise_equals_per_subring_definition(self, t2f2, f2xf2):
        for ring in (t2f2, f2xf2, fr.make_zmod(8)):
            s = standard_structure(ring)
            for mask in range(1 << ring.size):
                pairwise = False
                candidate = partial_ideal(s, mask)
                if is_partial_ideal(candidate):
                    pairwise = bool(is_prime_partial_ideal(candidate))
                assert pairwise == oracles.subring_prime_condition(ring, mask), mask

    def test_pairwise_equals_per_subring_on_m2f2_candidates(self, m2f2):
        s = standard_structure(m2f2)
        for mask in oracles.all_partial_ideal_masks(m2f2):
            pairwise = bool(is_prime_partial_ideal(partial_ideal(s, mask)))
            assert pairwise == oracles.subring_prime_condition(m2f2, mask)


class TestMorphisms:
    def test_ring_hom_is_partial_morphism(self, t2f2, f2):
        pm = hom_as_partial_morphism(corner_map(t2f2, f2))
        assert is_partial_morphism(pm)

    def test_corner_map_checked_exhaustively(self, t2f2, f2):
        pm = hom_as_partial_morphism(corner_map(t2f2, f2))
        verdict = is_partial_morphism(pm)
        assert verdict and verdict.witness is None

    def test_diagonal_product_map_rejected_with_commuting_witness(self, t2f2, f2):
        table = [
            int(f2.mul[fr.matrix_entries(t2f2, i)[0, 0], fr.matrix_entries(t2f2, i)[1, 1]])
            for i in range(8)
        ]
        res = is_partial_morphism(PartialMorphism(standard_structure(t2f2), f2, table))
        assert not res
        a, b = res.witness
        assert t2f2.mul[a, b] == t2f2.mul[b, a]

    def test_noncommutative_target_rejected(self, m2f2):
        with pytest.raises(ValueError):
            is_partial_morphism(
                PartialMorphism(standard_structure(m2f2), m2f2, list(range(16)))
            )


class TestPreimage:
    def test_corner_preimage_of_zero(self, t2f2, f2):
        f = corner_map(t2f2, f2)
        pulled = preimage(f, partial_ideal(standard_structure(f2), [0]))
        expected = {
            i for i in range(8) if fr.matrix_entries(t2f2, i)[0, 0] == 0
        }
        assert set(pulled.indices()) == expected
        assert is_prime_partial_ideal(pulled)

    def test_identity_preimage(self, m2f2):
        nil = fr.classify_elements(m2f2).nilpotents
        ideal = partial_ideal(standard_structure(m2f2), nil)
        pulled = preimage(fr.identity_map(m2f2), ideal)
        assert pulled.mask == ideal.mask

    def test_field_inclusion_pulls_primes_to_zero(self, m2f2, f2):
        # scalars F2 inside M2(F2); any prime partial ideal pulls back to {0}
        incl = fr.RingMap(f2, m2f2, [m2f2.zero, m2f2.one])
        assert fr.is_ring_hom(incl)
        # a prime partial ideal: nilpotents plus one idempotent per pair
        members = set(fr.classify_elements(m2f2).nilpotents)
        members |= set(partition_idempotents(m2f2).chosen)
        prime = partial_ideal(standard_structure(m2f2), members)
        assert is_prime_partial_ideal(prime)
        pulled = preimage(incl, prime)
        assert set(pulled.indices()) == {f2.zero}

    def test_preimage_requires_hom(self, m2f2, f2):
        table = []
        for i in range(16):
            m = fr.matrix_entries(m2f2, i)
            table.append(int(f2.add[m[0, 0], m[1, 1]]))
        trace = fr.RingMap(m2f2, f2, table)
        with pytest.raises(ValueError):
            preimage(trace, partial_ideal(standard_structure(f2), [0]))


def _all_valid_families(ring, lat):
    """Every compatible assignment of an ideal per maximal subring."""
    import itertools

    from partspec.partial import is_ideal_of_subring

    per_sub = {}
    for i in lat.maximal:
        sub_mask = lat.subrings[i].members
        choices = []
        elements = fr.mask_indices(sub_mask)
        for bits in range(1 << len(elements)):
            mask = 0
            for t, e in enumerate(elements):
                if (bits >> t) & 1:
                    mask |= 1 << e
            if is_ideal_of_subring(ring, sub_mask, mask):
                choices.append(mask)
        per_sub[i] = choices
    out = []
    keys = sorted(per_sub)
    for combo in itertools.product(*(per_sub[i] for i in keys)):
        assignment = dict(zip(keys, combo))
        ok = True
        for a in range(len(keys)):
            for b in range(a + 1, len(keys)):
                i, j = keys[a], keys[b]
                left = assignment[i] & lat.subrings[j].members
                right = lat.subrings[i].members & assignment[j]
                if left != right:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(assignment)
    return out


class TestGluing:
    def test_single_maximal_glues_to_itself(self, f9):
        lat = enumerate_commutative_subrings(f9)
        (top,) = lat.maximal
        glued = glue_family(lat, {top: 1 << f9.zero})
        assert set(glued.indices()) == {f9.zero}

    def test_nilradical_family_glues_to_nilpotents(self, m2f2):
        lat = enumerate_commutative_subrings(m2f2)
        nil = set(fr.classify_elements(m2f2).nilpotents)
        assignment = {}
        for i in lat.maximal:
            assignment[i] = sum(1 << x for x in lat.subrings[i].indices() if x in nil)
        glued = glue_family(lat, assignment)
        assert set(glued.indices()) == nil

    def test_incompatible_family_raises_with_pair(self, m2f2):
        lat = enumerate_commutative_subrings(m2f2)
        # assign the full subring on one maximal and zero elsewhere: the
        # full one contains 1, the others do not
        assignment = {i: 1 << m2f2.zero for i in lat.maximal}
        first = lat.maximal[0]
        assignment[first] = lat.subrings[first].members
        with pytest.raises(CompatibilityError) as err:
            glue_family(lat, assignment)
        assert err.value.element is not None

    def test_non_ideal_assignment_rejected(self, m2f2):
        lat = enumerate_commutative_subrings(m2f2)
        assignment = {i: 1 << m2f2.zero for i in lat.maximal}
        first = lat.maximal[0]
        non_zero_elt = [x for x in lat.subrings[first].indices() if x != m2f2.zero][0]
        assignment[first] = 1 << non_zero_elt
        with pytest.raises(ValueError):
            glue_family(lat, assignment)

    @pytest.mark.parametrize("ring_name", ["m2f2", "t2f2"])
    def test_roundtrip_both_ways_on_all_valid_data(self, ring_name, request):
        ring = request.getfixturevalue(ring_name)
        lat = enumerate_commutative_subrings(ring)
        families = _all_valid_families(ring, lat)
        assert families
        for assignment in families:
            glued = glue_family(lat, assignment)
            back = restrict_family(glued, lat)
            assert {i: back[i] for i in lat.maximal} == assignment
        # and the other direction, over all partial ideals
        s = standard_structure(ring)
        for mask in oracles.all_partial_ideal_masks(ring):
            ideal = partial_ideal(s, mask)
            restricted = restrict_family(ideal, lat)
            glued = glue_family(lat, {i: restricted[i] for i in lat.maximal})
            assert glued.mask == mask

    def test_restrict_family_values(self, m2f2, f4):
        lat = enumerate_commutative_subrings(m2f2)
        nil = fr.classify_elements(m2f2).nilpotents
        ideal = partial_ideal(standard_structure(m2f2), nil)
        restricted = restrict_family(ideal, lat)
        for i, sub in enumerate(lat.subrings):
            table, _ = fr.subring_table(sub)
            piece = restricted[i]
            if oracles.rings_isomorphic(table, f4):
                assert piece == 1 << m2f2.zero  # fields have no nonzero nilpotents
        zero_ideal = partial_ideal(standard_structure(m2f2), [m2f2.zero])
        assert all(
            v == 1 << m2f2.zero for v in restrict_family(zero_ideal, lat).values()
        )


class TestIdempotentPartition:
    def test_fields_have_empty_choice(self, f4, f9):
        for field in (f4, f9):
            assert partition_idempotents(field).chosen == ()

    def test_split_product(self, f2xf2):
        part = partition_idempotents(f2xf2)
        assert len(part.chosen) == 1

    def test_m2f2(self, m2f2):
        part = partition_idempotents(m2f2)
        assert len(part.chosen) == 3
        idem = set(fr.classify_elements(m2f2).idempotents)
        rebuilt = (
            set(part.trivial) | set(part.chosen) | set(part.complement.values())
        )
        assert rebuilt == idem
        assert not (set(part.chosen) & set(part.complement.values()))

    def test_m2f3_has_six_pairs_and_four_nil_classes(self, m2f3):
        part = partition_idempotents(m2f3)
        assert len(part.chosen) == 6
        assert part.nil_classes is not None and len(part.nil_classes) == 4

    def test_chosen_is_canonical_least_index(self, m2f2):
        part = partition_idempotents(m2f2)
        for e in part.chosen:
            assert e < part.complement[e]

"""Exact entropic vectors and the canonical enumeration."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import islice

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infoineq.core import LogLinValue, entropy_of
from infoineq.distributions import Distribution, enumerate_distributions
from infoineq.shannon import elemental

F = Fraction


class TestEntropicVector:
    def test_fair_bit(self, fair_bit):
        assert fair_bit.entropic_vector().value(1).as_rational() == 1

    def test_three_point_pmf(self):
        d = Distribution.make((3,), {(0,): F(1, 2), (1,): F(1, 4), (2,): F(1, 4)})
        # oracle: expand -sum p*log2 p term by term over the dyadic atoms
        oracle = F(1, 2) * 1 + F(1, 4) * 2 + F(1, 4) * 2
        assert d.entropic_vector().value(1).as_rational() == oracle == F(3, 2)

    def test_xor_triple_full_vector(self, xor_triple):
        h = xor_triple.entropic_vector()
        expected = {1: 1, 2: 1, 4: 1, 3: 2, 5: 2, 6: 2, 7: 2}
        for mask, value in expected.items():
            assert h.value(mask).as_rational() == value
        assert h.value(0).is_zero()

    def test_zero_probability_atoms_ignored(self):
        d = Distribution.make((2,), {(0,): F(1), (1,): F(0)})
        assert d.entropic_vector().value(1).is_zero()


class TestMarginal:
    def test_xor_pair_marginal_uniform(self, xor_triple):
        m = xor_triple.marginal(3)
        assert sorted(m.pmf) == [((0, 0), F(1, 4)), ((0, 1), F(1, 4)),
                                 ((1, 0), F(1, 4)), ((1, 1), F(1, 4))]

    def test_full_marginal_is_identity(self, xor_triple):
        assert xor_triple.marginal(7) == xor_triple

    def test_empty_marginal_is_point_mass(self, xor_triple):
        m = xor_triple.marginal(0)
        assert m.pmf == (((0,), F(1)),)


class TestValidation:
    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(ValueError, match="sum"):
            Distribution.make((2,), {(0,): F(1, 2)})

    def test_negative_probability_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            Distribution.make((2,), {(0,): F(3, 2), (1,): F(-1, 2)})

    def test_outcome_outside_domain_rejected(self):
        with pytest.raises(ValueError, match="outside"):
            Distribution.make((2,), {(5,): F(1)})


class TestEnumeration:
    def test_single_variable_budget_two(self):
        stream = list(enumerate_distributions(1, 2, 2))
        as_sets = [(d.domains, tuple(d.pmf)) for d in stream]
        assert ((1,), (((0,), F(1)),)) in as_sets
        assert ((2,), (((0,), F(1, 2)), ((1,), F(1, 2)))) in as_sets
        assert ((2,), (((0,), F(1)),)) in as_sets
        assert ((2,), (((1,), F(1)),)) in as_sets
        assert len(stream) == 4

    def test_point_mass_only_at_trivial_budget(self):
        stream = list(enumerate_distributions(1, 1, 1))
        assert stream == [Distribution.make((1,), {(0,): F(1)})]

    def test_zero_budget_is_empty(self):
        assert list(enumerate_distributions(2, 0, 4)) == []
        assert list(enumerate_distributions(2, 2, 0)) == []

    def test_xor_triple_is_enumerated(self, xor_triple):
        assert any(d == xor_triple for d in enumerate_distributions(3, 2, 4))

    def test_no_duplicates(self):
        stream = list(enumerate_distributions(2, 2, 4))
        keys = [(d.domains, tuple(d.pmf)) for d in stream]
        assert len(keys) == len(set(keys))

    def test_canonical_order_prefix(self):
        # reduced denominator first, then support size, then domains, then
        # the numerator tuple lexicographically
        first = list(islice(enumerate_distributions(2, 2, 2), 9))
        assert first[0].domains == (1, 1)
        denominators = [max(p.denominator for _, p in d.pmf) for d in first]
        assert denominators == sorted(denominators)

    def test_reduced_denominator_means_gcd_one(self):
        for d in enumerate_distributions(2, 2, 4):
            nums = [p.numerator for _, p in d.pmf]
            dens = {p.denominator for _, p in d.pmf}
            assert max(dens) == 1 or any(n % 2 for n in nums) or max(dens) % 2


class TestProperties:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=10 ** 6))
    def test_enumerated_satisfy_elemental_inequalities(self, seed):
        pool = list(enumerate_distributions(2, 2, 3))
        dist = random.Random(seed).choice(pool)
        h = dist.entropic_vector()
        for gen in elemental(2).generators:
            assert gen.expr.eval(h).sign() >= 0

    def test_support_bound(self):
        for dist in islice(enumerate_distributions(2, 3, 3), 120):
            h = dist.entropic_vector()
            for mask in range(1, 4):
                bound = LogLinValue.of(*[
                    (1, d) for i, d in enumerate(dist.domains) if (mask >> i) & 1])
                assert (bound - h.value(mask)).sign() >= 0

    def test_product_additivity(self):
        x = Distribution.make((2,), {(0,): F(1, 3), (1,): F(2, 3)})
        y = Distribution.make((3,), {(0,): F(1, 2), (1,): F(1, 4), (2,): F(1, 4)})
        joint = Distribution.make((2, 3), {
            (a, b): pa * pb for (a,), pa in x.pmf for (b,), pb in y.pmf})
        h = joint.entropic_vector()
        assert (h.value(3) - h.value(1) - h.value(2)).sign() == 0


def test_file_round_trip(xor_triple):
    text = xor_triple.to_file_text()
    assert Distribution.from_file_text(text) == xor_triple
    assert text.splitlines()[0] == "vars 2 2 2"

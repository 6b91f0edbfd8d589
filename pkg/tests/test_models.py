"""Modular vectors and GF(q) subspace systems."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infoineq.core import entropy_of, mutual_info
from infoineq.models import (ModularVector, VectorSpaceSystem, all_subspaces,
                             basic_modular, enumerate_systems, modular, random_system,
                             rank_mod, rref_mod)
from infoineq.parser import parse_expr
from infoineq.shannon import elemental

F = Fraction


class TestModular:
    def test_basic_modular_values(self):
        h = basic_modular(3, 0).candidate()  # weight on X
        assert h.value(1).as_rational() == 1   # h(X)
        assert h.value(2).as_rational() == 0   # h(Y)
        assert h.value(4).as_rational() == 0   # h(Z)
        assert h.value(3).as_rational() == 1   # h(XY)

    def test_weighted_combination_on_conditional_antecedents(self):
        # weights (2, 0, 1): both slack antecedents evaluate to exactly 1
        h = modular([2, 0, 1])
        a1 = parse_expr("H(XYZ) + H(X) - 2*H(XY)", ["X", "Y", "Z"])
        a2 = parse_expr("H(XYZ) + H(Y) - 2*H(YZ)", ["X", "Y", "Z"])
        assert a1.eval(h).as_rational() == 1  # 3 + 2 - 4
        assert a2.eval(h).as_rational() == 1  # 3 + 0 - 2
        assert h.value(7).as_rational() == 3

    def test_zero_weights_zero_vector(self):
        h = modular([0, 0, 0])
        assert all(h.value(m).is_zero() for m in range(8))

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError, match="nonnegative"):
            ModularVector.make([1, -1])

    def test_modularity_exact(self):
        v = ModularVector.make([F(1, 3), F(5, 2), F(0), F(7)])
        for a in range(16):
            for b in range(16):
                assert v.value(a) + v.value(b) == v.value(a | b) + v.value(a & b)


class TestRankVector:
    def test_three_lines_in_the_plane(self):
        sys_ = VectorSpaceSystem.make(2, 2, [[[1, 0]], [[0, 1]], [[1, 1]]])
        h = sys_.candidate()
        for single in (1, 2, 4):
            assert h.value(single).as_rational() == 1
        for mask in (3, 5, 6, 7):
            assert h.value(mask).as_rational() == 2

    def test_ambient_subspace(self):
        sys_ = VectorSpaceSystem.make(3, 2, [[[1, 0], [0, 1]], [[1, 2]]])
        h = sys_.candidate()
        # any set containing the full subspace has rank 2, value 2*log2(3)
        assert h.value(1).prime_exponents() == {3: F(2)}
        assert h.value(3).prime_exponents() == {3: F(2)}

    def test_all_zero_subspaces(self):
        sys_ = VectorSpaceSystem.make(2, 2, [[], [], []])
        assert all(sys_.candidate().value(m).is_zero() for m in range(8))

    def test_dependent_basis_rejected(self):
        with pytest.raises(ValueError, match="independent"):
            VectorSpaceSystem.make(2, 2, [[[1, 0], [1, 0]]])

    def test_rank_oracle_small_cases(self):
        assert rank_mod([[1, 0], [0, 1]], 2) == 2
        assert rank_mod([[1, 1], [1, 1]], 2) == 1
        assert rank_mod([[2, 1], [1, 2]], 3) == 1  # second row is 2x the first mod 3

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=0, max_value=10 ** 9))
    def test_random_systems_satisfy_elemental_inequalities(self, seed):
        rng = random.Random(seed)
        q = rng.choice([2, 3])
        dim = rng.randint(1, 4)
        n = rng.randint(2, 4)
        h = random_system(rng, n, q, dim).candidate()
        for gen in elemental(n).generators:
            assert gen.expr.eval(h).sign() >= 0

    def test_submodularity_of_rank(self):
        rng = random.Random(7)
        for _ in range(50):
            sys_ = random_system(rng, 3, 2, 3)
            h = sys_.candidate()
            assert mutual_info(3, 1, 2, 4).eval(h).sign() >= 0


class TestEnumeration:
    def test_subspace_counts_gf2(self):
        # Gaussian binomials: GF(2)^2 has 1 + 3 + 1 subspaces
        assert len(all_subspaces(2, 2)) == 5
        assert len(all_subspaces(2, 3)) == 16
        assert len(all_subspaces(3, 2)) == 6

    def test_enumerate_systems_counts(self):
        systems = list(enumerate_systems(2, (2,), 1))
        # 2 subspaces of GF(2)^1, squared
        assert len(systems) == 4

    def test_rref_canonical(self):
        assert rref_mod([[1, 1], [0, 1]], 2) == ((1, 0), (0, 1))
        assert rref_mod([[0, 0]], 2) == ()


def test_file_round_trip():
    sys_ = VectorSpaceSystem.make(2, 2, [[[1, 0]], [], [[1, 1], [0, 1]]])
    text = sys_.to_file_text()
    assert VectorSpaceSystem.from_file_text(text) == sys_
    assert text.splitlines()[0] == "2 2 3"

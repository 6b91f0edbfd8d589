"""Exact value arithmetic, the sign test, and clause semantics."""
from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infoineq.core import (BooleanConstraint, Clause, EntropicCandidate, LinExpr,
                           LogLinValue, VarSet, cond_entropy, entropy_of, full_set,
                           mutual_info, subsets)
from infoineq.models import modular

from conftest import lin_exprs, log_lin_values, small_rationals


def high_precision(value: LogLinValue, dps: int = 64) -> mpmath.mpf:
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for q, r in value.terms:
            total += (mpmath.mpf(q.numerator) / q.denominator
                      * mpmath.log(mpmath.mpf(r.numerator) / r.denominator, 2))
        return total


class TestVarSet:
    def test_mask_is_canonical_index(self):
        assert VarSet.of(0, 2) == 5
        assert list(VarSet(5).indices()) == [0, 2]
        assert VarSet(0) == 0

    def test_bounds(self):
        with pytest.raises(ValueError):
            VarSet(1 << 16)

    def test_subsets_order(self):
        assert list(subsets(2)) == [0, 1, 2, 3]


class TestSign:
    def test_log_two_positive(self):
        assert LogLinValue.of((1, 2)).sign() == 1

    def test_exponents_cancel(self):
        # 3^2 * 8 == 2^3 * 9
        v = LogLinValue.of((2, 3), (-3, 2), (1, Fraction(8, 9)))
        assert v.sign() == 0

    def test_scaled_cancellation(self):
        # oracle: 64-digit evaluation confirms the aggregate vanishes
        v = LogLinValue.of((Fraction(1, 2), 2), (Fraction(1, 2), 2),
                           (Fraction(3, 4), 4), (Fraction(-5, 2), 2))
        assert abs(high_precision(v)) < mpmath.mpf(10) ** -50
        assert v.sign() == 0
        assert v.prime_exponents() == {}

    def test_negative(self):
        assert LogLinValue.of((1, Fraction(1, 3))).sign() == -1

    def test_close_race_multi_prime(self):
        # log2(3) vs 19/12: 2^19 vs 3^12 differ, sign decided by intervals
        v = LogLinValue.of((12, 3), (-19, 2))
        assert v.sign() == (1 if 3 ** 12 > 2 ** 19 else -1)

    def test_rejects_nonpositive_log_argument(self):
        with pytest.raises(ValueError):
            LogLinValue.of((1, 0))

    @settings(max_examples=200, deadline=None)
    @given(log_lin_values)
    def test_sign_matches_high_precision(self, v):
        s = v.sign()
        approx = high_precision(v)
        if s == 0:
            assert abs(approx) < mpmath.mpf(10) ** -50
        else:
            assert approx > 0 if s == 1 else approx < 0

    @settings(max_examples=100, deadline=None)
    @given(log_lin_values, st.integers(min_value=1, max_value=7))
    def test_sign_invariant_under_positive_scaling(self, v, k):
        assert v.scale(Fraction(k, 3)).sign() == v.sign()

    @settings(max_examples=100, deadline=None)
    @given(log_lin_values)
    def test_value_minus_itself_vanishes(self, v):
        assert (v - v).sign() == 0


class TestEval:
    def test_independent_bits_additivity(self):
        h = modular([1, 1])  # independent fair bits have this entropic vector
        expr = entropy_of(2, 3) - entropy_of(2, 1) - entropy_of(2, 2)
        assert expr.eval(h).sign() == 0

    def test_three_halves_entropy(self):
        # pmf (1/2, 1/4, 1/4): -sum p log p = 1/2 + 1/2 + 1/2, exactly 3/2
        oracle = (Fraction(1, 2) * 1 + Fraction(1, 4) * 2 + Fraction(1, 4) * 2)
        assert oracle == Fraction(3, 2)
        value = LogLinValue.of((Fraction(1, 2), 2), (Fraction(1, 4), 4), (Fraction(1, 4), 4))
        vec = [LogLinValue.zero(), value]
        h = EntropicCandidate(1, tuple(vec))
        got = entropy_of(1, 1).eval(h)
        assert got.as_rational() == oracle
        assert got.sign() == 1

    def test_zero_candidate(self):
        h = EntropicCandidate.zero(3)
        expr = LinExpr.make(3, {7: Fraction(5), 1: Fraction(-2)})
        assert expr.eval(h).sign() == 0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            entropy_of(2, 1).eval(EntropicCandidate.zero(3))

    @settings(max_examples=60, deadline=None)
    @given(lin_exprs(3), lin_exprs(3), st.lists(small_rationals.filter(lambda q: q >= 0),
                                                min_size=3, max_size=3))
    def test_eval_is_linear(self, c1, c2, weights):
        h = modular(weights)
        lhs = (c1 + c2).eval(h)
        rhs = c1.eval(h) + c2.eval(h)
        assert (lhs - rhs).sign() == 0

    @settings(max_examples=60, deadline=None)
    @given(lin_exprs(3), st.integers(min_value=1, max_value=9),
           st.lists(small_rationals.filter(lambda q: q >= 0), min_size=3, max_size=3))
    def test_positive_scaling_preserves_sign(self, c, k, weights):
        h = modular(weights)
        q = Fraction(k, 4)
        assert c.scale(q).eval(h).sign() == c.eval(h).sign()


class TestLinExpr:
    def test_empty_set_coefficient_rejected(self):
        with pytest.raises(ValueError):
            LinExpr.make(2, {0: Fraction(1)})

    def test_normalization_drops_zeros(self):
        e = LinExpr.make(2, {1: Fraction(0), 3: Fraction(1)})
        assert e.coeffs() == {3: Fraction(1)}

    def test_mutual_info_desugar(self):
        # I(Y;Z|X) over X,Y,Z = indices 0,1,2
        e = mutual_info(3, 2, 4, 1)
        assert e.coeffs() == {3: Fraction(1), 5: Fraction(1),
                              7: Fraction(-1), 1: Fraction(-1)}

    def test_json_round_trip(self):
        e = cond_entropy(3, 2, 5)
        assert LinExpr.from_json(e.to_json()) == e


class TestHolds:
    def test_monotone_consequent_on_copy(self):
        # Y a copy of X: h(XY) - h(X) evaluates to zero, so >= 0 holds
        h = EntropicCandidate(2, (LogLinValue.zero(), LogLinValue.of((1, 2)),
                                  LogLinValue.of((1, 2)), LogLinValue.of((1, 2))))
        clause = Clause(2, (), (entropy_of(2, 3) - entropy_of(2, 1),))
        assert clause.holds(h)

    def test_failing_consequent(self, fair_bit):
        h = modular([1, 1])
        expr = entropy_of(2, 1) + entropy_of(2, 2) - entropy_of(2, 3).scale(3)
        clause = Clause(2, (), (expr,))
        assert expr.eval(h).sign() == -1
        assert not clause.holds(h)

    def test_zero_vector_satisfies_everything(self):
        clause = Clause(2, (-entropy_of(2, 1),), (-entropy_of(2, 3),))
        assert clause.holds(EntropicCandidate.zero(2))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(lin_exprs(2), max_size=2), st.lists(lin_exprs(2), min_size=1, max_size=2))
    def test_zero_vector_property(self, antecedents, consequents):
        clause = Clause(2, tuple(antecedents), tuple(consequents))
        assert clause.holds(EntropicCandidate.zero(2))

    def test_empty_consequents_rejected(self):
        with pytest.raises(ValueError):
            Clause(2, (), ())

    def test_constraint_requires_clause(self):
        with pytest.raises(ValueError):
            BooleanConstraint(2, ())


def test_candidate_json_round_trip(xor_triple):
    h = xor_triple.entropic_vector()
    back = EntropicCandidate.from_json(h.to_json())
    assert all((back.value(m) - h.value(m)).sign() == 0 for m in range(8))


def test_full_set():
    assert full_set(3) == 7

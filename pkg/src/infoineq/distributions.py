"""Finite probability spaces with rational probabilities, their exact
entropic vectors, and a budgeted canonical enumeration.

Every entropic vector of such a space is exactly representable: each atom
with probability p contributes p*log2(1/p), a LogLinValue term.  The
enumeration is the engine behind counterexample search; its order is the
contract that makes "minimal counterexample" well defined:

    by increasing reduced denominator D', then increasing support size,
    then domain-size tuple (lexicographic), then the integer numerator
    tuple (lexicographic).

Each distribution appears exactly once per domain tuple: numerator tuples
with a common factor are skipped, so a pmf is emitted only at its reduced
denominator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterator, Mapping

from .core import EntropicCandidate, LogLinValue, as_fraction

Outcome = tuple[int, ...]


@dataclass(frozen=True)
class Distribution:
    """A joint pmf on n finite variables with exact rational probabilities."""

    domains: tuple[int, ...]
    pmf: tuple[tuple[Outcome, Fraction], ...]

    def __post_init__(self):
        if not self.domains or any(d < 1 for d in self.domains):
            raise ValueError("domain sizes must be positive")
        total = Fraction(0)
        seen = set()
        for outcome, p in self.pmf:
            if len(outcome) != len(self.domains):
                raise ValueError("outcome arity mismatch")
            if any(not 0 <= x < d for x, d in zip(outcome, self.domains)):
                raise ValueError(f"outcome {outcome} outside domains {self.domains}")
            if outcome in seen:
                raise ValueError(f"duplicate outcome {outcome}")
            if p < 0:
                raise ValueError("negative probability")
            seen.add(outcome)
            total += p
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")
        if not any(p > 0 for _, p in self.pmf):
            raise ValueError("support must be nonempty")

    @staticmethod
    def make(domains, pmf: Mapping[Outcome, Fraction]) -> "Distribution":
        items = tuple(sorted((tuple(o), as_fraction(p)) for o, p in pmf.items() if p != 0))
        return Distribution(tuple(domains), items)

    @property
    def n(self) -> int:
        return len(self.domains)

    def support(self) -> list[Outcome]:
        return [o for o, p in self.pmf if p > 0]

    def marginal(self, mask: int) -> "Distribution":
        """Exact marginal on the variables selected by the mask."""
        idx = [i for i in range(self.n) if (mask >> i) & 1]
        if not idx:
            return Distribution.make((1,), {(0,): Fraction(1)})
        acc: dict[Outcome, Fraction] = {}
        for outcome, p in self.pmf:
            if p == 0:
                continue
            key = tuple(outcome[i] for i in idx)
            acc[key] = acc.get(key, Fraction(0)) + p
        return Distribution.make(tuple(self.domains[i] for i in idx), acc)

    def entropic_vector(self) -> EntropicCandidate:
        """h(alpha) = sum_x p_alpha(x) * log2(1 / p_alpha(x)), exactly."""
        values = [LogLinValue.zero()]
        for mask in range(1, 1 << self.n):
            marg = self.marginal(mask)
            terms = tuple((p, 1 / p) for _, p in marg.pmf if p > 0)
            values.append(LogLinValue(terms))
        return EntropicCandidate(self.n, tuple(values))

    def to_file_text(self) -> str:
        lines = ["vars " + " ".join(str(d) for d in self.domains)]
        for outcome, p in self.pmf:
            lines.append(" ".join(str(x) for x in outcome) + f" {p.numerator}/{p.denominator}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_file_text(text: str) -> "Distribution":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or not lines[0].startswith("vars"):
            raise ValueError("distribution file must start with a 'vars d1 ... dn' header")
        domains = tuple(int(tok) for tok in lines[0].split()[1:])
        pmf: dict[Outcome, Fraction] = {}
        for ln in lines[1:]:
            toks = ln.split()
            if len(toks) != len(domains) + 1:
                raise ValueError(f"bad outcome line: {ln!r}")
            outcome = tuple(int(t) for t in toks[:-1])
            pmf[outcome] = Fraction(toks[-1])
        return Distribution.make(domains, pmf)


def entropic_vector(dist: Distribution) -> EntropicCandidate:
    return dist.entropic_vector()


def marginal(dist: Distribution, mask: int) -> Distribution:
    return dist.marginal(mask)


# ---------------------------------------------------------------------------
# Canonical enumeration
# ---------------------------------------------------------------------------

def _tuples_with_support(cells: int, total: int, k: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer tuples of length `cells` summing to `total` with
    exactly k nonzero entries, in lexicographic order of the full tuple."""

    def rec(prefix: list[int], remaining: int, slots_left: int, zeros_left: int):
        if len(prefix) == cells:
            if remaining == 0:
                yield tuple(prefix)
            return
        # zero first keeps the stream lexicographically increasing
        if zeros_left > 0:
            prefix.append(0)
            yield from rec(prefix, remaining, slots_left, zeros_left - 1)
            prefix.pop()
        if slots_left == 1:
            values = (remaining,) if remaining >= 1 else ()
        elif slots_left > 1:
            # each remaining positive slot needs at least 1
            values = range(1, remaining - (slots_left - 1) + 1)
        else:
            values = ()
        for v in values:
            prefix.append(v)
            yield from rec(prefix, remaining - v, slots_left - 1, zeros_left)
            prefix.pop()

    if k < 1 or k > cells or total < k:
        return
    yield from rec([], total, k, cells - k)


def enumerate_distributions(n: int, max_support: int, max_denominator: int) -> Iterator[Distribution]:
    """Exhaustive, duplicate-free-per-domain-tuple stream of joint pmfs.

    Covers all pmfs on per-variable domains of size <= max_support whose
    probabilities are multiples of 1/D' for some D' <= max_denominator,
    in the canonical order documented in the module docstring.  Budgets
    of zero yield an empty stream; completeness holds in the limit of
    growing budgets.
    """
    if max_support < 1 or max_denominator < 1:
        return
    for dprime in range(1, max_denominator + 1):
        for support_size in range(1, dprime + 1):
            for domains in product(range(1, max_support + 1), repeat=n):
                cells = 1
                for d in domains:
                    cells *= d
                if support_size > cells:
                    continue
                outcomes = list(product(*(range(d) for d in domains)))
                for nums in _tuples_with_support(cells, dprime, support_size):
                    g = 0
                    for v in nums:
                        g = gcd(g, v)
                    if g > 1:
                        # already emitted at the reduced denominator D'/g
                        continue
                    pmf = {outcomes[i]: Fraction(v, dprime)
                           for i, v in enumerate(nums) if v}
                    yield Distribution.make(domains, pmf)


def count_stream(n: int, max_support: int, max_denominator: int) -> int:
    return sum(1 for _ in enumerate_distributions(n, max_support, max_denominator))

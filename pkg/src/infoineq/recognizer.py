"""Recognizing candidate vectors given in (1/c) * log2(a/b) form.

The checks are one-sided, matching what a terminating tool can promise:

* rejection is sound -- the candidate violates an inequality that is
  valid on the closed cone (an elemental one, or a user-supplied valid
  generator);
* realization is sound -- an enumerated distribution reproduces every
  coordinate exactly, certifying the vector entropic;
* everything else is reported as inconclusive, a first-class verdict.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import EntropicCandidate, LogLinValue
from .distributions import Distribution, enumerate_distributions
from .parser import _split_var_token
from .shannon import Generator, GeneratorSet


@dataclass(frozen=True)
class CandidateRepr:
    """For every nonempty subset alpha: naturals (a, b, c) encoding
    h(alpha) = (1/c) * log2(a/b).  Negative values are representable
    (a < b) and simply fail the nonnegativity tests."""

    n: int
    entries: tuple[tuple[int, int, int], ...]  # indexed by mask-1

    def __post_init__(self):
        if len(self.entries) != (1 << self.n) - 1:
            raise ValueError("need an (a, b, c) entry for every nonempty subset")
        for a, b, c in self.entries:
            if c == 0:
                raise ValueError("malformed representation: c must be >= 1")
            if b == 0:
                raise ValueError("malformed representation: b must be >= 1")
            if a == 0:
                raise ValueError("malformed representation: a must be >= 1")

    def entry(self, mask: int) -> tuple[int, int, int]:
        return self.entries[mask - 1]

    def candidate(self) -> EntropicCandidate:
        values = [LogLinValue.zero()]
        for mask in range(1, 1 << self.n):
            a, b, c = self.entry(mask)
            if a == b:
                values.append(LogLinValue.zero())
            else:
                values.append(LogLinValue.of((Fraction(1, c), Fraction(a, b))))
        return EntropicCandidate(self.n, tuple(values))

    @staticmethod
    def from_file_text(text: str) -> "CandidateRepr":
        """Lines 'SUBSET a b c'; variables inferred alphabetically."""
        rows: list[tuple[str, int, int, int]] = []
        names: set[str] = set()
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            if len(toks) != 4:
                raise ValueError(f"candidate line needs 'subset a b c': {raw!r}")
            subset = toks[0]
            for name in _split_var_token(subset):
                names.add(name)
            rows.append((subset, int(toks[1]), int(toks[2]), int(toks[3])))
        order = sorted(names)
        index = {name: i for i, name in enumerate(order)}
        n = len(order)
        table: dict[int, tuple[int, int, int]] = {}
        for subset, a, b, c in rows:
            mask = 0
            for name in _split_var_token(subset):
                mask |= 1 << index[name]
            if mask in table:
                raise ValueError(f"duplicate subset {subset!r}")
            table[mask] = (a, b, c)
        missing = [m for m in range(1, 1 << n) if m not in table]
        if missing:
            raise ValueError(f"candidate file is missing {len(missing)} subset lines")
        return CandidateRepr(n, tuple(table[m] for m in range(1, 1 << n)))


@dataclass(frozen=True)
class RecognitionResult:
    verdict: str  # "rejected" | "realized" | "inconclusive"
    violated: "Generator | None" = None
    realization: "Distribution | None" = None

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.violated is not None:
            out["violated"] = {"name": self.violated.name, "kind": self.violated.kind}
        if self.realization is not None:
            out["realization"] = self.realization.to_file_text()
        return out


def check_candidate(repr_: CandidateRepr, gens: GeneratorSet,
                    max_support: int = 2, max_denominator: int = 4) -> RecognitionResult:
    """Sound necessary tests, then a bounded sufficient test.

    Rejects with a witness when some generator inequality evaluates to a
    negative value on the candidate (exact sign); realizes when a
    distribution in the budget reproduces every coordinate exactly;
    otherwise inconclusive.  Rejections are sound for almost-entropic
    vectors as well; realizations certify entropic.
    """
    if gens.n != repr_.n:
        raise ValueError("generator set has wrong variable count")
    h = repr_.candidate()
    for gen in gens.generators:
        if gen.expr.eval(h).sign() < 0:
            return RecognitionResult("rejected", violated=gen)
    for dist in enumerate_distributions(repr_.n, max_support, max_denominator):
        hd = dist.entropic_vector()
        if all((hd.value(mask) - h.value(mask)).sign() == 0
               for mask in range(1, 1 << repr_.n)):
            return RecognitionResult("realized", realization=dist)
    return RecognitionResult("inconclusive")

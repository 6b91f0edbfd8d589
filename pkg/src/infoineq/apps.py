"""Constraint generators for applications, and the bundled fixture corpus
of named inequalities with their expected tool verdicts.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .core import (BooleanConstraint, Clause, LinExpr, cond_entropy, entropy_of,
                   mutual_info)
from .parser import parse_constraint
from .shannon import GeneratorSet, elemental

CORPUS_ENV = "INFOINEQ_CORPUS"


# ---------------------------------------------------------------------------
# Named expression builders
# ---------------------------------------------------------------------------

def matus_expr(k: int) -> LinExpr:
    """The k-th member of the Matus family on four variables A,B,C,D
    (indices 0..3), written so that expr >= 0:

        I(C;D|A) + (k+3)/2 I(C;D|B) + I(A;B)
            + (k-1)/2 I(B;C|D) + (1/k) I(B;D|C) - I(C;D) >= 0

    Valid for every k >= 1, and provably outside the elemental cone.
    """
    if k < 1:
        raise ValueError("family index k must be >= 1")
    n = 4
    a, b, c, d = 1, 2, 4, 8
    return (mutual_info(n, c, d, a)
            + mutual_info(n, c, d, b).scale(Fraction(k + 3, 2))
            + mutual_info(n, a, b)
            + mutual_info(n, b, c, d).scale(Fraction(k - 1, 2))
            + mutual_info(n, b, d, c).scale(Fraction(1, k))
            - mutual_info(n, c, d))


def with_matus_generators(gens: GeneratorSet, ks: Iterable[int]) -> GeneratorSet:
    """Extend a 4-variable generator set by Matus instances, trusted on
    provenance (they are published valid inequalities, not elemental)."""
    for k in ks:
        gens = gens.with_user(matus_expr(k), f"matus-k{k}",
                              "Matus non-elemental family, member k="
                              f"{k}; trusted as a published valid inequality")
    return gens


def kopparty_rossman_terms() -> tuple[LinExpr, LinExpr, LinExpr]:
    """The three expressions of the triangle-vs-V max inequality on X,Y,Z:
    2h(XY)-h(X)-h(XYZ) and its rotations."""
    n = 3
    x, y, z = 1, 2, 4
    xyz = 7
    d1 = entropy_of(n, x | y).scale(2) - entropy_of(n, x) - entropy_of(n, xyz)
    d2 = entropy_of(n, y | z).scale(2) - entropy_of(n, y) - entropy_of(n, xyz)
    d3 = entropy_of(n, x | z).scale(2) - entropy_of(n, z) - entropy_of(n, xyz)
    return d1, d2, d3


# ---------------------------------------------------------------------------
# Secret sharing
# ---------------------------------------------------------------------------

def secret_sharing_constraint(participants: int,
                              access_structure: Iterable[Iterable[int]],
                              ratio) -> BooleanConstraint:
    """Lower-bound constraint for the information ratio of a secret
    sharing scheme: participants are variables X_1..X_m, the secret is
    X_{m+1}.  Qualified sets recover the secret exactly, unqualified sets
    learn nothing, and the claim is that some share carries at least
    `ratio` times the secret's entropy (or the secret is trivial):

        AND_{F qualified}  h(X_s | X_F) = 0
        AND_{F unqualified, F nonempty}  I(X_s ; X_F) = 0
            =>  h(X_s) = 0  OR  OR_i h(X_i) >= ratio * h(X_s)

    The access structure must be upward closed; equalities are expanded
    into inequality pairs in the antecedents, and the h(X_s) = 0 disjunct
    is encoded as -h(X_s) >= 0 (equivalent on nonnegative vectors).
    """
    m = participants
    if m < 1:
        raise ValueError("need at least one participant")
    ratio = Fraction(ratio)
    family = {frozenset(f) for f in access_structure}
    if not family:
        raise ValueError("access structure must be nonempty")
    universe = frozenset(range(1, m + 1))
    for f in family:
        if not f:
            raise ValueError("the empty set cannot be qualified")
        if not f <= universe:
            raise ValueError(f"access set {sorted(f)} mentions unknown participants")
        for extra in universe - f:
            if f | {extra} not in family:
                raise ValueError("access structure is not closed under supersets")
    n = m + 1
    secret = 1 << m

    def mask_of(f: frozenset) -> int:
        mask = 0
        for i in f:
            mask |= 1 << (i - 1)
        return mask

    antecedents: list[LinExpr] = []
    for bits in range(1, 1 << m):
        f = frozenset(i + 1 for i in range(m) if (bits >> i) & 1)
        if f in family:
            eq = cond_entropy(n, secret, mask_of(f))
        else:
            eq = mutual_info(n, secret, mask_of(f))
        antecedents.append(eq)
        antecedents.append(-eq)
    consequents = [-entropy_of(n, secret)]
    for i in range(m):
        consequents.append(entropy_of(n, 1 << i) - entropy_of(n, secret).scale(ratio))
    clause = Clause(n, tuple(antecedents), tuple(consequents))
    return BooleanConstraint(n, (clause,))


# ---------------------------------------------------------------------------
# Fixture corpus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fixture:
    name: str
    path: Path
    source: str
    constraint: BooleanConstraint
    expected_verdict: str
    notes: str
    budget: str = ""


def corpus_dir() -> Path:
    override = os.environ.get(CORPUS_ENV)
    if override:
        return Path(override)
    return Path(__file__).parent / "corpus"


def corpus() -> list[Fixture]:
    """All bundled fixtures, parsed, with their manifest metadata."""
    root = corpus_dir()
    manifest = json.loads((root / "manifest.json").read_text())
    fixtures = []
    for name in sorted(manifest):
        meta = manifest[name]
        path = root / meta["file"]
        source = path.read_text()
        fixtures.append(Fixture(
            name=name,
            path=path,
            source=source,
            constraint=parse_constraint(source),
            expected_verdict=meta["expected_verdict"],
            notes=meta.get("notes", ""),
            budget=meta.get("budget", ""),
        ))
    return fixtures


def fixture(name: str) -> Fixture:
    for f in corpus():
        if f.name == name:
            return f
    raise KeyError(f"no corpus fixture named {name!r}")

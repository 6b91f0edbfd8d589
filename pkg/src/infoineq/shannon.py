"""Provability in the cone spanned by the elemental inequalities (plus
optional user-supplied valid inequalities), with exact certificates.

A certificate is a nonnegative rational multiplier per generator (and per
antecedent, in the conditional case) such that

    target = sum_i mu_i * antecedent_i + sum_e lambda_e * generator_e

holds as an exact identity of linear expressions.  `verify` re-checks
that identity by plain coefficient arithmetic, independently of the LP
that produced it.

"Not provable" always means: the feasibility LP over *this* generator set
has no solution.  It is never a validity refutation -- there are valid
inequalities outside every fixed generator cone.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .core import LinExpr, MAX_VARS, VarSet, full_set, mutual_info, cond_entropy
from .distributions import Distribution, enumerate_distributions
from .models import ModularVector
from .parser import default_names
from .simplex import LPResult, solve_lp

ZERO = Fraction(0)

MONOTONICITY = "elemental-monotonicity"
SUBMODULARITY = "elemental-submodularity"
USER = "user-valid"


@dataclass(frozen=True)
class Generator:
    name: str
    kind: str
    expr: LinExpr
    provenance: "str | None" = None


@dataclass(frozen=True)
class GeneratorSet:
    """The canonical elemental set for n, optionally extended by trusted
    user inequalities (each carrying a provenance note)."""

    n: int
    generators: tuple[Generator, ...]

    def exprs(self) -> list[LinExpr]:
        return [g.expr for g in self.generators]

    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def with_user(self, expr: LinExpr, name: str, provenance: str) -> "GeneratorSet":
        if expr.n != self.n:
            raise ValueError("user generator has wrong variable count")
        if name in self.names():
            raise ValueError(f"duplicate generator name {name!r}")
        return GeneratorSet(self.n, self.generators + (Generator(name, USER, expr, provenance),))

    def user_generators(self) -> list[Generator]:
        return [g for g in self.generators if g.kind == USER]


def elemental(n: int) -> GeneratorSet:
    """The n + C(n,2)*2^(n-2) elemental inequalities for n variables.

    Monotonicity instances h(X_i | X_{[n] - i}) >= 0 and submodularity
    instances I(X_i; X_j | X_alpha) >= 0 for i < j, alpha in [n] - {i,j}.
    Every inequality implied by monotonicity and submodularity is a
    nonnegative combination of these.
    """
    if n < 1 or n > MAX_VARS:
        raise ValueError(f"variable count {n} out of range 1..{MAX_VARS}")
    names = default_names(n)
    gens: list[Generator] = []
    everything = full_set(n)
    for i in range(n):
        rest = VarSet(everything & ~(1 << i))
        expr = cond_entropy(n, 1 << i, rest)
        label = f"H({names[i]}|{rest.label(names)})" if rest else f"H({names[i]})"
        gens.append(Generator(label, MONOTONICITY, expr))
    for i, j in combinations(range(n), 2):
        others = [k for k in range(n) if k not in (i, j)]
        for bits in range(1 << len(others)):
            mask = 0
            for t, k in enumerate(others):
                if (bits >> t) & 1:
                    mask |= 1 << k
            expr = mutual_info(n, 1 << i, 1 << j, mask)
            if mask:
                label = f"I({names[i]};{names[j]}|{VarSet(mask).label(names)})"
            else:
                label = f"I({names[i]};{names[j]})"
            gens.append(Generator(label, SUBMODULARITY, expr))
    order = {MONOTONICITY: 0, SUBMODULARITY: 1}
    gens.sort(key=lambda g: (order[g.kind], g.name))
    return GeneratorSet(n, tuple(gens))


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProofCertificate:
    """Nonnegative multipliers witnessing target = sum mu_i a_i + sum l_e g_e."""

    target: LinExpr
    antecedent_multipliers: tuple[Fraction, ...]
    generator_multipliers: tuple[Fraction, ...]
    trusted: tuple[tuple[str, str], ...]  # (name, provenance) of used user generators

    def nonzero_generators(self, gens: GeneratorSet) -> dict[str, Fraction]:
        return {g.name: m for g, m in zip(gens.generators, self.generator_multipliers) if m != 0}

    def to_json(self, gens: GeneratorSet) -> dict:
        return {
            "target": self.target.to_json(),
            "antecedent_multipliers": [str(m) for m in self.antecedent_multipliers],
            "generator_multipliers": {name: str(m)
                                      for name, m in self.nonzero_generators(gens).items()},
            "trusted_user_generators": [
                {"name": name, "provenance": prov} for name, prov in self.trusted],
        }

    @staticmethod
    def from_json(data: dict, gens: GeneratorSet) -> "ProofCertificate":
        by_name = {name: Fraction(m) for name, m in data["generator_multipliers"].items()}
        multipliers = tuple(by_name.get(g.name, ZERO) for g in gens.generators)
        return ProofCertificate(
            LinExpr.from_json(data["target"]),
            tuple(Fraction(m) for m in data["antecedent_multipliers"]),
            multipliers,
            tuple((t["name"], t["provenance"]) for t in data["trusted_user_generators"]),
        )


def prove(c: LinExpr, gens: GeneratorSet,
          antecedents: Sequence[LinExpr] = (),
          minimize_antecedent_use: bool = False) -> "ProofCertificate | None":
    """Certificate for c in cone(antecedents) + cone(generators), or None.

    None means the exact feasibility LP has no solution over this
    generator set -- not that c is invalid.  With
    `minimize_antecedent_use`, among all certificates one minimizing the
    total antecedent multiplier mass is returned (deterministic output
    for the conditional reductions).
    """
    for a in antecedents:
        if a.n != c.n:
            raise ValueError("antecedent has wrong variable count")
    if gens.n != c.n:
        raise ValueError(f"dimension mismatch: target n={c.n}, generators n={gens.n}")
    columns = [a.dense() for a in antecedents] + [g.expr.dense() for g in gens.generators]
    target = c.dense()
    k = len(antecedents)
    ncols = len(columns)
    rows = len(target)
    a_matrix = [[columns[j][i] for j in range(ncols)] for i in range(rows)]
    cost = [Fraction(1)] * k + [ZERO] * (ncols - k) if minimize_antecedent_use \
        else [ZERO] * ncols
    res: LPResult = solve_lp(a_matrix, target, cost)
    if res.status != "optimal":
        return None
    mu = res.x[:k]
    lam = res.x[k:]
    trusted = tuple((g.name, g.provenance or "") for g, m in zip(gens.generators, lam)
                    if m != 0 and g.kind == USER)
    return ProofCertificate(c, tuple(mu), tuple(lam), trusted)


def verify(cert: ProofCertificate, c: LinExpr, gens: GeneratorSet,
           antecedents: Sequence[LinExpr] = ()) -> bool:
    """Exact re-check of the certificate identity, independent of the LP."""
    if len(cert.antecedent_multipliers) != len(antecedents):
        return False
    if len(cert.generator_multipliers) != len(gens.generators):
        return False
    if any(m < 0 for m in cert.antecedent_multipliers):
        return False
    if any(m < 0 for m in cert.generator_multipliers):
        return False
    residual = c
    for m, a in zip(cert.antecedent_multipliers, antecedents):
        residual = residual - a.scale(m)
    for m, g in zip(cert.generator_multipliers, gens.generators):
        if m != 0:
            residual = residual - g.expr.scale(m)
    return residual.is_zero()


# ---------------------------------------------------------------------------
# Tight / slack classification
# ---------------------------------------------------------------------------

TIGHT = "tight"
SLACK = "slack"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class SlackWitness:
    """A candidate on which the inspected expressions are strictly positive."""

    kind: str  # "modular" | "distribution"
    modular: "ModularVector | None" = None
    distribution: "Distribution | None" = None

    def candidate(self):
        if self.kind == "modular":
            return self.modular.candidate()
        return self.distribution.entropic_vector()

    def describe(self) -> dict:
        if self.kind == "modular":
            return {"kind": "modular", "weights": [str(w) for w in self.modular.weights]}
        return {"kind": "distribution", "file": self.distribution.to_file_text()}


@dataclass(frozen=True)
class Tightness:
    verdict: str  # TIGHT | SLACK | UNKNOWN
    certificate: "ProofCertificate | None" = None  # proves -c when tight
    witness: "SlackWitness | None" = None          # sign(c.h) = +1 when slack


def classify_tight(c: LinExpr, gens: GeneratorSet,
                   max_support: int = 2, max_denominator: int = 4) -> Tightness:
    """Tight if -c is provable from gens (so c.h <= 0 on the whole cone);
    Slack if a modular vector or a budget-bounded distribution makes
    c.h > 0; Unknown otherwise."""
    cert = prove(-c, gens)
    if cert is not None:
        return Tightness(TIGHT, certificate=cert)
    # modular witnesses: some basic direction with positive pay-off suffices,
    # since weights are free nonnegative reals
    for j in range(c.n):
        if c.dot_basic_modular(j) > 0:
            witness = SlackWitness("modular", modular=ModularVector.make(
                [1 if i == j else 0 for i in range(c.n)]))
            return Tightness(SLACK, witness=witness)
    for dist in enumerate_distributions(c.n, max_support, max_denominator):
        if c.eval(dist.entropic_vector()).sign() > 0:
            return Tightness(SLACK, witness=SlackWitness("distribution", distribution=dist))
    return Tightness(UNKNOWN)


def joint_slack(exprs: Sequence[LinExpr],
                max_support: int = 2, max_denominator: int = 4) -> "SlackWitness | None":
    """A single candidate making every expression strictly positive.

    First tries modular vectors: minimize sum(w) subject to the margin
    system (c_i . h_w >= 1 for all i, w >= 0); scale invariance makes the
    unit margin lossless.  Falls back to the canonical distribution
    stream within the budget.  None means not found at this budget.
    """
    if not exprs:
        return SlackWitness("modular", modular=ModularVector.make([]))
    n = exprs[0].n
    k = len(exprs)
    # variables: w_1..w_n, slacks s_1..s_k; rows: sum_j A_ij w_j - s_i = 1
    a_rows = []
    for c in exprs:
        row = [c.dot_basic_modular(j) for j in range(n)]
        a_rows.append(row + [ZERO] * k)
    for i in range(k):
        a_rows[i][n + i] = Fraction(-1)
    b = [Fraction(1)] * k
    cost = [Fraction(1)] * n + [ZERO] * k
    res = solve_lp(a_rows, b, cost)
    if res.status == "optimal":
        return SlackWitness("modular", modular=ModularVector.make(res.x[:n]))
    for dist in enumerate_distributions(n, max_support, max_denominator):
        h = dist.entropic_vector()
        if all(c.eval(h).sign() > 0 for c in exprs):
            return SlackWitness("distribution", distribution=dist)
    return None

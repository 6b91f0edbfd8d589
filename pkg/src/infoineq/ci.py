"""Conditional-independence implication: statement model, reduction to
conditional clauses, proving over the elemental cone, and a bounded exact
falsifier built on the polynomial translation of CI statements.

A CI statement (Y _||_ Z | X) is equivalent to I(Y;Z|X) = 0, so an
implication between CI statements is a conditional clause whose
antecedents and consequent are tight.  For falsification, each statement
also translates into a conjunction of polynomial product equalities over
atom probabilities on a fixed domain; a counterexample is a rational pmf
satisfying every antecedent equality exactly while violating at least one
consequent equality.  The polynomial system is kept as a first-class
object so it can be exported to SMT-LIB for external real-arithmetic
solvers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .core import Clause, LinExpr, VarSet, mutual_info
from .parser import _split_var_token  # shared variable-token convention
from .refuter import Budget, RefutationResult, refute, refute_parallel
from .shannon import GeneratorSet, ProofCertificate, prove


@dataclass(frozen=True)
class CIStatement:
    """(Y _||_ Z | X) over disjoint variable masks; Y and Z nonempty."""

    y: int
    z: int
    x: int

    def __post_init__(self):
        if self.y == 0 or self.z == 0:
            raise ValueError("both independent groups must be nonempty")
        if self.y & self.z or self.y & self.x or self.z & self.x:
            raise ValueError("CI statement groups must be disjoint")

    def expr(self, n: int) -> LinExpr:
        """The conditional mutual information I(Y;Z|X) as a LinExpr."""
        return mutual_info(n, self.y, self.z, self.x)

    def variables(self) -> int:
        return self.y | self.z | self.x

    def label(self, names: "tuple[str, ...] | None" = None) -> str:
        y, z, x = (VarSet(m).label(names) for m in (self.y, self.z, self.x))
        return f"I({y};{z}|{x})" if self.x else f"I({y};{z})"


def parse_ci(text: str, var_names: Sequence[str]) -> CIStatement:
    """Parse 'Y;Z|X' or 'I(Y;Z|X)' into a statement over the given order."""
    index = {name: i for i, name in enumerate(var_names)}
    body = text.strip()
    if body.startswith("I(") and body.endswith(")"):
        body = body[2:-1]
    if ";" not in body:
        raise ValueError(f"CI statement needs ';' between the groups: {text!r}")
    yz, _, x_part = body.partition("|")
    y_part, _, z_part = yz.partition(";")

    def to_mask(part: str) -> int:
        mask = 0
        for tok in part.replace(",", " ").split():
            for name in _split_var_token(tok):
                if name not in index:
                    raise ValueError(f"unknown variable {name!r} in {text!r}")
                mask |= 1 << index[name]
        return mask

    return CIStatement(to_mask(y_part), to_mask(z_part), to_mask(x_part))


def to_clause(antecedents: Sequence[CIStatement], consequent: CIStatement, n: int) -> Clause:
    """The implication as a conditional clause: each antecedent equality
    I = 0 expands into +-I >= 0, the consequent becomes -I >= 0."""
    exprs: list[LinExpr] = []
    for st in antecedents:
        e = st.expr(n)
        exprs.append(e)
        exprs.append(-e)
    return Clause(n, tuple(exprs), (-consequent.expr(n),))


def ci_prove(antecedents: Sequence[CIStatement], consequent: CIStatement,
             n: int, gens: GeneratorSet) -> "ProofCertificate | None":
    """Certificate that -I(consequent) is a nonnegative combination of the
    antecedent equalities and the generator cone.  The +I halves of the
    equalities are trivially valid and never help, so the search runs over
    the -I halves; a certificate is sound for the implication."""
    kept = [-st.expr(n) for st in antecedents]
    return prove(-consequent.expr(n), gens, antecedents=kept,
                 minimize_antecedent_use=True)


# ---------------------------------------------------------------------------
# Polynomial translation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProductEquality:
    """sum(p[a]) * sum(p[b]) == sum(p[c]) * sum(p[d]) over atom indices."""

    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]
    d: tuple[int, ...]

    def holds(self, pmf: Sequence[Fraction]) -> bool:
        sa = sum((pmf[i] for i in self.a), Fraction(0))
        sb = sum((pmf[i] for i in self.b), Fraction(0))
        sc = sum((pmf[i] for i in self.c), Fraction(0))
        sd = sum((pmf[i] for i in self.d), Fraction(0))
        return sa * sb == sc * sd


@dataclass(frozen=True)
class PolySystem:
    """The satisfiability system: a rational pmf on [N]^n satisfying every
    antecedent product equality while violating at least one consequent
    equality (the negated block is kept as an explicit disjunct list, so
    violation checking stays exact and needs no gap parameter)."""

    n: int
    domain: int
    antecedent_equalities: tuple[ProductEquality, ...]
    consequent_equalities: tuple[ProductEquality, ...]

    @property
    def unknowns(self) -> int:
        return self.domain ** self.n

    def phi_holds(self, pmf: Sequence[Fraction]) -> bool:
        return all(eq.holds(pmf) for eq in self.antecedent_equalities)

    def psi_violated(self, pmf: Sequence[Fraction]) -> bool:
        return any(not eq.holds(pmf) for eq in self.consequent_equalities)

    def satisfied_by(self, pmf: Sequence[Fraction]) -> bool:
        if len(pmf) != self.unknowns:
            raise ValueError("pmf length must equal the number of atoms")
        if any(p < 0 for p in pmf) or sum(pmf) != 1:
            return False
        return self.phi_holds(pmf) and self.psi_violated(pmf)


def _atom_index(outcome: Sequence[int], n: int, domain: int) -> int:
    idx = 0
    for v in outcome:
        idx = idx * domain + v
    return idx


def _marginal_atoms(assignment: dict[int, int], n: int, domain: int) -> tuple[int, ...]:
    """Atom indices of all outcomes consistent with a partial assignment."""
    free = [i for i in range(n) if i not in assignment]
    out = []
    for values in product(range(domain), repeat=len(free)):
        outcome = [0] * n
        for i, v in assignment.items():
            outcome[i] = v
        for i, v in zip(free, values):
            outcome[i] = v
        out.append(_atom_index(outcome, n, domain))
    return tuple(sorted(out))


def _statement_equalities(st: CIStatement, n: int, domain: int) -> Iterator[ProductEquality]:
    y_vars = list(VarSet(st.y).indices())
    z_vars = list(VarSet(st.z).indices())
    x_vars = list(VarSet(st.x).indices())
    for xv in product(range(domain), repeat=len(x_vars)):
        for yv in product(range(domain), repeat=len(y_vars)):
            for zv in product(range(domain), repeat=len(z_vars)):
                ax = dict(zip(x_vars, xv))
                axy = ax | dict(zip(y_vars, yv))
                axz = ax | dict(zip(z_vars, zv))
                axyz = axy | dict(zip(z_vars, zv))
                yield ProductEquality(
                    _marginal_atoms(axyz, n, domain),
                    _marginal_atoms(ax, n, domain),
                    _marginal_atoms(axy, n, domain),
                    _marginal_atoms(axz, n, domain),
                )


def build_delta(antecedents: Sequence[CIStatement], consequent: CIStatement,
                n: int, domain: int) -> PolySystem:
    """Product-equality system for 'some pmf on [domain]^n satisfies every
    antecedent CI and fails the consequent CI'."""
    if domain < 1:
        raise ValueError("domain size must be >= 1")
    ante = []
    for st in antecedents:
        ante.extend(_statement_equalities(st, n, domain))
    cons = tuple(_statement_equalities(consequent, n, domain))
    return PolySystem(n, domain, tuple(ante), cons)


def pmf_vector(dist, domain: int) -> list[Fraction]:
    """Dense atom-probability vector of a distribution on [domain]^n."""
    vec = [Fraction(0)] * (domain ** dist.n)
    for outcome, p in dist.pmf:
        vec[_atom_index(outcome, dist.n, domain)] = p
    return vec


def falsify(antecedents: Sequence[CIStatement], consequent: CIStatement, n: int,
            max_domain: int, max_denominator: int, workers: int = 1) -> RefutationResult:
    """Bounded exact search for a distribution satisfying the antecedent
    CIs and violating the consequent.  Shares the refuter's canonical
    stream (domains up to max_domain); equality antecedents are checked
    via exact signs, so hits are genuine solutions of the product system."""
    clause = to_clause(antecedents, consequent, n)
    budget = Budget(max_support=max_domain, max_denominator=max_denominator)
    if workers <= 1:
        return refute(clause, budget)
    return refute_parallel(clause, budget, workers)


# ---------------------------------------------------------------------------
# SMT-LIB export
# ---------------------------------------------------------------------------

def _sum_sexpr(indices: tuple[int, ...]) -> str:
    if not indices:
        return "0"
    if len(indices) == 1:
        return f"p_{indices[0]}"
    return "(+ " + " ".join(f"p_{i}" for i in indices) + ")"


def _equality_sexpr(eq: ProductEquality) -> str:
    return (f"(= (* {_sum_sexpr(eq.a)} {_sum_sexpr(eq.b)})"
            f" (* {_sum_sexpr(eq.c)} {_sum_sexpr(eq.d)}))")


def export_delta(system: PolySystem) -> str:
    """The system as SMT-LIB 2 text in nonlinear real arithmetic, with
    deterministic unknown names p_0 ... p_{N^n - 1}."""
    lines = [
        "(set-logic QF_NRA)",
        f"; atoms: {system.unknowns} outcomes of {system.n} variables on [{system.domain}]",
    ]
    for i in range(system.unknowns):
        lines.append(f"(declare-const p_{i} Real)")
    for i in range(system.unknowns):
        lines.append(f"(assert (>= p_{i} 0))")
    lines.append(f"(assert (= {_sum_sexpr(tuple(range(system.unknowns)))} 1))")
    for eq in system.antecedent_equalities:
        lines.append(f"(assert {_equality_sexpr(eq)})")
    if system.consequent_equalities:
        negated = " ".join(f"(not {_equality_sexpr(eq)})" for eq in system.consequent_equalities)
        if len(system.consequent_equalities) == 1:
            lines.append(f"(assert {negated})")
        else:
            lines.append(f"(assert (or {negated}))")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"

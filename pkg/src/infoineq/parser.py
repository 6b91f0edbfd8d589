"""Surface syntax for constraints over joint entropies.

The language covers rational linear combinations of entropy terms with
the usual sugar::

    H(XY)            joint entropy of {X, Y}
    H(Y|X)           conditional entropy, desugars to H(XY) - H(X)
    I(Y;Z|X)         conditional mutual information,
                     desugars to H(XY) + H(XZ) - H(XYZ) - H(X)

A constraint is one or more clauses joined by ``&&``.  A clause is either
unconditional::

    E >= F
    max(E1, ..., El) >= F

or conditional::

    [A1, ..., Ak] => E >= F

Antecedents use ``>=``, ``<=`` or ``=``; an equality in antecedent
position expands into the two opposite inequalities.  An equality in the
consequent of a single-consequent clause splits the clause in two; inside
``max(...)`` consequents, equalities are rejected.  Comments start with
``#`` and run to end of line.  Files use the ``.iic`` extension, one
constraint per file.

Variable names inside ``H(...)``/``I(...)`` are whitespace-separated
tokens; a token consisting purely of two or more uppercase letters is
read as juxtaposed single-letter variables (``XYZ`` means X, Y, Z).
Unless an explicit ordering is supplied, variables are numbered in
alphabetical order of their names.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .core import BooleanConstraint, Clause, LinExpr, VarSet


@dataclass(frozen=True)
class SourceSpan:
    """Byte range of a token or error in the original source text."""

    start: int
    end: int
    line: int
    column: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start must not exceed end")


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} (line {span.line}, column {span.column})")
        self.message = message
        self.span = span


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>=>)
  | (?P<and>&&)
  | (?P<ge>>=)
  | (?P<le><=)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()\[\],;|+\-*/=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(pos, pos + 1, line, pos - line_start + 1)
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        tok_text = m.group()
        if kind in ("ws", "comment"):
            line += tok_text.count("\n")
            if "\n" in tok_text:
                line_start = m.start() + tok_text.rfind("\n") + 1
        else:
            span = SourceSpan(m.start(), m.end(), line, m.start() - line_start + 1)
            if kind == "punct":
                kind = tok_text
            tokens.append(Token(kind, tok_text, span))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(len(text), len(text), line, len(text) - line_start + 1)))
    return tokens


def _split_var_token(tok: str) -> list[str]:
    # XYZ -> X, Y, Z; names with lowercase or digits stay atomic
    if len(tok) >= 2 and tok.isalpha() and tok.isupper():
        return list(tok)
    return [tok]


def scan_variables(text: str) -> list[str]:
    """Variable names used in a constraint text, in alphabetical order."""
    names = set()
    tokens = _tokenize(text)
    for i, tok in enumerate(tokens):
        if tok.kind == "name" and tok.text not in ("H", "I", "max"):
            names.update(_split_var_token(tok.text))
        # single-letter H/I used as a variable, e.g. "H(H)" -- follow the
        # function-head rule: H/I followed by "(" is a head, else a variable
        if tok.kind == "name" and tok.text in ("H", "I") and tokens[i + 1].kind != "(":
            names.add(tok.text)
    return sorted(names)


class _Parser:
    def __init__(self, text: str, var_names: list[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.vars = list(var_names)
        self.n = len(var_names)
        if self.n < 1:
            span = SourceSpan(0, 0, 1, 1)
            raise ParseError("constraint mentions no variables", span)
        self.var_index = {name: i for i, name in enumerate(var_names)}

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.span)
        return self.next()

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.peek().span)

    # -- expressions ---------------------------------------------------------

    def parse_varset(self, stop: tuple[str, ...]) -> VarSet:
        mask = 0
        saw = False
        while self.peek().kind == "name":
            for name in _split_var_token(self.next().text):
                idx = self.var_index.get(name)
                if idx is None:
                    raise self.error(f"unknown variable {name!r}")
                mask |= 1 << idx
            saw = True
        if not saw:
            raise self.error("expected variable names")
        if self.peek().kind not in stop:
            raise self.error(f"unexpected token {self.peek().text!r} in variable list")
        return VarSet(mask)

    def parse_rational(self) -> Fraction:
        tok = self.expect("num")
        value = Fraction(int(tok.text))
        if self.peek().kind == "/":
            self.next()
            den = self.expect("num")
            if int(den.text) == 0:
                raise ParseError("zero denominator", den.span)
            value /= int(den.text)
        return value

    def parse_atom(self):
        """One multiplicative atom: a rational, an H/I term, or parens."""
        tok = self.peek()
        if tok.kind == "num":
            return self.parse_rational()
        if tok.kind == "(":
            self.next()
            inner = self.parse_sum()
            self.expect(")")
            return inner
        if tok.kind == "name" and tok.text == "H" and self.tokens[self.pos + 1].kind == "(":
            self.next()
            self.next()
            y = self.parse_varset(stop=("|", ")"))
            given = VarSet(0)
            if self.peek().kind == "|":
                self.next()
                given = self.parse_varset(stop=(")",))
            self.expect(")")
            from .core import cond_entropy
            return cond_entropy(self.n, y, given)
        if tok.kind == "name" and tok.text == "I" and self.tokens[self.pos + 1].kind == "(":
            self.next()
            self.next()
            y = self.parse_varset(stop=(";",))
            self.expect(";")
            z = self.parse_varset(stop=("|", ")"))
            given = VarSet(0)
            if self.peek().kind == "|":
                self.next()
                given = self.parse_varset(stop=(")",))
            self.expect(")")
            from .core import mutual_info
            return mutual_info(self.n, y, z, given)
        raise self.error(f"expected an entropy term or rational, found {tok.text or 'end of input'!r}")

    def parse_term(self):
        """Product of atoms; at most one may be an expression."""
        value = self.parse_atom()
        while True:
            nxt = self.peek()
            explicit = nxt.kind == "*"
            juxtaposed = nxt.kind in ("num", "(") or (
                nxt.kind == "name" and nxt.text in ("H", "I")
                and self.tokens[self.pos + 1].kind == "("
            )
            if explicit:
                self.next()
            elif not juxtaposed:
                break
            rhs = self.parse_atom()
            if isinstance(value, Fraction) and isinstance(rhs, Fraction):
                value = value * rhs
            elif isinstance(value, Fraction):
                value = rhs.scale(value)
            elif isinstance(rhs, Fraction):
                value = value.scale(rhs)
            else:
                raise self.error("product of two entropy expressions is not linear")
        return value

    def parse_sum(self):
        sign = Fraction(1)
        if self.peek().kind in ("+", "-"):
            sign = Fraction(-1) if self.next().kind == "-" else Fraction(1)
        first = self.parse_term()
        if isinstance(first, Fraction):
            total = first * sign
        else:
            total = first.scale(sign)
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            term = self.parse_term()
            if isinstance(total, Fraction) and isinstance(term, Fraction):
                total = total + term if op == "+" else total - term
                continue
            # a literal zero may mix with entropy terms; other constants cannot
            if isinstance(total, Fraction):
                if total != 0:
                    raise self.error("constant terms are not allowed in entropy expressions")
                total = LinExpr.zero(self.n)
            if isinstance(term, Fraction):
                if term != 0:
                    raise self.error("constant terms are not allowed in entropy expressions")
                term = LinExpr.zero(self.n)
            total = total + term if op == "+" else total - term
        return total

    def parse_expr(self) -> LinExpr:
        tok = self.peek()
        value = self.parse_sum()
        if isinstance(value, Fraction):
            if value == 0:
                return LinExpr.zero(self.n)
            raise ParseError("constant terms are not allowed in entropy expressions", tok.span)
        return value

    # -- clauses -------------------------------------------------------------

    def parse_comparison(self) -> tuple[LinExpr, str]:
        """`E op F` as (E - F, op) with op in {>=, <=, =}."""
        lhs = self.parse_expr()
        tok = self.peek()
        if tok.kind not in ("ge", "le", "="):
            raise self.error("expected '>=', '<=' or '='")
        self.next()
        rhs = self.parse_expr()
        return lhs - rhs, tok.kind

    def parse_antecedents(self) -> tuple[LinExpr, ...]:
        self.expect("[")
        antecedents: list[LinExpr] = []
        if self.peek().kind != "]":
            while True:
                expr, op = self.parse_comparison()
                if op == "ge":
                    antecedents.append(expr)
                elif op == "le":
                    antecedents.append(-expr)
                else:
                    antecedents.append(expr)
                    antecedents.append(-expr)
                if self.peek().kind != ",":
                    break
                self.next()
        self.expect("]")
        return tuple(antecedents)

    def parse_clause(self) -> list[Clause]:
        antecedents: tuple[LinExpr, ...] = ()
        if self.peek().kind == "[":
            antecedents = self.parse_antecedents()
            self.expect("arrow")
        tok = self.peek()
        if tok.kind == "name" and tok.text == "max" and self.tokens[self.pos + 1].kind == "(":
            self.next()
            self.next()
            args = [self.parse_expr()]
            while self.peek().kind == ",":
                self.next()
                args.append(self.parse_expr())
            self.expect(")")
            op_tok = self.peek()
            if op_tok.kind == "=" and len(args) > 1:
                raise ParseError("equality is not allowed with a max(...) consequent", op_tok.span)
            if op_tok.kind not in ("ge",):
                raise self.error("expected '>=' after max(...)")
            self.next()
            rhs = self.parse_expr()
            consequents = tuple(a - rhs for a in args)
            return [Clause(self.n, antecedents, consequents)]
        expr, op = self.parse_comparison()
        if op == "ge":
            return [Clause(self.n, antecedents, (expr,))]
        if op == "le":
            return [Clause(self.n, antecedents, (-expr,))]
        # consequent equality: split into the two one-sided clauses
        return [Clause(self.n, antecedents, (expr,)),
                Clause(self.n, antecedents, (-expr,))]

    def parse_constraint(self) -> BooleanConstraint:
        clauses = self.parse_clause()
        while self.peek().kind == "and":
            self.next()
            clauses.extend(self.parse_clause())
        self.expect("eof")
        return BooleanConstraint(self.n, tuple(clauses))


def parse_expr(text: str, var_names: list[str]) -> LinExpr:
    """Parse a single linear entropy expression over the given variables."""
    p = _Parser(text, var_names)
    expr = p.parse_expr()
    p.expect("eof")
    return expr


def parse_constraint(text: str, var_names: "list[str] | None" = None) -> BooleanConstraint:
    """Parse a full constraint; variables inferred alphabetically by default."""
    if var_names is None:
        var_names = scan_variables(text)
    return _Parser(text, var_names).parse_constraint()


def parse_constraint_file(path, var_names: "list[str] | None" = None) -> BooleanConstraint:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_constraint(fh.read(), var_names)


# ---------------------------------------------------------------------------
# Pretty printing
# ---------------------------------------------------------------------------

def default_names(n: int) -> tuple[str, ...]:
    """Single letters for small n (alphabetical, so inference round-trips)."""
    if n <= 3:
        return tuple("XYZ"[:n])
    if n == 4:
        return ("A", "B", "C", "D")
    return tuple(f"X{i + 1}" for i in range(n))


def _mask_label(mask: int, names: tuple[str, ...]) -> str:
    return "".join(names[i] for i in VarSet(mask).indices())


def format_expr(expr: LinExpr, names: "tuple[str, ...] | None" = None) -> str:
    """Canonical text for a LinExpr: plain H-terms, masks in canonical order."""
    if names is None:
        names = default_names(expr.n)
    if expr.is_zero():
        return "0*H(" + _mask_label((1 << expr.n) - 1, names) + ")"
    parts = []
    for mask, coeff in expr.items:
        term = f"H({_mask_label(mask, names)})"
        if coeff == 1:
            text = term
        elif coeff == -1:
            text = f"-{term}"
        else:
            text = f"{coeff}*{term}"
        if not parts:
            parts.append(text)
        elif text.startswith("-"):
            parts.append(f"- {text[1:]}")
        else:
            parts.append(f"+ {text}")
    return " ".join(parts)


def format_clause(clause: Clause, names: "tuple[str, ...] | None" = None) -> str:
    if names is None:
        names = default_names(clause.n)
    head = ""
    if clause.antecedents:
        head = "[" + ", ".join(f"{format_expr(a, names)} >= 0" for a in clause.antecedents) + "] => "
    if len(clause.consequents) == 1:
        return head + f"{format_expr(clause.consequents[0], names)} >= 0"
    return head + "max(" + ", ".join(format_expr(c, names) for c in clause.consequents) + ") >= 0"


def format_constraint(constraint: BooleanConstraint,
                      names: "tuple[str, ...] | None" = None) -> str:
    return " && ".join(format_clause(c, names) for c in constraint.clauses)

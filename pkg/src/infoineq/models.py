"""Non-distribution sources of (almost-)entropic candidates.

Two families:

* modular weight vectors, h(alpha) = sum_{j in alpha} w_j with w_j >= 0 --
  every nonnegative modular function is entropic;
* systems of linear subspaces of GF(q)^d, where h(alpha) is the rank of
  the joint span times log2(q).  These realize the linear subclass of
  group-characterizable vectors and are exact (ranks are integers).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

from .core import EntropicCandidate, LogLinValue, as_fraction

Matrix = tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# Modular vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModularVector:
    """h(alpha) = sum_{j in alpha} w_j for nonnegative rational weights."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if any(w < 0 for w in self.weights):
            raise ValueError("modular weights must be nonnegative")

    @staticmethod
    def make(weights: Sequence) -> "ModularVector":
        return ModularVector(tuple(as_fraction(w) for w in weights))

    @property
    def n(self) -> int:
        return len(self.weights)

    def value(self, mask: int) -> Fraction:
        return sum((w for j, w in enumerate(self.weights) if (mask >> j) & 1), Fraction(0))

    def candidate(self) -> EntropicCandidate:
        values = [LogLinValue.from_rational(self.value(mask)) for mask in range(1 << self.n)]
        return EntropicCandidate(self.n, tuple(values))


def modular(weights: Sequence) -> EntropicCandidate:
    return ModularVector.make(weights).candidate()


def basic_modular(n: int, j: int) -> ModularVector:
    """The 0/1 weight vector concentrated on variable j."""
    return ModularVector.make([1 if i == j else 0 for i in range(n)])


# ---------------------------------------------------------------------------
# GF(q) linear algebra
# ---------------------------------------------------------------------------

def rref_mod(rows: Sequence[Sequence[int]], q: int) -> Matrix:
    """Reduced row echelon form over GF(q); zero rows are dropped."""
    mat = [list(int(x) % q for x in row) for row in rows]
    if not mat:
        return ()
    cols = len(mat[0])
    pivot_row = 0
    for col in range(cols):
        sel = None
        for r in range(pivot_row, len(mat)):
            if mat[r][col] % q != 0:
                sel = r
                break
        if sel is None:
            continue
        mat[pivot_row], mat[sel] = mat[sel], mat[pivot_row]
        inv = pow(mat[pivot_row][col], -1, q)
        mat[pivot_row] = [(x * inv) % q for x in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col] % q != 0:
                factor = mat[r][col]
                mat[r] = [(a - factor * b) % q for a, b in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return tuple(tuple(row) for row in mat[:pivot_row] if any(row))


def rank_mod(rows: Sequence[Sequence[int]], q: int) -> int:
    return len(rref_mod(rows, q))


@dataclass(frozen=True)
class VectorSpaceSystem:
    """n subspaces of GF(q)^d, each given by an independent basis (rows).

    h(alpha) = rank(span of the union of the bases for i in alpha) * log2 q.
    """

    q: int
    dim: int
    bases: tuple[Matrix, ...]

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be a prime >= 2")
        for basis in self.bases:
            for row in basis:
                if len(row) != self.dim:
                    raise ValueError("basis row length must equal the ambient dimension")
            if basis and rank_mod(basis, self.q) != len(basis):
                raise ValueError("basis rows must be linearly independent")

    @staticmethod
    def make(q: int, dim: int, bases: Sequence[Sequence[Sequence[int]]]) -> "VectorSpaceSystem":
        return VectorSpaceSystem(q, dim, tuple(
            tuple(tuple(int(x) % q for x in row) for row in basis) for basis in bases))

    @property
    def n(self) -> int:
        return len(self.bases)

    def joint_rank(self, mask: int) -> int:
        rows: list[Sequence[int]] = []
        for i in range(self.n):
            if (mask >> i) & 1:
                rows.extend(self.bases[i])
        if not rows:
            return 0
        return rank_mod(rows, self.q)

    def candidate(self) -> EntropicCandidate:
        values = []
        for mask in range(1 << self.n):
            r = self.joint_rank(mask)
            if r == 0:
                values.append(LogLinValue.zero())
            else:
                values.append(LogLinValue.of((r, self.q)))
        return EntropicCandidate(self.n, tuple(values))

    def to_file_text(self) -> str:
        lines = [f"{self.q} {self.dim} {self.n}"]
        for basis in self.bases:
            flat = [str(len(basis))]
            for row in basis:
                flat.extend(str(x) for x in row)
            lines.append(" ".join(flat))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_file_text(text: str) -> "VectorSpaceSystem":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        q, dim, n = (int(t) for t in lines[0].split())
        if len(lines) != n + 1:
            raise ValueError(f"expected {n} basis lines, found {len(lines) - 1}")
        bases = []
        for ln in lines[1:]:
            toks = [int(t) for t in ln.split()]
            k, entries = toks[0], toks[1:]
            if len(entries) != k * dim:
                raise ValueError(f"basis line has {len(entries)} entries, expected {k}x{dim}")
            bases.append([entries[r * dim:(r + 1) * dim] for r in range(k)])
        return VectorSpaceSystem.make(q, dim, bases)


def rank_vector(system: VectorSpaceSystem) -> EntropicCandidate:
    return system.candidate()


DEFAULT_SEED = 0


def random_system(rng: random.Random, n: int, q: int, dim: int) -> VectorSpaceSystem:
    """A random subspace system; generator seeds are part of reproducibility."""
    bases = []
    for _ in range(n):
        rows = [[rng.randrange(q) for _ in range(dim)] for _ in range(rng.randrange(dim + 1))]
        bases.append(rref_mod(rows, q))
    return VectorSpaceSystem(q, dim, tuple(bases))


def all_subspaces(q: int, dim: int) -> list[Matrix]:
    """Every subspace of GF(q)^d as its canonical RREF basis, ordered by
    dimension then lexicographically on the basis matrix."""
    out: list[Matrix] = [()]
    vectors = [v for v in product(range(q), repeat=dim) if any(v)]
    for r in range(1, dim + 1):
        found = set()
        for combo in combinations(vectors, r):
            basis = rref_mod(combo, q)
            if len(basis) == r:
                found.add(basis)
        out.extend(sorted(found))
    return out


def enumerate_systems(n: int, primes: Sequence[int], max_dim: int) -> Iterator[VectorSpaceSystem]:
    """Canonical stream of subspace systems: by prime, then ambient
    dimension, then the n-tuple of subspace indices (lexicographic)."""
    for q in primes:
        for dim in range(1, max_dim + 1):
            subs = all_subspaces(q, dim)
            for combo in product(range(len(subs)), repeat=n):
                yield VectorSpaceSystem(q, dim, tuple(subs[i] for i in combo))

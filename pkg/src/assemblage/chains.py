"""Exact minimal addition chains and vectorial addition chains.

Integers under addition form the simplest assembly space: the basis is ``{1}``
and ``z`` splits into ``(x, z - x)``.  The minimal chain length of ``size(x)``
is a lower bound for the assembly index of ``x`` in any space that maps onto
integers by counting basic parts.  Vectors of per-type counts give the
analogous bound for typed bases.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from ._chainkernel import search_chain, search_vector_chain
from .core import AssemblySpace
from .errors import BudgetExceeded, DomainError

DEFAULT_TABLE_LIMIT = 4096
DEFAULT_VECTOR_THRESHOLD = 32
DEFAULT_VECTOR_NODES = 50_000_000

_EMPTY = np.zeros(0, np.int64)


@dataclass(frozen=True)
class AdditionChain:
    terms: tuple[int, ...]

    @property
    def target(self) -> int:
        return self.terms[-1]

    def __len__(self) -> int:
        return len(self.terms) - 1

    def is_valid(self) -> bool:
        if not self.terms or self.terms[0] != 1:
            return False
        seen = {1}
        for i, a in enumerate(self.terms[1:], start=1):
            if a < self.terms[i - 1]:
                return False
            if not any(a - b in seen for b in seen):
                return False
            seen.add(a)
        return len(self) >= math.ceil(math.log2(self.target)) if self.target > 1 else True


@dataclass(frozen=True)
class VectorChain:
    """Vectorial addition chain; the first ``dim`` terms are the unit vectors."""

    dim: int
    terms: tuple[tuple[int, ...], ...]

    @property
    def target(self) -> tuple[int, ...]:
        return self.terms[-1]

    def __len__(self) -> int:
        return len(self.terms) - self.dim

    def is_valid(self) -> bool:
        k = self.dim
        if len(self.terms) < k or any(len(t) != k for t in self.terms):
            return False
        if list(self.terms[:k]) != _units(k):
            return False
        seen = set(self.terms[:k])
        for i, t in enumerate(self.terms[k:], start=k):
            if not any(t):
                return False
            if not any(
                tuple(x - y for x, y in zip(t, s)) in seen for s in self.terms[:i]
            ):
                return False
            seen.add(t)
        return True


@dataclass(frozen=True)
class VectorChainResult:
    """Certified interval for a vector chain length, with a witness of length ``upper``."""

    lower: int
    upper: int
    witness: VectorChain
    nodes_expanded: int = 0

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def length(self) -> int | None:
        return self.upper if self.exact else None


@dataclass(frozen=True)
class ChainTable:
    """Exact minimal chain lengths for ``1..limit`` plus the per-length census."""

    limit: int
    lengths: tuple[int, ...] = field(repr=False)  # lengths[n], lengths[0] unused

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise KeyError(n)
        return self.lengths[n]

    def as_dict(self) -> dict[int, int]:
        return {n: self.lengths[n] for n in range(1, self.limit + 1)}

    @property
    def counts(self) -> dict[int, int]:
        return dict(sorted(Counter(self.lengths[1:]).items()))

    def complete_levels(self) -> int:
        """Largest length ``d`` whose census is complete (all such n satisfy n <= 2**d)."""
        return self.limit.bit_length() - 1

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "chain_length"])
        for n in range(1, self.limit + 1):
            w.writerow([n, self.lengths[n]])
        return buf.getvalue()

    def counts_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["length", "count"])
        for length, count in self.counts.items():
            w.writerow([length, count])
        return buf.getvalue()


def _units(k: int) -> list[tuple[int, ...]]:
    return [tuple(int(i == j) for j in range(k)) for i in range(k)]


def binary_chain(n: int) -> AdditionChain:
    """Left-to-right binary method: ``floor(log2 n) + popcount(n) - 1`` steps."""
    terms = [1]
    for bit in bin(n)[3:]:
        terms.append(terms[-1] * 2)
        if bit == "1":
            terms.append(terms[-1] + 1)
    return AdditionChain(tuple(terms))


def _run_search(n: int, depth: int, known: np.ndarray) -> AdditionChain | None:
    out = np.zeros(depth + 2, np.int64)
    r = search_chain(n, depth, out, known)
    if r < 0:
        return None
    return AdditionChain(tuple(int(x) for x in out[: r + 1]))


@lru_cache(maxsize=4096)
def min_chain_length(n: int) -> tuple[int, AdditionChain]:
    """Exact minimal addition-chain length of ``n`` and an optimal chain."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"addition chains need a positive integer, got {n!r}")
    n = int(n)
    best = binary_chain(n)
    lb = (n - 1).bit_length()
    while len(best) > lb:
        found = _run_search(n, len(best) - 1, _EMPTY)
        if found is None:
            break
        best = found
    return len(best), best


def _table_upper(lengths: np.ndarray, n: int) -> int:
    ub = lengths[n - 1] + 1
    if n % 2 == 0:
        ub = min(ub, lengths[n // 2] + 1)
    d = 2
    while d * d <= n:
        if n % d == 0:
            ub = min(ub, lengths[d] + lengths[n // d])
        d += 1
    return int(ub)


@lru_cache(maxsize=8)
def min_chain_lengths_upto(limit: int = DEFAULT_TABLE_LIMIT, max_seconds: float | None = None) -> ChainTable:
    """Exact table of ``l(n)`` for ``1 <= n <= limit``.

    Each entry starts from the best of ``l(n-1)+1``, ``l(n/2)+1`` and the factor
    method ``l(a)+l(b)``, then tightens by searching one step shorter until the
    search fails.
    """
    if isinstance(limit, bool) or not isinstance(limit, (int, np.integer)) or limit < 1:
        raise DomainError(f"limit must be a positive integer, got {limit!r}")
    start = time.monotonic()
    lengths = np.zeros(limit + 1, np.int64)
    out = np.zeros(64, np.int64)
    for n in range(2, limit + 1):
        ub = _table_upper(lengths, n)
        lb = (n - 1).bit_length()
        while ub > lb:
            r = search_chain(n, ub - 1, out, lengths)
            if r < 0:
                break
            ub = r
        lengths[n] = ub
        if max_seconds is not None and n % 64 == 0 and time.monotonic() - start > max_seconds:
            raise BudgetExceeded(f"chain table stopped at n={n} after {max_seconds}s")
    return ChainTable(limit, tuple(int(x) for x in lengths))


# vectorial chains ---------------------------------------------------------


def _check_vector(v: Sequence[int]) -> tuple[int, ...]:
    try:
        vec = tuple(int(x) for x in v)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"not an integer vector: {v!r}") from exc
    if not vec or any(x < 0 for x in vec) or not any(vec):
        raise DomainError(f"vector chains need a nonzero nonnegative vector, got {list(vec)}")
    return vec


def greedy_vector_chain(v: Sequence[int]) -> VectorChain:
    """Componentwise binary method: halve, double, then add the odd unit vectors."""
    vec = _check_vector(v)
    k = len(vec)
    units = _units(k)
    terms: list[tuple[int, ...]] = list(units)

    def build(w: tuple[int, ...]) -> tuple[int, ...]:
        if max(w) <= 1:
            acc = None
            for i, x in enumerate(w):
                if not x:
                    continue
                if acc is None:
                    acc = units[i]
                else:
                    acc = tuple(a + b for a, b in zip(acc, units[i]))
                    terms.append(acc)
            return acc
        half = tuple(x // 2 for x in w)
        h = build(half) if any(half) else None
        acc = tuple(2 * x for x in h)
        terms.append(acc)
        for i, x in enumerate(w):
            if x % 2:
                acc = tuple(a + b for a, b in zip(acc, units[i]))
                terms.append(acc)
        return acc

    build(vec)
    return VectorChain(k, tuple(terms))


def _vector_lower(vec: tuple[int, ...]) -> int:
    support = sum(1 for x in vec if x)
    return max(min_chain_length(sum(vec))[0], support - 1)


def _vector_search(vec: tuple[int, ...], depth: int, max_nodes: int) -> tuple[VectorChain | None, int, bool]:
    """(chain or None, nodes used, hit the node cap)."""
    k = len(vec)
    out = np.zeros((k + depth + 1, k), np.int64)
    stats = np.zeros(1, np.int64)
    r = search_vector_chain(np.array(vec, np.int64), depth, out, max_nodes, stats)
    if r < 0:
        return None, int(stats[0]), r == -2
    return VectorChain(k, tuple(tuple(int(x) for x in row) for row in out[: k + r])), int(stats[0]), False


def min_vector_chain_length(
    v: Sequence[int],
    exact_threshold: int = DEFAULT_VECTOR_THRESHOLD,
    max_nodes: int = DEFAULT_VECTOR_NODES,
) -> VectorChainResult:
    """Minimal number of non-basis terms in a vectorial addition chain for ``v``.

    Exact (iterative deepening over chains in increasing (sum, vector) order)
    when the component sum is at most ``exact_threshold`` and the node cap is
    not hit; otherwise the certified interval ``[lower, greedy]``.
    """
    return _min_vector_chain(_check_vector(v), exact_threshold, max_nodes)


@lru_cache(maxsize=4096)
def _min_vector_chain(vec: tuple[int, ...], exact_threshold: int, max_nodes: int) -> VectorChainResult:
    k = len(vec)
    if sum(vec) == 1:
        return VectorChainResult(0, 0, VectorChain(k, tuple(_units(k))))
    best = greedy_vector_chain(vec)
    lower = _vector_lower(vec)
    if sum(vec) > exact_threshold or lower == len(best):
        return VectorChainResult(lower, len(best), best)
    nodes = 0
    for depth in range(lower, len(best)):
        found, used, capped = _vector_search(vec, depth, max_nodes - nodes)
        nodes += used
        if capped:
            return VectorChainResult(lower, len(best), best, nodes)
        if found is not None:
            return VectorChainResult(len(found), len(found), found, nodes)
        lower = depth + 1
    return VectorChainResult(len(best), len(best), best, nodes)


def vector_to_scalar_bound(v: Sequence[int]) -> int:
    """Chain length of the component sum; never exceeds the vector chain length."""
    vec = _check_vector(v)
    return min_chain_length(sum(vec))[0]


# the integer and vector spaces themselves --------------------------------


class IntegerSpace(AssemblySpace):
    """Positive integers under addition with basis ``{1}``."""

    name = "integer"

    def basis(self, target):
        return frozenset({1})

    def is_basic(self, x) -> bool:
        return x == 1

    def splits(self, x):
        return [(a, x - a) for a in range(1, x // 2 + 1)]

    def is_split(self, x, a, b) -> bool:
        return a >= 1 and b >= 1 and a + b == x

    def size(self, x) -> int:
        return int(x)

    def canonical(self, x):
        n = int(x)
        if n < 1:
            raise DomainError(f"integer objects are positive, got {x!r}")
        return n

    def parse(self, text: str):
        return self.canonical(int(text))


class VectorSpace(AssemblySpace):
    """Nonzero count vectors of fixed dimension; basis is the unit vectors."""

    name = "vector"
    typed = True

    def __init__(self, dim: int):
        self.dim = dim

    def basis(self, target):
        return frozenset(_units(self.dim))

    def is_basic(self, x) -> bool:
        return sum(x) == 1

    def splits(self, x):
        out = []
        ranges = [range(c + 1) for c in x]
        for a in itertools.product(*ranges):
            b = tuple(p - q for p, q in zip(x, a))
            if any(a) and any(b) and a <= b:
                out.append((a, b))
        return out

    def is_split(self, x, a, b) -> bool:
        return any(a) and any(b) and all(p + q == r for p, q, r in zip(a, b, x))

    def size(self, x) -> int:
        return sum(x)

    def composition(self, x):
        return tuple(x)

    def canonical(self, x):
        return _check_vector(x) if len(x) == self.dim else _bad_dim(x, self.dim)

    def format(self, x) -> str:
        return ",".join(str(c) for c in x)

    def parse(self, text: str):
        return self.canonical(tuple(int(c) for c in text.split(",")))


def _bad_dim(x, dim):
    raise DomainError(f"expected a {dim}-vector, got {x!r}")

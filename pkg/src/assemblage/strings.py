"""One-dimensional strings joined by ordered concatenation."""

from __future__ import annotations

import math
from collections import Counter

from .chains import min_chain_length
from .core import AssemblyMap, AssemblySpace, IndexResult, SearchBudget, assembly_index
from .errors import EmptyTarget, NotConstructible


class StringSpace(AssemblySpace):
    """Strings under concatenation; each distinct symbol is a basic object.

    With ``alphabet=None`` the basis is inferred from whatever target is asked
    about.  Fragments are never reversed.
    """

    name = "string"
    typed = True

    def __init__(self, alphabet: str | None = None):
        self.alphabet = None if alphabet is None else "".join(sorted(set(alphabet)))

    def basis(self, target: str) -> frozenset:
        return frozenset(self.alphabet if self.alphabet is not None else target)

    def is_basic(self, x: str) -> bool:
        return len(x) == 1

    def splits(self, x: str) -> list[tuple[str, str]]:
        return string_splits(x)

    def is_split(self, x: str, a: str, b: str) -> bool:
        return bool(a) and bool(b) and a + b == x

    def size(self, x: str) -> int:
        return len(x)

    def canonical(self, x) -> str:
        return str(x)

    def check_target(self, target):
        x = self.canonical(target)
        if not x:
            raise EmptyTarget("empty string")
        if self.alphabet is not None:
            extra = set(x) - set(self.alphabet)
            if extra:
                raise NotConstructible(f"symbols outside the basis: {''.join(sorted(extra))}")
        return x

    def composition(self, x: str) -> tuple[int, ...]:
        symbols = self.alphabet if self.alphabet is not None else sorted(set(x))
        counts = Counter(x)
        return tuple(counts[c] for c in symbols)

    def object_lower_bound(self, x: str) -> int:
        # every distinct adjacent pair is the junction of some join
        junctions = len({x[i : i + 2] for i in range(len(x) - 1)})
        return max(min_chain_length(len(x))[0], junctions)

    def search_bound(self, closure):
        return RepeatSavingsBound(closure)

    def repeat_candidates(self, closure) -> list[int]:
        # a reused substring occurs at least twice, without overlap, in the target
        t = closure.target_object
        out = []
        for i, s in enumerate(closure.objects):
            if len(s) < 2 or i == closure.target:
                continue
            if t.find(s, t.find(s) + len(s)) >= 0:
                out.append(i)
        return out

    def sort_key(self, x: str):
        return (len(x), x)

    def format(self, x: str) -> str:
        return x

    def parse(self, text: str) -> str:
        return text


class RepeatSavingsBound:
    """Lower bound on the objects still needed to build the pending strings.

    Unfold any pathway into parse trees of the pending strings.  Their
    ``sum(len - 1)`` internal nodes are all new objects except repeats: a node
    whose string is already justified, pending, or built elsewhere in the
    forest.  Maximal repeated nodes are disjoint intervals, so the largest
    possible saving is a weighted interval schedule over substrings that have
    some other source.  Results are cached per (string, eligible substrings).
    """

    def __init__(self, closure):
        objs = closure.objects
        index = closure.index
        n = len(objs)
        self.length = [len(o) for o in objs]
        self.subs = [0] * n  # proper substrings of length >= 2
        self.self_repeat = [0] * n  # those with a disjoint second copy inside
        self.by_end: list = [None] * n
        for p, text in enumerate(objs):
            L = len(text)
            if L < 2:
                continue
            by_end = [[] for _ in range(L + 1)]
            for i in range(L):
                for j in range(i + 2, L + 1):
                    if j - i == L:
                        continue
                    sub = text[i:j]
                    sid = index[sub]
                    by_end[j].append((i, sid, j - i - 1))
                    self.subs[p] |= 1 << sid
                    if text.find(sub, j) >= 0 or text.find(sub, 0, i) >= 0:
                        self.self_repeat[p] |= 1 << sid
            self.by_end[p] = by_end
        self.cache: dict = {}

    def _savings(self, p: int, eligible: int) -> int:
        key = (p, eligible)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        L = self.length[p]
        best = [0] * (L + 1)
        for k in range(1, L + 1):
            b = best[k - 1]
            for i, sid, w in self.by_end[p][k]:
                if eligible >> sid & 1 and best[i] + w > b:
                    b = best[i] + w
            best[k] = b
        if len(self.cache) < 1_000_000:
            self.cache[key] = best[L]
        return best[L]

    def __call__(self, justified: int, pending: int) -> int:
        members = []
        m = pending
        while m:
            low = m & -m
            members.append(low.bit_length() - 1)
            m ^= low
        total = 0
        known = justified | pending
        for p in members:
            elsewhere = known
            for q in members:
                if q != p:
                    elsewhere |= self.subs[q]
            eligible = (self.self_repeat[p] | elsewhere) & self.subs[p]
            total += self.length[p] - 1 - self._savings(p, eligible)
        return total


def string_splits(x: str) -> list[tuple[str, str]]:
    """Every cut point of ``x`` as (prefix, suffix), left to right."""
    return [(x[:i], x[i:]) for i in range(1, len(x))]


def string_assembly_index(text: str, budget: SearchBudget | None = None, threads: int | None = None) -> IndexResult:
    return assembly_index(StringSpace(), text, budget, threads)


def shannon_entropy(text: str) -> float:
    """Symbol-frequency entropy in bits."""
    if not text:
        raise EmptyTarget("entropy of an empty string")
    n = len(text)
    return entropy_from_probabilities(c / n for c in Counter(text).values())


def entropy_from_probabilities(probs) -> float:
    return -sum(p * math.log2(p) for p in probs if p > 0)


def size_map(space: StringSpace):
    """Strings onto integers by length."""
    from .chains import IntegerSpace

    return AssemblyMap(space, IntegerSpace(), len)


def composition_map(alphabet: str):
    """Strings onto per-symbol count vectors over a fixed alphabet."""
    from .chains import VectorSpace

    symbols = "".join(sorted(set(alphabet)))
    return AssemblyMap(
        StringSpace(symbols),
        VectorSpace(len(symbols)),
        lambda s: tuple(s.count(c) for c in symbols),
    )

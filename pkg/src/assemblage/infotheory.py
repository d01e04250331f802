"""Pathway information: how much knowing the exact index narrows down an object.

For a composition (multiset of basic parts) and an index ``x``, ``N`` is the
set of objects with that composition whose index is at most ``x`` and
``N_PA`` those whose index is exactly ``x``.  The information is
``log2(|N| / |N_PA|)`` bits.  Everything is computed by enumerating the
objects and running the exact search on each, so only small compositions are
feasible.
"""

from __future__ import annotations

import csv
import io
import math
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .core import AssemblySpace, SearchBudget, _resolve_threads, assembly_index
from .errors import BudgetExceeded, DomainError, NoSuchIndex
from .strings import StringSpace

DEFAULT_PART_CAP = 12

_SPEC = re.compile(r"(\d+)(\D)")


@dataclass(frozen=True)
class InformationReport:
    pa: int
    n_total: int
    n_at_pa: int
    bits: float

    def to_row(self) -> list:
        return [self.pa, self.n_total, self.n_at_pa, f"{self.bits:.6f}"]


def parse_composition(text: str) -> dict[str, int]:
    """``"6A6B"`` means six ``A`` and six ``B``; a bare symbol counts once."""
    text = text.strip()
    out: Counter = Counter()
    pos = 0
    while pos < len(text):
        m = _SPEC.match(text, pos)
        if m:
            out[m.group(2)] += int(m.group(1))
            pos = m.end()
        elif not text[pos].isdigit():
            out[text[pos]] += 1
            pos += 1
        else:
            raise DomainError(f"cannot parse composition {text!r}")
    if not out or any(v <= 0 for v in out.values()):
        raise DomainError(f"empty composition {text!r}")
    return dict(sorted(out.items()))


def _normalise(composition) -> dict[str, int]:
    if isinstance(composition, str):
        return parse_composition(composition)
    comp = {str(k): int(v) for k, v in dict(composition).items() if int(v) > 0}
    if not comp:
        raise DomainError("empty composition")
    return dict(sorted(comp.items()))


def _arrangements(counts: dict[str, int]):
    """Every distinct string with the given symbol counts, in lexicographic order."""
    symbols = sorted(counts)
    left = dict(counts)
    total = sum(left.values())
    buf: list[str] = []

    def rec():
        if len(buf) == total:
            yield "".join(buf)
            return
        for s in symbols:
            if left[s]:
                left[s] -= 1
                buf.append(s)
                yield from rec()
                buf.pop()
                left[s] += 1

    yield from rec()


def _index_of(args) -> tuple[str, int]:
    text, budget = args
    r = assembly_index(StringSpace(), text, budget)
    if not r.exact:
        raise BudgetExceeded(f"search budget exhausted on {text!r}")
    return text, r.upper


def enumerate_by_index(
    space: AssemblySpace,
    composition,
    part_cap: int = DEFAULT_PART_CAP,
    budget: SearchBudget | None = None,
    threads: int | None = None,
) -> dict[int, frozenset]:
    """Group every object with this composition by its exact index."""
    if not isinstance(space, StringSpace):
        raise NotImplementedError(f"composition enumeration is not available for {space.name} objects")
    counts = _normalise(composition)
    total = sum(counts.values())
    if total > part_cap:
        raise BudgetExceeded(f"{total} parts exceeds the enumeration cap of {part_cap}")
    tasks = [(t, budget) for t in _arrangements(counts)]
    threads = _resolve_threads(threads)
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_index_of, tasks, chunksize=8))
    else:
        results = [_index_of(t) for t in tasks]
    groups: dict[int, set] = {}
    for text, idx in results:
        groups.setdefault(idx, set()).add(text)
    return {k: frozenset(v) for k, v in sorted(groups.items())}


def information_from_groups(groups: dict[int, frozenset], x: int) -> InformationReport:
    n_at = len(groups.get(x, ()))
    if n_at == 0:
        raise NoSuchIndex(f"no object of this composition has index {x}")
    n_total = sum(len(v) for k, v in groups.items() if k <= x)
    return InformationReport(x, n_total, n_at, math.log2(n_total / n_at))


def pathway_information(space: AssemblySpace, composition, x: int, **kwargs) -> InformationReport:
    return information_from_groups(enumerate_by_index(space, composition, **kwargs), x)


def information_table(groups: dict[int, frozenset]) -> list[InformationReport]:
    return [information_from_groups(groups, x) for x in sorted(groups)]


def information_csv(reports: list[InformationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pa", "n_total", "n_at_pa", "bits"])
    for r in reports:
        w.writerow(r.to_row())
    return buf.getvalue()

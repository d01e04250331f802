"""Assembly spaces, pathways and the assembly-index search.

An assembly space is described by how its objects split: ``splits(x)`` lists
every unordered pair ``(a, b)`` whose join is ``x``.  Everything else here
(exact index, split-branched upper bound, map-based lower bounds, pathway
verification) is written against that contract only.

Two exact methods share that contract.  The default works top-down on the
lower closure of the target (all objects reachable from it by repeated
splitting).  A state is a pair of sets:
objects already *justified* by a chosen split, and objects still *pending*.
The largest pending object is always expanded next, so every justified object
is at least as large as anything pending; this is what makes the
remaining-work bound admissible.  Thresholds are raised one at a time
(iterative deepening with a transposition table), so an interrupted search
still certifies ``index >= threshold``.

The second method applies when a space can list which sub-objects might be
reused.  In an optimal pathway every object used only once sits inside a
single-use tree, so the index equals the minimum over reuse sets ``D`` of
``sum(pieces_D(y) - 1 for y in D + [target])``, where ``pieces_D(y)`` is the
fewest parts from ``D`` and the basis that ``y`` splits into.  Branch and
bound decides membership of each candidate, largest first.
"""

from __future__ import annotations

import math
import os
import time
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ._reusekernel import reuse_search
from .errors import BudgetExceeded, EmptyTarget

AssemblyObject = Any


class AssemblySpace(ABC):
    """Contract every assembly space implements.

    ``splits`` must return canonical objects, each unordered pair once, and be
    empty exactly for basic objects.  Sizes add across a split, so joins never
    create cycles.
    """

    name: str = "abstract"
    #: True when ``composition`` returns per-type counts of basic objects.
    typed: bool = False

    @abstractmethod
    def basis(self, target: AssemblyObject) -> frozenset:
        """Basic objects the target can be built from."""

    @abstractmethod
    def is_basic(self, x: AssemblyObject) -> bool: ...

    @abstractmethod
    def splits(self, x: AssemblyObject) -> list[tuple[AssemblyObject, AssemblyObject]]: ...

    @abstractmethod
    def size(self, x: AssemblyObject) -> int: ...

    def canonical(self, x: AssemblyObject) -> AssemblyObject:
        return x

    def is_split(self, x, a, b) -> bool:
        pair = _pair(a, b, self.sort_key)
        return pair in {_pair(p, q, self.sort_key) for p, q in self.splits(x)}

    def composition(self, x: AssemblyObject) -> tuple[int, ...] | None:
        return None

    def search_bound(self, closure: "Closure"):
        """Optional extra bound for the exact search.

        Return ``None`` or a picklable callable ``f(justified, pending)`` giving
        a lower bound on how many objects (pending ones included) must still
        be added, for masks over ``closure.objects``.
        """
        return None

    def repeat_candidates(self, closure: "Closure") -> list[int] | None:
        """Closure indices that could be reused in an optimal pathway, or ``None``.

        A space that can cheaply rule out objects occurring only once in the
        target returns the rest here, which switches the exact search to the
        reuse-set method.
        """
        return None

    def object_lower_bound(self, x: AssemblyObject) -> int:
        """Steps needed to build ``x`` alone; defaults to the chain length of its size."""
        from .chains import min_chain_length

        return min_chain_length(self.size(x))[0]

    def check_target(self, target: AssemblyObject) -> AssemblyObject:
        """Canonicalise and validate a target; raise ``EmptyTarget``/``NotConstructible``."""
        x = self.canonical(target)
        if self.size(x) == 0:
            raise EmptyTarget("target has no basic parts")
        return x

    def sort_key(self, x: AssemblyObject):
        return (self.size(x), self.format(x))

    def format(self, x: AssemblyObject) -> str:
        return str(x)

    def parse(self, text: str) -> AssemblyObject:
        raise NotImplementedError(f"{self.name} objects cannot be parsed from text")


def _pair(a, b, key):
    return (a, b) if key(a) <= key(b) else (b, a)


@dataclass(frozen=True)
class JoinStep:
    left: AssemblyObject
    right: AssemblyObject
    result: AssemblyObject


@dataclass(frozen=True)
class Pathway:
    steps: tuple[JoinStep, ...]
    target: AssemblyObject

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 10_000_000
    max_seconds: float = 60.0


@dataclass(frozen=True)
class IndexResult:
    lower: int
    upper: int
    witness: Pathway | None
    exact: bool
    nodes_expanded: int = 0
    elapsed: float = 0.0

    @property
    def index(self) -> int | None:
        return self.upper if self.exact else None

    def to_json(self, space: AssemblySpace, target: AssemblyObject) -> dict:
        witness = []
        if self.witness is not None:
            witness = [
                {"left": space.format(s.left), "right": space.format(s.right), "result": space.format(s.result)}
                for s in self.witness.steps
            ]
        return {
            "space": space.name,
            "target": space.format(target),
            "index": self.index,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "witness": witness,
            "nodes_expanded": self.nodes_expanded,
            "elapsed_ms": int(round(self.elapsed * 1000)),
        }


@dataclass
class Verdict:
    """Outcome of a pathway check; truthy when the pathway is valid."""

    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


# lower closure ------------------------------------------------------------


@dataclass
class Closure:
    """All objects below a target, indexed in (size, key) order."""

    objects: list
    index: dict
    sizes: list[int]
    splits: list[list[tuple[int, int]]]
    basic_mask: int
    target: int

    @property
    def target_object(self):
        return self.objects[self.target]


def lower_closure(space: AssemblySpace, target: AssemblyObject) -> Closure:
    seen = {target: None}
    raw: dict = {}
    stack = [target]
    while stack:
        x = stack.pop()
        parts = [] if space.is_basic(x) else space.splits(x)
        raw[x] = parts
        for a, b in parts:
            for y in (a, b):
                if y not in seen:
                    seen[y] = None
                    stack.append(y)
    objects = sorted(raw, key=space.sort_key)
    index = {x: i for i, x in enumerate(objects)}
    splits = []
    basic_mask = 0
    for i, x in enumerate(objects):
        if not raw[x]:
            basic_mask |= 1 << i
        # keep the space's operand order (it matters for ordered joins)
        pairs = {}
        for a, b in raw[x]:
            ia, ib = index[a], index[b]
            pairs.setdefault((min(ia, ib), max(ia, ib)), (ia, ib))
        splits.append([pairs[k] for k in sorted(pairs)])
    sizes = [space.size(x) for x in objects]
    return Closure(objects, index, sizes, splits, basic_mask, index[target])


def _pathway_from_choices(closure: Closure, choices: dict[int, tuple[int, int]]) -> Pathway:
    objs = closure.objects
    steps = tuple(JoinStep(objs[a], objs[b], objs[u]) for u, (a, b) in sorted(choices.items()))
    return Pathway(steps, closure.target_object)


# split-branched upper bound -----------------------------------------------


def _split_branched(closure: Closure) -> tuple[int, dict[int, tuple[int, int]]]:
    value: dict[int, int] = {}
    choice: dict[int, tuple[int, int]] = {}
    for u in range(len(closure.objects)):
        if closure.basic_mask >> u & 1:
            value[u] = 0
            continue
        best = None
        for a, b in closure.splits[u]:
            cost = value[a] + 1 if a == b else value[a] + value[b] + 1
            if best is None or cost < best:
                best = cost
                choice[u] = (a, b)
        value[u] = best
    used: dict[int, tuple[int, int]] = {}
    stack = [closure.target]
    while stack:
        u = stack.pop()
        if u in used or closure.basic_mask >> u & 1:
            continue
        used[u] = choice[u]
        stack.extend(choice[u])
    return value[closure.target], used


def split_branched_index(space: AssemblySpace, target: AssemblyObject) -> tuple[int, Pathway]:
    """Upper bound from recursive two-way partitions sharing only identical halves.

    Two identical halves cost one build plus one join; distinct halves are
    costed independently.  The returned witness merges repeated sub-objects, so
    its length can fall below the bound.
    """
    x = space.check_target(target)
    closure = lower_closure(space, x)
    value, used = _split_branched(closure)
    return value, _pathway_from_choices(closure, used)


# bounds -------------------------------------------------------------------


def naive_upper_bound(space: AssemblySpace, target: AssemblyObject) -> int:
    """Length of the one-basic-object-at-a-time pathway."""
    x = space.check_target(target)
    return space.size(x) - 1


def lower_bound_by_map(space: AssemblySpace, target: AssemblyObject) -> int:
    """Best lower bound from mapping to integers (size) and, if typed, to count vectors."""
    from .chains import min_chain_length, min_vector_chain_length

    x = space.check_target(target)
    bound = min_chain_length(space.size(x))[0]
    if space.typed:
        comp = space.composition(x)
        if comp is not None and any(comp):
            bound = max(bound, min_vector_chain_length(sorted(comp, reverse=True)).lower)
    return bound


# verification -------------------------------------------------------------


def verify_pathway(space: AssemblySpace, p: Pathway) -> Verdict:
    """Check topological order, legal splits, distinct results and the final target."""
    try:
        target = space.canonical(p.target)
    except Exception as exc:  # malformed object from ingestion
        return Verdict(False, f"target is not a valid object: {exc}")
    built = set()
    for i, step in enumerate(p.steps):
        try:
            left, right, result = (space.canonical(o) for o in (step.left, step.right, step.result))
        except Exception as exc:
            return Verdict(False, f"step {i}: invalid object: {exc}")
        if space.size(left) + space.size(right) != space.size(result):
            return Verdict(False, f"step {i}: sizes {space.size(left)}+{space.size(right)} != {space.size(result)}")
        for operand in (left, right):
            if not (space.is_basic(operand) or operand in built):
                return Verdict(False, f"step {i}: operand {space.format(operand)} not yet built")
        if not space.is_split(result, left, right):
            return Verdict(False, f"step {i}: {space.format(left)} + {space.format(right)} does not yield {space.format(result)}")
        if result in built:
            return Verdict(False, f"step {i}: {space.format(result)} built twice")
        built.add(result)
    if not p.steps:
        if space.is_basic(target):
            return Verdict(True)
        return Verdict(False, "empty pathway for a non-basic target")
    if space.canonical(p.steps[-1].result) != target:
        return Verdict(False, "last step does not produce the target")
    return Verdict(True)


@dataclass(frozen=True)
class AssemblyMap:
    """Object map between two spaces; ``check_assembly_map`` tests it on join steps."""

    source: AssemblySpace
    target: AssemblySpace
    func: Callable[[AssemblyObject], AssemblyObject]

    def __call__(self, x):
        return self.func(x)


def check_assembly_map(f: AssemblyMap, samples: Iterable[JoinStep]) -> bool:
    """True iff every sampled join maps to a legal join in the target space."""
    for step in samples:
        fa, fb, fx = f(step.left), f(step.right), f(step.result)
        if f.target.is_basic(fx) or not f.target.is_split(fx, fa, fb):
            return False
    return True


# exact search -------------------------------------------------------------


class _Stop(Exception):
    pass


@dataclass
class _Searcher:
    """Picklable search state over one closure."""

    splits: list
    sizes: list
    olb: list
    basic_mask: int
    target: int
    max_nodes: int
    deadline: float
    extra: Any = None
    same_size_mask: dict = field(default_factory=dict)
    below_mask: dict = field(default_factory=dict)
    nodes: int = 0
    table: dict = field(default_factory=dict)
    table_cap: int = 2_000_000

    def __post_init__(self):
        for i, s in enumerate(self.sizes):
            self.same_size_mask[s] = self.same_size_mask.get(s, 0) | (1 << i)
        acc = 0
        for s in sorted(self.same_size_mask):
            self.below_mask[s] = acc
            acc |= self.same_size_mask[s]

    def bound(self, justified: int, pending: int, u: int) -> int:
        s = self.sizes[u]
        same = (pending & self.same_size_mask[s]).bit_count()
        below = (pending & self.below_mask[s]).bit_count()
        return justified.bit_count() + same + max(self.olb[u] - 1, below)

    def branches(self, justified: int, pending: int):
        u = pending.bit_length() - 1
        have = justified | pending | self.basic_mask
        ubit = 1 << u
        out = []
        for a, b in self.splits[u]:
            new = ((1 << a) | (1 << b)) & ~have
            if new == 0:
                return u, [(a, b, 0)]
            out.append((a, b, new))
        out.sort(key=lambda t: (t[2].bit_count(), -max(t[0], t[1]), t))
        return u, out

    def dfs(self, justified: int, pending: int, threshold: int):
        self.nodes += 1
        if self.nodes > self.max_nodes or (self.nodes & 1023 == 0 and time.monotonic() > self.deadline):
            raise _Stop
        if pending == 0:
            return []
        u = pending.bit_length() - 1
        if self.bound(justified, pending, u) > threshold:
            return None
        key = (justified, pending)
        if self.table.get(key, -1) >= threshold:
            return None
        if self.extra is not None and justified.bit_count() + self.extra(justified, pending) > threshold:
            if len(self.table) < self.table_cap:
                self.table[key] = threshold
            return None
        ubit = 1 << u
        _, options = self.branches(justified, pending)
        for a, b, new in options:
            found = self.dfs(justified | ubit, (pending & ~ubit) | new, threshold)
            if found is not None:
                found.append((u, a, b))
                return found
        if len(self.table) < self.table_cap:
            self.table[key] = threshold
        return None

    def run_branch(self, threshold: int, branch: tuple[int, int, int]):
        u = self.target
        a, b, new = branch
        try:
            found = self.dfs(1 << u, new, threshold)
        except _Stop:
            return "stop", self.nodes
        if found is not None:
            found.append((u, a, b))
        return found, self.nodes


def _run_branch_task(args):
    searcher, threshold, branch = args
    return searcher.run_branch(threshold, branch)


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("ASSEMBLAGE_THREADS", "1") or 1)
    return max(1, threads)


def assembly_index(
    space: AssemblySpace,
    target: AssemblyObject,
    budget: SearchBudget | None = None,
    threads: int | None = None,
) -> IndexResult:
    """Exact assembly index by branch-and-bound over the target's lower closure.

    On budget exhaustion the result is the certified interval
    ``[threshold reached, best pathway found]`` with ``exact=False``.
    """
    budget = budget or SearchBudget()
    start = time.monotonic()
    x = space.check_target(target)
    if space.is_basic(x):
        return IndexResult(0, 0, Pathway((), x), True, 0, time.monotonic() - start)

    closure = lower_closure(space, x)
    _, used = _split_branched(closure)
    best_path = _pathway_from_choices(closure, used)
    upper = len(best_path)
    olb = [0 if closure.basic_mask >> i & 1 else space.object_lower_bound(o) for i, o in enumerate(closure.objects)]
    lower = max(lower_bound_by_map(space, x), olb[closure.target])
    extra = space.search_bound(closure)
    if extra is not None:
        lower = max(lower, extra(0, 1 << closure.target))

    candidates = space.repeat_candidates(closure)
    if candidates is not None:
        return _reuse_set_search(closure, candidates, lower, best_path, budget, start)

    searcher = _Searcher(
        closure.splits,
        closure.sizes,
        olb,
        closure.basic_mask,
        closure.target,
        budget.max_nodes,
        start + budget.max_seconds,
        extra,
    )
    threads = _resolve_threads(threads)
    nodes = 0
    threshold = lower
    exhausted = False
    while threshold < upper:
        if threads > 1:
            found, used_nodes, stopped = _parallel_round(searcher, threshold, threads)
            nodes += used_nodes
        else:
            try:
                found = searcher.dfs(0, 1 << closure.target, threshold)
                stopped = False
            except _Stop:
                found, stopped = None, True
            nodes = searcher.nodes
        if stopped:
            exhausted = True
            break
        if found is not None:
            choices = {u: (a, b) for u, a, b in found}
            best_path = _pathway_from_choices(closure, choices)
            upper = len(best_path)
            break
        threshold += 1

    elapsed = time.monotonic() - start
    if exhausted:
        return IndexResult(threshold, upper, best_path, False, nodes, elapsed)
    return IndexResult(upper, upper, best_path, True, nodes, elapsed)


def _parallel_round(searcher: _Searcher, threshold: int, threads: int):
    """Explore root branches in worker processes; first success in branch order wins."""
    t = searcher.target
    root_bound = searcher.bound(0, 1 << t, t)
    if root_bound > threshold:
        return None, 1, False
    _, options = searcher.branches(0, 1 << t)
    tasks = [(searcher, threshold, opt) for opt in options]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(_run_branch_task, tasks))
    nodes = 1 + sum(n for _, n in results)
    stopped = any(r == "stop" for r, _ in results)
    for r, _ in results:
        if r not in (None, "stop"):
            return r, nodes, False
    return None, nodes, stopped


# reuse-set search ---------------------------------------------------------


class _ReuseSet:
    """Branch-and-bound over which objects are built once and reused as parts.

    The index is the minimum over reuse sets ``D`` of the piece counts (minus
    one) needed to split the target and each member of ``D`` into basic
    objects and other members.  The compiled kernel charges every undecided
    piece a share of its own cost, spread over the most copies it can have in
    the counted objects, which keeps the bound admissible.
    """

    SLICE = 20_000

    def __init__(self, closure: Closure, candidates: list[int], max_nodes: int, deadline: float):
        self.closure = closure
        self.n = n = len(closure.objects)
        self.cands = sorted(candidates, key=lambda i: (-closure.sizes[i], i))
        self.max_nodes = max_nodes
        self.deadline = deadline
        self.nodes = 0
        self.best = [None, None]
        self.basic = np.array([closure.basic_mask >> i & 1 for i in range(n)], dtype=np.uint8)
        counts = [len(sp) for sp in closure.splits]
        self.off = np.zeros(n + 1, dtype=np.int64)
        self.off[1:] = np.cumsum(counts)
        self.sa = np.array([a for sp in closure.splits for a, _ in sp], dtype=np.int64)
        self.sb = np.array([b for sp in closure.splits for _, b in sp], dtype=np.int64)
        self.candpos = np.full(n, -1, dtype=np.int64)
        # most copies of each candidate usable as pieces in any split tree of each object
        self.uses = np.zeros((len(self.cands), n), dtype=np.int64)
        for row, c in enumerate(self.cands):
            self.candpos[c] = row
            occ = self.uses[row]
            occ[c] = 1
            for i in range(c + 1, n):
                if closure.sizes[i] > closure.sizes[c]:
                    occ[i] = max((occ[a] + occ[b] for a, b in closure.splits[i]), default=0)

    def evaluate(self, avail: int, counted: int):
        """Cost of building the target and every ``counted`` object when ``avail`` objects are free parts."""
        cl = self.closure
        root = [0] * self.n
        piece = [1] * self.n
        choice = [None] * self.n
        for i in range(self.n):
            if cl.basic_mask >> i & 1:
                continue
            best = None
            for a, b in cl.splits[i]:
                v = piece[a] + piece[b]
                if best is None or v < best:
                    best = v
                    choice[i] = (a, b)
            root[i] = best
            if not avail >> i & 1:
                piece[i] = best
        total = root[cl.target] - 1
        m = counted
        while m:
            low = m & -m
            total += root[low.bit_length() - 1] - 1
            m ^= low
        return total, choice

    def run(self, lower: int, upper: int):
        """Best reuse set with cost below ``upper``; ``None`` if there is none."""
        n, K = self.n, len(self.cands)
        status = np.zeros(n, dtype=np.int8)
        for c in self.cands:
            status[c] = 2
        frame = np.zeros(K + 1, dtype=np.int8)
        regs = np.array([0, upper, 0, 0], dtype=np.int64)
        out = np.zeros(n, dtype=np.uint8)
        cands = np.array(self.cands, dtype=np.int64)
        self.best = [upper, None]
        while True:
            budget_left = self.max_nodes - int(regs[2])
            if budget_left <= 0 or time.monotonic() > self.deadline:
                self._record(regs, out, upper)
                raise _Stop
            done = reuse_search(
                self.basic, self.off, self.sa, self.sb, self.closure.target, cands, self.candpos,
                self.uses, lower, status, frame, regs, out, min(self.SLICE, budget_left),
            )
            if done:
                break
        self._record(regs, out, upper)
        return self.best[1]

    def _record(self, regs, out, upper: int) -> None:
        self.nodes = int(regs[2])
        if regs[1] < upper:
            reuse = 0
            for i in range(self.n):
                if out[i]:
                    reuse |= 1 << i
            self.best = [int(regs[1]), reuse]

    def pathway(self, reuse: int) -> Pathway:
        cl = self.closure
        _, choice = self.evaluate(reuse, reuse)
        built: dict[int, tuple[int, int]] = {}
        order: list[int] = []

        def build(i: int, top: bool) -> None:
            if cl.basic_mask >> i & 1 or i in built:
                return
            if not top and reuse >> i & 1:
                build(i, True)
                return
            a, b = choice[i]
            build(a, False)
            build(b, False)
            if i not in built:
                built[i] = (a, b)
                order.append(i)

        for i in sorted(_bits(reuse)):
            build(i, True)
        build(cl.target, True)
        objs = cl.objects
        steps = tuple(JoinStep(objs[built[u][0]], objs[built[u][1]], objs[u]) for u in order)
        return Pathway(steps, cl.target_object)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _reuse_set_search(closure, candidates, lower, best_path, budget, start) -> IndexResult:
    upper = len(best_path)
    if lower >= upper:
        return IndexResult(upper, upper, best_path, True, 0, time.monotonic() - start)
    search = _ReuseSet(closure, candidates, budget.max_nodes, start + budget.max_seconds)
    try:
        reuse = search.run(lower, upper)
    except _Stop:
        if search.best[1] is not None:
            best_path = search.pathway(search.best[1])
        return IndexResult(lower, len(best_path), best_path, False, search.nodes, time.monotonic() - start)
    if reuse is not None:
        best_path = search.pathway(reuse)
    n = len(best_path)
    return IndexResult(n, n, best_path, True, search.nodes, time.monotonic() - start)

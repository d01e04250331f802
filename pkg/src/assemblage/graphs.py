"""Connected graphs built vertex by vertex.

The basis is a single vertex (one per colour when vertices are coloured).
Joining two graphs adds at least one edge between them, so a split of ``g``
is a bipartition of its vertices into two induced connected subgraphs.  The
crossing edges are read off ``g`` itself; joins are never synthesised
bottom-up.

Objects are stored in canonical form: colour refinement followed by
individualisation of the first non-singleton cell, keeping the smallest code
over all leaves.  This is exact, not a hash.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .chains import min_chain_length, min_vector_chain_length
from .core import AssemblySpace, IndexResult, SearchBudget, assembly_index
from .errors import DomainError, EmptyTarget, TooLarge

DEFAULT_VERTEX_CAP = 8


@dataclass(frozen=True, order=True)
class GraphObject:
    """Vertices ``0..n-1`` with colour labels ('' when uncoloured) and sorted edges ``u < v``."""

    n: int
    colors: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def build(cls, n: int, edges, colors=None) -> "GraphObject":
        colors = tuple(str(c) for c in colors) if colors is not None else ("",) * n
        if len(colors) != n:
            raise DomainError(f"{len(colors)} colours for {n} vertices")
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge {u}-{v} outside 0..{n - 1}")
            es.add((min(u, v), max(u, v)))
        return cls(n, colors, tuple(sorted(es)))

    def adjacency(self) -> list[int]:
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj

    def induced(self, vertices) -> "GraphObject":
        vs = sorted(vertices)
        relabel = {v: i for i, v in enumerate(vs)}
        edges = [(relabel[u], relabel[v]) for u, v in self.edges if u in relabel and v in relabel]
        return GraphObject.build(len(vs), edges, [self.colors[v] for v in vs])

    def relabeled(self, order) -> "GraphObject":
        """Vertex ``order[i]`` becomes vertex ``i``."""
        pos = {v: i for i, v in enumerate(order)}
        return GraphObject.build(self.n, [(pos[u], pos[v]) for u, v in self.edges], [self.colors[v] for v in order])

    def is_connected(self) -> bool:
        return self.n > 0 and _connected_mask(self.adjacency(), (1 << self.n) - 1)

    def __str__(self) -> str:
        text = f"{self.n}:" + ",".join(f"{u}-{v}" for u, v in self.edges)
        if any(self.colors):
            text += ":" + ",".join(self.colors)
        return text


def _connected_mask(adj: list[int], mask: int) -> bool:
    if mask == 0:
        return False
    seen = mask & -mask
    frontier = seen
    while frontier:
        grow = 0
        m = frontier
        while m:
            low = m & -m
            grow |= adj[low.bit_length() - 1]
            m ^= low
        frontier = grow & mask & ~seen
        seen |= frontier
    return seen == mask


# canonical labelling -------------------------------------------------------


def _refine(adj: list[int], cells: list[list[int]]) -> list[list[int]]:
    """Split cells by neighbour counts into each cell until stable (order is deterministic)."""
    while True:
        masks = [sum(1 << v for v in cell) for cell in cells]
        new = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new.append(cell)
                continue
            sig = {v: tuple((adj[v] & m).bit_count() for m in masks) for v in cell}
            groups: dict = {}
            for v in cell:
                groups.setdefault(sig[v], []).append(v)
            if len(groups) > 1:
                changed = True
            for key in sorted(groups):
                new.append(groups[key])
        cells = new
        if not changed:
            return cells


def canonical_form(g: GraphObject) -> GraphObject:
    """Smallest relabelled graph over the refinement search tree."""
    if g.n <= 1:
        return g
    adj = g.adjacency()
    by_color: dict = {}
    for v in range(g.n):
        by_color.setdefault(g.colors[v], []).append(v)
    start = _refine(adj, [by_color[c] for c in sorted(by_color)])
    best = None

    def search(cells):
        nonlocal best
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            cand = g.relabeled([c[0] for c in cells])
            if best is None or cand < best:
                best = cand
            return
        tried = []
        for v in cells[target]:
            # swapping twins is an automorphism, so their subtrees coincide
            if any(adj[u] & ~(1 << v) == adj[v] & ~(1 << u) for u in tried):
                continue
            tried.append(v)
            rest = [u for u in cells[target] if u != v]
            split = cells[:target] + [[v], rest] + cells[target + 1 :]
            search(_refine(adj, split))

    search(start)
    return best


def are_isomorphic(g: GraphObject, h: GraphObject) -> bool:
    return canonical_form(g) == canonical_form(h)


# text formats --------------------------------------------------------------


def parse_edge_list(text: str) -> GraphObject:
    """Lines ``u v`` (edge), ``c <vertex> <color>`` (colour) or ``v`` (lone vertex); ``#`` comments.

    Vertex labels are nonnegative integers; they are compacted to ``0..n-1``
    in increasing order.
    """
    edges = []
    colors = {}
    vertices = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "c":
                if len(parts) != 3:
                    raise ValueError
                v = _vertex(parts[1])
                colors[v] = parts[2]
                vertices.add(v)
            elif len(parts) == 2:
                u, v = _vertex(parts[0]), _vertex(parts[1])
                edges.append((u, v))
                vertices.update((u, v))
            elif len(parts) == 1:
                vertices.add(_vertex(parts[0]))
            else:
                raise ValueError
        except ValueError:
            raise DomainError(f"line {lineno}: cannot parse {raw!r}") from None
    order = sorted(vertices)
    pos = {v: i for i, v in enumerate(order)}
    return GraphObject.build(
        len(order),
        [(pos[u], pos[v]) for u, v in edges],
        [colors.get(v, "") for v in order],
    )


def _vertex(token: str) -> int:
    v = int(token)
    if v < 0:
        raise ValueError
    return v


def write_edge_list(g: GraphObject) -> str:
    lines = [f"{u} {v}" for u, v in g.edges]
    lines += [f"c {v} {c}" for v, c in enumerate(g.colors) if c]
    if g.n == 1 and not g.colors[0]:
        lines.append("0")
    return "".join(line + "\n" for line in lines)


def parse_compact(text: str) -> GraphObject:
    """Inverse of ``str(GraphObject)``: ``n:u-v,...[:c0,c1,...]``."""
    try:
        fields = text.strip().split(":")
        n = int(fields[0])
        edges = [tuple(int(x) for x in e.split("-")) for e in fields[1].split(",") if e] if len(fields) > 1 else []
        colors = fields[2].split(",") if len(fields) > 2 else None
    except (ValueError, IndexError):
        raise DomainError(f"cannot parse graph {text!r}") from None
    return GraphObject.build(n, edges, colors)


# the space -----------------------------------------------------------------


class GraphSpace(AssemblySpace):
    """Vertex-basic graph space.

    ``connected=True`` (the default) requires every object to be connected and
    every join to add at least one edge.  ``connected=False`` drops both
    requirements; its index is never larger.
    """

    name = "graph"
    typed = True

    def __init__(self, connected: bool = True, edge_basic: bool = False):
        if edge_basic:
            raise NotImplementedError("edge-basic graph spaces are not supported")
        self.connected = connected

    def canonical(self, x) -> GraphObject:
        if isinstance(x, str):
            x = parse_compact(x) if ":" in x else parse_edge_list(x)
        return canonical_form(x)

    def check_target(self, target) -> GraphObject:
        g = self.canonical(target)
        if g.n == 0:
            raise EmptyTarget("graph has no vertices")
        if self.connected and not g.is_connected():
            raise DomainError("graph is not connected")
        return g

    def basis(self, target) -> frozenset:
        g = self.canonical(target)
        return frozenset(GraphObject(1, (c,), ()) for c in set(g.colors))

    def is_basic(self, x: GraphObject) -> bool:
        return x.n == 1

    def splits(self, x: GraphObject):
        return graph_splits(x, self.connected)

    def size(self, x: GraphObject) -> int:
        return x.n

    def composition(self, x: GraphObject):
        counts = Counter(x.colors)
        return tuple(counts[c] for c in sorted(counts))

    def sort_key(self, x: GraphObject):
        return (x.n, len(x.edges), x)

    def format(self, x: GraphObject) -> str:
        return str(x)

    def parse(self, text: str) -> GraphObject:
        return self.canonical(text)


def graph_splits(g: GraphObject, connected: bool = True) -> list[tuple[GraphObject, GraphObject]]:
    """Vertex bipartitions into (canonical) induced subgraphs, each unordered pair once.

    With ``connected`` both parts must be connected and at least one edge must
    cross; otherwise every bipartition counts.
    """
    if g.n < 2:
        return []
    adj = g.adjacency()
    full = (1 << g.n) - 1
    seen = set()
    out = []
    # vertex 0 always on the first side, so each bipartition appears once
    for mask in range(1, full, 2):
        rest = full & ~mask
        if connected:
            if not (_connected_mask(adj, mask) and _connected_mask(adj, rest)):
                continue
            if not any(adj[v] & rest for v in range(g.n) if mask >> v & 1):
                continue
        a = canonical_form(g.induced(v for v in range(g.n) if mask >> v & 1))
        b = canonical_form(g.induced(v for v in range(g.n) if rest >> v & 1))
        pair = (a, b) if (a.n, a) <= (b.n, b) else (b, a)
        if pair not in seen:
            seen.add(pair)
            out.append(pair)
    return out


def graph_bounds(g: GraphObject) -> tuple[int, int]:
    """``(lower, upper)`` without search: chain and colour-vector bounds, and ``n - 1``."""
    lower = min_chain_length(g.n)[0]
    comp = [c for c in Counter(g.colors).values()]
    if len(comp) > 1:
        lower = max(lower, min_vector_chain_length(sorted(comp, reverse=True)).lower)
    return lower, g.n - 1


def graph_assembly_index(
    g,
    budget: SearchBudget | None = None,
    threads: int | None = None,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
    connected: bool = True,
) -> IndexResult:
    """Exact index up to ``vertex_cap`` vertices.

    Larger graphs raise ``TooLarge``; its ``result`` attribute carries the
    bounds-only interval.
    """
    space = GraphSpace(connected)
    x = space.check_target(g)
    if x.n > vertex_cap:
        lower, upper = graph_bounds(x)
        err = TooLarge(f"{x.n} vertices exceeds the cap of {vertex_cap}")
        err.result = IndexResult(lower, upper, None, lower == upper)
        raise err
    return assembly_index(space, x, budget, threads)

"""Two-dimensional pixel assemblages.

An assemblage is a 4-connected set of coloured unit cells.  Two assemblages
join when placed at the offset that realises the result, touching along at
least one edge; read top-down, a split is any bipartition of the cells into
two 4-connected parts.  Optionally the four rotations of a shape are treated
as the same object.  Reflections never are.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .chains import min_chain_length, min_vector_chain_length
from .core import AssemblySpace, IndexResult, SearchBudget, assembly_index
from .errors import DomainError, EmptyTarget

EMPTY = "."

Cell = tuple[int, int, str]


@dataclass(frozen=True, order=True)
class Assemblage:
    """Cells as sorted ``(row, col, colour)`` triples, translated to the origin."""

    cells: tuple[Cell, ...]

    @classmethod
    def from_cells(cls, cells) -> "Assemblage":
        cells = list(cells)
        if not cells:
            return cls(())
        r0 = min(r for r, _, _ in cells)
        c0 = min(c for _, c, _ in cells)
        return cls(tuple(sorted((r - r0, c - c0, str(k)) for r, c, k in cells)))

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def shape(self) -> tuple[int, int]:
        if not self.cells:
            return (0, 0)
        return (max(r for r, _, _ in self.cells) + 1, max(c for _, c, _ in self.cells) + 1)

    def rotated(self) -> "Assemblage":
        """Quarter turn clockwise."""
        return Assemblage.from_cells((c, -r, k) for r, c, k in self.cells)

    def rows(self) -> list[str]:
        h, w = self.shape
        grid = [[EMPTY] * w for _ in range(h)]
        for r, c, k in self.cells:
            grid[r][c] = k
        return ["".join(row) for row in grid]

    def to_text(self) -> str:
        return "".join(row + "\n" for row in self.rows())

    def __str__(self) -> str:
        return "/".join(self.rows())


def parse_grid(text: str) -> Assemblage:
    """Read rows separated by newlines (or ``/``); ``.`` marks an empty position.

    A trailing newline is optional.  Leading empty rows and columns are
    dropped by translation normalisation.
    """
    if "\n" not in text and "/" in text:
        lines = text.split("/")
    else:
        lines = text.splitlines()
    cells = []
    for r, line in enumerate(lines):
        for c, ch in enumerate(line.rstrip("\r")):
            if ch == EMPTY or ch.isspace():
                continue
            cells.append((r, c, ch))
    return Assemblage.from_cells(cells)


def write_grid(x: Assemblage) -> str:
    return x.to_text()


def rotations(x: Assemblage) -> list[Assemblage]:
    out = [x]
    for _ in range(3):
        out.append(out[-1].rotated())
    return out


def is_connected(cells) -> bool:
    cells = {(r, c) for r, c, *_ in cells}
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        r, c = stack.pop()
        for nb in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


def _connected_bipartitions(cells: tuple[Cell, ...]):
    """Yield (part, complement) index masks with both parts connected; cell 0 is always in ``part``."""
    n = len(cells)
    pos = {(r, c): i for i, (r, c, _) in enumerate(cells)}
    adj = [0] * n
    for i, (r, c, _) in enumerate(cells):
        for nb in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
            j = pos.get(nb)
            if j is not None:
                adj[i] |= 1 << j
    full = (1 << n) - 1

    def connected(mask: int) -> bool:
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

    # grow connected sets containing cell 0, each exactly once
    found = set()
    stack = [1]
    while stack:
        mask = stack.pop()
        if mask in found or mask == full:
            continue
        found.add(mask)
        rest = full & ~mask
        if connected(rest):
            yield mask, rest
        m = mask
        border = 0
        while m:
            low = m & -m
            border |= adj[low.bit_length() - 1]
            m ^= low
        border &= rest
        while border:
            low = border & -border
            stack.append(mask | low)
            border ^= low


class GridSpace(AssemblySpace):
    """Connected coloured-cell assemblages; single cells of each colour are basic."""

    name = "grid"
    typed = True

    def __init__(self, rotation_equivalence: bool = False, palette: str | None = None):
        self.rotation_equivalence = rotation_equivalence
        self.palette = None if palette is None else "".join(sorted(set(palette)))

    def canonical(self, x) -> Assemblage:
        if isinstance(x, str):
            x = parse_grid(x)
        elif not isinstance(x, Assemblage):
            x = Assemblage.from_cells(x)
        else:
            x = Assemblage.from_cells(x.cells)
        if len(set((r, c) for r, c, _ in x.cells)) != len(x.cells):
            raise DomainError("two cells share a position")
        if self.rotation_equivalence:
            return min(rotations(x))
        return x

    def check_target(self, target) -> Assemblage:
        x = self.canonical(target)
        if not x.cells:
            raise EmptyTarget("assemblage has no cells")
        if not is_connected(x.cells):
            raise DomainError("assemblage is not 4-connected")
        if self.palette is not None:
            extra = {k for _, _, k in x.cells} - set(self.palette)
            if extra:
                from .errors import NotConstructible

                raise NotConstructible(f"colours outside the palette: {''.join(sorted(extra))}")
        return x

    def basis(self, target) -> frozenset:
        colours = self.palette or {k for _, _, k in self.canonical(target).cells}
        return frozenset(Assemblage(((0, 0, k),)) for k in colours)

    def is_basic(self, x: Assemblage) -> bool:
        return len(x.cells) == 1

    def splits(self, x: Assemblage) -> list[tuple[Assemblage, Assemblage]]:
        return grid_splits(x, self.rotation_equivalence)

    def size(self, x: Assemblage) -> int:
        return len(x.cells)

    def composition(self, x: Assemblage) -> tuple[int, ...]:
        counts = Counter(k for _, _, k in x.cells)
        keys = self.palette if self.palette is not None else sorted(counts)
        return tuple(counts[k] for k in keys)

    def sort_key(self, x: Assemblage):
        return (len(x.cells), x.cells)

    def format(self, x: Assemblage) -> str:
        return str(x)

    def parse(self, text: str) -> Assemblage:
        return self.canonical(parse_grid(text))


def grid_splits(x: Assemblage, rotation_equivalence: bool = False) -> list[tuple[Assemblage, Assemblage]]:
    """All bipartitions of ``x`` into two 4-connected parts, each unordered pair once."""
    if len(x.cells) < 2:
        return []
    canon = (lambda a: min(rotations(a))) if rotation_equivalence else (lambda a: a)
    seen = set()
    out = []
    cells = x.cells
    for mask, rest in _connected_bipartitions(cells):
        a = canon(Assemblage.from_cells(cells[i] for i in range(len(cells)) if mask >> i & 1))
        b = canon(Assemblage.from_cells(cells[i] for i in range(len(cells)) if rest >> i & 1))
        pair = (a, b) if (len(a), a) <= (len(b), b) else (b, a)
        if pair not in seen:
            seen.add(pair)
            out.append(pair)
    return out


def grid_assembly_index(
    x,
    rotation_equivalence: bool = False,
    budget: SearchBudget | None = None,
    threads: int | None = None,
) -> IndexResult:
    return assembly_index(GridSpace(rotation_equivalence), x, budget, threads)


def grid_lower_bounds(x) -> int:
    """Largest of the cell-count chain bound and the per-colour vector-chain bound."""
    space = GridSpace()
    a = space.check_target(x)
    bound = min_chain_length(len(a.cells))[0]
    comp = [c for c in space.composition(a) if c]
    if len(comp) > 1:
        bound = max(bound, min_vector_chain_length(sorted(comp, reverse=True)).lower)
    return bound

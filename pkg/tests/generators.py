"""Seeded random objects shared by the property and acceptance tests."""

from assemblage import Assemblage, GraphObject, JoinStep


def random_string(rng, lo=4, hi=20):
    n = rng.randint(lo, hi)
    k = rng.choice([1, 2, 3, 4])
    return "".join(rng.choice("ABCD"[:k]) for _ in range(n))


def random_grid(rng, lo=1, hi=8):
    n = rng.randint(lo, hi)
    colours = rng.choice(["#", "#o"])
    cells = {(0, 0)}
    while len(cells) < n:
        r, c = rng.choice(sorted(cells))
        dr, dc = rng.choice([(0, 1), (1, 0), (0, -1), (-1, 0)])
        cells.add((r + dr, c + dc))
    return Assemblage.from_cells((r, c, rng.choice(colours)) for r, c in cells)


def random_graph(rng, lo=1, hi=6):
    n = rng.randint(lo, hi)
    while True:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.45]
        colors = [rng.choice("CN") for _ in range(n)] if rng.random() < 0.3 else None
        g = GraphObject.build(n, edges, colors)
        if g.is_connected():
            return g


def random_join(rng, alphabet="ABC"):
    s = "".join(rng.choice(alphabet) for _ in range(rng.randint(2, 24)))
    i = rng.randint(1, len(s) - 1)
    return JoinStep(s[:i], s[i:], s)

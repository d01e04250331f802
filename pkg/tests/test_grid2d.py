import random

import pytest

from assemblage import DomainError, EmptyTarget, GridSpace, grid_assembly_index, grid_lower_bounds, grid_splits
from assemblage.grid2d import Assemblage, is_connected, parse_grid, rotations, write_grid
from subspace_oracle import oracle_index


def test_parse_write_round_trip():
    text = "#o#\n###\n.o.\n"
    assert write_grid(parse_grid(text)) == text
    assert parse_grid("#o#/###/.o.") == parse_grid(text)
    # leading blank rows and columns are translated away
    assert write_grid(parse_grid("...\n.##\n")) == "##\n"


def test_splits_examples():
    assert len(grid_splits(parse_grid("##"))) == 1
    bar = grid_splits(parse_grid("####"))
    sizes = sorted(tuple(sorted((len(a), len(b)))) for a, b in bar)
    assert sizes == [(1, 3), (2, 2)]
    two_two = next((a, b) for a, b in bar if len(a) == 2)
    assert two_two[0] == two_two[1]
    # L-tromino: 3 two-part partitions, 2 of them connected
    ell = grid_splits(parse_grid("#./##"))
    assert len(ell) == 2


def test_split_parts_cover_without_overlap():
    x = parse_grid("##./.##/.#.")
    for a, b in grid_splits(x):
        assert len(a) + len(b) == len(x)
        assert is_connected(a.cells) and is_connected(b.cells)


def test_index_examples():
    assert grid_assembly_index("#").index == 0
    assert grid_assembly_index("####").index == 2
    assert grid_assembly_index("##/##").index == 2


def test_errors():
    with pytest.raises(EmptyTarget):
        grid_assembly_index("...")
    with pytest.raises(DomainError):
        grid_assembly_index("#.#")


def test_lower_bounds():
    assert grid_lower_bounds("####/####/####/####") >= 4
    assert grid_lower_bounds("#") == 0
    # colour counts [8, 8, 10] have a 6-step vector chain
    rows = ["aaaaaaaa", "bbbbbbbb", "cccccccccc"]
    assert grid_lower_bounds("/".join(rows)) == 6


def test_rotation_equivalence_identifies_turns():
    sp = GridSpace(rotation_equivalence=True)
    x = parse_grid("#o/#./##")
    forms = {sp.canonical(r) for r in rotations(x)}
    assert len(forms) == 1
    # reflections stay distinct
    mirror = Assemblage.from_cells((r, -c, k) for r, c, k in x.cells)
    assert sp.canonical(mirror) not in forms


def test_rotation_never_increases_index():
    rng = random.Random(11)
    for _ in range(40):
        x = random_shape(rng, rng.randint(2, 7), "#o")
        assert grid_assembly_index(x, True).index <= grid_assembly_index(x, False).index


def random_shape(rng, n, colours):
    cells = {(0, 0)}
    while len(cells) < n:
        r, c = rng.choice(sorted(cells))
        dr, dc = rng.choice([(0, 1), (1, 0), (0, -1), (-1, 0)])
        cells.add((r + dr, c + dc))
    return Assemblage.from_cells((r, c, rng.choice(colours)) for r, c in cells)


def fixed_polyominoes(n):
    shapes = {Assemblage.from_cells([(0, 0, "#")])}
    for _ in range(n - 1):
        grown = set()
        for s in shapes:
            occupied = {(r, c) for r, c, _ in s.cells}
            for r, c in occupied:
                for nb in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
                    if nb not in occupied:
                        grown.add(Assemblage.from_cells([(a, b, "#") for a, b in occupied | {nb}]))
        shapes = grown
    return shapes


def test_matches_oracle_all_monochrome_up_to_six():
    counts = []
    for n in range(1, 7):
        shapes = fixed_polyominoes(n)
        counts.append(len(shapes))
        for rot in (False, True):
            sp = GridSpace(rot)
            for x in shapes:
                assert grid_assembly_index(x, rot).index == oracle_index(sp, x), (str(x), rot)
    assert counts == [1, 2, 6, 19, 63, 216]

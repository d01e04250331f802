import csv
import math
from pathlib import Path

import pytest

from assemblage import DomainError
from assemblage.chains import (
    AdditionChain,
    VectorChain,
    binary_chain,
    greedy_vector_chain,
    min_chain_length,
    min_chain_lengths_upto,
    min_vector_chain_length,
    vector_to_scalar_bound,
)
from chain_oracle import oracle_length

ORACLE_CSV = Path(__file__).parent / "data" / "chain_lengths_oracle_4096.csv"


def frozen_oracle() -> dict[int, int]:
    with ORACLE_CSV.open() as fh:
        return {int(r["n"]): int(r["chain_length"]) for r in csv.DictReader(fh)}


def test_first_ten():
    assert [min_chain_length(n)[0] for n in range(1, 11)] == [0, 1, 2, 2, 3, 3, 4, 3, 4, 4]


def test_one():
    length, chain = min_chain_length(1)
    assert length == 0 and chain.terms == (1,)


def test_123():
    length, chain = min_chain_length(123)
    assert length == 9
    assert chain.is_valid() and chain.target == 123
    assert AdditionChain((1, 2, 3, 5, 10, 15, 30, 60, 63, 123)).is_valid()


@pytest.mark.parametrize("k", range(0, 21))
def test_powers_of_two(k):
    assert min_chain_length(2**k)[0] == k


@pytest.mark.parametrize("bad", [0, -3, True, 2.5])
def test_domain(bad):
    with pytest.raises(DomainError):
        min_chain_length(bad)


def test_table_small():
    t = min_chain_lengths_upto(10)
    assert t.as_dict() == {n: v for n, v in zip(range(1, 11), [0, 1, 2, 2, 3, 3, 4, 3, 4, 4])}
    assert min_chain_lengths_upto(1).as_dict() == {1: 0}
    assert t.counts[0] == 1


def test_table_csv_headers():
    t = min_chain_lengths_upto(10)
    assert t.to_csv().splitlines()[:3] == ["n,chain_length", "1,0", "2,1"]
    assert t.counts_csv().splitlines()[0] == "length,count"


def test_frozen_oracle_prefix_is_what_the_oracle_computes():
    frozen = frozen_oracle()
    assert len(frozen) == 4096
    for n in list(range(1, 200)) + [1023, 2047, 4095]:
        assert frozen[n] == oracle_length(n)


def test_table_matches_frozen_oracle():
    table = min_chain_lengths_upto(4096)
    assert table.as_dict() == frozen_oracle()


def test_binary_bounds_and_doubling():
    table = min_chain_lengths_upto(4096)
    for n in range(1, 4097):
        assert math.ceil(math.log2(n)) <= table[n] <= n.bit_length() - 1 + bin(n).count("1") - 1
        if 2 * n <= 4096:
            assert table[2 * n] <= table[n] + 1
        assert len(binary_chain(n)) == n.bit_length() - 1 + bin(n).count("1") - 1


def test_census_known_prefix():
    # integers with chain length d, complete up to d = 12 for limit 4096
    counts = min_chain_lengths_upto(4096).counts
    assert [counts[d] for d in range(13)] == [1, 1, 2, 3, 5, 9, 15, 26, 44, 78, 136, 246, 432]


def test_budget_exceeded():
    from assemblage import BudgetExceeded

    with pytest.raises(BudgetExceeded):
        min_chain_lengths_upto.__wrapped__(4096, max_seconds=0.0)


def test_vector_8_8_10():
    r = min_vector_chain_length([8, 8, 10])
    assert r.exact and r.length == 6
    assert r.witness.is_valid() and r.witness.target == (8, 8, 10)
    seven = VectorChain(
        3,
        (
            (1, 0, 0),
            (0, 1, 0),
            (0, 0, 1),
            (1, 1, 0),
            (1, 1, 1),
            (2, 2, 2),
            (4, 4, 4),
            (8, 8, 8),
            (8, 8, 9),
            (8, 8, 10),
        ),
    )
    assert seven.is_valid() and len(seven) == 7


def test_vector_small():
    assert min_vector_chain_length([0, 1, 0]).length == 0
    assert min_vector_chain_length([2, 1]).length == 2
    with pytest.raises(DomainError):
        min_vector_chain_length([0, 0])
    with pytest.raises(DomainError):
        min_vector_chain_length([1, -1])


def test_vector_matches_brute_force():
    import itertools

    def brute(v):
        k = len(v)
        units = [tuple(int(i == j) for j in range(k)) for i in range(k)]
        if sum(v) == 1:
            return 0
        frontier = {frozenset(units)}
        depth = 0
        while True:
            depth += 1
            nxt = set()
            for chain in frontier:
                for a in chain:
                    for b in chain:
                        s = tuple(x + y for x, y in zip(a, b))
                        if s == v:
                            return depth
                        if all(x <= y for x, y in zip(s, v)) and s not in chain:
                            nxt.add(chain | {s})
            frontier = nxt

    for n in range(2, 8):
        for v in itertools.product(range(n + 1), repeat=3):
            if sum(v) == n:
                assert min_vector_chain_length(v).length == brute(v), v


def test_vector_threshold_gives_interval():
    r = min_vector_chain_length([30, 20, 9], exact_threshold=24)
    assert r.lower <= r.upper and r.witness.is_valid()
    assert r.lower == vector_to_scalar_bound([30, 20, 9])


def test_scalar_bound():
    assert vector_to_scalar_bound([8, 8, 10]) == 6
    assert vector_to_scalar_bound([1, 0, 0, 0]) == 0
    assert vector_to_scalar_bound([6, 6]) == 4
    with pytest.raises(DomainError):
        vector_to_scalar_bound([0])


def test_vector_sandwich():
    import itertools

    for v in itertools.product(range(5), repeat=3):
        if not any(v):
            continue
        r = min_vector_chain_length(v)
        assert vector_to_scalar_bound(v) <= r.lower <= r.upper <= sum(v) - 1
        assert greedy_vector_chain(v).is_valid()

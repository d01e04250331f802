import itertools
import math

import pytest

from assemblage import EmptyTarget, StringSpace, assembly_index, shannon_entropy, string_assembly_index, string_splits
from assemblage.chains import min_chain_length
from assemblage.strings import entropy_from_probabilities
from subspace_oracle import oracle_index

S = StringSpace()


def test_splits():
    assert string_splits("AB") == [("A", "B")]
    assert string_splits("ABAB") == [("A", "BAB"), ("AB", "AB"), ("ABA", "B")]
    assert len(string_splits("AAAA")) == 3 and ("AA", "AA") in string_splits("AAAA")
    assert string_splits("A") == []


def test_index_examples():
    assert string_assembly_index("A" * 16).index == 4
    assert string_assembly_index("AB").index == 1
    assert string_assembly_index("XXBANANAXANANAXX").index <= 9
    with pytest.raises(EmptyTarget):
        string_assembly_index("")


def test_no_reversal():
    # "ABBA" cannot reuse "AB" reversed
    assert string_assembly_index("ABBA").index == 3


def test_one_symbol_strings_are_chains():
    for n in range(1, 41):
        assert string_assembly_index("Z" * n).index == min_chain_length(n)[0]


def test_unicode_symbols():
    assert string_assembly_index("αβαβ").index == 2


def test_matches_oracle_binary_up_to_nine():
    for n in range(1, 10):
        for p in itertools.product("AB", repeat=n):
            text = "".join(p)
            assert string_assembly_index(text).index == oracle_index(S, text), text


def test_not_permutation_invariant():
    # same composition, different index, found by exhaustive search at length 8
    assert string_assembly_index("ABABABAB").index == 3
    assert string_assembly_index("AABBBABA").index == 6


def test_entropy():
    assert entropy_from_probabilities([0.1, 0.2, 0.3, 0.4]) == pytest.approx(1.8464, abs=1e-4)
    assert shannon_entropy("AAAA") == 0
    assert shannon_entropy("AB") == 1.0
    assert shannon_entropy("ABBCCCDDDD") == pytest.approx(shannon_entropy("ABCDBCDCDD"))
    assert shannon_entropy("ABBCCCDDDD") == pytest.approx(1.8464, abs=1e-4)
    with pytest.raises(EmptyTarget):
        shannon_entropy("")


def test_entropy_range():
    for text in ["ABCD", "AAB", "XYZZY", "QQQQR"]:
        assert 0 <= shannon_entropy(text) <= math.log2(len(set(text))) + 1e-12

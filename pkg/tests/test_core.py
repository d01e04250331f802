import pytest

from assemblage import (
    AssemblyMap,
    EmptyTarget,
    IndexResult,
    JoinStep,
    NotConstructible,
    Pathway,
    SearchBudget,
    StringSpace,
    assembly_index,
    check_assembly_map,
    lower_bound_by_map,
    naive_upper_bound,
    split_branched_index,
    verify_pathway,
)
from assemblage.chains import IntegerSpace, VectorSpace
from assemblage.strings import composition_map, size_map

S = StringSpace()

BANANA_OBJECTS = [
    "XX",
    "AN",
    "ANAN",
    "ANANA",
    "BANANA",
    "XANANA",
    "BANANAXANANA",
    "XXBANANAXANANA",
    "XXBANANAXANANAXX",
]


def banana_pathway():
    built = set("XBAN")
    steps = []
    for obj in BANANA_OBJECTS:
        a, b = next((obj[:i], obj[i:]) for i in range(1, len(obj)) if obj[:i] in built and obj[i:] in built)
        steps.append(JoinStep(a, b, obj))
        built.add(obj)
    return Pathway(tuple(steps), BANANA_OBJECTS[-1])


def test_sixteen_identical_characters():
    r = assembly_index(S, "A" * 16)
    assert r.exact and r.index == 4
    assert [s.result for s in r.witness.steps] == ["AA", "AAAA", "A" * 8, "A" * 16]


def test_basic_object_has_index_zero():
    r = assembly_index(S, "Q")
    assert r.exact and r.index == 0 and len(r.witness) == 0


def test_banana():
    assert assembly_index(S, "BANANA").index == 4


def test_banana_string_at_most_nine():
    r = assembly_index(S, "XXBANANAXANANAXX")
    assert r.exact and r.index <= 9
    assert verify_pathway(S, r.witness)
    assert len(r.witness) == r.index


def test_banana_pathway_verifies():
    p = banana_pathway()
    assert len(p) == 9
    assert verify_pathway(S, p)


def test_verify_rejects_unbuilt_operand():
    p = Pathway((JoinStep("AB", "AB", "ABAB"),), "ABAB")
    v = verify_pathway(S, p)
    assert not v and "not yet built" in v.reason


def test_verify_rejects_size_mismatch():
    p = Pathway((JoinStep("A", "B", "ABA"),), "ABA")
    v = verify_pathway(S, p)
    assert not v and "sizes" in v.reason


def test_verify_rejects_duplicates_and_wrong_target():
    dup = Pathway((JoinStep("A", "B", "AB"), JoinStep("A", "B", "AB")), "AB")
    assert not verify_pathway(S, dup)
    short = Pathway((JoinStep("A", "B", "AB"),), "ABB")
    assert not verify_pathway(S, short)
    assert not verify_pathway(S, Pathway((), "AB"))


def test_split_branched_examples():
    assert split_branched_index(S, "ABAB")[0] == 2
    assert split_branched_index(S, "Z")[0] == 0
    assert split_branched_index(S, "A" * 16)[0] == 4


def test_split_branched_witness_is_valid():
    value, p = split_branched_index(S, "XXBANANAXANANAXX")
    assert verify_pathway(S, p)
    assert len(p) <= value


def test_naive_upper_bound():
    assert naive_upper_bound(S, "A" * 16) == 15
    assert naive_upper_bound(S, "A") == 0
    assert naive_upper_bound(S, "XXBANANAXANANAXX") == 15
    with pytest.raises(EmptyTarget):
        naive_upper_bound(S, "")


def test_lower_bound_by_map():
    assert lower_bound_by_map(S, "A" * 16) == 4
    assert lower_bound_by_map(IntegerSpace(), 123) == 9
    # [1,1,0] [1,1,1] [2,2,2] [4,4,4] [4,4,5] [8,8,10]
    assert lower_bound_by_map(VectorSpace(3), (8, 8, 10)) == 6


def test_errors():
    with pytest.raises(EmptyTarget):
        assembly_index(S, "")
    with pytest.raises(NotConstructible):
        assembly_index(StringSpace("AB"), "ABC")


def test_budget_exhaustion_returns_certified_interval():
    r = assembly_index(S, "XXBANANAXANANAXX", SearchBudget(max_nodes=3))
    assert not r.exact and r.index is None
    assert r.lower <= 9 <= r.upper
    assert verify_pathway(S, r.witness) and len(r.witness) == r.upper


def test_index_result_json_fields():
    r = assembly_index(S, "ABAB")
    doc = r.to_json(S, "ABAB")
    assert list(doc) == [
        "space",
        "target",
        "index",
        "lower",
        "upper",
        "exact",
        "witness",
        "nodes_expanded",
        "elapsed_ms",
    ]
    assert doc["witness"][0] == {"left": "A", "right": "B", "result": "AB"}
    assert IndexResult(2, 3, None, False).to_json(S, "ABAB")["index"] is None


def test_check_assembly_map_examples():
    assert check_assembly_map(size_map(S), [JoinStep("AB", "AB", "ABAB")])
    assert check_assembly_map(composition_map("AN"), [JoinStep("AN", "A", "ANA")])
    broken = AssemblyMap(S, IntegerSpace(), lambda s: len(s) + 1)
    assert not check_assembly_map(broken, [JoinStep("AB", "AB", "ABAB")])


def test_threads_give_same_result(monkeypatch):
    from assemblage import GridSpace

    g = GridSpace()
    one = assembly_index(g, "#o#/###/.o.", threads=1)
    two = assembly_index(g, "#o#/###/.o.", threads=2)
    assert one.to_json(g, one.witness.target) | {"elapsed_ms": 0, "nodes_expanded": 0} == two.to_json(
        g, two.witness.target
    ) | {"elapsed_ms": 0, "nodes_expanded": 0}
    monkeypatch.setenv("ASSEMBLAGE_THREADS", "2")
    env = assembly_index(g, "#o#/###/.o.")
    assert env.index == one.index


def test_both_exact_methods_agree():
    class PoolSearchOnly(StringSpace):
        def repeat_candidates(self, closure):
            return None

    plain = PoolSearchOnly()
    for text in ["ABABAAB", "CCACBBBBBA", "XYZXYZXX", "AAAAAAAAAAA", "ABCABCABC"]:
        assert assembly_index(S, text).index == assembly_index(plain, text).index

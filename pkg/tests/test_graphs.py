import itertools
import random

import pytest

from assemblage import DomainError, GraphObject, GraphSpace, TooLarge, graph_assembly_index, graph_splits
from assemblage.chains import min_chain_length
from assemblage.graphs import are_isomorphic, canonical_form, parse_compact, parse_edge_list, write_edge_list
from subspace_oracle import oracle_index


def G(n, edges, colors=None):
    return GraphObject.build(n, edges, colors)


K2 = G(2, [(0, 1)])
P3 = G(3, [(0, 1), (1, 2)])
K3 = G(3, [(0, 1), (1, 2), (0, 2)])
P4 = G(4, [(0, 1), (1, 2), (2, 3)])
STAR = G(4, [(0, 1), (0, 2), (0, 3)])


def test_splits():
    assert graph_splits(canonical_form(K2)) == [(G(1, []), G(1, []))]
    # P3: both legal bipartitions give (vertex, edge); {ends | middle} is illegal
    assert len(graph_splits(canonical_form(P3))) == 1
    (a, b), = graph_splits(canonical_form(P3))
    assert (a.n, b.n) == (1, 2)
    # K3: vertex against opposite edge, identical up to isomorphism
    assert len(graph_splits(canonical_form(K3))) == 1


def test_split_bipartition_counts():
    # counted as labelled bipartitions before isomorphism merging
    def labelled(g):
        adj = g.adjacency()
        full = (1 << g.n) - 1
        from assemblage.graphs import _connected_mask

        return sum(
            1
            for m in range(1, full, 2)
            if _connected_mask(adj, m) and _connected_mask(adj, full & ~m)
        )

    assert labelled(P3) == 2
    assert labelled(K3) == 3


def test_index_examples():
    assert graph_assembly_index(G(1, [])).index == 0
    assert graph_assembly_index(P4).index == 2
    assert graph_assembly_index(STAR).index == 3
    assert graph_assembly_index(STAR).index == oracle_index(GraphSpace(), STAR)


def test_coloured_basis():
    g = G(3, [(0, 1), (1, 2)], ["C", "O", "C"])
    r = graph_assembly_index(g)
    assert r.index == 2
    assert {str(x) for x in GraphSpace().basis(g)} == {"1::C", "1::O"}


def test_canonical_form_is_invariant():
    rng = random.Random(4)
    for _ in range(50):
        n = rng.randint(1, 7)
        edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.4]
        colors = [rng.choice("ab") for _ in range(n)]
        g = G(n, edges, colors)
        perm = list(range(n))
        rng.shuffle(perm)
        assert canonical_form(g) == canonical_form(g.relabeled(perm))


def test_non_isomorphic_graphs_differ():
    assert not are_isomorphic(P4, STAR)
    c6 = G(6, [(i, (i + 1) % 6) for i in range(6)])
    two_triangles = G(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not are_isomorphic(c6, two_triangles)


def test_edge_list_round_trip():
    text = "0 1\n1 2\nc 0 C\nc 2 O\n"
    g = parse_edge_list(text)
    assert write_edge_list(g) == text
    assert parse_edge_list("# comment\n5 7\n\n7 9\n") == P3
    assert parse_compact(str(g)) == g
    with pytest.raises(DomainError):
        parse_edge_list("0 1 2\n")
    with pytest.raises(DomainError):
        parse_edge_list("3 3\n")


def test_disconnected_target_rejected():
    with pytest.raises(DomainError):
        graph_assembly_index(G(4, [(0, 1), (2, 3)]))


def test_vertex_cap():
    big = G(9, [(i, i + 1) for i in range(8)])
    with pytest.raises(TooLarge) as info:
        graph_assembly_index(big)
    r = info.value.result
    assert r.lower == min_chain_length(9)[0] and r.upper == 8 and r.witness is None


def test_all_connected_graphs_up_to_five_match_oracle():
    seen = set()
    for n in range(1, 6):
        pairs = list(itertools.combinations(range(n), 2))
        for k in range(len(pairs) + 1):
            for edges in itertools.combinations(pairs, k):
                g = G(n, edges)
                if not g.is_connected():
                    continue
                c = canonical_form(g)
                if c in seen:
                    continue
                seen.add(c)
                r = graph_assembly_index(c)
                assert r.index == oracle_index(GraphSpace(), c), str(c)
                assert min_chain_length(n)[0] <= r.index
                assert graph_assembly_index(c, connected=False).index <= r.index
    # connected graphs on 1..5 unlabelled vertices
    assert len(seen) == 1 + 1 + 2 + 6 + 21


def test_edge_basic_flagged_unsupported():
    with pytest.raises(NotImplementedError):
        GraphSpace(edge_basic=True)

import pytest
from hypothesis import given, settings

from conftest import poset, random_posets
from gradednets.errors import AntisymmetryViolation, DuplicateLabel, SizeBound, UnknownElement
from gradednets.oracles import brute_force_directed_subsets
from gradednets.poset import (Poset, comparability_edges, is_path_connected, is_upward_directed,
                              maximal_directed_subsets)


def test_transitive_closure():
    P = Poset("abc", [("a", "b"), ("b", "c")])
    assert P.leq("a", "c") and not P.leq("c", "a")
    assert P.cover_pairs() == [("a", "b"), ("b", "c")]
    assert P.height == {"a": 0, "b": 1, "c": 2}


def test_reflexive_pairs_in_relation():
    P = Poset("ab", [("a", "b")])
    assert ("a", "a") in P.relation() and ("a", "b") in P.relation()


@pytest.mark.parametrize("elements,pairs,err", [
    (["a", "a"], [], DuplicateLabel),
    (["a"], [("a", "z")], UnknownElement),
    (["a", "b"], [("a", "b"), ("b", "a")], AntisymmetryViolation),
])
def test_construction_errors(elements, pairs, err):
    with pytest.raises(err):
        Poset(elements, pairs)


def test_antichain_not_connected():
    P = poset("antichain.json")
    assert not is_path_connected(P)
    assert not is_upward_directed(P)
    assert maximal_directed_subsets(P).as_lists() == [["p"], ["q"], ["r"]]


def test_crown_blocks():
    blocks = maximal_directed_subsets(poset("crown2.json")).as_lists()
    assert blocks == [["a1", "a2", "b1"], ["a1", "a2", "b2"]]


def test_cone_is_directed():
    P = poset("crown2_top.json")
    assert is_upward_directed(P)
    assert len(maximal_directed_subsets(P)) == 1


def test_size_bound():
    P = Poset([f"x{i}" for i in range(5)])
    with pytest.raises(SizeBound):
        maximal_directed_subsets(P, bound=4)
    assert len(maximal_directed_subsets(P, bound=None)) == 5


def test_block_lookup():
    D = maximal_directed_subsets(poset("crown2.json"))
    assert D.block_of("a1", "a2") == [0, 1]
    assert D.block_of("b1", "b2") == []


def test_comparability_edges_oriented():
    P = poset("chain.json")
    assert all(P.lt(a, b) for a, b in comparability_edges(P))


def test_relabel_and_equality():
    P = poset("chain.json")
    Q = P.relabel({"a": "x", "b": "y", "c": "z"})
    assert Q.leq("x", "z")
    assert P == poset("chain.json") and hash(P) == hash(poset("chain.json"))


@settings(max_examples=60, deadline=None)
@given(random_posets(max_size=7))
def test_directed_subsets_match_brute_force(P):
    assert list(maximal_directed_subsets(P).blocks) == brute_force_directed_subsets(P)


@settings(max_examples=60, deadline=None)
@given(random_posets())
def test_order_axioms(P):
    for a in P:
        assert P.leq(a, a)
        for b in P:
            if P.leq(a, b) and P.leq(b, a):
                assert a == b
            for c in P:
                if P.leq(a, b) and P.leq(b, c):
                    assert P.leq(a, c)

import pytest
from hypothesis import given, settings

from conftest import poset, random_posets
from gradednets.errors import NotALoop, NotComparable, NotDirected, NotPathConnected
from gradednets.homotopy import (abelian_loop_class, abelianization, free_reduce,
                                 loop_group_presentation, loops_trivial_if_directed, sigma_ba,
                                 sigma_inverse, synthetic_presentation)
from gradednets.oracles import order_complex_h1_rank
from gradednets.paths import PathClass, identity, loops_at, parse_path
from gradednets.poset import is_path_connected

CROWN_LOOP = "d(a1,b2)*u(b2,a2)*d(a2,b1)*u(b1,a1)"


def test_free_reduce():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert free_reduce(()) == ()


@pytest.mark.parametrize("name,rank", [
    ("chain.json", 0), ("crown2.json", 1), ("crown3.json", 1), ("crown2_top.json", 0),
    ("crown2_bottom.json", 0), ("chain3_diamond.json", 0), ("bowtie_tower.json", 1),
])
def test_abelianization_ranks(name, rank):
    P = poset(name)
    inv = abelianization(loop_group_presentation(P, P.elements[0]))
    assert inv.rank == rank and inv.torsion == ()


def test_crown_presentation_shape(crown2):
    G = loop_group_presentation(crown2, "a1")
    assert len(G.generators) == 1 and G.relators == ()


def test_torsion_from_synthetic_presentation():
    inv = abelianization(synthetic_presentation(1, [(1, 1)]))
    assert inv.rank == 0 and inv.torsion == (2,)
    inv = abelianization(synthetic_presentation(2, [(1, 1, 1, 1, 1, 1), (2, 2, 2, 2)]))
    assert inv.rank == 0 and inv.torsion == (2, 12)


def test_disconnected_poset_refused():
    with pytest.raises(NotPathConnected):
        loop_group_presentation(poset("antichain.json"), "p")


def test_loop_classes_in_crown(crown2):
    g = parse_path(crown2, CROWN_LOOP)
    assert abelian_loop_class(crown2, g) in {(1,), (-1,)}
    k = abelian_loop_class(crown2, g)[0]
    assert abelian_loop_class(crown2, g * g) == (2 * k,)
    assert abelian_loop_class(crown2, g.reverse()) == (-k,)
    assert abelian_loop_class(crown2, identity("a1")) == (0,)
    with pytest.raises(NotALoop):
        abelian_loop_class(crown2, parse_path(crown2, "u(b1,a1)"))


def test_sigma_round_trip(crown2):
    g = PathClass.of(crown2, parse_path(crown2, CROWN_LOOP))
    moved = sigma_ba(crown2, "a1", "b1", g)
    assert moved.start == "b1" and moved.end == "b1"
    assert sigma_inverse(crown2, "a1", "b1", moved) == g
    with pytest.raises(NotComparable):
        sigma_ba(crown2, "a1", "a2", g)


def test_sigma_of_trivial_class_is_trivial(cone):
    e = PathClass.of(cone, identity("a1"))
    assert sigma_ba(cone, "a1", "t", e).repr == identity("t")


def test_directed_loops_trivial(cone):
    rep = loops_trivial_if_directed(cone, list(loops_at(cone, "a1", 4)))
    assert rep.ok
    with pytest.raises(NotDirected):
        loops_trivial_if_directed(poset("crown2.json"), [])


@settings(max_examples=80, deadline=None)
@given(random_posets(max_size=7))
def test_rank_matches_order_complex(P):
    if not is_path_connected(P):
        return
    inv = abelianization(loop_group_presentation(P, P.elements[-1]))
    assert inv.rank == order_complex_h1_rank(P)


@settings(max_examples=40, deadline=None)
@given(random_posets(max_size=6))
def test_basepoint_does_not_matter(P):
    if not is_path_connected(P):
        return
    invs = {abelianization(loop_group_presentation(P, a)) for a in P}
    assert len(invs) == 1

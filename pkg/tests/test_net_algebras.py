import pytest

from conftest import net
from gradednets.errors import (BasepointMismatch, MorphismInvalid, NoContainingBlock, NotComparable,
                               NotComparableInCorona)
from gradednets.graded_algebra import GradedElement
from gradednets.io import load_morphism
from gradednets.net_algebras import (AlgebraNet, NetMorphism, alpha_apply, build_corona,
                                     corona_morphism, example_scenario, identity_morphism,
                                     induced_algebra_morphism, induced_group_map,
                                     validate_hilbert_morphism, verify_corona, verify_isotony)
from gradednets.paths import down, identity, parse_path, seq, up

CROWN_LOOP = "d(a1,b2)*u(b2,a2)*d(a2,b1)*u(b1,a1)"


def crown_cone():
    K, L = net("net_crown2_square.json"), net("net_cone.json")
    return K, L, load_morphism("morph_crown_cone.json", K, L)[0]


def test_alpha_examples():
    N = net("net_crown2.json")
    A = AlgebraNet(N)
    P = N.poset
    t = GradedElement.chi(N, parse_path(P, "d(a1,b1)*u(b1,a1)"))
    moved = alpha_apply(A, "a1", "b1", t)
    assert moved.base == "b1" and moved.degrees == [identity("b1")]
    g = parse_path(P, CROWN_LOOP)
    x = GradedElement.chi(N, g)
    assert alpha_apply(A, "a1", "b2", x) == GradedElement.chi(N, seq(up("b2", "a1")) * g * seq(down("a1", "b2")))
    assert alpha_apply(A, "a1", "a1", x) == x
    with pytest.raises(NotComparable):
        alpha_apply(A, "b1", "a1", x)
    with pytest.raises(BasepointMismatch):
        alpha_apply(A, "a2", "b1", x)


@pytest.mark.parametrize("name", ["net_chain.json", "net_crown2.json", "net_crown2_bijective.json",
                                  "net_diamond.json"])
def test_isotony(name):
    rep = verify_isotony(AlgebraNet(net(name)), max_letters=2)
    assert rep.ok, rep.failures()


def test_bijective_net_alpha_invertible():
    rep = verify_isotony(AlgebraNet(net("net_crown2_bijective.json")), max_letters=2)
    assert any(a.name == "alpha invertible on samples" and a.status == "pass" and a.checked
               for a in rep.assertions)


def test_corona_of_chain_and_crown():
    C = build_corona(AlgebraNet(net("net_chain.json")))
    assert len(C.decomposition) == 1
    x = GradedElement.chi(C.algebras.net, identity("a"))
    assert C.colimit_equal(0, ("a", x), ("c", alpha_apply(C.algebras, "a", "c", x)))
    C = build_corona(AlgebraNet(net("net_crown2.json")))
    assert C.decomposition.as_lists() == [["a1", "a2", "b1"], ["a1", "a2", "b2"]]
    assert verify_corona(C, 1).ok
    y = GradedElement.chi(C.algebras.net, identity("b2"))
    with pytest.raises(NotComparableInCorona):
        C.colimit_equal(0, ("b2", y), ("b2", y))


def test_morphism_validation():
    K, L, M = crown_cone()
    assert validate_hilbert_morphism(M).ok
    assert validate_hilbert_morphism(identity_morphism(K)).ok
    broken = NetMorphism(K, L, M.phi, {**M.Phi, "b1": (1, 0)})
    rep = validate_hilbert_morphism(broken)
    assert not rep.ok
    assert rep.failures()[0].witness[0]["pair"][1] == "b1"
    with pytest.raises(MorphismInvalid):
        induced_algebra_morphism(broken, "a1")


def test_non_monotone_map_reported():
    K = net("net_crown2_square.json")
    swap = NetMorphism(K, K, {"a1": "b1", "a2": "a2", "b1": "a1", "b2": "b2"},
                       {x: (0, 1) for x in K.poset.elements})
    assert any(a.name == "phi monotone" for a in validate_hilbert_morphism(swap).failures())


def test_group_maps():
    K, L, M = crown_cone()
    G = induced_group_map(M, "a1")
    assert G.source_invariants["rank"] == 1 and G.target_invariants["rank"] == 0
    assert G.image_rank == 0 and G.injective is False
    I = induced_group_map(identity_morphism(K), "a1")
    assert I.injective is True and I.image_rank == 1


def test_induced_algebra_map_crown_to_cone():
    K, L, M = crown_cone()
    F, rep = induced_algebra_morphism(M, "a1")
    assert rep.ok, rep.failures()
    x = GradedElement.chi(K, parse_path(K.poset, CROWN_LOOP))
    y = F(x)
    assert y.degrees == [identity("a1")] and y.op.is_projection
    assert "kernel witness" in rep.data


def test_faithful_when_hypotheses_hold():
    B = net("net_crown2_bijective.json")
    _, rep = induced_algebra_morphism(identity_morphism(B), "a1")
    assert rep.ok and rep.data["faithful hypotheses"]


def test_corona_morphisms():
    K, L, M = crown_cone()
    CK, CL = build_corona(AlgebraNet(K)), build_corona(AlgebraNet(L))
    assert corona_morphism(M, CK, CL).assignment == {0: 0, 1: 0}
    I = identity_morphism(K)
    assert corona_morphism(I, CK, CK).assignment == {0: 0, 1: 1}


def test_no_containing_block():
    # a valid morphism always fits (phi(top) bounds the image); a mismatched target corona does not
    K = net("net_crown2_square.json")
    CK = build_corona(AlgebraNet(K))
    C3 = build_corona(AlgebraNet(net("net_crown3.json")))
    with pytest.raises(NoContainingBlock):
        corona_morphism(identity_morphism(K), CK, C3)


def test_composition_of_morphisms():
    K, L, M = crown_cone()
    MM = identity_morphism(K).compose(M)
    assert MM.phi == M.phi and MM.Phi == M.Phi
    assert validate_hilbert_morphism(M.compose(identity_morphism(L))).ok


def test_example_scenario():
    rep = example_scenario()
    assert rep.ok, rep.failures()
    assert rep.data["group map"]["image_rank"] == 0

import pytest
from hypothesis import given, settings, strategies as st

from conftest import net, poset
from gradednets.errors import IncoherentNet, NotALoop, NotCertified, NotComparable, NotComparableCycles
from gradednets.net_hilbert import (TruncatedNet, agree_on_common_domain, apply_stepwise, chi_seq,
                                    chi_step, cycle_classify, cycle_join, cycle_order_leq,
                                    domain_of, domain_order_relations, join_projection_identity,
                                    p_cycle, p_cycle_members, p_cycle_stabilization,
                                    projection_leq, verify_chi_laws)
from gradednets.operators import BasisPartialMap, BasisVector, OperatorSum
from gradednets.paths import PathClass, enumerate_words, identity, loops_at, parse_path, reduce

CROWN_LOOP = "d(a1,b2)*u(b2,a2)*d(a2,b1)*u(b1,a1)"


def ones(P, L=3):
    return TruncatedNet(P, {}, {(a, b): [0] for a, b in P.relation() if a != b}, L)


def test_chi_step_on_chain():
    P = poset("chain.json")
    N = ones(P)
    v = BasisVector("a", 0, identity("a"))
    assert chi_step(N, "a", "b").apply(v) == BasisVector("b", 0, parse_path(P, "u(b,a)"))
    assert chi_step(N, "a", "a").apply(v) == v
    with pytest.raises(NotComparable):
        chi_step(N, "b", "a")


def test_starred_outside_image_is_zero():
    N = net("net_chain_embed.json")  # gamma(a, b) = [1]
    v = BasisVector("b", 0, identity("b"))
    assert chi_step(N, "a", "b", starred=True).apply(v) is None


def test_chi_seq_identity_and_composition():
    N = net("net_diamond.json")
    P = N.poset
    assert chi_seq(N, identity("c")).is_projection
    assert len(chi_seq(N, identity("c")).domain) == N.dims["c"]
    direct = chi_seq(N, parse_path(P, "u(e,a)"))
    split = chi_seq(N, parse_path(P, "u(e,d1)")).compose(chi_seq(N, parse_path(P, "u(d1,a)")))
    assert direct == split


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["net_diamond.json", "net_crown2.json", "net_cone.json"]), st.data())
def test_chi_is_a_representation(name, data):
    N = net(name)
    words = list(enumerate_words(N.poset, 2))
    p = data.draw(st.sampled_from(words))
    q = data.draw(st.sampled_from([w for w in words if w.end == p.start]))
    assert chi_seq(N, p * q) == chi_seq(N, p).compose(chi_seq(N, q))
    assert chi_seq(N, p).adjoint() == chi_seq(N, p.reverse())


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["net_diamond.json", "net_crown2.json", "net_chain_embed.json"]), st.data())
def test_symbolic_composition_matches_stepwise_action(name, data):
    N = net(name)
    p = data.draw(st.sampled_from(list(enumerate_words(N.poset, 3))))
    m = chi_seq(N, p)
    for v in N.interior(p.start, len(p)):
        assert m.apply(v, N.L) == apply_stepwise(N, p, v)


def test_domains():
    N = net("net_chain_embed.json")
    P = N.poset
    assert domain_of(N, parse_path(P, "d(a,b)*u(b,a)")).basis_indices == {0}
    assert domain_of(N, parse_path(P, "u(b,a)*d(a,b)")).basis_indices == {1}
    assert domain_of(N, identity("c")).dim == 3


@pytest.mark.parametrize("name", ["net_chain.json", "net_crown2.json", "net_diamond.json",
                                  "net_chain_embed.json"])
def test_chi_laws(name):
    assert verify_chi_laws(net(name)).ok


def test_incoherent_gamma_rejected():
    P = poset("chain.json")
    with pytest.raises(IncoherentNet):
        TruncatedNet(P, {"a": 1, "b": 2, "c": 2},
                     {("a", "b"): [0], ("b", "c"): [0, 1], ("a", "c"): [1]}, 3)
    with pytest.raises(IncoherentNet):
        TruncatedNet(P, {"a": 2, "b": 2}, {("a", "b"): [0, 0], ("b", "c"): [0, 1]}, 3)
    with pytest.raises(IncoherentNet):
        TruncatedNet(P, {}, {("a", "b"): [0]}, 3)


def test_classify():
    N = net("net_crown2.json")
    P = N.poset
    triv = cycle_classify(N, parse_path(P, "d(a1,b1)*u(b1,a1)"))
    assert triv.kind == "trivial" and triv.is_projection and triv.domain_dim == 2
    g = cycle_classify(N, parse_path(P, CROWN_LOOP))
    assert g.kind == "nontrivial" and not g.is_projection
    assert g.operator.pairs == ((0, 1),)
    assert g.nilpotent_power == 2
    with pytest.raises(NotALoop):
        cycle_classify(N, parse_path(P, "u(b1,a1)"))


def test_cycle_order_and_join():
    N = net("net_chain_embed.json")
    P = N.poset
    full = chi_seq(N, identity("b"))
    part = chi_seq(N, parse_path(P, "u(b,a)*d(a,b)"))
    assert cycle_order_leq(N, part, full) and not cycle_order_leq(N, full, part)
    assert cycle_order_leq(N, full, full)
    assert cycle_join(N, full, full) == OperatorSum.of(full)
    assert cycle_join(N, part, full) == OperatorSum.of(full)
    assert join_projection_identity(N, part, full)


def test_join_disjoint_is_plain_sum():
    P = poset("chain.json")
    N = TruncatedNet(P, {"a": 2, "b": 2, "c": 2}, {("a", "b"): [0, 1], ("b", "c"): [0, 1]}, 2)
    x = BasisPartialMap.identity_on(P, "a", [0])
    y = BasisPartialMap.identity_on(P, "a", [1])
    assert cycle_join(N, x, y) == OperatorSum.of(x) + OperatorSum.of(y)


def test_join_refuses_inequivalent_loops():
    N = net("net_crown2_square.json")
    P = N.poset
    g = chi_seq(N, parse_path(P, CROWN_LOOP))
    with pytest.raises(NotComparableCycles):
        cycle_join(N, g, chi_seq(N, identity("a1")))


def test_order_relations_between_equivalent_loops():
    N = net("net_crown2.json")
    P = N.poset
    loops = [w for w in loops_at(P, "a1", 4) if reduce(P, w) == identity("a1")]
    for p in loops[:10]:
        for q in loops[:10]:
            assert all(domain_order_relations(N, p, q).values())
            assert agree_on_common_domain(N, p, q)[0]


def test_p_cycle_trivial_class():
    N = net("net_chain_embed.json")
    e = PathClass.of(N.poset, identity("b"))
    x = p_cycle(N, e, 2)
    assert x.is_projection
    assert x.as_partial_map().domain == {0, 1}
    assert p_cycle(N, e, 0) == OperatorSum.of(chi_seq(N, identity("b")))


def test_p_cycle_monotone_and_stabilizes():
    N = net("net_crown2.json")
    g = PathClass.of(N.poset, parse_path(N.poset, CROWN_LOOP))
    stable, sizes = p_cycle_stabilization(N, g, 6)
    assert sizes == sorted(sizes)
    for b in range(5):
        assert projection_leq(p_cycle(N, g, b), p_cycle(N, g, b + 1))
    assert g.repr in p_cycle_members(N, g, 0)


def test_p_cycle_needs_certificate():
    P = poset("bowtie_tower.json")
    N = ones(P)
    with pytest.raises(NotCertified):
        p_cycle(N, PathClass.of(P, identity("x0")), 2)


def test_p_cycle_needs_loop():
    N = net("net_chain.json")
    with pytest.raises(NotALoop):
        p_cycle(N, PathClass.of(N.poset, parse_path(N.poset, "u(b,a)")), 2)

import pytest
from hypothesis import given, settings, strategies as st

from conftest import poset, random_posets
from gradednets.errors import InputError, UnknownElement
from gradednets.oracles import RelationClosure
from gradednets.paths import (PathClass, Verdict, check_confluence, concat, down, enumerate_words,
                              equivalent, identity, is_irreducible, parse_path, reduce, up)


@pytest.mark.parametrize("text,expected", [
    ("d(a,b)*u(b,a)", "i(a)"),
    ("u(b,a)*d(a,b)", "i(b)"),
    ("d(a,b)*d(b,c)", "d(a,c)"),
    ("u(c,b)*u(b,a)", "u(c,a)"),
    ("i(a)*d(a,b)", "d(a,b)"),
    ("d(a,b)*i(b)", "d(a,b)"),
    ("i(a)", "i(a)"),
    ("u(c,a)*d(a,b)", "u(c,b)"),
])
def test_chain_reductions(chain, text, expected):
    assert str(reduce(chain, parse_path(chain, text))) == expected


def test_loop_in_crown_is_irreducible(crown2):
    g = parse_path(crown2, "d(a1,b2)*u(b2,a2)*d(a2,b1)*u(b1,a1)")
    assert is_irreducible(crown2, g)
    assert reduce(crown2, g) == g


def test_loop_in_cone_collapses(cone):
    g = parse_path(cone, "d(a1,b2)*u(b2,a2)*d(a2,b1)*u(b1,a1)")
    assert reduce(cone, g) == identity("a1")


@pytest.mark.parametrize("text,err", [
    ("d(a,z)", UnknownElement),
    ("d(b,a)", InputError),
    ("x(a,b)", InputError),
    ("d(a,b)*d(a,b)", InputError),
    ("i(a,b)", InputError),
    ("u(b)", InputError),
])
def test_parse_errors(chain, text, err):
    with pytest.raises(err):
        parse_path(chain, text)


def test_text_round_trip(crown2):
    text = "d(a1,b2)*u(b2,a2)*d(a2,b1)*u(b1,a1)"
    assert str(parse_path(crown2, text)) == text


def test_step_helpers_degenerate():
    assert down("a", "a") == identity("a").steps[0]
    assert up("a", "a") == identity("a").steps[0]


@pytest.mark.parametrize("name", ["chain.json", "crown2.json", "crown3.json", "crown2_top.json",
                                  "crown2_bottom.json", "antichain.json"])
def test_certified_fixtures(name):
    cert = check_confluence(poset(name))
    assert cert.certified and not cert.witnesses


def test_bowtie_has_unjoinable_peak(bowtie):
    cert = check_confluence(bowtie)
    assert not cert.certified
    peaks = {str(c.peak) for c in cert.witnesses}
    assert "d(x1,x4)*u(x4,x2)*u(x2,x0)" in peaks


def test_bowtie_equivalence_still_decided(bowtie):
    c = next(c for c in check_confluence(bowtie).witnesses)
    assert c.left != c.right
    assert equivalent(bowtie, c.left, c.right) is Verdict.YES


def test_semigroup_zero(chain):
    p = PathClass.of(chain, parse_path(chain, "u(b,a)"))
    q = PathClass.of(chain, parse_path(chain, "u(c,b)"))
    assert concat(p, p).is_zero
    assert concat(PathClass.zero(), p).is_zero
    assert str(q * p) == "[u(c,a)]"


def test_equivalence_endpoints(crown2):
    assert equivalent(crown2, identity("a1"), identity("a2")) is Verdict.NO


def _words(P, n):
    return list(enumerate_words(P, n))


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["chain.json", "crown2.json", "crown2_top.json", "bowtie_tower.json"]), st.data())
def test_reduce_properties(name, data):
    P = poset(name)
    p = data.draw(st.sampled_from(_words(P, 5)))
    r = reduce(P, p)
    assert is_irreducible(P, r)
    assert reduce(P, r) == r
    assert (r.start, r.end) == (p.start, p.end)
    assert r.length <= p.length
    assert reduce(P, p * p.reverse()) == identity(p.end)


@settings(max_examples=25, deadline=None)
@given(random_posets(max_size=4))
def test_reduce_is_sound_on_random_posets(P):
    closure = RelationClosure(P, 6)
    for p in enumerate_words(P, 4):
        assert closure.same(p, reduce(P, p)), str(p)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["chain.json", "crown2.json", "crown3.json"]), st.data())
def test_path_class_associative(name, data):
    P = poset(name)
    words = [PathClass.of(P, w) for w in _words(P, 3)]
    x, y, z = (data.draw(st.sampled_from(words)) for _ in range(3))
    assert (x * y) * z == x * (y * z)


@settings(max_examples=25, deadline=None)
@given(random_posets(max_size=4))
def test_normal_forms_unique_when_certified(P):
    if not P.certified:
        return
    closure = RelationClosure(P, 6)
    words = list(enumerate_words(P, 3))
    for p in words:
        for q in words:
            if (p.start, p.end) == (q.start, q.end) and closure.same(p, q):
                assert reduce(P, p) == reduce(P, q), (str(p), str(q))

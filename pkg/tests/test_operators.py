from fractions import Fraction

from hypothesis import given, settings, strategies as st

from conftest import poset
from gradednets.operators import BasisPartialMap, BasisVector, OperatorSum
from gradednets.paths import identity, parse_path

P = poset("crown2.json")
G = parse_path(P, "d(a1,b2)*u(b2,a2)*d(a2,b1)*u(b1,a1)")
TAGS = [identity("a1"), G, G * G, G.reverse()]


@st.composite
def partial_maps(draw, n=3):
    dom = draw(st.lists(st.integers(0, n - 1), unique=True, max_size=n))
    img = draw(st.permutations(range(n)))
    tag = draw(st.sampled_from(TAGS))
    return BasisPartialMap.build(P, "a1", "a1", dict(zip(dom, img)), tag)


@st.composite
def sums(draw):
    out = OperatorSum.zero(P)
    for m in draw(st.lists(partial_maps(), max_size=3)):
        out = out + OperatorSum.of(m, Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 3))))
    return out


def test_compose_and_adjoint():
    m = BasisPartialMap.build(P, "a1", "b1", {0: 1, 1: 0}, parse_path(P, "u(b1,a1)"))
    assert m.adjoint().compose(m).is_projection
    assert m.compose(m) is None
    v = BasisVector("a1", 0, identity("a1"))
    assert m.apply(v) == BasisVector("b1", 1, parse_path(P, "u(b1,a1)"))
    assert m.apply(v, budget=0) is None


def test_zero_and_equality():
    z = OperatorSum.zero(P)
    m = BasisPartialMap.identity_on(P, "a1", [0, 1])
    x = OperatorSum.of(m)
    assert x - x == z and (x - x).is_zero
    assert x.is_projection and x.is_partial_isometry
    assert OperatorSum.of(m, 2).as_partial_map() is None


@settings(max_examples=60, deadline=None)
@given(sums(), sums(), sums())
def test_product_associative_and_distributive(x, y, z):
    assert (x @ y) @ z == x @ (y @ z)
    assert x @ (y + z) == x @ y + x @ z


@settings(max_examples=60, deadline=None)
@given(sums(), sums())
def test_adjoint_reverses_products(x, y):
    assert (x @ y).adjoint() == y.adjoint() @ x.adjoint()
    assert x.adjoint().adjoint() == x


@settings(max_examples=60, deadline=None)
@given(partial_maps())
def test_partial_isometry_identities(m):
    x = OperatorSum.of(m)
    assert x @ x.adjoint() @ x == x
    assert (x.adjoint() @ x).is_projection


@settings(max_examples=40, deadline=None)
@given(sums(), partial_maps())
def test_apply_matches_product(x, m):
    y = OperatorSum.of(m)
    for n in range(3):
        v = BasisVector("a1", n, identity("a1"))
        assert (x @ y).apply({v: 1}) == x.apply(y.apply({v: 1}))

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import net
from gradednets.errors import BasepointMismatch, NonConvergence, NotCertified
from gradednets.graded_algebra import (GradedElement, adjoint, conditional_expectation,
                                       degree_zero_generators, grading_report, materialize,
                                       multiply, norm_estimate, random_elements, sample_elements)
from gradednets.net_hilbert import TruncatedNet
from gradednets.paths import identity, parse_path, reduce
from conftest import poset

CROWN_LOOP = "d(a1,b2)*u(b2,a2)*d(a2,b1)*u(b1,a1)"
N = net("net_crown2_square.json")
P = N.poset
G = parse_path(P, CROWN_LOOP)
g = GradedElement.chi(N, G)
e = GradedElement.chi(N, identity("a1"))


def test_degree_e_times_degree_g():
    assert multiply(e, g).degrees == [G]
    assert multiply(g, adjoint(g)).degrees == [identity("a1")]
    assert multiply(g, adjoint(g)).op.is_projection
    assert multiply(g, GradedElement.zero(N, "a1")).is_zero


def test_basepoint_mismatch():
    with pytest.raises(BasepointMismatch):
        multiply(g, GradedElement.chi(N, identity("a2")))


def test_adjoint_degrees():
    assert adjoint(e) == e
    assert adjoint(adjoint(g)) == g
    assert adjoint(g).degrees == [reduce(P, G.reverse())]


def test_expectation_examples():
    x = e.scale(3) + g.scale(Fraction(1, 2))
    assert conditional_expectation(x) == e.scale(3)
    assert conditional_expectation(e) == e
    assert conditional_expectation(g).is_zero


def test_norms_of_basic_elements():
    assert norm_estimate(e) == pytest.approx(1.0, abs=1e-9)
    assert norm_estimate(g) == pytest.approx(1.0, abs=1e-9)
    assert norm_estimate(GradedElement.zero(N, "a1")) == 0.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_norm_matches_svd(seed):
    for x in random_elements(N, "a1", [G], 3, seed):
        want = np.linalg.svd(materialize(x), compute_uv=False).max(initial=0.0)
        assert norm_estimate(x, 1e-10) == pytest.approx(want, rel=1e-6, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_expectation_contracts(seed):
    for x in random_elements(N, "a1", [G], 3, seed):
        assert norm_estimate(conditional_expectation(x)) <= norm_estimate(x) + 1e-9


def test_iteration_cap():
    x = e.scale(2) + g.scale(3) + adjoint(g)
    with pytest.raises(NonConvergence):
        norm_estimate(x, tol=1e-15, max_iter=1)


def test_degree_zero_commutative():
    zs = degree_zero_generators(N, "a1")
    for x in zs:
        for y in zs:
            assert x @ y == y @ x


def test_bimodularity_on_samples():
    zs = degree_zero_generators(N, "a1")
    for x in sample_elements(N, "a1", [G], 2):
        for A in zs:
            assert conditional_expectation(A @ x @ A) == A @ conditional_expectation(x) @ A


def test_grading_report_crown():
    rep = grading_report(net("net_crown2.json"), "a1", [G], random_count=20)
    assert rep.ok, rep.failures()


def test_grading_report_chain_single_bucket():
    Nc = net("net_chain_embed.json")
    rep = grading_report(Nc, "b", [])
    assert rep.ok
    assert all(x.degrees in ([identity("b")], []) for x in sample_elements(Nc, "b", [], 2))


def test_grading_report_needs_certificate():
    B = poset("bowtie_tower.json")
    Nb = TruncatedNet(B, {}, {(a, b): [0] for a, b in B.relation() if a != b}, 2)
    with pytest.raises(NotCertified):
        grading_report(Nb, "x0", [])

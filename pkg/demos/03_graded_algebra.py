"""Graded elements over the crown net: products, adjoints, and the expectation."""

from fractions import Fraction

from gradednets.graded_algebra import GradedElement, adjoint, conditional_expectation, norm_estimate
from gradednets.io import load_net
from gradednets.net_algebras import canonical_loops
from gradednets.paths import identity

N, _ = load_net("net_crown2_square.json")
g = canonical_loops(N.poset, "a1", 4)[0]
x = GradedElement.chi(N, g)
e = GradedElement.chi(N, identity("a1"))
print("generator degree:", x.homogeneous_degree)
print("x x* degree:", (x @ adjoint(x)).homogeneous_degree)
print("x x degree:", (x @ x).homogeneous_degree)

y = x.scale(3) + e.scale(Fraction(1, 2)) + (x @ x).scale(-1)
Ey = conditional_expectation(y)
print("degrees of y:", [str(d) for d in y.degrees])
print("degrees of E(y):", [str(d) for d in Ey.degrees])
print(f"||E(y)|| = {norm_estimate(Ey):.6f} <= ||y|| = {norm_estimate(y):.6f}")

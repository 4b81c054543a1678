"""The loop-graded operator algebra at a basepoint.

An element is an :class:`OperatorSum` supported on the ``a``-slice; its
degree-``p`` part collects the terms whose path tag is the canonical loop
``p``.  On a confluence-certified poset canonical loops are in bijection
with loop classes, so reading degrees off tags is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import BasepointMismatch, NonConvergence, NotALoop, NotCertified
from .net_hilbert import TruncatedNet, chi_seq
from .operators import BasisPartialMap, OperatorSum
from .paths import PathSeq, identity, reduce
from .report import Report


@dataclass(frozen=True, eq=False)
class GradedElement:
    net: TruncatedNet
    base: object
    op: OperatorSum

    def __post_init__(self):
        for src, dst, tag in self.op.blocks:
            if src != self.base or dst != self.base:
                raise BasepointMismatch(f"term {src}->{dst} is not a loop at {self.base!r}")

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, net: TruncatedNet, base) -> "GradedElement":
        return cls(net, base, OperatorSum.zero(net.poset))

    @classmethod
    def from_map(cls, net: TruncatedNet, m: BasisPartialMap, coeff=1) -> "GradedElement":
        if not m.is_loop:
            raise NotALoop(f"{m} is not a loop operator")
        return cls(net, m.src, OperatorSum.of(m, coeff) if not m.is_zero else OperatorSum.zero(net.poset))

    @classmethod
    def chi(cls, net: TruncatedNet, p: PathSeq, coeff=1) -> "GradedElement":
        if not p.is_loop:
            raise NotALoop(f"{p} is not a loop")
        op = OperatorSum.of(chi_seq(net, p), coeff)
        return cls(net, p.start, OperatorSum(op.blocks, net.poset))

    # -- structure ---------------------------------------------------------
    @property
    def identity_degree(self) -> PathSeq:
        return identity(self.base)

    @property
    def parts(self) -> dict[PathSeq, OperatorSum]:
        return self.op.buckets()

    @property
    def degrees(self) -> list[PathSeq]:
        return list(self.parts)

    @property
    def is_zero(self) -> bool:
        return self.op.is_zero

    @property
    def homogeneous_degree(self) -> PathSeq | None:
        degs = self.degrees
        return degs[0] if len(degs) == 1 else None

    def part(self, degree: PathSeq) -> "GradedElement":
        return GradedElement(self.net, self.base, self.op.bucket(reduce(self.net.poset, degree)))

    def _same_base(self, other: "GradedElement") -> None:
        if other.base != self.base:
            raise BasepointMismatch(f"basepoints {self.base!r} and {other.base!r} differ")

    def __add__(self, other: "GradedElement") -> "GradedElement":
        self._same_base(other)
        return GradedElement(self.net, self.base, self.op + other.op)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        self._same_base(other)
        return GradedElement(self.net, self.base, self.op - other.op)

    def scale(self, c) -> "GradedElement":
        return GradedElement(self.net, self.base, self.op.scale(c))

    def __matmul__(self, other: "GradedElement") -> "GradedElement":
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedElement) and self.base == other.base and self.op == other.op

    def __hash__(self):
        return hash((self.base, self.op))

    def __repr__(self) -> str:
        return f"GradedElement({self.base!r}, {self.op!r})"


def multiply(x: GradedElement, y: GradedElement) -> GradedElement:
    x._same_base(y)
    return GradedElement(x.net, x.base, x.op @ y.op)


def adjoint(x: GradedElement) -> GradedElement:
    return GradedElement(x.net, x.base, x.op.adjoint())


def conditional_expectation(x: GradedElement) -> GradedElement:
    """Projection onto the degree-``e`` part."""
    return GradedElement(x.net, x.base, x.op.bucket(x.identity_degree))


# -- numerics ----------------------------------------------------------------

def materialize(x: GradedElement) -> np.ndarray:
    """Compression of ``x`` to the truncated basis of the ``a``-slice.

    Images leaving the basis are dropped.  Degree-``e`` terms keep the path
    index fixed while other degrees move it, so the compression of the
    degree-``e`` part is the path-diagonal block of the compression of
    ``x``: the finite-stage inequality is exact, not approximate.
    """
    basis = x.net.basis(x.base)
    pos = {v: k for k, v in enumerate(basis)}
    M = np.zeros((len(basis), len(basis)))
    for v in basis:
        for w, c in x.op.apply({v: 1}, x.net.L).items():
            if w in pos:
                M[pos[w], pos[v]] += float(c)
    return M


def norm_estimate(x: GradedElement, tol: float = 1e-9, max_iter: int = 10_000) -> float:
    """Largest singular value of :func:`materialize` by power iteration on ``M^T M``."""
    M = materialize(x)
    if not M.any():
        return 0.0
    G = M.T @ M
    v = np.ones(G.shape[0]) / np.sqrt(G.shape[0])
    v = v + 1e-3 * np.arange(G.shape[0]) / G.shape[0]  # avoid starting orthogonal to the top vector
    lam = 0.0
    for _ in range(max_iter):
        w = G @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        new = float(v @ G @ v)
        residual = np.linalg.norm(G @ v - new * v)
        if residual <= tol * max(new, 1.0) or abs(new - lam) <= tol * tol * max(new, 1.0):
            return float(np.sqrt(max(new, 0.0)))
        lam = new
    raise NonConvergence(f"power iteration did not converge in {max_iter} steps")


# -- samples and axioms ------------------------------------------------------

def degree_zero_generators(N: TruncatedNet, a) -> list[GradedElement]:
    """Trivial cycles through each neighbour of ``a``: diagonal projections."""
    P = N.poset
    out = [GradedElement.chi(N, identity(a))]
    from .paths import down, seq, up

    for b in sorted(P.up_set(a) - {a}, key=str):
        out.append(GradedElement.chi(N, seq(down(a, b), up(b, a))))
    for c in sorted(P.down_set(a) - {a}, key=str):
        out.append(GradedElement.chi(N, seq(up(a, c), down(c, a))))
    return out


def sample_elements(N: TruncatedNet, a, gens: list[PathSeq], max_letters: int = 3) -> list[GradedElement]:
    """Products of at most ``max_letters`` letters from the generators, their adjoints and the degree-``e`` projections."""
    letters = degree_zero_generators(N, a)
    for g in gens:
        x = GradedElement.chi(N, g)
        letters += [x, adjoint(x)]
    seen = {}
    for k in range(1, max_letters + 1):
        for word in product(letters, repeat=k):
            x = word[0]
            for y in word[1:]:
                x = x @ y
            seen.setdefault(x, None)
    return list(seen)


def random_elements(N: TruncatedNet, a, gens: list[PathSeq], count: int, seed: int = 0) -> list[GradedElement]:
    """Seeded random rational combinations of sampled monomials."""
    rng = random.Random(seed)
    pool = [x for x in sample_elements(N, a, gens, 2) if not x.is_zero]
    out = []
    for _ in range(count):
        x = GradedElement.zero(N, a)
        for m in rng.sample(pool, min(len(pool), rng.randint(1, 4))):
            x = x + m.scale(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
        out.append(x)
    return out


def grading_report(N: TruncatedNet, a, gens: list[PathSeq], max_letters: int = 3,
                   random_count: int = 0, tol: float = 1e-9, seed: int = 0) -> Report:
    P = N.poset
    if not P.certified:
        raise NotCertified("degrees read off tags need a confluence certificate")
    for g in gens:
        if not g.is_loop or g.start != a:
            raise NotALoop(f"{g} is not a loop at {a!r}")
    rep = Report(f"grading at {a}")
    samples = sample_elements(N, a, gens, max_letters)
    homog = [x for x in samples if x.homogeneous_degree is not None]
    e = identity(a)

    bad = [x for x in samples for d, part in x.parts.items() if any(t[2] != d for t in part.blocks)]
    rep.check("each bucket carries a single degree", not bad, len(samples), bad[:2])

    bad, n = [], 0
    for x, y in product(homog, repeat=2):
        z = x @ y
        if z.is_zero:
            continue
        n += 1
        want = reduce(P, x.homogeneous_degree * y.homogeneous_degree)
        if z.degrees != [want]:
            bad.append((x, y))
    rep.check("deg(xy) = deg(x) deg(y)", not bad, n, bad[:2])

    bad = [x for x in homog
           if adjoint(x).degrees != [reduce(P, x.homogeneous_degree.reverse())]]
    rep.check("adjoint inverts the degree", not bad, len(homog), bad[:2])

    bad = [x for x in samples if adjoint(adjoint(x)) != x]
    rep.check("adjoint is an involution", not bad, len(samples), bad[:2])

    zero_part = [x for x in homog if x.homogeneous_degree == e]
    bad = [(x, y) for x, y in product(zero_part, repeat=2) if x @ y != y @ x]
    rep.check("degree-e part commutative", not bad, len(zero_part) ** 2, bad[:2])

    E = conditional_expectation
    bad = [x for x in samples if E(E(x)) != E(x)]
    rep.check("expectation idempotent", not bad, len(samples), bad[:2])

    bad, n = [], 0
    for A, C in product(zero_part, repeat=2):
        for x in samples:
            n += 1
            if E(A @ x @ C) != A @ E(x) @ C:
                bad.append((A, x, C))
    rep.check("expectation bimodular over degree e", not bad, n, bad[:2])

    bad, n = [], 0
    for x in homog:
        d = x.homogeneous_degree
        others = [y for y in samples if d not in y.degrees]
        total = GradedElement.zero(N, a)
        for k, y in enumerate(others):
            total = total + y.scale(k + 1)
        n += 1
        if not total.part(d).is_zero:
            bad.append(x)
    rep.check("other degrees never reach a given bucket", not bad, n, bad[:2])

    bad, n = [], 0
    for A in zero_part:
        for x in homog:
            n += 1
            y = A @ x
            if not y.is_zero and y.degrees != x.degrees:
                bad.append((A, x))
    rep.check("buckets closed under degree-e multiplication", not bad, n, bad[:2])

    if random_count:
        worst, bad = 0.0, []
        for x in random_elements(N, a, gens, random_count, seed):
            lhs, rhs = norm_estimate(E(x), tol), norm_estimate(x, tol)
            worst = max(worst, lhs - rhs)
            if lhs > rhs + tol:
                bad.append((x, lhs, rhs))
        rep.check("||E(x)|| <= ||x|| + tol", not bad, random_count, bad[:2])
        rep.data["worst norm excess"] = worst
    rep.data["samples"] = len(samples)
    return rep

"""Truncated nets of Hilbert spaces and the chi-operator calculus.

``H_a`` is spanned by ``dims[a]`` basis indices, ``gamma[(a, b)]`` is the
index injection realizing the embedding ``H_a -> H_b`` and ``l2(S_a)`` is
cut down to path classes whose canonical representative has at most ``L``
non-trivial steps.  An operator identity involving a word of ``w`` steps is
only asserted on basis vectors whose path has length ``<= L - w``; on those
the truncation cannot interfere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import (IncoherentNet, InputError, NotALoop, NotCertified, NotComparable,
                     NotComparableCycles)
from .operators import BasisPartialMap, BasisVector, OperatorSum
from .paths import (PathClass, PathSeq, Step, Verdict, equivalent, identity,
                    irreducible_paths_ending_at, loops_at, reduce, seq, up)
from .poset import Poset
from .report import Report


class TruncatedNet:
    """Finite stand-in for a net of Hilbert spaces; immutable after construction."""

    def __init__(self, poset: Poset, dims: dict, gamma: dict, L: int):
        self.poset = P = poset
        if L < 0:
            raise InputError("path budget L must be non-negative")
        self.L = L
        self.dims = {}
        for a in P.elements:
            d = dims.get(a, 1)
            if not isinstance(d, int) or d < 1:
                raise InputError(f"dims[{a!r}] must be a positive integer")
            self.dims[a] = d
        for a in dims:
            P.check(a)
        self.gamma = self._close_gamma(gamma)
        self._check_coherence()

    def _close_gamma(self, given: dict) -> dict:
        P = self.poset
        g: dict = {}
        for (a, b), img in given.items():
            P.check(a)
            P.check(b)
            if not P.leq(a, b):
                raise NotComparable(f"gamma given for {a!r} !<= {b!r}")
            img = tuple(int(x) for x in img)
            if len(img) != self.dims[a]:
                raise IncoherentNet(f"gamma({a},{b}) has {len(img)} entries, dims[{a}] = {self.dims[a]}")
            if any(not 0 <= x < self.dims[b] for x in img):
                raise IncoherentNet(f"gamma({a},{b}) leaves H_{b}")
            if len(set(img)) != len(img):
                raise IncoherentNet(f"gamma({a},{b}) is not injective")
            if a == b and img != tuple(range(self.dims[a])):
                raise IncoherentNet(f"gamma({a},{a}) must be the identity")
            if a != b:
                g[(a, b)] = img
        changed = True
        while changed:
            changed = False
            for a, b in P.relation():
                if a == b or (a, b) in g:
                    continue
                for c in P.elements:
                    if (a, c) in g and (c, b) in g:
                        inner, outer = g[(a, c)], g[(c, b)]
                        g[(a, b)] = tuple(outer[x] for x in inner)
                        changed = True
                        break
        missing = [(a, b) for a, b in P.relation() if a != b and (a, b) not in g]
        if missing:
            raise IncoherentNet(f"no gamma for comparable pairs {missing[:3]}")
        return g

    def _check_coherence(self) -> None:
        P = self.poset
        for a, b in P.relation():
            for c in P.up_set(b):
                if a == b or b == c:
                    continue
                lhs = self.gamma_map(a, c)
                rhs = tuple(self.gamma_map(b, c)[x] for x in self.gamma_map(a, b))
                if lhs != rhs:
                    raise IncoherentNet(f"gamma({a},{c}) != gamma({b},{c}) o gamma({a},{b})")

    def gamma_map(self, a, b) -> tuple[int, ...]:
        if a == b:
            return tuple(range(self.dims[a]))
        return self.gamma[(a, b)]

    @property
    def all_gammas_bijective(self) -> bool:
        return all(self.dims[a] == self.dims[b] for a, b in self.gamma)

    def with_budget(self, L: int) -> "TruncatedNet":
        return TruncatedNet(self.poset, self.dims, self.gamma, L)

    # -- basis ---------------------------------------------------------------
    @cached_property
    def _paths(self) -> dict:
        return {a: irreducible_paths_ending_at(self.poset, a, self.L) for a in self.poset.elements}

    def paths(self, site) -> list[PathSeq]:
        return self._paths[site]

    def basis(self, site) -> list[BasisVector]:
        return [BasisVector(site, n, p) for n in range(self.dims[site]) for p in self._paths[site]]

    def interior(self, site, word_length: int) -> list[BasisVector]:
        """Basis vectors at ``site`` that survive any ``word_length``-step word."""
        cap = self.L - word_length
        return [v for v in self.basis(site) if v.path.length <= cap]

    def __repr__(self) -> str:
        return f"TruncatedNet({len(self.poset)} sites, L={self.L})"


@dataclass(frozen=True)
class DomainSubspace:
    site: object
    basis_indices: frozenset

    @property
    def dim(self) -> int:
        return len(self.basis_indices)


# -- chi operators -----------------------------------------------------------

def chi_step(N: TruncatedNet, a, b, starred: bool = False) -> BasisPartialMap:
    """``chi_a^b`` (or its adjoint) for ``a <= b``."""
    P = N.poset
    if not P.leq(a, b):
        raise NotComparable(f"need {a!r} <= {b!r}")
    g = N.gamma_map(a, b)
    m = BasisPartialMap.build(P, a, b, dict(enumerate(g)), seq(up(b, a)))
    return m.adjoint() if starred else m


def step_operator(N: TruncatedNet, s: Step) -> BasisPartialMap:
    if s.kind == "i":
        return BasisPartialMap.identity_on(N.poset, s.lo, range(N.dims[s.lo]))
    if s.kind == "u":
        return chi_step(N, s.lo, s.hi)
    return chi_step(N, s.lo, s.hi, starred=True)


def chi_seq(N: TruncatedNet, p: PathSeq) -> BasisPartialMap:
    """``chi`` of a step sequence, composed right to left."""
    steps = p.steps
    m = step_operator(N, steps[-1])
    for s in reversed(steps[:-1]):
        m = step_operator(N, s).compose(m)
    return m


def apply_stepwise(N: TruncatedNet, p: PathSeq, v: BasisVector) -> BasisVector | None:
    """Act with ``p`` one elementary factor at a time (no symbolic composition)."""
    for s in reversed(p.steps):
        if v is None:
            return None
        v = step_operator(N, s).apply(v, N.L)
    return v


def domain_of(N: TruncatedNet, p: PathSeq) -> DomainSubspace:
    """Indices ``h`` at the start of ``p`` on which ``chi_p`` is non-zero.

    The index part of ``chi_p`` does not depend on the path index, so the
    domain is read off the composed partial injection.
    """
    return DomainSubspace(p.start, chi_seq(N, p).domain)


def verify_chi_laws(N: TruncatedNet) -> Report:
    """Composition, adjoint composition and the two range laws, vector by vector."""
    P = N.poset
    rep = Report("chi laws")
    pairs = [(a, b) for a, b in P.relation() if a != b]
    chains = [(a, b, c) for a, b in pairs for c in P.up_set(b) if c != b]
    fails: list = []
    n = 0
    for a, b, c in chains:
        ac, ab, bc = chi_step(N, a, c), chi_step(N, a, b), chi_step(N, b, c)
        for v in N.interior(a, 2):
            n += 1
            w = ab.apply(v, N.L)
            rhs = bc.apply(w, N.L) if w is not None else None
            if ac.apply(v, N.L) != rhs:
                fails.append(("compose", a, b, c, v))
    rep.check("chi_a^c = chi_b^c chi_a^b", not fails, n, fails[:3])
    fails, n = [], 0
    for a, b, c in chains:
        ac, ab, bc = (chi_step(N, a, c, True), chi_step(N, a, b, True), chi_step(N, b, c, True))
        for v in N.interior(c, 2):
            n += 1
            w = bc.apply(v, N.L)
            rhs = ab.apply(w, N.L) if w is not None else None
            if ac.apply(v, N.L) != rhs:
                fails.append(("compose*", a, b, c, v))
    rep.check("chi_a^c* = chi_a^b* chi_b^c*", not fails, n, fails[:3])
    fails, n = [], 0
    for a, b in pairs:
        x, xs = chi_step(N, a, b), chi_step(N, a, b, True)
        for v in N.interior(a, 2):
            n += 1
            w = x.apply(v, N.L)
            if w is None or xs.apply(w, N.L) != v:
                fails.append(("chi* chi", a, b, v))
    rep.check("chi* chi = identity on the a-slice", not fails, n, fails[:3])
    fails, n = [], 0
    for a, b in pairs:
        x, xs = chi_step(N, a, b), chi_step(N, a, b, True)
        image = set(N.gamma_map(a, b))
        for v in N.interior(b, 2):
            n += 1
            w = xs.apply(v, N.L)
            got = x.apply(w, N.L) if w is not None else None
            if got != (v if v.index in image else None):
                fails.append(("chi chi*", a, b, v))
    rep.check("chi chi* = projection onto the image in the b-slice", not fails, n, fails[:3])
    return rep


# -- cycles ------------------------------------------------------------------

@dataclass(frozen=True)
class CycleClass:
    kind: str  # "trivial" | "nontrivial" | "undecided"
    operator: BasisPartialMap
    is_projection: bool
    domain_dim: int
    nilpotent_power: int | None

    @property
    def finite(self) -> bool:
        return True

    @property
    def nilpotent(self) -> bool:
        return self.nilpotent_power is not None


def cycle_classify(N: TruncatedNet, p: PathSeq) -> CycleClass:
    if not p.is_loop:
        raise NotALoop(f"{p} is not a loop")
    verdict = equivalent(N.poset, p, identity(p.start))
    kind = {Verdict.YES: "trivial", Verdict.NO: "nontrivial"}.get(verdict, "undecided")
    op = chi_seq(N, p)
    power = None
    m = op
    for k in range(1, max(1, N.dims[p.start] * max(N.L, 1)) + 1):
        if m.is_zero:
            power = k
            break
        m = m.compose(op)
    return CycleClass(kind, op, op.is_projection, len(op.domain), power)


def _loop_map(x) -> BasisPartialMap:
    if isinstance(x, BasisPartialMap):
        m = x
    else:
        m = x.as_partial_map()
        if m is None:
            raise NotComparableCycles("operator is not a single partial isometry")
    if not m.is_loop:
        raise NotALoop(f"{m} is not a cycle")
    return m


def _require_equivalent(P: Poset, x: BasisPartialMap, y: BasisPartialMap) -> None:
    if x.src != y.src:
        raise NotComparableCycles("cycles at different basepoints")
    if x.tag == y.tag:
        return
    if equivalent(P, x.tag, y.tag) is not Verdict.YES:
        raise NotComparableCycles(f"loops {x.tag} and {y.tag} are not known to be equivalent")


def cycle_order_leq(N: TruncatedNet, x, y) -> bool:
    """``x <= y`` for cycles of equivalent loops: domain projections nest."""
    x, y = _loop_map(x), _loop_map(y)
    _require_equivalent(N.poset, x, y)
    return x.domain <= y.domain


def cycle_join(N: TruncatedNet, x, y) -> OperatorSum:
    """``x v y``: plain sum on disjoint domains, corrected sum otherwise."""
    x, y = _loop_map(x), _loop_map(y)
    _require_equivalent(N.poset, x, y)
    P = N.poset
    X, Y = OperatorSum.of(x), OperatorSum.of(y)
    common = x.domain & y.domain
    if not common:
        return X + Y
    Qy = OperatorSum.of(BasisPartialMap.identity_on(P, x.src, y.domain))
    Q = OperatorSum.of(BasisPartialMap.identity_on(P, x.src, common))
    return X + Y @ (Qy - Q)


def join_projection_identity(N: TruncatedNet, x, y) -> bool:
    """``(x v y)* (x v y) = (Q_x + Q_y - Q) (x) I`` exactly."""
    x, y = _loop_map(x), _loop_map(y)
    J = cycle_join(N, x, y)
    P = N.poset
    proj = lambda idx: OperatorSum.of(BasisPartialMap.identity_on(P, x.src, idx))
    expected = proj(x.domain) + proj(y.domain) - proj(x.domain & y.domain)
    return J.adjoint() @ J == expected and J.is_partial_isometry


def domain_order_relations(N: TruncatedNet, p: PathSeq, q: PathSeq) -> dict[str, bool]:
    """Order relations between ``chi_p* chi_q`` and the source projections."""
    x, y = chi_seq(N, p), chi_seq(N, q)
    t = x.adjoint().compose(y)
    return {
        "projection": t.is_projection,
        "below chi_q* chi_q": cycle_order_leq(N, t, y.adjoint().compose(y)),
        "below chi_p* chi_p": cycle_order_leq(N, t, x.adjoint().compose(x)),
    }


def agree_on_common_domain(N: TruncatedNet, p: PathSeq, q: PathSeq) -> tuple[bool, int]:
    """Equivalent sequences act identically on the intersection of their domains."""
    dp, dq = domain_of(N, p), domain_of(N, q)
    common = dp.basis_indices & dq.basis_indices
    w = max(len(p), len(q))
    n = 0
    for v in N.interior(p.start, w):
        if v.index in common:
            n += 1
            if apply_stepwise(N, p, v) != apply_stepwise(N, q, v):
                return False, n
    return True, n


# -- p-cycles ----------------------------------------------------------------

def p_cycle_members(N: TruncatedNet, p: PathClass, len_budget: int) -> list[PathSeq]:
    P = N.poset
    if not P.certified:
        raise NotCertified("class membership needs a confluence certificate")
    if p.is_zero or not p.repr.is_loop:
        raise NotALoop(f"{p} is not a loop class")
    a = p.start
    members = {p.repr}
    for w in loops_at(P, a, len_budget, include_trivial=False):
        if reduce(P, w) == p.repr:
            members.add(w)
    return sorted(members, key=lambda w: (len(w), str(w)))


def p_cycle(N: TruncatedNet, p: PathClass, len_budget: int) -> OperatorSum:
    """Join of ``chi`` over all class members of at most ``len_budget`` steps."""
    acc = None
    for w in p_cycle_members(N, p, len_budget):
        m = chi_seq(N, w)
        if acc is None:
            acc = OperatorSum.of(m) if not m.is_zero else None
            continue
        if m.is_zero:
            continue
        acc = cycle_join(N, acc, m)
    return acc if acc is not None else OperatorSum.zero(N.poset)


def p_cycle_stabilization(N: TruncatedNet, p: PathClass, max_budget: int) -> tuple[int, list[int]]:
    """Budget after which the p-cycle's domain stopped growing, and the domain sizes."""
    sizes = []
    for b in range(max_budget + 1):
        op = p_cycle(N, p, b)
        m = op.as_partial_map()
        sizes.append(len(m.domain) if m is not None else 0)
    stable = next(b for b in range(len(sizes)) if all(s == sizes[-1] for s in sizes[b:]))
    return stable, sizes


def projection_leq(x: OperatorSum, y: OperatorSum) -> bool:
    """``x <= y`` for partial isometries: ``x`` is ``y`` cut down to ``x``'s domain."""
    if x.is_zero:
        return True
    mx, my = x.as_partial_map(), y.as_partial_map()
    if mx is None or my is None or mx.tag != my.tag or mx.src != my.src:
        return False
    return mx.domain <= my.domain and my.restrict(mx.domain) == mx

"""Elementary paths, the path semigroup and its rewriting system.

Words are stored in the written order ``s_n * ... * s_1``: the rightmost
step is applied first, so ``word[-1].start`` is the starting point and
``word[0].end`` the ending point.  Textual syntax mirrors that order::

    d(a,b)   the descending step (a, b), a <= b, from b down to a
    u(b,a)   the ascending step over (b, a), b >= a, from a up to b
    i(a)     the trivial step at a

Reduction uses length-2 rules only:

* absorb a trivial step next to any step;
* collapse ``x -> y -> z`` to one step (or to ``i(x)`` if ``x == z``)
  whenever ``x`` and ``z`` are comparable -- this covers the four defining
  relations and their mixed up/down variants;
* reroute ``x -> y -> z`` (``x``, ``z`` incomparable) through the
  highest-ranked ``w`` comparable to all three, if ``w`` outranks ``y``.

Every rule is a consequence of the defining relations, each rule shrinks
``(length, rank deficit of inner vertices)``, so reduction terminates.
"""

from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, NamedTuple

from .errors import InputError, UnknownElement
from .poset import Poset, _key


class Step(NamedTuple):
    kind: str  # "d" | "u" | "i"
    lo: object
    hi: object

    @property
    def start(self):
        return self.hi if self.kind == "d" else self.lo

    @property
    def end(self):
        return self.lo if self.kind == "d" else self.hi

    @property
    def trivial(self) -> bool:
        return self.kind == "i"

    def reverse(self) -> "Step":
        if self.kind == "i":
            return self
        return Step("u" if self.kind == "d" else "d", self.lo, self.hi)

    def relabel(self, phi) -> "Step":
        return step_between_unchecked(phi(self.start), phi(self.end), self.kind, phi(self.lo), phi(self.hi))

    def __str__(self) -> str:
        if self.kind == "d":
            return f"d({self.lo},{self.hi})"
        if self.kind == "u":
            return f"u({self.hi},{self.lo})"
        return f"i({self.lo})"


def trivial(a) -> Step:
    return Step("i", a, a)


def down(lo, hi) -> Step:
    """Descending step from ``hi`` to ``lo``."""
    return trivial(lo) if lo == hi else Step("d", lo, hi)


def up(hi, lo) -> Step:
    """Ascending step from ``lo`` to ``hi``."""
    return trivial(lo) if lo == hi else Step("u", lo, hi)


def step_between(P: Poset, start, end) -> Step:
    if start == end:
        return trivial(start)
    if P.leq(end, start):
        return Step("d", end, start)
    if P.leq(start, end):
        return Step("u", start, end)
    raise InputError(f"{start!r} and {end!r} are not comparable")


def step_between_unchecked(start, end, kind, lo, hi) -> Step:
    if start == end:
        return trivial(start)
    return Step(kind, lo, hi)


def check_step(P: Poset, s: Step) -> None:
    P.check(s.lo)
    P.check(s.hi)
    if s.kind == "i":
        if s.lo != s.hi:
            raise InputError(f"trivial step with distinct endpoints: {s}")
    elif s.kind in ("d", "u"):
        if not P.lt(s.lo, s.hi):
            raise InputError(f"step {s} needs {s.lo!r} < {s.hi!r}")
    else:
        raise InputError(f"unknown step kind {s.kind!r}")


@dataclass(frozen=True)
class PathSeq:
    steps: tuple[Step, ...]

    def __post_init__(self):
        if not self.steps:
            raise InputError("a path needs at least one step")
        for left, right in zip(self.steps, self.steps[1:]):
            if right.end != left.start:
                raise InputError(f"steps {left} * {right} are not composable")

    @property
    def start(self):
        return self.steps[-1].start

    @property
    def end(self):
        return self.steps[0].end

    @property
    def is_loop(self) -> bool:
        return self.start == self.end

    @property
    def is_trivial(self) -> bool:
        return len(self.steps) == 1 and self.steps[0].trivial

    @property
    def length(self) -> int:
        """Number of non-trivial steps (the budget measure)."""
        return sum(1 for s in self.steps if not s.trivial)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __mul__(self, other: "PathSeq") -> "PathSeq":
        if self.start != other.end:
            raise InputError(f"cannot compose {self} * {other}: {self.start!r} != {other.end!r}")
        return PathSeq(self.steps + other.steps)

    def reverse(self) -> "PathSeq":
        return PathSeq(tuple(s.reverse() for s in reversed(self.steps)))

    def relabel(self, phi) -> "PathSeq":
        f = phi.__getitem__ if isinstance(phi, dict) else phi
        return PathSeq(tuple(s.relabel(f) for s in self.steps))

    def __str__(self) -> str:
        return "*".join(str(s) for s in self.steps)

    def __repr__(self) -> str:
        return f"PathSeq({self})"


def seq(*steps: Step) -> PathSeq:
    return PathSeq(tuple(steps))


def identity(a) -> PathSeq:
    return PathSeq((trivial(a),))


_STEP_RE = re.compile(r"\s*([dui])\s*\(\s*([^,()]+?)\s*(?:,\s*([^,()]+?)\s*)?\)\s*")


def parse_path(P: Poset, text: str) -> PathSeq:
    """Parse ``d(a,b)*u(b,a)*i(a)`` into a validated :class:`PathSeq`."""
    label_of = {str(e): e for e in P.elements}
    steps = []
    for chunk in text.split("*"):
        m = _STEP_RE.fullmatch(chunk)
        if not m:
            raise InputError(f"cannot parse step {chunk!r}")
        kind, x, y = m.groups()
        try:
            x = label_of[x]
            y = label_of[y] if y is not None else None
        except KeyError as exc:
            raise UnknownElement(f"unknown element {exc.args[0]!r} in {text!r}") from None
        if kind == "i":
            if y is not None and y != x:
                raise InputError(f"i() takes one element: {chunk!r}")
            s = trivial(x)
        elif y is None:
            raise InputError(f"{kind}() takes two elements: {chunk!r}")
        elif kind == "d":
            s = down(x, y)
        else:
            s = up(x, y)
        check_step(P, s)
        steps.append(s)
    return PathSeq(tuple(steps))


def make_path(P: Poset, steps) -> PathSeq:
    p = PathSeq(tuple(steps))
    for s in p.steps:
        check_step(P, s)
    return p


# -- rewriting ---------------------------------------------------------------

class RewriteSystem:
    """The oriented rule set instantiated on a finite poset."""

    def __init__(self, P: Poset):
        self.P = P
        self.steps: list[Step] = []
        for a, b in P.relation():
            if a == b:
                self.steps.append(trivial(a))
            else:
                self.steps.append(Step("d", a, b))
                self.steps.append(Step("u", a, b))
        self.steps.sort(key=lambda s: (s.kind, _key(s.lo), _key(s.hi)))
        self.out_steps: dict = {e: [] for e in P.elements}
        self.in_steps: dict = {e: [] for e in P.elements}
        for s in self.steps:
            self.out_steps[s.start].append(s)
            self.in_steps[s.end].append(s)
        # apex preference: most comparabilities first, then height, then label
        self._pref = {
            e: (len(P.up_set(e)) + len(P.down_set(e)), P.height[e], _key(e)) for e in P.elements
        }
        self.rule = lru_cache(maxsize=None)(self._rule)
        self._inverse = None

    def _rule(self, left: Step, right: Step):
        """Replacement for the written pair ``left * right``, or None."""
        if right.trivial:
            return (left,)
        if left.trivial:
            return (right,)
        P = self.P
        x, y, z = right.start, right.end, left.end
        if x == z:
            return (trivial(x),)
        if P.comparable(x, z):
            return (step_between(P, x, z),)
        best = None
        for w in P.elements:
            if w in (x, y, z):
                continue
            if P.comparable(w, x) and P.comparable(w, y) and P.comparable(w, z):
                if self._pref[w] > self._pref[y] and (best is None or self._pref[w] > self._pref[best]):
                    best = w
        if best is None:
            return None
        return (step_between(P, best, z), step_between(P, x, best))

    def composable_pairs(self) -> Iterator[tuple[Step, Step]]:
        for mid in self.P.elements:
            for right in self.in_steps[mid]:
                for left in self.out_steps[mid]:
                    yield left, right

    @property
    def inverse(self) -> dict:
        if self._inverse is None:
            inv: dict = {}
            for left, right in self.composable_pairs():
                rhs = self.rule(left, right)
                if rhs is not None:
                    inv.setdefault(rhs, []).append((left, right))
            self._inverse = inv
        return self._inverse

    def reduce_steps(self, steps: tuple[Step, ...]) -> tuple[Step, ...]:
        w = list(steps)
        i = 0
        while i < len(w) - 1:
            rhs = self.rule(w[i], w[i + 1])
            if rhs is None:
                i += 1
                continue
            w[i:i + 2] = rhs
            i = max(i - 1, 0)
        return tuple(w)

    def is_irreducible(self, steps: tuple[Step, ...]) -> bool:
        return all(self.rule(a, b) is None for a, b in zip(steps, steps[1:]))

    def one_step_reducts(self, steps: tuple[Step, ...]) -> Iterator[tuple[Step, ...]]:
        for i in range(len(steps) - 1):
            rhs = self.rule(steps[i], steps[i + 1])
            if rhs is not None:
                yield steps[:i] + rhs + steps[i + 2:]

    def one_step_expansions(self, steps: tuple[Step, ...]) -> Iterator[tuple[Step, ...]]:
        inv = self.inverse
        for i in range(len(steps)):
            for left, right in inv.get(steps[i:i + 1], ()):
                yield steps[:i] + (left, right) + steps[i + 1:]
            if i + 1 < len(steps):
                for left, right in inv.get(steps[i:i + 2], ()):
                    yield steps[:i] + (left, right) + steps[i + 2:]

    def all_normal_forms(self, steps: tuple[Step, ...]) -> set:
        """Every irreducible word reachable from ``steps`` by any strategy."""
        seen, out, stack = {steps}, set(), [steps]
        while stack:
            w = stack.pop()
            nxt = list(self.one_step_reducts(w))
            if not nxt:
                out.add(w)
            for v in nxt:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return out


@lru_cache(maxsize=1 << 16)
def reduce(P: Poset, p: PathSeq) -> PathSeq:
    """Irreducible form of ``p``; rewrites the leftmost redex first."""
    return PathSeq(P.rewriting.reduce_steps(p.steps))


def is_irreducible(P: Poset, p: PathSeq) -> bool:
    return P.rewriting.is_irreducible(p.steps)


# -- the path semigroup ------------------------------------------------------

@dataclass(frozen=True)
class PathClass:
    """Element of the path semigroup: an irreducible representative or 0."""

    repr: PathSeq | None
    poset: Poset | None = field(default=None, compare=False, hash=False, repr=False)

    @classmethod
    def of(cls, P: Poset, p: PathSeq) -> "PathClass":
        return cls(reduce(P, p), P)

    @classmethod
    def zero(cls) -> "PathClass":
        return cls(None)

    @property
    def is_zero(self) -> bool:
        return self.repr is None

    @property
    def start(self):
        return self.repr.start

    @property
    def end(self):
        return self.repr.end

    def inverse(self) -> "PathClass":
        if self.is_zero:
            return self
        return PathClass(reduce(self.poset, self.repr.reverse()), self.poset)

    def __mul__(self, other: "PathClass") -> "PathClass":
        return concat(self, other)

    def __str__(self) -> str:
        return "0" if self.is_zero else f"[{self.repr}]"


def concat(p: PathClass, q: PathClass) -> PathClass:
    """``p * q`` in the path semigroup; 0 absorbs and mismatches give 0."""
    if p.is_zero or q.is_zero or p.start != q.end:
        return PathClass.zero()
    P = p.poset or q.poset
    return PathClass(reduce(P, p.repr * q.repr), P)


# -- confluence --------------------------------------------------------------

@dataclass(frozen=True)
class CriticalPair:
    peak: PathSeq
    left: PathSeq
    right: PathSeq
    joinable: bool


@dataclass
class ConfluenceReport:
    terminating: bool
    critical_pairs: list[CriticalPair]
    certified: bool
    max_len: int

    @property
    def witnesses(self) -> list[CriticalPair]:
        return [c for c in self.critical_pairs if not c.joinable]


def check_confluence(P: Poset, max_len: int = 3) -> ConfluenceReport:
    """Critical-pair analysis of the rule set on ``P``.

    All left-hand sides have length 2, so every critical peak has length 3;
    together with termination (Newman's lemma) joinability of all of them
    certifies that irreducible forms are unique per equivalence class.
    """
    R = P.rewriting
    pairs: list[CriticalPair] = []
    if max_len >= 3:
        for mid_left, right in R.composable_pairs():
            if R.rule(mid_left, right) is None:
                continue
            for left in R.out_steps[mid_left.end]:
                if R.rule(left, mid_left) is None:
                    continue
                peak = (left, mid_left, right)
                lw = R.rule(left, mid_left) + (right,)
                rw = (left,) + R.rule(mid_left, right)
                lnf = R.all_normal_forms(lw)
                rnf = R.all_normal_forms(rw)
                joinable = bool(lnf & rnf)
                pairs.append(CriticalPair(
                    PathSeq(peak),
                    PathSeq(R.reduce_steps(lw)),
                    PathSeq(R.reduce_steps(rw)),
                    joinable,
                ))
    certified = max_len >= 3 and all(c.joinable for c in pairs)
    return ConfluenceReport(True, pairs, certified, max_len)


# -- equivalence -------------------------------------------------------------

class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


def equivalent(P: Poset, p: PathSeq, q: PathSeq, budget: int = 2000) -> Verdict:
    """Decide ``p ~ q`` as far as the available invariants allow."""
    if p.start != q.start or p.end != q.end:
        return Verdict.NO
    rp, rq = reduce(P, p), reduce(P, q)
    if rp == rq:
        return Verdict.YES
    if P.certified:
        return Verdict.NO
    from .homotopy import loop_is_abelian_trivial

    if not loop_is_abelian_trivial(P, rp * rq.reverse()):
        return Verdict.NO
    if _bidirectional_search(P, rp.steps, rq.steps, budget):
        return Verdict.YES
    return Verdict.UNKNOWN


def _bidirectional_search(P: Poset, a: tuple, b: tuple, budget: int) -> bool:
    R = P.rewriting
    seen = [{a}, {b}]
    frontier = [deque([a]), deque([b])]
    expanded = 0
    while expanded < budget and (frontier[0] or frontier[1]):
        side = 0 if (frontier[0] and (len(frontier[0]) <= len(frontier[1]) or not frontier[1])) else 1
        w = frontier[side].popleft()
        expanded += 1
        for v in (*R.one_step_reducts(w), *R.one_step_expansions(w)):
            if v in seen[1 - side]:
                return True
            if v not in seen[side]:
                seen[side].add(v)
                frontier[side].append(v)
    return False


# -- enumeration helpers -----------------------------------------------------

def enumerate_words(P: Poset, max_len: int, start=None, end=None,
                    include_trivial: bool = True) -> Iterator[PathSeq]:
    """Composable words of non-trivial steps, lengths 1..max_len.

    With ``include_trivial`` the one-step trivial words ``i(a)`` are yielded
    too.  Words are generated right to left (from the starting point).
    """
    R = P.rewriting
    starts = P.elements if start is None else (start,)
    if include_trivial:
        for a in starts:
            if end is None or end == a:
                yield identity(a)

    def grow(word):
        if end is None or word[0].end == end:
            yield PathSeq(word)
        if len(word) < max_len:
            for s in R.out_steps[word[0].end]:
                if not s.trivial:
                    yield from grow((s,) + word)

    for a in starts:
        for s in R.out_steps[a]:
            if not s.trivial and max_len >= 1:
                yield from grow((s,))


def loops_at(P: Poset, a, max_len: int, include_trivial: bool = True) -> Iterator[PathSeq]:
    return enumerate_words(P, max_len, start=a, end=a, include_trivial=include_trivial)


def irreducible_paths_ending_at(P: Poset, a, max_len: int) -> list[PathSeq]:
    """Irreducible words ending at ``a`` with at most ``max_len`` non-trivial steps.

    These are the canonical indices of the truncated ``l2(S_a)`` basis.
    """
    R = P.rewriting
    out = [identity(a)]
    layer = [(s,) for s in R.in_steps[a] if not s.trivial]
    for _ in range(max_len):
        out.extend(PathSeq(w) for w in layer)
        nxt = []
        for w in layer:
            for s in R.in_steps[w[-1].start]:
                if not s.trivial and R.rule(w[-1], s) is None:
                    nxt.append(w + (s,))
        layer = nxt
    return sorted(out, key=lambda p: (p.length, str(p)))

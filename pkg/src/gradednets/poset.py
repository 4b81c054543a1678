"""Finite partially ordered sets.

A :class:`Poset` stores the reflexive-transitive closure of whatever pairs
it was built from, so ``leq`` is a constant-time lookup afterwards.  Labels
are opaque hashables; every enumeration is returned in ``sorted(key=str)``
order so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable

import networkx as nx

from .errors import AntisymmetryViolation, DuplicateLabel, SizeBound, UnknownElement

Label = Hashable

DEFAULT_SEARCH_BOUND = 20


def _key(x):
    return str(x)


class Poset:
    """Finite poset; treat instances as immutable."""

    def __init__(self, elements: Iterable[Label], pairs: Iterable[tuple[Label, Label]] = ()):
        elements = list(elements)
        if len(set(elements)) != len(elements):
            seen, dup = set(), None
            for e in elements:
                if e in seen:
                    dup = e
                    break
                seen.add(e)
            raise DuplicateLabel(f"duplicate element label {dup!r}")
        self.elements: tuple[Label, ...] = tuple(sorted(elements, key=_key))
        index = set(self.elements)
        up: dict[Label, set] = {e: {e} for e in self.elements}
        for lo, hi in pairs:
            for x in (lo, hi):
                if x not in index:
                    raise UnknownElement(f"unknown element {x!r} in pair ({lo!r}, {hi!r})")
            up[lo].add(hi)
        # transitive closure (Warshall over the up-sets)
        for k in self.elements:
            for i in self.elements:
                if k in up[i]:
                    up[i] |= up[k]
        for a in self.elements:
            for b in up[a]:
                if b != a and a in up[b]:
                    raise AntisymmetryViolation(f"{a!r} <= {b!r} and {b!r} <= {a!r}")
        self._up = {e: frozenset(s) for e, s in up.items()}
        self._down = {e: frozenset(x for x in self.elements if e in self._up[x]) for e in self.elements}

    # -- queries -----------------------------------------------------------
    def __contains__(self, x) -> bool:
        return x in self._up

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"Poset({len(self)} elements, {len(self.cover_pairs())} covers)"

    def __eq__(self, other) -> bool:
        return isinstance(other, Poset) and self._up == other._up

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash(frozenset(self._up.items()))

    def check(self, x) -> None:
        if x not in self._up:
            raise UnknownElement(f"unknown element {x!r}")

    def leq(self, a, b) -> bool:
        return b in self._up[a]

    def lt(self, a, b) -> bool:
        return a != b and b in self._up[a]

    def comparable(self, a, b) -> bool:
        return b in self._up[a] or a in self._up[b]

    def up_set(self, a) -> frozenset:
        return self._up[a]

    def down_set(self, a) -> frozenset:
        return self._down[a]

    def relation(self) -> list[tuple[Label, Label]]:
        """All pairs ``(a, b)`` with ``a <= b``, including reflexive ones."""
        return [(a, b) for a in self.elements for b in sorted(self._up[a], key=_key)]

    def cover_pairs(self) -> list[tuple[Label, Label]]:
        out = []
        for a in self.elements:
            for b in self._up[a]:
                if b != a and not any(self.lt(a, c) and self.lt(c, b) for c in self.elements):
                    out.append((a, b))
        return sorted(out, key=lambda p: (_key(p[0]), _key(p[1])))

    def maximal_elements(self) -> list[Label]:
        return [e for e in self.elements if len(self._up[e]) == 1]

    @cached_property
    def height(self) -> dict[Label, int]:
        """Length of the longest chain ending at each element."""
        h: dict[Label, int] = {}
        for e in sorted(self.elements, key=lambda x: len(self._down[x])):
            h[e] = max((h[d] + 1 for d in self._down[e] if d != e), default=0)
        return h

    @cached_property
    def rank(self) -> dict[Label, int]:
        """Position in a fixed linear extension (height, then label)."""
        order = sorted(self.elements, key=lambda x: (self.height[x], _key(x)))
        return {e: i for i, e in enumerate(order)}

    def relabel(self, mapping: dict) -> "Poset":
        return Poset([mapping[e] for e in self.elements],
                     [(mapping[a], mapping[b]) for a, b in self.relation()])

    @cached_property
    def rewriting(self):
        from .paths import RewriteSystem

        return RewriteSystem(self)

    @cached_property
    def certificate(self):
        from .paths import check_confluence

        return check_confluence(self)

    @property
    def certified(self) -> bool:
        return self.certificate.certified


def build_poset(elements: Iterable[Label], pairs: Iterable[tuple[Label, Label]] = ()) -> Poset:
    return Poset(elements, pairs)


@dataclass(frozen=True)
class DirectedDecomposition:
    blocks: tuple[frozenset, ...]

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, *sites) -> list[int]:
        """Indices of blocks containing every site given."""
        return [i for i, b in enumerate(self.blocks) if all(s in b for s in sites)]

    def as_lists(self) -> list[list]:
        return [sorted(b, key=_key) for b in self.blocks]


def is_upward_directed(P: Poset, sub: Iterable[Label] | None = None) -> bool:
    """True iff every pair in ``sub`` has an upper bound inside ``sub``."""
    sub = list(P.elements if sub is None else sub)
    for x in sub:
        P.check(x)
    subset = frozenset(sub)
    for a, b in combinations(sorted(subset, key=_key), 2):
        if not (P.up_set(a) & P.up_set(b) & subset):
            return False
    return True


def comparability_graph(P: Poset) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(P.elements)
    G.add_edges_from(comparability_edges(P))
    return G


def comparability_edges(P: Poset) -> list[tuple[Label, Label]]:
    """Comparable distinct pairs, each as ``(smaller, larger)``."""
    return [(a, b) for a, b in P.relation() if a != b]


def is_path_connected(P: Poset) -> bool:
    if len(P) == 0:
        return True
    return nx.is_connected(comparability_graph(P))


def maximal_directed_subsets(P: Poset, bound: int | None = DEFAULT_SEARCH_BOUND) -> DirectedDecomposition:
    """All maximal upward-directed subsets of ``P``.

    A finite directed set contains an upper bound for all of its elements,
    i.e. a greatest element, so the maximal ones are exactly the down-sets
    of the maximal elements.
    """
    if bound is not None and len(P) > bound:
        raise SizeBound(f"poset has {len(P)} elements, search bound is {bound}")
    blocks = {P.down_set(m) for m in P.maximal_elements()}
    ordered = sorted(blocks, key=lambda b: sorted(map(_key, b)))
    return DirectedDecomposition(tuple(ordered))

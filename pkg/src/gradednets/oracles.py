"""Brute-force reference computations used to cross-check the fast paths.

Nothing here touches the rewriting system or the group presentations:
the closure works straight from the four defining relations and the
homology rank comes from boundary matrices of the order complex.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .paths import Step
from .poset import Poset, _key


def _d(lo, hi) -> Step:
    return Step("i", lo, lo) if lo == hi else Step("d", lo, hi)


def _u(hi, lo) -> Step:
    return Step("i", lo, lo) if lo == hi else Step("u", lo, hi)


def relation_instances(P: Poset) -> dict:
    """Every instance ``left * right -> single`` of the defining relations.

    For ``a <= b <= c`` (equalities allowed, a degenerate step being the
    trivial one): d(a,b) d(b,c) ~ d(a,c), u(c,b) u(b,a) ~ u(c,a),
    d(a,b) u(b,a) ~ i(a) and u(b,a) d(a,b) ~ i(b).
    """
    out = {}
    for a in P.elements:
        for b in P.up_set(a):
            out[(_d(a, b), _u(b, a))] = Step("i", a, a)
            out[(_u(b, a), _d(a, b))] = Step("i", b, b)
            for c in P.up_set(b):
                out[(_d(a, b), _d(b, c))] = _d(a, c)
                out[(_u(c, b), _u(b, a))] = _u(c, a)
    return out


class RelationClosure:
    """Components of the relation graph on all words of at most ``max_len`` steps.

    Every edge joins a word to one that is a single step shorter, so visiting
    each word and merging it with its contractions finds all edges inside the
    length bound.
    """

    def __init__(self, P: Poset, max_len: int = 7):
        self.P, self.max_len = P, max_len
        rel = relation_instances(P)
        out_steps = {e: [] for e in P.elements}
        for a in P.elements:
            out_steps[a].append(Step("i", a, a))
            for b in P.elements:
                if P.lt(a, b):
                    out_steps[a].append(Step("u", a, b))  # from a up to b
                    out_steps[b].append(Step("d", a, b))  # from b down to a
        parent: dict = {}

        def find(x):
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(x, x) != root:
                parent[x], x = root, parent[x]
            return root

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                keep, drop = sorted((rx, ry), key=len)
                parent[drop] = keep

        stack = [(s,) for a in P.elements for s in out_steps[a]]
        while stack:
            w = stack.pop()
            for i in range(len(w) - 1):
                r = rel.get((w[i], w[i + 1]))
                if r is not None:
                    union(w, w[:i] + (r,) + w[i + 2:])
            if len(w) < max_len:
                end = w[0].end
                for s in out_steps[end]:
                    stack.append((s,) + w)
        self._find = find

    def component(self, steps: tuple) -> tuple:
        if len(steps) > self.max_len:
            raise ValueError("word longer than the closure bound")
        return self._find(tuple(steps))

    def same(self, p, q) -> bool:
        return self.component(p.steps) == self.component(q.steps)


def order_complex_h1_rank(P: Poset) -> int:
    """Betti number b1 of the order complex (comparability graph plus chain triangles)."""
    V = list(P.elements)
    E = [(a, b) for a in V for b in V if P.lt(a, b)]
    T = [(a, b, c) for a, b in E for c in V if P.lt(b, c)]
    vi = {v: i for i, v in enumerate(V)}
    ei = {e: i for i, e in enumerate(E)}
    d1 = np.zeros((len(V), len(E)))
    for k, (a, b) in enumerate(E):
        d1[vi[a], k] -= 1
        d1[vi[b], k] += 1
    d2 = np.zeros((len(E), len(T)))
    for k, (a, b, c) in enumerate(T):
        d2[ei[(b, c)], k] += 1
        d2[ei[(a, c)], k] -= 1
        d2[ei[(a, b)], k] += 1
    r1 = np.linalg.matrix_rank(d1) if E else 0
    r2 = np.linalg.matrix_rank(d2) if T else 0
    return len(E) - r1 - r2


def brute_force_directed_subsets(P: Poset) -> list[frozenset]:
    """Maximal upward-directed subsets by scanning every subset."""
    elems = list(P.elements)

    def directed(S):
        return all(P.up_set(x) & P.up_set(y) & S for x, y in combinations(S, 2))

    found = [frozenset(S) for k in range(1, len(elems) + 1)
             for S in combinations(elems, k) if directed(frozenset(S))]
    maximal = [S for S in found if not any(S < T for T in found)]
    return sorted(maximal, key=lambda b: sorted(map(_key, b)))

"""Loop groups of a poset: presentations, abelian invariants, conjugation.

The loop group at ``a`` is presented on the comparability graph: a BFS
spanning tree rooted at ``a`` is contracted, every non-tree edge is a
generator, and every chain ``x < y < z`` contributes the triangle relator
``e(x,y) e(y,z) e(x,z)^-1``.  Words are tuples of signed 1-based generator
indices (``-k`` is the inverse of generator ``k``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations

import networkx as nx
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .errors import NotALoop, NotComparable, NotDirected, NotPathConnected
from .paths import PathClass, PathSeq, Verdict, down, equivalent, identity, seq, up
from .poset import Poset, _key, comparability_graph, is_upward_directed
from .report import Report


def free_reduce(word) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class AbelianInvariants:
    rank: int
    torsion: tuple[int, ...] = ()

    @property
    def trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[tuple, ...]  # oriented non-tree edges (lo, hi)
    relators: tuple[tuple[int, ...], ...]
    basepoint: object
    spanning_tree: frozenset = field(default=frozenset())

    @cached_property
    def _index(self) -> dict:
        return {e: i + 1 for i, e in enumerate(self.generators)}

    @cached_property
    def _tree_paths(self) -> dict:
        """Tree word from the basepoint to every vertex."""
        G = nx.Graph()
        G.add_node(self.basepoint)
        G.add_edges_from(tuple(e) for e in self.spanning_tree)
        return nx.single_source_shortest_path(G, self.basepoint)

    def edge_letter(self, start, end) -> int:
        """Signed generator for traversing the edge ``start -> end`` (0 for tree edges)."""
        if start == end:
            return 0
        k = self._index.get((start, end))
        if k is not None:
            return k
        k = self._index.get((end, start))
        return -k if k is not None else 0

    def path_word(self, p: PathSeq) -> tuple[int, ...]:
        """Group word of ``p``, closed up through the tree at both ends."""
        vertices = self._tree_paths[p.start] + [s.end for s in reversed(p.steps)]
        vertices += list(reversed(self._tree_paths[p.end]))[1:]
        letters = (self.edge_letter(x, y) for x, y in zip(vertices, vertices[1:]))
        return free_reduce(x for x in letters if x)

    def exponent_matrix(self) -> list[list[int]]:
        rows = []
        for r in self.relators:
            row = [0] * len(self.generators)
            for x in r:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(row)
        return rows

    @cached_property
    def _smith(self):
        g = len(self.generators)
        rows = [r for r in self.exponent_matrix() if any(r)]
        if not rows or g == 0:
            return [], Matrix.eye(g)
        S, _, V = smith_normal_decomp(Matrix(rows))
        diag = [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0]
        return diag, V

    def abelian_class(self, word) -> tuple[int, ...]:
        """Canonical coordinates of ``word`` in the abelianization.

        Torsion coordinates come first (reduced modulo their invariant
        factors), then the free coordinates.
        """
        diag, V = self._smith
        g = len(self.generators)
        v = [0] * g
        for x in word:
            v[abs(x) - 1] += 1 if x > 0 else -1
        c = (Matrix([v]) * V) if g else Matrix.zeros(1, 0)
        coords = []
        for i, d in enumerate(diag):
            if d > 1:
                coords.append(int(c[0, i]) % d)
        coords.extend(int(c[0, i]) for i in range(len(diag), g))
        return tuple(coords)

    def to_dict(self) -> dict:
        return {
            "basepoint": str(self.basepoint),
            "generators": [[str(a), str(b)] for a, b in self.generators],
            "relators": [list(r) for r in self.relators],
            "spanning_tree": sorted([sorted(map(str, e)) for e in self.spanning_tree]),
        }


def loop_group_presentation(P: Poset, a, component_only: bool = False) -> GroupPresentation:
    """Presentation of the loop group at ``a``.

    With ``component_only`` a disconnected poset is allowed and only the
    component of ``a`` is used.
    """
    P.check(a)
    G = comparability_graph(P)
    comp = nx.node_connected_component(G, a)
    if len(comp) != len(P) and not component_only:
        raise NotPathConnected("poset is not path connected")
    tree = set()
    for x, y in nx.bfs_edges(G, a, sort_neighbors=lambda ns: sorted(ns, key=_key)):
        tree.add(frozenset((x, y)))
    edges = sorted({(x, y) if P.lt(x, y) else (y, x) for x, y in G.edges(comp)},
                   key=lambda e: (_key(e[0]), _key(e[1])))
    gens = tuple(e for e in edges if frozenset(e) not in tree)
    pres = GroupPresentation(gens, (), a, frozenset(tree))
    relators = []
    seen = set()
    members = sorted(comp, key=_key)
    for x, y, z in combinations(sorted(members, key=lambda e: (P.height[e], _key(e))), 3):
        if P.lt(x, y) and P.lt(y, z):
            r = free_reduce(
                l for l in (pres.edge_letter(x, y), pres.edge_letter(y, z), pres.edge_letter(z, x)) if l
            )
            if r and r not in seen:
                seen.add(r)
                relators.append(r)
    return GroupPresentation(gens, tuple(relators), a, frozenset(tree))


def abelianization(G: GroupPresentation) -> AbelianInvariants:
    diag, _ = G._smith
    rank = len(G.generators) - len(diag)
    return AbelianInvariants(rank, tuple(d for d in diag if d > 1))


def synthetic_presentation(n_generators: int, relators) -> GroupPresentation:
    """Presentation not tied to a poset, e.g. ``<x | x^2>``."""
    gens = tuple((f"g{i}", f"g{i}'") for i in range(n_generators))
    return GroupPresentation(gens, tuple(free_reduce(r) for r in relators), None)


@lru_cache(maxsize=256)
def _component_presentation(P: Poset, a) -> GroupPresentation:
    return loop_group_presentation(P, a, component_only=True)


def abelian_loop_class(P: Poset, loop: PathSeq) -> tuple[int, ...]:
    if not loop.is_loop:
        raise NotALoop(f"{loop} is not a loop")
    pres = _component_presentation(P, loop.start)
    return pres.abelian_class(pres.path_word(loop))


def loop_is_abelian_trivial(P: Poset, loop: PathSeq) -> bool:
    return not any(abelian_loop_class(P, loop))


def sigma_ba(P: Poset, a, b, p: PathClass) -> PathClass:
    """Conjugate a loop class at ``a`` into a loop class at ``b`` (``a <= b``)."""
    if not P.leq(a, b):
        raise NotComparable(f"need {a!r} <= {b!r}")
    if p.is_zero or not p.repr.is_loop or p.start != a:
        raise NotALoop(f"{p} is not a loop at {a!r}")
    return PathClass.of(P, seq(up(b, a)) * p.repr * seq(down(a, b)))


def sigma_inverse(P: Poset, a, b, q: PathClass) -> PathClass:
    """Inverse of :func:`sigma_ba`: conjugation by the reversed pair."""
    if not P.leq(a, b):
        raise NotComparable(f"need {a!r} <= {b!r}")
    if q.is_zero or not q.repr.is_loop or q.start != b:
        raise NotALoop(f"{q} is not a loop at {b!r}")
    return PathClass.of(P, seq(down(a, b)) * q.repr * seq(up(b, a)))


def loops_trivial_if_directed(P: Poset, samples) -> Report:
    """Check that sampled loops are trivial on an upward-directed poset."""
    if not is_upward_directed(P):
        raise NotDirected("poset is not upward directed")
    rep = Report("loops trivial on directed poset")
    samples = list(samples)
    bad = [str(s) for s in samples if equivalent(P, s, identity(s.start)) is not Verdict.YES]
    rep.check("every sampled loop ~ trivial", not bad, len(samples), bad[:5])
    bad_ab = [str(s) for s in samples if not loop_is_abelian_trivial(P, s)]
    rep.check("every sampled loop abelian-trivial", not bad_ab, len(samples), bad_ab[:5])
    if len(P):
        inv = abelianization(loop_group_presentation(P, P.elements[0]))
        rep.check("abelianization trivial", inv.trivial, 1, inv.to_dict())
        rep.data["abelianization"] = inv.to_dict()
    return rep

"""Exact operators on the truncated space ``sum_a H_a (x) l2(S_a)``.

Every generator the construction uses has the form ``U (x) T_t``: ``U`` is
a partial injection between basis indices of two sites and ``T_t`` is left
multiplication of path indices by a fixed path class ``t`` (the tag).  A
:class:`BasisPartialMap` stores exactly that pair; an :class:`OperatorSum`
stores rational linear combinations, collapsed per ``(src, dst, tag)`` into
a sparse index matrix so that equality is decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .paths import PathSeq, identity, reduce
from .poset import Poset


class BasisVector(NamedTuple):
    site: object
    index: int
    path: PathSeq  # canonical representative of a class ending at ``site``


@dataclass(frozen=True)
class BasisPartialMap:
    src: object
    dst: object
    pairs: tuple[tuple[int, int], ...]  # sorted (src index, dst index)
    tag: PathSeq  # canonical path from src to dst
    poset: Poset | None = field(default=None, compare=False, hash=False, repr=False)

    @classmethod
    def build(cls, P: Poset, src, dst, mapping, tag: PathSeq) -> "BasisPartialMap":
        pairs = tuple(sorted(dict(mapping).items()))
        return cls(src, dst, pairs, reduce(P, tag), P)

    @classmethod
    def identity_on(cls, P: Poset, site, indices: Iterable[int]) -> "BasisPartialMap":
        return cls.build(P, site, site, {i: i for i in indices}, identity(site))

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.pairs)

    @property
    def domain(self) -> frozenset:
        return frozenset(i for i, _ in self.pairs)

    @property
    def image(self) -> frozenset:
        return frozenset(j for _, j in self.pairs)

    @property
    def is_zero(self) -> bool:
        return not self.pairs

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst

    @property
    def is_projection(self) -> bool:
        return self.src == self.dst and self.tag.is_trivial and all(i == j for i, j in self.pairs)

    def compose(self, other: "BasisPartialMap") -> "BasisPartialMap | None":
        """``self o other``; None when the slices do not meet (the zero operator)."""
        if other.dst != self.src:
            return None
        m = self.mapping
        pairs = tuple(sorted((i, m[j]) for i, j in other.pairs if j in m))
        P = self.poset or other.poset
        return BasisPartialMap(other.src, self.dst, pairs, reduce(P, self.tag * other.tag), P)

    __matmul__ = compose

    def adjoint(self) -> "BasisPartialMap":
        pairs = tuple(sorted((j, i) for i, j in self.pairs))
        return BasisPartialMap(self.dst, self.src, pairs, reduce(self.poset, self.tag.reverse()), self.poset)

    def restrict(self, indices: Iterable[int]) -> "BasisPartialMap":
        keep = set(indices)
        return BasisPartialMap(self.src, self.dst, tuple(p for p in self.pairs if p[0] in keep),
                               self.tag, self.poset)

    def source_projection(self) -> "BasisPartialMap":
        """``x* x`` as a map: the identity on the domain indices."""
        return BasisPartialMap.identity_on(self.poset, self.src, self.domain)

    def apply(self, v: BasisVector, budget: int | None = None) -> BasisVector | None:
        """Image of a basis vector; None for zero or for images past ``budget``."""
        if v.site != self.src:
            return None
        m = self.mapping
        if v.index not in m:
            return None
        path = reduce(self.poset, self.tag * v.path)
        if budget is not None and path.length > budget:
            return None
        return BasisVector(self.dst, m[v.index], path)

    def __str__(self) -> str:
        body = ",".join(f"{i}->{j}" for i, j in self.pairs)
        return f"<{self.src}->{self.dst} [{self.tag}] {{{body}}}>"


BlockKey = tuple  # (src, dst, tag)


class OperatorSum:
    """Finite rational combination of :class:`BasisPartialMap` terms."""

    __slots__ = ("blocks", "poset")

    def __init__(self, blocks: dict | None = None, poset: Poset | None = None):
        self.blocks: dict[BlockKey, dict[tuple[int, int], Fraction]] = {}
        self.poset = poset
        for key, entries in (blocks or {}).items():
            clean = {ij: Fraction(c) for ij, c in entries.items() if c != 0}
            if clean:
                self.blocks[key] = clean

    @classmethod
    def of(cls, m: BasisPartialMap | None, coeff=1) -> "OperatorSum":
        if m is None or m.is_zero or coeff == 0:
            return cls({}, m.poset if m is not None else None)
        return cls({(m.src, m.dst, m.tag): {ij: Fraction(coeff) for ij in m.pairs}}, m.poset)

    @classmethod
    def zero(cls, poset: Poset | None = None) -> "OperatorSum":
        return cls({}, poset)

    @classmethod
    def combine(cls, terms: Iterable[tuple[BasisPartialMap, object]]) -> "OperatorSum":
        out = None
        for m, c in terms:
            t = cls.of(m, c)
            out = t if out is None else out + t
        return out if out is not None else cls.zero()

    # -- structure ---------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.blocks

    @property
    def tags(self) -> set:
        return {k[2] for k in self.blocks}

    @property
    def terms(self) -> dict[BasisPartialMap, Fraction]:
        out = {}
        for (src, dst, tag), entries in self.blocks.items():
            for (i, j), c in entries.items():
                out[BasisPartialMap(src, dst, ((i, j),), tag, self.poset)] = c
        return out

    def bucket(self, tag: PathSeq) -> "OperatorSum":
        return OperatorSum({k: v for k, v in self.blocks.items() if k[2] == tag}, self.poset)

    def buckets(self) -> dict[PathSeq, "OperatorSum"]:
        return {t: self.bucket(t) for t in sorted(self.tags, key=lambda p: (p.length, str(p)))}

    def as_partial_map(self) -> BasisPartialMap | None:
        """The single partial isometry this sum equals, if it is one."""
        if len(self.blocks) != 1:
            return None
        (src, dst, tag), entries = next(iter(self.blocks.items()))
        if any(c != 1 for c in entries.values()):
            return None
        rows = [i for i, _ in entries]
        cols = [j for _, j in entries]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            return None
        return BasisPartialMap(src, dst, tuple(sorted(entries)), tag, self.poset)

    @property
    def is_partial_isometry(self) -> bool:
        return self.is_zero or self.as_partial_map() is not None

    @property
    def is_projection(self) -> bool:
        if self.is_zero:
            return True
        m = self.as_partial_map()
        return m is not None and m.is_projection

    # -- arithmetic --------------------------------------------------------
    def _poset(self, other) -> Poset | None:
        return self.poset or getattr(other, "poset", None)

    def __add__(self, other: "OperatorSum") -> "OperatorSum":
        blocks = {k: dict(v) for k, v in self.blocks.items()}
        for k, entries in other.blocks.items():
            tgt = blocks.setdefault(k, {})
            for ij, c in entries.items():
                tgt[ij] = tgt.get(ij, 0) + c
        return OperatorSum(blocks, self._poset(other))

    def __neg__(self) -> "OperatorSum":
        return OperatorSum({k: {ij: -c for ij, c in v.items()} for k, v in self.blocks.items()}, self.poset)

    def __sub__(self, other: "OperatorSum") -> "OperatorSum":
        return self + (-other)

    def scale(self, c) -> "OperatorSum":
        c = Fraction(c)
        return OperatorSum({k: {ij: c * x for ij, x in v.items()} for k, v in self.blocks.items()}, self.poset)

    def __rmul__(self, c) -> "OperatorSum":
        return self.scale(c)

    def __matmul__(self, other: "OperatorSum") -> "OperatorSum":
        """Operator product ``self o other``."""
        P = self._poset(other)
        by_src: dict = {}
        for key, entries in self.blocks.items():
            by_src.setdefault(key[0], []).append((key, entries))
        blocks: dict = {}
        for (s2, d2, t2), e2 in other.blocks.items():
            for (s1, d1, t1), e1 in by_src.get(d2, ()):
                tag = reduce(P, t1 * t2)
                rows: dict = {}
                for (j, k), c in e1.items():
                    rows.setdefault(j, []).append((k, c))
                tgt = blocks.setdefault((s2, d1, tag), {})
                for (i, j), c in e2.items():
                    for k, c1 in rows.get(j, ()):
                        tgt[(i, k)] = tgt.get((i, k), 0) + c * c1
        return OperatorSum(blocks, P)

    def adjoint(self) -> "OperatorSum":
        P = self.poset
        blocks = {}
        for (s, d, t), entries in self.blocks.items():
            blocks[(d, s, reduce(P, t.reverse()))] = {(j, i): c for (i, j), c in entries.items()}
        return OperatorSum(blocks, P)

    def power(self, m: int) -> "OperatorSum":
        out = self
        for _ in range(m - 1):
            out = out @ self
        return out

    # -- comparison and action ---------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return self.blocks == other.blocks

    def __hash__(self):
        return hash(frozenset((k, frozenset(v.items())) for k, v in self.blocks.items()))

    def apply(self, vec: dict, budget: int | None = None) -> dict:
        """Act on a finite combination ``{BasisVector: coeff}``."""
        P = self.poset
        out: dict = {}
        for v, c in vec.items():
            for (src, dst, tag), entries in self.blocks.items():
                if src != v.site:
                    continue
                path = None
                for (i, j), x in entries.items():
                    if i != v.index:
                        continue
                    if path is None:
                        path = reduce(P, tag * v.path)
                    if budget is not None and path.length > budget:
                        continue
                    w = BasisVector(dst, j, path)
                    out[w] = out.get(w, 0) + c * x
        return {w: c for w, c in out.items() if c != 0}

    def __repr__(self) -> str:
        parts = []
        for (s, d, t), entries in sorted(self.blocks.items(), key=lambda kv: str(kv[0])):
            body = ", ".join(f"{i}->{j}:{c}" for (i, j), c in sorted(entries.items()))
            parts.append(f"{s}->{d} [{t}] {{{body}}}")
        return "OperatorSum(" + "; ".join(parts) + ")"

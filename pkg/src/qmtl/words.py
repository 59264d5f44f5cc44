"""Graphically reduced words over a graph product and their canonical normal forms.

A normal form is stored as a tuple of ``Syllable(vertex_index, payload)``.
Two syllables of a reduced word are *dependent* when they share a vertex or
their vertices are not adjacent in the defining graph; the transitive closure
of "earlier and dependent" is the syllable poset.  Reduced spellings of an
element are exactly the linear extensions of that poset, and the canonical
spelling is the greedy one that always emits the available syllable with the
least vertex.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

from .defgraph import DefGraph
from .groups import GroupElement, VertexGroupSpec


class WordError(ValueError):
    pass


class Syllable(NamedTuple):
    vertex: int
    value: int


class NormalForm:
    """A canonical reduced word; hashable and ordered structurally."""

    __slots__ = ("syllables", "_hash")

    def __init__(self, syllables: Sequence[Syllable] = ()):
        self.syllables: tuple[Syllable, ...] = tuple(syllables)
        self._hash = hash(self.syllables)

    def __len__(self) -> int:
        return len(self.syllables)

    @property
    def syllable_length(self) -> int:
        return len(self.syllables)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NormalForm) and self.syllables == other.syllables

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "NormalForm") -> bool:
        return (len(self), self.syllables) < (len(other), other.syllables)

    def __repr__(self) -> str:
        return f"NormalForm({list(self.syllables)!r})"


@dataclass(frozen=True)
class SyllablePoset:
    """``below[j]`` is the bitmask of indices strictly below syllable ``j``."""

    word: NormalForm
    below: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.below)

    def precedes(self, i: int, j: int) -> bool:
        return bool(self.below[j] >> i & 1)

    def relations(self) -> set[tuple[int, int]]:
        return {(i, j) for j in range(len(self.below)) for i in range(j) if self.below[j] >> i & 1}

    def minimal(self) -> list[int]:
        return [j for j, b in enumerate(self.below) if b == 0]

    def maximal(self) -> list[int]:
        covered = 0
        for b in self.below:
            covered |= b
        return [j for j in range(len(self.below)) if not covered >> j & 1]


RawLetter = tuple[Union[str, int], Union[int, GroupElement]]

_TOKEN = re.compile(r"^(?P<name>[^\s\^:]+?)(?P<suffix>\^-?\d+|:\S+)?$")


class GraphProduct:
    """Word-problem machinery for the graph product of ``specs`` over ``graph``."""

    def __init__(self, graph: DefGraph, specs: Sequence[VertexGroupSpec]):
        if len(specs) != len(graph):
            raise WordError("one vertex group per vertex is required")
        self.graph = graph
        self.specs = tuple(specs)
        self.identity = NormalForm()

    # ----- syllables -------------------------------------------------------

    def vertex_index(self, v: Union[str, int]) -> int:
        if isinstance(v, int):
            if not 0 <= v < len(self.graph):
                raise WordError(f"vertex index {v} out of range")
            return v
        try:
            return self.graph.index[v]
        except KeyError:
            raise WordError(f"unknown vertex {v!r}") from None

    def letter(self, v: Union[str, int], payload: int = 1) -> NormalForm:
        i = self.vertex_index(v)
        spec = self.specs[i]
        p = spec.normalize(payload)
        if spec.is_identity(p):
            return self.identity
        return NormalForm((Syllable(i, p),))

    def generator(self, v: Union[str, int]) -> NormalForm:
        """The fixed nontrivial element s_v."""
        i = self.vertex_index(v)
        return NormalForm((Syllable(i, self.specs[i].sample_nontrivial()),))

    def dependent(self, a: int, b: int) -> bool:
        """Vertices a, b do not commute (same vertex, or non-adjacent)."""
        return not self.graph.adj[a] >> b & 1

    # ----- reduction -------------------------------------------------------

    def _insert(self, out: list[Syllable], v: int, s: int) -> None:
        spec = self.specs[v]
        if spec.is_identity(s):
            return
        adj_v = self.graph.adj[v]
        for j in range(len(out) - 1, -1, -1):
            w = out[j].vertex
            if w == v:
                m = spec.mul(out[j].value, s)
                if spec.is_identity(m):
                    del out[j]
                else:
                    out[j] = Syllable(v, m)
                return
            if not adj_v >> w & 1:
                break
        out.append(Syllable(v, s))

    def _canonical(self, word: Sequence[Syllable]) -> NormalForm:
        """Least-vertex-first linear extension of a reduced spelling.

        Each syllable is maximal among those before it, so inserting them in
        order with the rule of ``_insert_sorted`` reproduces the greedy order.
        """
        if len(word) < 2:
            return NormalForm(word)
        adj = self.graph.adj
        out: list[Syllable] = []
        for syl in word:
            adj_v = adj[syl.vertex]
            t = len(out)
            while t > 0 and adj_v >> out[t - 1].vertex & 1:
                t -= 1
            while t < len(out) and out[t].vertex < syl.vertex:
                t += 1
            out.insert(t, syl)
        return NormalForm(out)

    def reduce(self, raw: Iterable[RawLetter]) -> NormalForm:
        out: list[Syllable] = []
        for v, val in raw:
            i = self.vertex_index(v)
            if isinstance(val, GroupElement):
                if self.vertex_index(val.vertex) != i:
                    raise WordError("group element attached to the wrong vertex")
                val = val.payload
            self._insert(out, i, self.specs[i].normalize(val))
        return self._canonical(out)

    def _insert_sorted(self, out: list[Syllable], v: int, s: int) -> bool:
        """Right-multiply a canonical list in place; False if it may need re-sorting.

        Appending a syllable with no successors leaves the greedy order of the
        others unchanged, so it lands at the first slot after its last
        dependent predecessor whose vertex is larger.  A cancellation can
        free other syllables to move, and is reported instead.
        """
        spec = self.specs[v]
        if spec.is_identity(s):
            return True
        adj_v = self.graph.adj[v]
        last_dep = -1
        for j in range(len(out) - 1, -1, -1):
            w = out[j].vertex
            if w == v:
                m = spec.mul(out[j].value, s)
                if spec.is_identity(m):
                    del out[j]
                    return False
                out[j] = Syllable(v, m)
                return True
            if not adj_v >> w & 1:
                last_dep = j
                break
        t = last_dep + 1
        while t < len(out) and out[t].vertex < v:
            t += 1
        out.insert(t, Syllable(v, s))
        return True

    def mul(self, x: NormalForm, y: NormalForm) -> NormalForm:
        if not y.syllables:
            return x
        if not x.syllables:
            return y
        out = list(x.syllables)
        clean = True
        for v, s in y.syllables:
            clean &= self._insert_sorted(out, v, s)
        return NormalForm(out) if clean else self._canonical(out)

    def mul_many(self, *xs: NormalForm) -> NormalForm:
        out: list[Syllable] = []
        for x in xs:
            for v, s in x.syllables:
                self._insert(out, v, s)
        return self._canonical(out)

    def inv(self, x: NormalForm) -> NormalForm:
        return self._canonical([Syllable(v, self.specs[v].inv(s)) for v, s in reversed(x.syllables)])

    def eq(self, x: NormalForm, y: NormalForm) -> bool:
        return x.syllables == y.syllables

    def power(self, x: NormalForm, k: int) -> NormalForm:
        if k < 0:
            x, k = self.inv(x), -k
        result = self.identity
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def distance(self, x: NormalForm, y: NormalForm) -> int:
        """Syllable length of x^-1 y, which is the quasi-median distance."""
        return len(self.mul(self.inv(x), y))

    # ----- poset -----------------------------------------------------------

    def poset(self, x: NormalForm) -> SyllablePoset:
        syl = x.syllables
        adj = self.graph.adj
        below = []
        for j, (vj, _) in enumerate(syl):
            aj = adj[vj]
            b = 0
            for i in range(j):
                if not aj >> syl[i].vertex & 1:
                    b |= below[i] | (1 << i)
            below.append(b)
        return SyllablePoset(x, tuple(below))

    def sub_element(self, x: NormalForm, mask: int) -> NormalForm:
        """The element spelled by the syllables in ``mask`` (a down-set or up-set)."""
        return self._canonical([s for i, s in enumerate(x.syllables) if mask >> i & 1])

    def cyclic_reduce(self, g: NormalForm) -> tuple[NormalForm, NormalForm]:
        """Return (h, c) with g = c h c^-1 and h cyclically reduced."""
        h, c = g, self.identity
        while True:
            p = self.poset(h)
            maxima = p.maximal()
            pair = None
            for i in p.minimal():
                for j in maxima:
                    if j != i and h.syllables[j].vertex == h.syllables[i].vertex:
                        pair = i
                        break
                if pair is not None:
                    break
            if pair is None:
                return h, c
            s = NormalForm((h.syllables[pair],))
            h = self.mul_many(self.inv(s), h, s)
            c = self.mul(c, s)

    # ----- text ------------------------------------------------------------

    def parse(self, text: str) -> NormalForm:
        raw: list[RawLetter] = []
        for tok in text.split():
            if tok in ("1", "e"):
                continue
            raw.extend(self._parse_token(tok))
        return self.reduce(raw)

    def _parse_token(self, tok: str) -> list[RawLetter]:
        m = _TOKEN.match(tok)
        if m and m.group("name") in self.graph.index:
            i = self.graph.index[m.group("name")]
            return [(i, self.specs[i].parse_payload(m.group("suffix") or ""))]
        # concatenated names such as "uv" or "ab^2"
        names = sorted(self.graph.vertices, key=len, reverse=True)
        out: list[RawLetter] = []
        rest = tok
        while rest:
            for name in names:
                if rest.startswith(name):
                    rest = rest[len(name):]
                    m = re.match(r"^(\^-?\d+|:[^\s\^:]+)?", rest)
                    suffix = m.group(0) if m else ""
                    rest = rest[len(suffix):]
                    i = self.graph.index[name]
                    out.append((i, self.specs[i].parse_payload(suffix)))
                    break
            else:
                raise WordError(f"cannot parse token {tok!r}")
        return out

    def format(self, x: NormalForm) -> str:
        if not x.syllables:
            return "1"
        return " ".join(
            self.graph.vertices[v] + self.specs[v].format_payload(s) for v, s in x.syllables
        )


def down_sets(p: SyllablePoset) -> Iterator[int]:
    """Order ideals as bitmasks, in a fixed lexicographic order."""
    n = len(p.below)
    below = p.below

    def rec(j: int, mask: int) -> Iterator[int]:
        if j == n:
            yield mask
            return
        yield from rec(j + 1, mask)
        if below[j] & mask == below[j]:
            yield from rec(j + 1, mask | (1 << j))

    # iterative deepening would avoid recursion, but n stays well under the limit
    return rec(0, 0)


def linear_extensions(p: SyllablePoset) -> Iterator[tuple[int, ...]]:
    n = len(p.below)
    below = p.below
    order: list[int] = []

    def rec(used: int) -> Iterator[tuple[int, ...]]:
        if len(order) == n:
            yield tuple(order)
            return
        for j in range(n):
            if not used >> j & 1 and below[j] & used == below[j]:
                order.append(j)
                yield from rec(used | (1 << j))
                order.pop()

    return rec(0)

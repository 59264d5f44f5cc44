"""Vertex groups with decidable word problem: Z/m, Z, and groups given by a table."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence


class GroupSpecError(ValueError):
    pass


@dataclass(frozen=True)
class VertexGroupSpec:
    """One vertex group.

    Payloads are ints in every backend: residues mod ``modulus`` for
    ``cyclic``, arbitrary integers for ``integers``, and row indices of
    ``table`` for ``finite_table``.
    """

    kind: str
    modulus: int = 0
    names: tuple[str, ...] = ()
    identity_index: int = 0
    table: tuple[tuple[int, ...], ...] = ()
    inverses: tuple[int, ...] = ()

    @classmethod
    def cyclic(cls, m: int) -> "VertexGroupSpec":
        if m < 2:
            raise GroupSpecError(f"cyclic group order must be >= 2, got {m}")
        return cls("cyclic", modulus=m)

    @classmethod
    def integers(cls) -> "VertexGroupSpec":
        return cls("integers")

    @classmethod
    def finite_table(
        cls,
        names: Sequence[str],
        table: Sequence[Sequence[int]],
        identity: Optional[int] = None,
        inverses: Optional[Sequence[int]] = None,
    ) -> "VertexGroupSpec":
        n = len(names)
        if n < 2:
            raise GroupSpecError("a vertex group must be nontrivial")
        if len(set(names)) != n:
            raise GroupSpecError("duplicate element names")
        rows = tuple(tuple(int(x) for x in row) for row in table)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise GroupSpecError("multiplication table must be square of size |names|")
        if any(not 0 <= x < n for r in rows for x in r):
            raise GroupSpecError("table entry out of range")
        if identity is None:
            found = [e for e in range(n) if all(rows[e][a] == a == rows[a][e] for a in range(n))]
            if not found:
                raise GroupSpecError("table has no identity")
            identity = found[0]
        for a in range(n):
            if rows[identity][a] != a or rows[a][identity] != a:
                raise GroupSpecError(f"index {identity} is not an identity")
        if inverses is None:
            inv = []
            for a in range(n):
                cands = [b for b in range(n) if rows[a][b] == identity]
                if not cands:
                    raise GroupSpecError(f"element {names[a]} has no inverse")
                inv.append(cands[0])
            inverses = inv
        inverses = tuple(int(x) for x in inverses)
        for a in range(n):
            b = inverses[a]
            if rows[a][b] != identity or rows[b][a] != identity:
                raise GroupSpecError(f"bad inverse for {names[a]}")
        for a in range(n):
            for b in range(n):
                ab = rows[a][b]
                for c in range(n):
                    if rows[ab][c] != rows[a][rows[b][c]]:
                        raise GroupSpecError("multiplication table is not associative")
        return cls("finite_table", names=tuple(names), identity_index=identity, table=rows, inverses=inverses)

    @property
    def order(self) -> Optional[int]:
        if self.kind == "cyclic":
            return self.modulus
        if self.kind == "finite_table":
            return len(self.names)
        return None

    def identity(self) -> int:
        return self.identity_index if self.kind == "finite_table" else 0

    def mul(self, a: int, b: int) -> int:
        if self.kind == "cyclic":
            return (a + b) % self.modulus
        if self.kind == "integers":
            return a + b
        return self.table[a][b]

    def inv(self, a: int) -> int:
        if self.kind == "cyclic":
            return -a % self.modulus
        if self.kind == "integers":
            return -a
        return self.inverses[a]

    def is_identity(self, a: int) -> bool:
        if self.kind == "cyclic":
            return a % self.modulus == 0
        if self.kind == "integers":
            return a == 0
        return a == self.identity_index

    def power(self, a: int, k: int) -> int:
        if self.kind == "cyclic":
            return a * k % self.modulus
        if self.kind == "integers":
            return a * k
        if k < 0:
            a, k = self.inverses[a], -k
        out = self.identity_index
        for _ in range(k):
            out = self.table[out][a]
        return out

    def normalize(self, a: int) -> int:
        return a % self.modulus if self.kind == "cyclic" else a

    def sample_nontrivial(self) -> int:
        if self.kind == "finite_table":
            return next(i for i in range(len(self.names)) if i != self.identity_index)
        return 1

    def elements(self) -> list[int]:
        """All elements of a finite group (the integers backend raises)."""
        if self.kind == "cyclic":
            return list(range(self.modulus))
        if self.kind == "finite_table":
            return list(range(len(self.names)))
        raise GroupSpecError("the integers are infinite")

    def parse_payload(self, text: str) -> int:
        """Payload from the suffix of a word token: '' , '^k' or ':name'."""
        if self.kind == "finite_table":
            if text.startswith(":"):
                name = text[1:]
                if name not in self.names:
                    raise GroupSpecError(f"unknown element name {name!r}")
                return self.names.index(name)
            if text == "":
                return self.sample_nontrivial()
            raise GroupSpecError("table group elements are written v:name")
        if text == "":
            return self.normalize(1)
        if text.startswith("^"):
            return self.normalize(int(text[1:]))
        raise GroupSpecError(f"cannot parse exponent {text!r}")

    def format_payload(self, a: int) -> str:
        if self.kind == "finite_table":
            return ":" + self.names[a]
        return "" if a == 1 else f"^{a}"


@dataclass(frozen=True)
class GroupElement:
    vertex: str
    payload: int


def _check_same(a: GroupElement, b: GroupElement) -> None:
    if a.vertex != b.vertex:
        raise ValueError(f"mixed-vertex product {a.vertex} * {b.vertex}")


def g_mul(spec: VertexGroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    _check_same(a, b)
    return GroupElement(a.vertex, spec.mul(a.payload, b.payload))


def g_inv(spec: VertexGroupSpec, a: GroupElement) -> GroupElement:
    return GroupElement(a.vertex, spec.inv(a.payload))


def g_is_identity(spec: VertexGroupSpec, a: GroupElement) -> bool:
    return spec.is_identity(a.payload)


def sample_nontrivial(spec: VertexGroupSpec, vertex: str) -> GroupElement:
    return GroupElement(vertex, spec.sample_nontrivial())


def spec_from_json(obj: object) -> VertexGroupSpec:
    """Decode the config representation of a vertex group.

    Accepted shapes: ``"Z"``, ``"Z/3"``, ``{"cyclic": 3}``, ``{"integers": true}``,
    ``{"table": {"names": [...], "mul": [[...]], "identity": i, "inverse": [...]}}``.
    """
    if isinstance(obj, str):
        s = obj.strip().replace(" ", "")
        if s in ("Z", "integers"):
            return VertexGroupSpec.integers()
        if s.startswith("Z/"):
            return VertexGroupSpec.cyclic(int(s[2:]))
        raise GroupSpecError(f"unknown group shorthand {obj!r}")
    if isinstance(obj, dict):
        if "cyclic" in obj:
            return VertexGroupSpec.cyclic(int(obj["cyclic"]))
        if "integers" in obj:
            return VertexGroupSpec.integers()
        if "table" in obj:
            t = obj["table"]
            return VertexGroupSpec.finite_table(
                t["names"], t["mul"], t.get("identity"), t.get("inverse")
            )
    raise GroupSpecError(f"cannot decode vertex group {obj!r}")

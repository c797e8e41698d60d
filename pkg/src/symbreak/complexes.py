"""Chromatic simplicial complexes stored as facet antichains.

Vertices are ``(name, value)`` pairs where ``name`` is a party in ``1..n`` and
``value`` is a canonical byte string (see :func:`encode`).  A complex only
stores its facets; a simplex belongs to the complex iff it is a subset of
some facet.
"""

from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Iterable, Mapping

from .errors import MapIncomplete

# ---------------------------------------------------------------------------
# canonical value encoding
# ---------------------------------------------------------------------------


def _len(n: int) -> bytes:
    return n.to_bytes(4, "big")


def encode(obj: Any) -> bytes:
    """Length-prefixed, comparison-stable encoding of a plain Python value.

    Supports ``None`` (used for the empty knowledge), bools, ints, strings,
    bytes and nested tuples/lists.
    """
    if obj is None:
        return b"N"
    if isinstance(obj, bool):
        return b"B1" if obj else b"B0"
    if isinstance(obj, int):
        raw = str(obj).encode()
        return b"I" + _len(len(raw)) + raw
    if isinstance(obj, str):
        raw = obj.encode()
        return b"S" + _len(len(raw)) + raw
    if isinstance(obj, bytes):
        return b"Y" + _len(len(obj)) + obj
    if isinstance(obj, (tuple, list)):
        parts = [encode(x) for x in obj]
        return b"T" + _len(len(parts)) + b"".join(_len(len(p)) + p for p in parts)
    raise TypeError(f"cannot canonically encode {type(obj).__name__}")


def _decode_at(buf: bytes, pos: int) -> tuple[Any, int]:
    tag = buf[pos : pos + 1]
    pos += 1
    if tag == b"N":
        return None, pos
    if tag == b"B":
        return buf[pos : pos + 1] == b"1", pos + 1
    size = int.from_bytes(buf[pos : pos + 4], "big")
    pos += 4
    if tag == b"I":
        return int(buf[pos : pos + size]), pos + size
    if tag == b"S":
        return buf[pos : pos + size].decode(), pos + size
    if tag == b"Y":
        return bytes(buf[pos : pos + size]), pos + size
    if tag == b"T":
        items = []
        for _ in range(size):
            pos += 4  # per-item length prefix
            item, pos = _decode_at(buf, pos)
            items.append(item)
        return tuple(items), pos
    raise ValueError(f"bad encoding tag {tag!r}")


def decode(buf: bytes) -> Any:
    value, end = _decode_at(buf, 0)
    if end != len(buf):
        raise ValueError("trailing bytes in encoded value")
    return value


def digest(value: bytes, size: int = 8) -> str:
    return hashlib.sha256(value).hexdigest()[:size]


# ---------------------------------------------------------------------------
# vertices, simplices, complexes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Vertex:
    name: int
    value: bytes

    def __post_init__(self):
        if not isinstance(self.name, int) or self.name < 1:
            raise ValueError(f"vertex name must be a positive int, got {self.name!r}")
        if not isinstance(self.value, bytes):
            raise TypeError("vertex value must be canonical bytes; use Vertex.of()")

    @classmethod
    def of(cls, name: int, obj: Any) -> "Vertex":
        return cls(name, encode(obj))

    @property
    def decoded(self) -> Any:
        return decode(self.value)

    def label(self) -> str:
        return f"{self.name}:{digest(self.value)}"


@dataclass(frozen=True)
class Simplex:
    """A nonempty chromatic set of vertices (pairwise distinct names)."""

    vertices: frozenset

    def __post_init__(self):
        if not isinstance(self.vertices, frozenset):
            object.__setattr__(self, "vertices", frozenset(self.vertices))
        if not self.vertices:
            raise ValueError("a simplex must be nonempty")
        names = [v.name for v in self.vertices]
        if len(set(names)) != len(names):
            raise ValueError(f"simplex is not chromatic: repeated names in {sorted(names)}")

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, Any]]) -> "Simplex":
        return cls(frozenset(Vertex.of(name, obj) for name, obj in pairs))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def names(self) -> frozenset:
        return frozenset(v.name for v in self.vertices)

    def value_of(self, name: int) -> bytes:
        for v in self.vertices:
            if v.name == name:
                return v.value
        raise KeyError(name)

    def sort_key(self) -> tuple:
        ordered = sorted(self.vertices)
        return (tuple(v.name for v in ordered), tuple(v.value for v in ordered))

    def __iter__(self):
        return iter(sorted(self.vertices))

    def __len__(self):
        return len(self.vertices)

    def __le__(self, other: "Simplex") -> bool:
        return self.vertices <= other.vertices

    def __lt__(self, other: "Simplex") -> bool:
        return self.vertices < other.vertices


def _maximal(simplices: Iterable[Simplex]) -> frozenset:
    # largest first, so a candidate can only be dominated by something already kept
    kept: list[Simplex] = []
    for s in sorted(set(simplices), key=lambda s: (-len(s), s.sort_key())):
        if not any(s.vertices <= k.vertices for k in kept):
            kept.append(s)
    return frozenset(kept)


@dataclass(frozen=True)
class ChromaticComplex:
    n: int
    facets: frozenset

    def __post_init__(self):
        if not isinstance(self.facets, frozenset):
            object.__setattr__(self, "facets", frozenset(self.facets))
        for f in self.facets:
            if any(v.name > self.n for v in f.vertices):
                raise ValueError(f"vertex name exceeds n={self.n}")
        for a, b in combinations(self.facets, 2):
            if a.vertices <= b.vertices or b.vertices <= a.vertices:
                raise ValueError("facets must form an antichain; use from_simplices()")

    @classmethod
    def from_simplices(cls, n: int, simplices: Iterable[Simplex]) -> "ChromaticComplex":
        """Build a complex generated by ``simplices``, keeping only maximal ones."""
        return cls(n, _maximal(simplices))

    def __contains__(self, simplex: Simplex) -> bool:
        return any(simplex.vertices <= f.vertices for f in self.facets)

    def vertices(self) -> frozenset:
        return frozenset(v for f in self.facets for v in f.vertices)

    @property
    def dim(self) -> int:
        return max((f.dim for f in self.facets), default=-1)

    def is_pure(self, dim: int | None = None) -> bool:
        dims = {f.dim for f in self.facets}
        if dim is not None:
            return dims == {dim}
        return len(dims) <= 1

    def sorted_facets(self) -> list[Simplex]:
        return sorted(self.facets, key=Simplex.sort_key)

    def isolated_vertices(self) -> list[Vertex]:
        return sorted(next(iter(f.vertices)) for f in self.facets if f.dim == 0)

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        found = set()
        for f in self.facets:
            for a, b in combinations(sorted(f.vertices), 2):
                found.add((a, b))
        return sorted(found)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "facets": [
                [{"name": v.name, "value": v.value.hex()} for v in f]
                for f in self.sorted_facets()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ChromaticComplex":
        facets = [
            Simplex(frozenset(Vertex(int(v["name"]), bytes.fromhex(v["value"])) for v in facet))
            for facet in data["facets"]
        ]
        return cls.from_simplices(int(data["n"]), facets)


# ---------------------------------------------------------------------------
# consistency projection and simplicial maps
# ---------------------------------------------------------------------------


def project_pi(facet: Simplex, n: int | None = None) -> ChromaticComplex:
    """Split a facet into its maximal groups of equal-valued vertices."""
    groups: dict[bytes, set] = defaultdict(set)
    for v in facet.vertices:
        groups[v.value].add(v)
    if n is None:
        n = max(facet.names)
    return ChromaticComplex(n, frozenset(Simplex(frozenset(g)) for g in groups.values()))


def project_pi_complex(K: ChromaticComplex) -> ChromaticComplex:
    pieces = [g for f in K.facets for g in project_pi(f, K.n).facets]
    return ChromaticComplex.from_simplices(K.n, pieces)


def check_simplicial_map(
    src: ChromaticComplex,
    dst: ChromaticComplex,
    vertex_map: Mapping[Vertex, Vertex],
) -> bool:
    """True iff ``vertex_map`` is name-preserving and sends simplices of ``src`` into ``dst``.

    Checking facets is enough: the image of a face is a face of the image.
    Raises :class:`MapIncomplete` when a vertex of ``src`` has no image.
    """
    for v in src.vertices():
        if v not in vertex_map:
            raise MapIncomplete(f"no image for vertex {v.label()}")
        if vertex_map[v].name != v.name:
            return False
    for f in src.facets:
        image = Simplex(frozenset(vertex_map[v] for v in f.vertices))
        if image not in dst:
            return False
    return True


def export_dot(K: ChromaticComplex, graph_name: str = "complex") -> str:
    """Render the 1-skeleton of ``K`` in Graphviz DOT syntax."""
    lines = [f"graph {graph_name} {{"]
    for v in sorted(K.vertices()):
        lines.append(f'  "{v.label()}";')
    for a, b in K.edges():
        lines.append(f'  "{a.label()}" -- "{b.label()}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(K: ChromaticComplex) -> str:
    return json.dumps(K.to_json(), sort_keys=True)

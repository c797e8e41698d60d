"""Knowledge evolution in the blackboard and port-numbered message-passing models.

Two routes compute who is consistent with whom after ``t`` rounds:

* :func:`evolve_structural` builds the literal recursive knowledge terms
  ``K_i(t) = (K_i(t-1), x_i(t), <what was received>)`` and is only usable for
  a handful of rounds, since terms grow like ``n**t``.
* :func:`refine` runs the equivalent per-round class refinement over integer
  class ids and scales to any ``t``.

The test-suite checks the two against each other.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Mapping, Sequence

from .complexes import ChromaticComplex, Simplex, Vertex, encode
from .errors import CapExceeded, InvalidConfiguration, InvalidConstruction
from .randomness import RandomnessConfiguration, Realization

STRUCTURAL_CAP = 4
BOTTOM = None


class ModelKind(str, Enum):
    BLACKBOARD = "blackboard"
    MESSAGE_PASSING = "mp"


@dataclass(frozen=True)
class PortAssignment:
    """``target[i][j - 1]`` is the party behind port ``j`` of party ``i`` (0-indexed parties)."""

    target: tuple

    def __post_init__(self):
        object.__setattr__(self, "target", tuple(tuple(int(x) for x in row) for row in self.target))

    @property
    def n(self) -> int:
        return len(self.target)

    def __call__(self, party: int, port: int) -> int:
        return self.target[party][port - 1]

    def port_to(self, party: int, neighbor: int) -> int:
        """Port number at ``party`` of the edge leading to ``neighbor``."""
        return self.target[party].index(neighbor) + 1

    def to_json(self) -> dict:
        return {"n": self.n, "target": [list(row) for row in self.target]}

    @classmethod
    def from_json(cls, data: Mapping) -> "PortAssignment":
        ports = cls(tuple(tuple(row) for row in data["target"]))
        if "n" in data and int(data["n"]) != ports.n:
            raise InvalidConfiguration(f"n={data['n']} but {ports.n} rows given")
        return ports

    def relabel(self, old_to_new: Sequence[int]) -> "PortAssignment":
        """The same wiring with party ``p`` renamed ``old_to_new[p]``."""
        new_to_old = [0] * len(old_to_new)
        for old, new in enumerate(old_to_new):
            new_to_old[new] = old
        return PortAssignment(
            tuple(
                tuple(old_to_new[x] for x in self.target[new_to_old[q]])
                for q in range(self.n)
            )
        )


def validate_ports(p: PortAssignment) -> bool:
    """Every row must be a bijection from ports ``1..n-1`` onto the other parties."""
    n = p.n
    for i, row in enumerate(p.target):
        if len(row) != n - 1:
            return False
        if sorted(row) != [x for x in range(n) if x != i]:
            return False
    return True


def random_ports(n: int, seed: int) -> PortAssignment:
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        others = [x for x in range(n) if x != i]
        rng.shuffle(others)
        rows.append(tuple(others))
    return PortAssignment(tuple(rows))


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def adversarial_port_table(n: int, g: int) -> PortAssignment:
    """Port table on parties ``0..n-1`` that keeps every shift-orbit of size ``g`` symmetric.

    Port ``j`` of party ``i`` leads to
    ``((i + j) % g + (i // g) * g + ceil(j / g) * g) % n``.
    """
    if g < 1 or n % g:
        raise InvalidConstruction(f"g={g} must divide n={n}")
    table = PortAssignment(
        tuple(
            tuple(((i + j) % g + (i // g) * g + _ceil_div(j, g) * g) % n for j in range(1, n))
            for i in range(n)
        )
    )
    if not validate_ports(table):
        raise InvalidConstruction(f"port formula is not a bijection for n={n}, g={g}")
    f = shift_map(n, g)
    for i in range(n):
        for j in range(1, n):
            if table(f[i], j) != f[table(i, j)]:
                raise InvalidConstruction(
                    f"shift map does not commute with ports at i={i}, j={j} (n={n}, g={g})"
                )
    return table


def shift_map(n: int, g: int) -> tuple:
    """``f(r + m*g) = (r + 1) % g + m*g``: rotate each block of ``g`` consecutive parties."""
    return tuple((i % g + 1) % g + (i // g) * g for i in range(n))


def shift_orbits(n: int, g: int) -> list[frozenset]:
    return [frozenset(range(m * g, (m + 1) * g)) for m in range(n // g)]


def adversarial_ports(alpha: RandomnessConfiguration) -> tuple[PortAssignment, tuple]:
    """Worst-case ports for ``alpha``, expressed on the caller's party labels.

    Returns ``(ports, renaming)`` where ``renaming[p]`` is the index party
    ``p`` receives once parties are grouped contiguously by source; the port
    formula is applied on those indices and translated back.
    """
    n, g = alpha.n, alpha.gcd
    order = sorted(range(n), key=lambda p: (alpha.source_of[p], p))
    renaming = [0] * n
    for new, old in enumerate(order):
        renaming[old] = new
    table = adversarial_port_table(n, g)
    f = shift_map(n, g)
    for q in range(n):
        if alpha.source_of[order[q]] != alpha.source_of[order[f[q]]]:
            raise InvalidConstruction(f"shift map mixes sources at renamed party {q}")
    inverse = [0] * n
    for old, new in enumerate(renaming):
        inverse[new] = old
    ports = table.relabel(inverse)
    return ports, tuple(renaming)


@dataclass(frozen=True)
class Model:
    kind: ModelKind
    ports: PortAssignment | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if self.kind is ModelKind.BLACKBOARD and self.ports is not None:
            raise InvalidConfiguration("the blackboard model has no ports")
        if self.kind is ModelKind.MESSAGE_PASSING:
            if self.ports is None:
                raise InvalidConfiguration("message passing needs a port assignment")
            if not validate_ports(self.ports):
                raise InvalidConfiguration("port assignment is not a per-row bijection")

    @classmethod
    def blackboard(cls) -> "Model":
        return cls(ModelKind.BLACKBOARD)

    @classmethod
    def message_passing(cls, ports: PortAssignment) -> "Model":
        return cls(ModelKind.MESSAGE_PASSING, ports)

    @property
    def is_blackboard(self) -> bool:
        return self.kind is ModelKind.BLACKBOARD

    def describe(self) -> str:
        return "blackboard" if self.is_blackboard else "message-passing"

    def check_size(self, n: int) -> None:
        if self.ports is not None and self.ports.n != n:
            raise InvalidConfiguration(f"ports are for n={self.ports.n}, realization has n={n}")


# ---------------------------------------------------------------------------
# literal knowledge terms
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def _key(term) -> bytes:
    return encode(term)


def evolve_structural(model: Model, rho: Realization, cap: int = STRUCTURAL_CAP) -> tuple:
    """Exact knowledge terms of every party after ``rho.t`` rounds."""
    if rho.t > cap:
        raise CapExceeded(f"structural knowledge limited to t <= {cap}, got t={rho.t}")
    model.check_size(rho.n)
    n = rho.n
    K = [BOTTOM] * n
    for r in range(rho.t):
        prev = K
        if model.is_blackboard:
            K = [
                (prev[i], rho.strings[i][r], tuple(sorted((prev[j] for j in range(n) if j != i), key=_key)))
                for i in range(n)
            ]
        else:
            K = [
                (prev[i], rho.strings[i][r], tuple(prev[p] for p in model.ports.target[i]))
                for i in range(n)
            ]
    return tuple(K)


def knowledge_digest(term) -> bytes:
    return hashlib.sha256(_key(term)).digest()


def protocol_facet(model: Model, rho: Realization) -> tuple[Simplex, dict]:
    """The global state ``{(i, K_i(t))}`` with digests as values, plus the digest table."""
    terms = evolve_structural(model, rho)
    table = {}
    vertices = []
    for i, term in enumerate(terms):
        d = knowledge_digest(term)
        table[d] = term
        vertices.append(Vertex(i + 1, d))
    return Simplex(frozenset(vertices)), table


# ---------------------------------------------------------------------------
# refinement
# ---------------------------------------------------------------------------


def canonical_ids(signatures: Sequence) -> tuple:
    """Rank each signature among the distinct ones (a name-independent relabelling)."""
    order = {sig: rank for rank, sig in enumerate(sorted(set(signatures)))}
    return tuple(order[s] for s in signatures)


def refine_step(
    model: Model,
    prev: Sequence[int],
    observed: Sequence,
    payloads: Mapping | None = None,
) -> tuple:
    """One round of class refinement.

    ``observed[i]`` is whatever party ``i`` read privately this round (its
    random bits).  ``payloads`` optionally adds message content: keyed by
    ``(sender, receiver)`` in message passing, by ``sender`` on a blackboard.
    """
    n = len(prev)
    payloads = payloads or {}
    if model.is_blackboard:
        board = [(prev[j], payloads.get(j, "")) for j in range(n)]
        sigs = [
            (prev[i], observed[i], tuple(sorted(board[:i] + board[i + 1 :])))
            for i in range(n)
        ]
    else:
        rows = model.ports.target
        sigs = [
            (prev[i], observed[i], tuple((prev[p], payloads.get((p, i), "")) for p in rows[i]))
            for i in range(n)
        ]
    return canonical_ids(sigs)


@dataclass(frozen=True)
class ConsistencyPartition:
    t: int
    class_id: tuple

    @property
    def classes(self) -> tuple:
        groups: dict[int, list[int]] = {}
        for p, c in enumerate(self.class_id):
            groups.setdefault(c, []).append(p)
        return tuple(frozenset(groups[c]) for c in sorted(groups))

    @property
    def sizes(self) -> tuple:
        return tuple(sorted(len(c) for c in self.classes))

    def refines(self, coarser: "ConsistencyPartition") -> bool:
        """True when every class here sits inside a single class of ``coarser``."""
        return all(len({coarser.class_id[p] for p in cls}) == 1 for cls in self.classes)

    def same_partition(self, other: "ConsistencyPartition") -> bool:
        return set(self.classes) == set(other.classes)


def refinement_history(model: Model, rho: Realization) -> list[ConsistencyPartition]:
    """Partitions after rounds ``0..rho.t``."""
    model.check_size(rho.n)
    ids = tuple([0] * rho.n)
    history = [ConsistencyPartition(0, ids)]
    for r in range(rho.t):
        ids = refine_step(model, ids, [s[r] for s in rho.strings])
        history.append(ConsistencyPartition(r + 1, ids))
    return history


def refine(model: Model, rho: Realization) -> ConsistencyPartition:
    return refinement_history(model, rho)[-1]


def structural_partition(model: Model, rho: Realization) -> ConsistencyPartition:
    """Equality classes of the literal knowledge terms (the oracle for :func:`refine`)."""
    terms = evolve_structural(model, rho)
    return ConsistencyPartition(rho.t, canonical_ids([_key(k) for k in terms]))


def project_pi_tilde(model: Model, rho: Realization) -> ChromaticComplex:
    part = refine(model, rho)
    facets = [
        Simplex(frozenset(Vertex.of(p + 1, rho.strings[p]) for p in cls)) for cls in part.classes
    ]
    return ChromaticComplex(rho.n, frozenset(facets))


def dump_ports(p: PortAssignment) -> str:
    return json.dumps(p.to_json())

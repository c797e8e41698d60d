"""Symmetric output complexes and the two solvability checks for a realization."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, factorial
from typing import Any, Mapping

from .complexes import ChromaticComplex, Simplex, Vertex, check_simplicial_map, encode, project_pi
from .errors import AsymmetricTask, InvalidArity
from .knowledge import Model, protocol_facet, project_pi_tilde, refine
from .randomness import Realization


def _distinct_permutations(values: tuple) -> int:
    total = factorial(len(values))
    for c in Counter(values).values():
        total //= factorial(c)
    return total


@dataclass(frozen=True)
class OutputComplex:
    """Pure output complex on names ``1..n``; each facet is a tuple of values, one per name."""

    n: int
    facets: frozenset
    alphabet: tuple = ()

    def __post_init__(self):
        facets = frozenset(tuple(f) for f in self.facets)
        object.__setattr__(self, "facets", facets)
        if not facets:
            raise ValueError("output complex needs at least one facet")
        if any(len(f) != self.n for f in facets):
            raise ValueError(f"every facet must assign a value to all {self.n} names")
        alphabet = tuple(sorted({v for f in facets for v in f}, key=encode))
        if self.alphabet and not set(alphabet) <= set(self.alphabet):
            raise ValueError("facet values outside the declared alphabet")
        object.__setattr__(self, "alphabet", tuple(self.alphabet) or alphabet)
        # closed under permuting values across names <=> every value-multiset shows all its arrangements
        by_multiset = Counter(tuple(sorted(f, key=encode)) for f in facets)
        for ms, count in by_multiset.items():
            if count != _distinct_permutations(ms):
                raise AsymmetricTask(f"facets with values {ms} are not closed under renaming")

    def sorted_facets(self) -> list[tuple]:
        return sorted(self.facets, key=lambda f: tuple(encode(v) for v in f))

    def facet_simplex(self, facet: tuple) -> Simplex:
        return Simplex.of((i + 1, v) for i, v in enumerate(facet))

    def complex(self) -> ChromaticComplex:
        return ChromaticComplex(self.n, frozenset(self.facet_simplex(f) for f in self.facets))

    def to_json(self) -> dict:
        return {"n": self.n, "alphabet": list(self.alphabet), "facets": [list(f) for f in self.sorted_facets()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "OutputComplex":
        facets = frozenset(tuple(f) for f in data["facets"])
        return cls(int(data["n"]), facets, tuple(data.get("alphabet", ())))


def make_leader_election(n: int) -> OutputComplex:
    return make_m_leader_election(n, 1)


def make_m_leader_election(n: int, m: int) -> OutputComplex:
    if n < 1 or not 1 <= m <= n:
        raise InvalidArity(f"need 1 <= m <= n, got n={n}, m={m}")
    facets = frozenset(
        tuple(1 if i in leaders else 0 for i in range(n)) for leaders in combinations(range(n), m)
    )
    assert len(facets) == comb(n, m)
    return OutputComplex(n, facets, (0, 1))


@dataclass(frozen=True)
class TaskVerdict:
    solvable: bool
    witness: tuple | None = None
    assignment: dict = field(default_factory=dict)

    def __bool__(self):
        return self.solvable


def solves_realization(model: Model, rho: Realization, O: OutputComplex) -> TaskVerdict:
    """Decide solvability by checking that some facet is constant on every consistency class.

    For name-preserving maps the vertex map into a facet is forced, and it is
    simplicial into the projection of that facet exactly when each class is
    sent to a single value.
    """
    if O.n != rho.n:
        raise ValueError(f"task is for n={O.n}, realization has n={rho.n}")
    classes = refine(model, rho).classes
    for tau in O.sorted_facets():
        assignment = {}
        for c, members in enumerate(classes):
            values = {tau[p] for p in members}
            if len(values) != 1:
                break
            assignment[c] = values.pop()
        else:
            return TaskVerdict(True, tau, assignment)
    return TaskVerdict(False)


def solves_realization_by_map(model: Model, rho: Realization, O: OutputComplex) -> bool:
    """Same question answered with the generic simplicial-map checker (slow; an oracle)."""
    source = project_pi_tilde(model, rho)
    for tau in O.sorted_facets():
        simplex = O.facet_simplex(tau)
        target = project_pi(simplex, O.n)
        vmap = {v: Vertex(v.name, simplex.value_of(v.name)) for v in source.vertices()}
        if check_simplicial_map(source, target, vmap):
            return True
    return False


def solves_global_state(model: Model, rho: Realization, O: OutputComplex) -> bool:
    """Look for a name-independent output function on the literal knowledge facet."""
    if O.n != rho.n:
        raise ValueError(f"task is for n={O.n}, realization has n={rho.n}")
    sigma, _ = protocol_facet(model, rho)
    knowledge = [sigma.value_of(i + 1) for i in range(rho.n)]
    for tau in O.facets:
        f: dict[bytes, Any] = {}
        if all(f.setdefault(k, v) == v for k, v in zip(knowledge, tau)):
            return True
    return False


def dumps(O: OutputComplex) -> str:
    return json.dumps(O.to_json())

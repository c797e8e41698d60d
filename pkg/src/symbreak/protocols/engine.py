"""Lockstep full-information network shared by all protocols.

Each source ``c`` owns two deterministic bit streams derived from the run
seed: an *ambient* stream that feeds one bit per round to every party wired
to ``c`` (the per-round randomness of the model), and a *choice* stream from
which a party reads, through its own cursor, the bits spent on protocol
choices.  Parties wired to the same source therefore see identical bits.

After every round the network refines the knowledge partition from what each
party read and received, so traces carry canonical knowledge class ids.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from ..complexes import encode
from ..errors import ProtocolTimeout, StuckAtGCD
from ..knowledge import Model, canonical_ids, refine_step
from ..randomness import RandomnessConfiguration, derive_seed


class BitStream:
    def __init__(self, seed: int):
        self._rng = random.Random(seed)
        self._bits: list[str] = []

    def __getitem__(self, pos: int) -> str:
        while pos >= len(self._bits):
            self._bits.extend(format(self._rng.getrandbits(64), "064b"))
        return self._bits[pos]


class Network:
    def __init__(
        self,
        model: Model,
        alpha: RandomnessConfiguration,
        seed: int,
        inputs: Sequence | None = None,
        trace: bool = False,
    ):
        model.check_size(alpha.n)
        self.model = model
        self.alpha = alpha
        self.n = alpha.n
        self.seed = seed
        self.inputs = tuple(inputs) if inputs is not None else (None,) * self.n
        if len(self.inputs) != self.n:
            raise ValueError(f"{len(self.inputs)} inputs for {self.n} parties")
        self._ambient = {c: BitStream(derive_seed(seed, "source", c, "ambient")) for c in range(1, alpha.k + 1)}
        self._choice = {c: BitStream(derive_seed(seed, "source", c, "choice")) for c in range(1, alpha.k + 1)}
        self._cursor = [0] * self.n
        self.round = 0
        self.classes = canonical_ids([encode(x) for x in self.inputs])
        self.ambient = [""] * self.n  # ambient bits seen so far, per party
        self._pending: list[str] | None = None
        self.last_payloads: dict = {}
        self.record = trace
        self.trace: list[dict] = []

    # -- randomness ---------------------------------------------------------

    def _draw(self, p: int) -> str:
        if self._pending is None:
            raise RuntimeError("random choices are only made inside a round")
        bit = self._choice[self.alpha.source_of[p]][self._cursor[p]]
        self._cursor[p] += 1
        self._pending[p] += bit
        return bit

    def choose(self, p: int, m: int) -> int:
        """Uniform index in ``range(m)`` by rejection sampling on party ``p``'s source."""
        if m < 1:
            raise ValueError("nothing to choose from")
        width = (m - 1).bit_length()
        while True:
            v = 0
            for _ in range(width):
                v = 2 * v + int(self._draw(p))
            if v < m:
                return v

    # -- rounds -------------------------------------------------------------

    def begin_round(self) -> None:
        r = self.round
        bits = [self._ambient[s][r] for s in self.alpha.source_of]
        self._pending = list(bits)
        for p, b in enumerate(bits):
            self.ambient[p] += b

    def end_round(
        self,
        payloads: Mapping | None = None,
        states: Sequence[str] | None = None,
        outputs: Sequence | None = None,
    ) -> None:
        """Deliver ``payloads`` and refine knowledge classes.

        Message-passing payloads are keyed ``(sender, receiver)``; blackboard
        payloads by sender.
        """
        observed = self._pending
        self._pending = None
        self.classes = refine_step(self.model, self.classes, observed, payloads)
        self.last_payloads = dict(payloads or {})
        self.round += 1
        if self.record:
            for p in range(self.n):
                self.trace.append(
                    {
                        "round": self.round,
                        "party": p,
                        "class": self.classes[p],
                        "state": states[p] if states else "run",
                        "output": outputs[p] if outputs else None,
                    }
                )

    def exchange(self, payloads=None, states=None, outputs=None) -> None:
        """A full round with no random choices."""
        self.begin_round()
        self.end_round(payloads, states, outputs)

    def received(self, p: int) -> list[tuple[int, Any]]:
        """``(port, payload)`` pairs that reached ``p`` in the last round (message passing)."""
        rows = self.model.ports.target
        return [
            (j, self.last_payloads[(q, p)])
            for j, q in enumerate(rows[p], start=1)
            if (q, p) in self.last_payloads
        ]

    def class_members(self) -> dict[int, list[int]]:
        groups: dict[int, list[int]] = {}
        for p, c in enumerate(self.classes):
            groups.setdefault(c, []).append(p)
        return groups


LEADER = "leader"
TIMEOUT = "timeout"
STUCK = "stuck"
DONE = "done"


@dataclass
class ProtocolRun:
    protocol: str
    model: str
    alpha: RandomnessConfiguration
    seed: int
    status: str
    outputs: tuple
    rounds_used: int
    trace: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def leaders(self) -> list[int]:
        return [p for p, o in enumerate(self.outputs) if o == 1]

    @property
    def unique_leader(self) -> bool:
        return self.status == LEADER and len(self.leaders) == 1

    def raise_for_status(self) -> "ProtocolRun":
        if self.status == TIMEOUT:
            raise ProtocolTimeout(f"{self.protocol}: no decision after {self.rounds_used} rounds")
        if self.status == STUCK:
            raise StuckAtGCD(f"{self.protocol}: active class sizes stuck at {self.info.get('stuck_sizes')}")
        return self

    def summary(self) -> dict:
        return {
            "protocol": self.protocol,
            "model": self.model,
            "alpha": self.alpha.to_json(),
            "seed": self.seed,
            "status": self.status,
            "outputs": list(self.outputs),
            "rounds_used": self.rounds_used,
        }


def audit_name_independence(run: ProtocolRun) -> list[tuple[int, int, int]]:
    """Rounds where two parties share a knowledge class but emitted different outputs.

    Returns ``(round, party_a, party_b)`` triples; empty means the run is clean.
    """
    bad = []
    by_round: dict[int, list[dict]] = {}
    for row in run.trace:
        by_round.setdefault(row["round"], []).append(row)
    for r, rows in sorted(by_round.items()):
        seen: dict[int, dict] = {}
        for row in rows:
            first = seen.setdefault(row["class"], row)
            if first["output"] != row["output"]:
                bad.append((r, first["party"], row["party"]))
    return bad

"""CreateMatching: match every party of a smaller class into a larger one.

One iteration takes three rounds:

1. every active ``V1`` party picks, uniformly with its own source bits, one
   of its ports leading to an active ``V2`` party and sends a request there;
2. every ``V2`` party that got requests acknowledges the one that arrived on
   its smallest port number;
3. a plain exchange, after which everybody knows who is done.

Each iteration matches at least one more pair, so the loop ends after at most
``|V1|`` iterations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from ..knowledge import Model, PortAssignment, random_ports
from ..randomness import RandomnessConfiguration, derive_seed
from .engine import DONE, TIMEOUT, Network

REQUEST = "req"
ACK = "ack"


@dataclass
class MatchingState:
    v1: tuple
    v2: tuple
    matching: set = field(default_factory=set)  # (V1 party, V2 party)
    done: dict = field(default_factory=dict)  # party -> bool, as each party knows it
    sizes: list = field(default_factory=list)  # matching size after each iteration
    rounds_used: int = 0
    status: str = DONE
    aborted: bool = False
    trace: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.matching)

    @property
    def perfect(self) -> bool:
        return self.status == DONE and {a for a, _ in self.matching} == set(self.v1)

    def matched_parties(self) -> set:
        return {p for pair in self.matching for p in pair}

    def knowledge_correct(self) -> bool:
        """Each participant's own done flag agrees with the actual matching."""
        matched = self.matched_parties()
        return all(self.done[p] == (p in matched) for p in self.v1 + self.v2)


def _states(net: Network, v1: set, v2: set, done: dict) -> list[str]:
    out = []
    for p in range(net.n):
        if done.get(p):
            out.append("matched")
        elif p in v1:
            out.append("V1")
        elif p in v2:
            out.append("V2")
        else:
            out.append("relay")
    return out


def create_matching(
    net: Network,
    v1: Iterable[int],
    v2: Iterable[int],
    max_rounds: int,
    outputs: list | None = None,
    should_abort: Callable[[], bool] | None = None,
) -> MatchingState:
    """Run CreateMatching between two disjoint party sets on ``net``.

    ``should_abort`` is polled after every iteration; if it returns true the
    state is returned with ``aborted=True`` and the partial matching is to be
    discarded by the caller.
    """
    v1, v2 = tuple(sorted(v1)), tuple(sorted(v2))
    if set(v1) & set(v2):
        raise ValueError("V1 and V2 must be disjoint")
    if len(v1) > len(v2):
        v1, v2 = v2, v1
    ports: PortAssignment = net.model.ports
    state = MatchingState(v1, v2, done={p: False for p in v1 + v2})
    set1, set2 = set(v1), set(v2)
    active1, active2 = set(v1), set(v2)
    start = net.round

    while active1:
        if net.round + 3 > max_rounds:
            state.status = TIMEOUT
            break
        # requests
        net.begin_round()
        requests = {}
        for p in sorted(active1):
            options = [q for q in ports.target[p] if q in active2]
            requests[(p, options[net.choose(p, len(options))])] = REQUEST
        net.end_round(requests, _states(net, set1, set2, state.done), outputs)
        # acknowledgements: smallest arrival port wins
        acks = {}
        for q in sorted(active2):
            arrivals = [j for j, payload in net.received(q) if payload == REQUEST]
            if arrivals:
                acks[(q, ports(q, min(arrivals)))] = ACK
                state.done[q] = True
        net.exchange(acks, _states(net, set1, set2, state.done), outputs)
        for p in sorted(active1):
            if any(payload == ACK for _, payload in net.received(p)):
                state.done[p] = True
        for (q, p) in acks:
            state.matching.add((p, q))
        active1 = {p for p in active1 if not state.done[p]}
        active2 = {q for q in active2 if not state.done[q]}
        # everyone learns the new statuses
        net.exchange(None, _states(net, set1, set2, state.done), outputs)
        state.sizes.append(len(state.matching))
        if active1 and should_abort is not None and should_abort():
            state.aborted = True
            break

    state.rounds_used = net.round - start
    state.trace = net.trace
    return state


def run_create_matching(
    ports: PortAssignment | None,
    v1: Iterable[int],
    v2: Iterable[int],
    seed: int,
    alpha: RandomnessConfiguration | None = None,
    max_rounds: int = 200,
    trace: bool = False,
) -> MatchingState:
    """Stand-alone CreateMatching on a clique.

    By default ``V1`` listens to source 1, ``V2`` to source 2 and any other
    party to source 3; ``ports=None`` draws a random port table from ``seed``.
    """
    v1, v2 = list(v1), list(v2)
    n = max(v1 + v2) + 1 if ports is None else ports.n
    if alpha is None:
        src = [3] * n
        for p in v1:
            src[p] = 1
        for p in v2:
            src[p] = 2
        alpha = RandomnessConfiguration(tuple(src))
    if ports is None:
        ports = random_ports(alpha.n, derive_seed(seed, "ports"))
    net = Network(Model.message_passing(ports), alpha, seed, trace=trace)
    return create_matching(net, v1, v2, max_rounds)

"""Leader election on an anonymous blackboard: wait for a party with unique knowledge."""

from __future__ import annotations

from ..knowledge import Model
from ..randomness import RandomnessConfiguration
from .engine import LEADER, TIMEOUT, Network, ProtocolRun


def elect_blackboard(net: Network, max_rounds: int) -> tuple[int | None, int | None]:
    """Run exchange rounds until some knowledge class is a singleton.

    The first time round-``t`` knowledge has singleton classes, the singleton
    with the smallest canonical class id becomes leader, and everybody
    outputs during round ``t + 1``.  Returns ``(leader, t)`` or
    ``(None, None)`` on timeout.  The deciding round is not yet executed.
    """
    while True:
        singles = sorted(c for c, members in net.class_members().items() if len(members) == 1)
        if singles and net.round < max_rounds:
            return net.classes.index(singles[0]), net.round
        if net.round >= max_rounds:
            return None, None
        net.exchange()


def run_blackboard_le(
    alpha: RandomnessConfiguration,
    seed: int,
    max_rounds: int = 64,
    trace: bool = True,
) -> ProtocolRun:
    net = Network(Model.blackboard(), alpha, seed, trace=trace)
    leader, broken_at = elect_blackboard(net, max_rounds)
    if leader is None:
        return ProtocolRun(
            "bb-le", "blackboard", alpha, seed, TIMEOUT, (None,) * alpha.n, net.round,
            net.trace, {"broken_at": None},
        )
    outputs = tuple(1 if p == leader else 0 for p in range(alpha.n))
    states = ["leader" if p == leader else "defeated" for p in range(alpha.n)]
    net.exchange(states=states, outputs=outputs)
    return ProtocolRun(
        "bb-le", "blackboard", alpha, seed, LEADER, outputs, net.round, net.trace,
        {"broken_at": broken_at, "leader": leader},
    )

"""Euclid-style leader election for the port-numbered clique.

Parties are grouped by a label that is a function of their knowledge: their
input, the ambient bits they have seen, and their history of matching
outcomes.  After a bootstrap window the protocol repeatedly matches the two
smallest groups ``a <= b``; the matched members of the larger one output 0
and become relays, leaving sizes ``a`` and ``b - a``.  A group of size one
elects its member.  When gcd of the group sizes is ``g > 1`` the sizes can
only shrink to a single group of size ``g``, which is reported as stuck.
"""

from __future__ import annotations

from functools import reduce
from math import gcd

from ..knowledge import Model, PortAssignment
from ..randomness import RandomnessConfiguration
from .engine import LEADER, STUCK, TIMEOUT, Network, ProtocolRun
from .matching import create_matching

DEFAULT_WINDOW = 8


def euclid_schedule(sizes) -> list[tuple]:
    """Group sizes visited by repeatedly replacing the two smallest ``a <= b`` with ``a, b - a``.

    Stops at a singleton or at a single remaining group.
    """
    current = tuple(sorted(s for s in sizes if s > 0))
    path = [current]
    while current and 1 not in current and len(current) > 1:
        a, b, *rest = current
        current = tuple(sorted([a, b - a, *rest]))
        current = tuple(s for s in current if s > 0)
        path.append(current)
    return path


class _Groups:
    def __init__(self, net: Network):
        self.net = net
        self.active = [True] * net.n
        self.events: list[tuple] = [()] * net.n
        self.outputs: list = [None] * net.n

    def label(self, p: int) -> tuple:
        return (self.net.inputs[p] is None, repr(self.net.inputs[p]), self.net.ambient[p], self.events[p])

    def groups(self) -> list[list[int]]:
        by_label: dict[tuple, list[int]] = {}
        for p in range(self.net.n):
            if self.active[p]:
                by_label.setdefault(self.label(p), []).append(p)
        return [by_label[k] for k in sorted(by_label)]

    def states(self) -> list[str]:
        return ["active" if a else "relay" for a in self.active]


def elect_gcd(net: Network, max_rounds: int, window: int = DEFAULT_WINDOW) -> dict:
    """Drive ``net`` until a leader is found, the budget runs out, or no pair is left to match.

    Returns a dict with ``status``, ``leader``, ``outputs`` and the recorded
    Euclid steps; the announcing round is not executed here.
    """
    g = _Groups(net)
    steps = []
    while True:
        groups = g.groups()
        singles = [grp for grp in groups if len(grp) == 1]
        if singles and net.round < max_rounds:
            return {"status": LEADER, "leader": singles[0][0], "groups": g, "steps": steps}
        if net.round >= max_rounds:
            status = STUCK if len(groups) == 1 else TIMEOUT
            return {"status": status, "leader": None, "groups": g, "steps": steps,
                    "stuck_sizes": tuple(len(x) for x in groups)}
        if net.round < window or len(groups) == 1:
            net.exchange(None, g.states(), g.outputs)
            continue

        ordered = sorted(groups, key=lambda grp: (len(grp), g.label(grp[0])))
        small, large = ordered[0], ordered[1]
        before = tuple(sorted(len(x) for x in groups))
        start_bits = {p: len(net.ambient[p]) for p in small + large}

        def drifted() -> bool:
            # restart if fresh ambient bits split either participating group
            for grp in (small, large):
                seen = {net.ambient[p][start_bits[p]:] for p in grp}
                if len(seen) > 1:
                    return True
            return False

        state = create_matching(net, small, large, max_rounds, g.outputs, should_abort=drifted)
        if state.status == TIMEOUT or state.aborted:
            steps.append({"before": before, "aborted": True})
            continue
        matched_large = {q for _, q in state.matching}
        for p in small:
            g.events[p] = g.events[p] + ("m",)
        for q in large:
            if q in matched_large:
                g.active[q] = False
                g.outputs[q] = 0
            else:
                g.events[q] = g.events[q] + ("u",)
        euclid = tuple(sorted([len(x) for x in groups if x is not small and x is not large]
                              + [len(small), len(large) - len(small)]))
        after = tuple(sorted(len(x) for x in g.groups()))
        steps.append({
            "before": before,
            "pair": (len(small), len(large)),
            "euclid": tuple(s for s in euclid if s > 0),
            "after": after,
            "rounds": state.rounds_used,
        })


def run_gcd_le(
    alpha: RandomnessConfiguration,
    ports: PortAssignment,
    seed: int,
    max_rounds: int | None = None,
    window: int = DEFAULT_WINDOW,
    trace: bool = True,
    inputs=None,
) -> ProtocolRun:
    if max_rounds is None:
        max_rounds = 50 * alpha.n
    net = Network(Model.message_passing(ports), alpha, seed, inputs=inputs, trace=trace)
    result = elect_gcd(net, max_rounds, window)
    info = {"steps": result["steps"], "gcd": alpha.gcd}
    if result["status"] != LEADER:
        info["stuck_sizes"] = result.get("stuck_sizes")
        return ProtocolRun("gcd-le", "mp", alpha, seed, result["status"], tuple(result["groups"].outputs),
                           net.round, net.trace, info)
    leader = result["leader"]
    outputs = tuple(1 if p == leader else 0 for p in range(alpha.n))
    net.exchange(None, ["leader" if p == leader else "defeated" for p in range(alpha.n)], outputs)
    info["leader"] = leader
    return ProtocolRun("gcd-le", "mp", alpha, seed, LEADER, outputs, net.round, net.trace, info)


def sizes_gcd(sizes) -> int:
    return reduce(gcd, sizes, 0)

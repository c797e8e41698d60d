"""Solving name-independent tasks through an elected leader.

Once a leader exists, every party sends it its input, the leader computes
all outputs, and sends them back.  In message passing the leader addresses
each neighbor by port.  On a blackboard it can only address knowledge
classes, so an assignment must give one output per class.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from ..knowledge import Model
from ..randomness import RandomnessConfiguration
from ..tasks import OutputComplex
from .blackboard import elect_blackboard
from .engine import LEADER, TIMEOUT, Network, ProtocolRun
from .gcd import elect_gcd

# assign(leader_input, groups) -> (leader_output, {address: output}) or None.
# groups lists (address, size, inputs) for everyone except the leader.
Assign = Callable[[Any, list], "tuple[Any, dict] | None"]


@dataclass(frozen=True)
class LeaderTask:
    name: str
    assign: Assign
    check: Callable[[Sequence, Sequence], bool]


def function_task(name: str, fn: Callable[[list], Any]) -> LeaderTask:
    """Everybody outputs ``fn`` of the multiset of all inputs."""

    def assign(own, groups):
        pool = [own] + [x for _, _, xs in groups for x in xs]
        value = fn(sorted(pool, key=repr))
        return value, {addr: value for addr, _, _ in groups}

    def check(inputs, outputs):
        value = fn(sorted(inputs, key=repr))
        return all(o == value for o in outputs)

    return LeaderTask(name, assign, check)


max_task = function_task("max", max)


def _fit(values: Counter, sizes: list[int], order: list) -> list | None:
    """Give each group one value, consuming ``size`` copies; backtracking over ``order``."""
    if not sizes:
        return [] if not +values else None
    size, rest = sizes[0], sizes[1:]
    for v in order:
        if values[v] >= size:
            values[v] -= size
            tail = _fit(values, rest, order)
            values[v] += size
            if tail is not None:
                return [v] + tail
    return None


def output_complex_task(O: OutputComplex, prefer: Sequence | None = None, name: str | None = None) -> LeaderTask:
    """Produce any facet of ``O``; inputs are ignored.

    Values are tried in ``prefer`` order (default: descending), leader first,
    then groups by address.  For m-leader election this makes the leader one
    of the 1s and fills the rest from its lowest ports.
    """
    order = list(prefer) if prefer is not None else sorted(O.alphabet, reverse=True)
    multisets = sorted({tuple(sorted(f, key=order.index)) for f in O.facets}, key=lambda m: [order.index(x) for x in m])

    def assign(own, groups):
        sizes = [1] + [size for _, size, _ in groups]
        for ms in multisets:
            got = _fit(Counter(ms), sizes, order)
            if got is not None:
                return got[0], {addr: v for (addr, _, _), v in zip(groups, got[1:])}
        return None

    def check(inputs, outputs):
        return tuple(outputs) in O.facets

    return LeaderTask(name or f"complex(n={O.n})", assign, check)


def run_task_by_leader(
    alpha: RandomnessConfiguration,
    model: Model,
    task: LeaderTask,
    inputs: Sequence,
    seed: int,
    max_rounds: int | None = None,
    trace: bool = True,
) -> ProtocolRun:
    n = alpha.n
    if max_rounds is None:
        max_rounds = 64 if model.is_blackboard else 50 * n
    net = Network(model, alpha, seed, inputs=inputs, trace=trace)
    kind = model.describe()
    none = (None,) * n

    if model.is_blackboard:
        leader, _ = elect_blackboard(net, max_rounds)
        if leader is None:
            return ProtocolRun("task-by-leader", kind, alpha, seed, TIMEOUT, none, net.round, net.trace, {"task": task.name})
    else:
        res = elect_gcd(net, max_rounds)
        if res["status"] != LEADER:
            return ProtocolRun("task-by-leader", kind, alpha, seed, res["status"], none, net.round, net.trace,
                               {"task": task.name, "stuck_sizes": res.get("stuck_sizes")})
        leader = res["leader"]

    states = ["leader" if p == leader else "follower" for p in range(n)]

    while True:
        # collect: inputs travel to the leader
        if model.is_blackboard:
            net.exchange({p: ("in", repr(inputs[p])) for p in range(n)}, states)
            members = net.class_members()
            own_class = net.classes[leader]
            groups = [
                (c, len(ps), [inputs[p] for p in ps])
                for c, ps in sorted(members.items())
                if c != own_class
            ]
        else:
            net.exchange({(p, leader): ("in", repr(inputs[p])) for p in range(n) if p != leader}, states)
            ports = model.ports
            groups = [(j, 1, [inputs[ports(leader, j)]]) for j in range(1, n)]
        plan = task.assign(inputs[leader], groups)
        if plan is not None or net.round >= max_rounds:
            break
    if plan is None:
        return ProtocolRun("task-by-leader", kind, alpha, seed, TIMEOUT, none, net.round, net.trace,
                           {"task": task.name, "leader": leader})

    own_out, by_addr = plan
    outputs = [None] * n
    outputs[leader] = own_out
    if model.is_blackboard:
        for c, ps in net.class_members().items():
            if c in by_addr:
                for p in ps:
                    outputs[p] = by_addr[c]
        payloads = {leader: ("out", tuple(sorted((c, repr(v)) for c, v in by_addr.items())))}
    else:
        payloads = {}
        for j, v in by_addr.items():
            q = model.ports(leader, j)
            outputs[q] = v
            payloads[(leader, q)] = ("out", repr(v))
    net.exchange(payloads, states, outputs)
    outputs = tuple(outputs)
    info = {"task": task.name, "leader": leader, "valid": task.check(tuple(inputs), outputs)}
    return ProtocolRun("task-by-leader", kind, alpha, seed, LEADER, outputs, net.round, net.trace, info)

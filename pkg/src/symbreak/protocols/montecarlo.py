"""Seeded Monte Carlo trials over the protocols.

Trial ``i`` of a run with seed ``s`` uses seed ``derive_seed(s, "trial", i)``,
so a summary depends only on its arguments, whatever ``workers`` is.
"""

from __future__ import annotations

import math
import statistics
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from ..knowledge import Model, PortAssignment, random_ports
from ..randomness import RandomnessConfiguration, derive_seed
from .blackboard import run_blackboard_le
from .engine import LEADER, ProtocolRun
from .gcd import run_gcd_le
from .matching import run_create_matching
from .reduction import LeaderTask, run_task_by_leader

PROTOCOLS = ("bb-le", "gcd-le", "matching", "task-by-leader")
MAX_FAILURES = 20


def _percentile(sorted_vals: list[int], q: float) -> int:
    # nearest-rank
    return sorted_vals[max(0, math.ceil(q * len(sorted_vals)) - 1)]


def _one(args) -> dict:
    protocol, alpha, ports, seed, max_rounds, task, inputs, v1, v2, keep_trace = args
    if protocol == "matching":
        st = run_create_matching(ports, v1, v2, seed, alpha=alpha, max_rounds=max_rounds or 200, trace=keep_trace)
        ok = st.perfect and st.knowledge_correct()
        return {"seed": seed, "status": st.status if not ok else "matched", "ok": ok,
                "rounds": st.rounds_used, "matching_size": st.size, "trace": st.trace if keep_trace else None}
    run: ProtocolRun
    if protocol == "bb-le":
        run = run_blackboard_le(alpha, seed, max_rounds or 64, trace=keep_trace)
    elif protocol == "gcd-le":
        p = ports if ports is not None else random_ports(alpha.n, derive_seed(seed, "ports"))
        run = run_gcd_le(alpha, p, seed, max_rounds, trace=keep_trace)
    else:
        model = Model.message_passing(ports) if ports is not None else Model.blackboard()
        run = run_task_by_leader(alpha, model, task, inputs or (None,) * alpha.n, seed, max_rounds, trace=keep_trace)
    ok = run.unique_leader if protocol != "task-by-leader" else (run.status == LEADER and run.info.get("valid", False))
    row = {"seed": seed, "status": run.status, "ok": ok, "rounds": run.rounds_used,
           "trace": run.trace if keep_trace else None}
    if "broken_at" in run.info:
        row["broken_at"] = run.info["broken_at"]
    if run.info.get("stuck_sizes") is not None:
        row["stuck_sizes"] = list(run.info["stuck_sizes"])
    return row


def run_trials(
    protocol: str,
    alpha: RandomnessConfiguration,
    trials: int,
    seed: int,
    ports: PortAssignment | None = None,
    max_rounds: int | None = None,
    task: LeaderTask | None = None,
    inputs: Sequence | None = None,
    v1: Sequence[int] = (),
    v2: Sequence[int] = (),
    workers: int = 1,
    keep_traces: bool = False,
) -> list[dict]:
    """Per-trial result rows, in trial order."""
    if protocol not in PROTOCOLS:
        raise ValueError(f"unknown protocol {protocol!r}; expected one of {', '.join(PROTOCOLS)}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if protocol == "task-by-leader" and task is None:
        raise ValueError("task-by-leader needs a task")
    jobs = [
        (protocol, alpha, ports, derive_seed(seed, "trial", i), max_rounds, task, inputs,
         tuple(v1), tuple(v2), keep_traces)
        for i in range(trials)
    ]
    if workers > 1 and protocol != "task-by-leader":  # task callables need not pickle
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_one, jobs, chunksize=max(1, trials // (4 * workers))))
    return [_one(j) for j in jobs]


def summarize(protocol: str, alpha: RandomnessConfiguration, seed: int, rows: list[dict]) -> dict:
    rounds = sorted(r["rounds"] for r in rows)
    status = Counter(r["status"] for r in rows)
    out = {
        "protocol": protocol,
        "alpha": alpha.to_json(),
        "seed": seed,
        "trials": len(rows),
        "successes": sum(r["ok"] for r in rows),
        "success_rate": sum(r["ok"] for r in rows) / len(rows),
        "status_counts": dict(sorted(status.items())),
        "rounds": {
            "min": rounds[0],
            "median": statistics.median(rounds),
            "p99": _percentile(rounds, 0.99),
            "max": rounds[-1],
        },
        "failures": [
            {k: v for k, v in r.items() if k not in ("ok", "trace")}
            for r in rows if not r["ok"]
        ][:MAX_FAILURES],
    }
    sizes = [r["matching_size"] for r in rows if "matching_size" in r]
    if sizes:
        out["matching_sizes"] = {str(k): v for k, v in sorted(Counter(sizes).items())}
    return out


def monte_carlo(
    protocol: str,
    alpha: RandomnessConfiguration,
    trials: int,
    seed: int,
    ports: PortAssignment | None = None,
    max_rounds: int | None = None,
    task: LeaderTask | None = None,
    inputs: Sequence | None = None,
    v1: Sequence[int] = (),
    v2: Sequence[int] = (),
    workers: int = 1,
) -> dict:
    """Summary of ``trials`` seeded runs: success rate, status counts, round quantiles, failures."""
    rows = run_trials(protocol, alpha, trials, seed, ports, max_rounds, task, inputs, v1, v2, workers)
    return summarize(protocol, alpha, seed, rows)

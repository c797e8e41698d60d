"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""

import math
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import product

import pytest

from symbreak.analysis import (
    blackboard_lower_bound,
    divisibility_audit,
    exact_probability,
    succession_check,
)
from symbreak.knowledge import (
    Model,
    adversarial_port_table,
    adversarial_ports,
    random_ports,
    refine,
    shift_map,
    structural_partition,
    validate_ports,
)
from symbreak.protocols import monte_carlo, run_trials
from symbreak.randomness import (
    RandomnessConfiguration,
    all_strings,
    enumerate_consistent,
    integer_partitions,
    set_partitions,
)
from symbreak.tasks import make_leader_election, make_m_leader_election, solves_global_state, solves_realization

from conftest import ACCEPTANCE_LINES

BB = Model.blackboard()
R = RandomnessConfiguration.from_counts


@contextmanager
def criterion(number, title, budget=None):
    start = time.perf_counter()
    status, detail = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None and elapsed >= budget:
            detail = f"over budget: {elapsed:.2f}s >= {budget}s"
            raise AssertionError(detail)
        status = "PASS"
        detail = f"{elapsed:.2f}s"
    except BaseException as exc:
        detail = detail or f"{type(exc).__name__}: {exc}"[:200]
        raise
    finally:
        line = f"criterion {number}: {status} {title} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)


def _all_configs(n_max):
    """Canonical assignments for every source-count partition, plus every party-to-source map."""
    seen = []
    for n in range(1, n_max + 1):
        for counts in integer_partitions(n):
            seen.append(R(counts))
        seen.extend(set_partitions(n))
    return seen


def test_criterion_1_blackboard_characterization():
    with criterion(1, "blackboard sweep n<=4, t=3", budget=10):
        partitions = [p for n in range(1, 5) for p in integer_partitions(n)]
        assert len(partitions) == 11
        for alpha in _all_configs(4):
            p = exact_probability(BB, alpha, make_leader_election(alpha.n), 3)
            assert (p > 0) == (min(alpha.counts) == 1), alpha


def test_criterion_2_closed_form():
    with criterion(2, "n=2 alpha=(1,2): 1-2^-t, t=1..6", budget=5):
        alpha = R((1, 1))
        for t in range(1, 7):
            strings = all_strings(t)
            differing = sum(a != b for a, b in product(strings, repeat=2))
            oracle = Fraction(differing, len(strings) ** 2)
            assert oracle == 1 - Fraction(1, 2**t)
            assert exact_probability(BB, alpha, make_leader_election(2), t) == oracle


def test_criterion_3_lower_bounds():
    with criterion(3, "lower bounds for n_1=1, k in {2,3}, t<=4"):
        configs = [(1, 1), (1, 2), (1, 3), (1, 1, 1), (1, 1, 2), (1, 2, 2), (1, 2, 3)]
        for counts in configs:
            alpha = R(counts)
            for t in range(1, 5):
                p = exact_probability(BB, alpha, make_leader_election(alpha.n), t)
                tight, crude = blackboard_lower_bound(alpha.k, t)
                assert p >= tight and p >= crude, (counts, t, p)


def test_criterion_4_gcd_impossibility():
    with criterion(4, "divisibility and zero probability under adversarial ports", budget=60):
        for counts in [(2, 2), (3, 3), (2, 4)]:
            alpha = R(counts)
            report = divisibility_audit(alpha, 3)
            assert report.ok, report.violations[:3]
            model = Model.message_passing(adversarial_ports(alpha)[0])
            for t in range(1, 4):
                assert exact_probability(model, alpha, make_leader_election(alpha.n), t) == 0


def test_criterion_5_adversarial_construction():
    with criterion(5, "adversarial ports for all g|n, n<=12", budget=1):
        for n in range(2, 13):
            for g in range(1, n + 1):
                if n % g:
                    continue
                table = adversarial_port_table(n, g)
                assert validate_ports(table)
                f = shift_map(n, g)
                for i in range(n):
                    for j in range(1, n):
                        assert table(f[i], j) == f[table(i, j)]
                # every configuration whose counts are multiples of g, grouped contiguously
                for blocks in integer_partitions(n // g):
                    alpha = R(tuple(b * g for b in blocks))
                    assert all(alpha.source_of[i] == alpha.source_of[f[i]] for i in range(n))
                    ports, _ = adversarial_ports(alpha)
                    assert validate_ports(ports)


def test_criterion_6_gcd_le():
    with criterion(6, "gcd-le success on (2,3), stuck on adversarial (2,2)", budget=120):
        alpha = R((2, 3))
        for port_seed in range(20):
            ports = random_ports(5, port_seed)
            rows = run_trials("gcd-le", alpha, 1000, seed=port_seed, ports=ports, max_rounds=50 * 5)
            rate = sum(r["ok"] and r["rounds"] <= 250 for r in rows) / len(rows)
            assert rate >= 0.99, (port_seed, rate)
        stuck_alpha = R((2, 2))
        ports, _ = adversarial_ports(stuck_alpha)
        summary = monte_carlo("gcd-le", stuck_alpha, 200, seed=6, ports=ports)
        assert summary["status_counts"] == {"stuck": 200}


def test_criterion_7_create_matching():
    with criterion(7, "CreateMatching perfect for 1<=|V1|<=|V2|<=4", budget=30):
        for a in range(1, 5):
            for b in range(a, 5):
                v1, v2 = list(range(a)), list(range(a, a + b))
                alpha = RandomnessConfiguration(tuple([1] * a + [2] * b))
                rows = run_trials("matching", alpha, 500, seed=100 * a + b, v1=v1, v2=v2)
                assert all(r["ok"] for r in rows), (a, b)
                assert {r["matching_size"] for r in rows} == {a}


def _models(n, seeds):
    yield BB
    if n >= 2:
        for s in seeds:
            yield Model.message_passing(random_ports(n, s))


def test_criterion_8_definition_equivalence():
    with criterion(8, "realization criterion equals global-state criterion, n<=3, t<=2"):
        bad = 0
        for n in range(1, 4):
            tasks = [make_m_leader_election(n, m) for m in range(1, n + 1)]
            for alpha in set_partitions(n):
                for model in _models(n, range(10)):
                    for t in range(3):
                        for rho in enumerate_consistent(alpha, t):
                            for O in tasks:
                                bad += bool(solves_realization(model, rho, O)) != solves_global_state(model, rho, O)
        assert bad == 0


def test_criterion_9_refinement_oracle():
    with criterion(9, "refinement equals structural knowledge, n<=4, t<=3"):
        bad = 0
        for n in range(1, 5):
            models = list(_models(n, range(20)))
            for alpha in set_partitions(n):
                for t in range(4):
                    for rho in enumerate_consistent(alpha, t):
                        for model in models:
                            bad += not refine(model, rho).same_partition(structural_partition(model, rho))
        assert bad == 0


def test_criterion_10_succession():
    with criterion(10, "succession monotonicity, n<=3, t<=3"):
        for n in range(1, 4):
            for alpha in set_partitions(n):
                for model in _models(n, range(3)):
                    report = succession_check(model, alpha, make_leader_election(n), 3)
                    assert report.ok, (alpha, report.violations[:2])


def test_criterion_11_simulation_matches_analysis():
    with criterion(11, "blackboard LE frequency within 3 SE of exact probability"):
        alpha = R((1, 2, 2))
        trials = 10_000
        rows = run_trials("bb-le", alpha, trials, seed=11)
        for t in (1, 2, 3):
            p = float(exact_probability(BB, alpha, make_leader_election(alpha.n), t))
            freq = sum(r["broken_at"] is not None and r["broken_at"] <= t for r in rows) / trials
            se = math.sqrt(p * (1 - p) / trials)
            assert abs(freq - p) <= 3 * se, (t, freq, p, se)

import json
from collections import Counter
from functools import reduce
from math import gcd

import pytest

from symbreak.errors import ProtocolTimeout, StuckAtGCD
from symbreak.knowledge import Model, adversarial_ports, random_ports
from symbreak.protocols import (
    LEADER,
    STUCK,
    TIMEOUT,
    audit_name_independence,
    euclid_schedule,
    max_task,
    monte_carlo,
    output_complex_task,
    run_blackboard_le,
    run_create_matching,
    run_gcd_le,
    run_task_by_leader,
)
from symbreak.randomness import RandomnessConfiguration
from symbreak.tasks import make_leader_election, make_m_leader_election

R = RandomnessConfiguration.from_counts


# -- blackboard leader election ------------------------------------------------


def test_bb_le_decides_one_round_after_split():
    runs = [run_blackboard_le(R((1, 1)), s) for s in range(30)]
    early = [r for r in runs if r.info["broken_at"] == 1]
    assert early
    for r in early:
        assert r.rounds_used == 2 and r.unique_leader


def test_bb_le_leader_read_zero_when_bits_split():
    for s in range(30):
        r = run_blackboard_le(R((1, 1)), s)
        assert r.unique_leader
        assert audit_name_independence(r) == []


def test_bb_le_shared_source_times_out():
    for s in range(10):
        r = run_blackboard_le(RandomnessConfiguration((1, 1)), s, max_rounds=20)
        assert r.status == TIMEOUT and r.outputs == (None, None)
        with pytest.raises(ProtocolTimeout):
            r.raise_for_status()


def test_bb_le_single_party():
    r = run_blackboard_le(R((1,)), 3)
    assert r.outputs == (1,) and r.rounds_used == 1


def test_bb_le_deterministic_trace():
    a = run_blackboard_le(R((1, 2, 2)), 11)
    b = run_blackboard_le(R((1, 2, 2)), 11)
    assert a.trace == b.trace and a.outputs == b.outputs
    assert set(a.trace[0]) == {"round", "party", "class", "state", "output"}


# -- CreateMatching ------------------------------------------------------------


def test_matching_one_to_one():
    st = run_create_matching(None, [0], [1], seed=0)
    assert st.perfect and len(st.sizes) == 1


def test_matching_two_into_three():
    for s in range(50):
        st = run_create_matching(None, [0, 1], [2, 3, 4], seed=s)
        assert st.size == 2 and st.perfect and st.knowledge_correct()
        assert sum(not st.done[q] for q in (2, 3, 4)) == 1


def test_matching_swaps_larger_first_argument():
    st = run_create_matching(None, [0, 1, 2], [3, 4], seed=1)
    assert st.v1 == (3, 4) and st.perfect


def test_matching_shared_source_in_v1():
    alpha = RandomnessConfiguration((1, 1, 1, 2, 2, 2))
    for s in range(500):
        st = run_create_matching(None, [0, 1, 2], [3, 4, 5], seed=s, alpha=alpha)
        assert st.perfect and st.knowledge_correct()
        assert all(b > a for a, b in zip([0] + st.sizes, st.sizes))
        pairs = sorted(st.matching)
        assert len({a for a, _ in pairs}) == len({b for _, b in pairs}) == 3


def test_matching_timeout_reported():
    st = run_create_matching(None, [0, 1, 2], [3, 4, 5], seed=0, max_rounds=2)
    assert st.status == TIMEOUT and not st.perfect


def test_matching_rejects_overlap():
    with pytest.raises(ValueError):
        run_create_matching(None, [0, 1], [1, 2], seed=0)


# -- gcd leader election -------------------------------------------------------


def test_euclid_schedule():
    assert euclid_schedule([2, 3]) == [(2, 3), (1, 2)]
    assert euclid_schedule([4, 6])[-1] == (2,)
    assert euclid_schedule([5]) == [(5,)]


def test_gcd_le_two_three():
    alpha = R((2, 3))
    for s in range(40):
        r = run_gcd_le(alpha, random_ports(5, s), s)
        assert r.unique_leader
        assert audit_name_independence(r) == []
        steps = [st for st in r.info["steps"] if not st.get("aborted")]
        assert steps[0]["before"] == (2, 3) and steps[0]["euclid"] == (1, 2)


def test_gcd_le_size_evolution():
    for counts in [(2, 3), (3, 4), (2, 5), (1, 2, 2)]:
        alpha = R(counts)
        for s in range(10):
            r = run_gcd_le(alpha, random_ports(alpha.n, s), s)
            for st in r.info["steps"]:
                if st.get("aborted"):
                    continue
                g_before = reduce(gcd, st["before"])
                assert reduce(gcd, st["euclid"]) == g_before
                # refinement splits can only lower the gcd further
                assert g_before % reduce(gcd, st["after"]) == 0
                assert sum(st["after"]) == sum(st["euclid"])


def test_gcd_le_single_party():
    r = run_gcd_le(R((1,)), random_ports(1, 0), 0)
    assert r.outputs == (1,)


def test_gcd_le_stuck_under_adversarial_ports():
    alpha = R((2, 2))
    ports, _ = adversarial_ports(alpha)
    for s in range(10):
        r = run_gcd_le(alpha, ports, s)
        assert r.status == STUCK and r.info["stuck_sizes"] == (2,)
        assert r.leaders == []
        with pytest.raises(StuckAtGCD):
            r.raise_for_status()
        assert any(st.get("before") == (2, 2) and st.get("after") == (2,) for st in r.info["steps"])


def test_gcd_le_deterministic():
    a = run_gcd_le(R((2, 3)), random_ports(5, 1), 9)
    b = run_gcd_le(R((2, 3)), random_ports(5, 1), 9)
    assert a.trace == b.trace


# -- reduction -----------------------------------------------------------------


def test_task_max_of_inputs():
    alpha = RandomnessConfiguration((1, 2, 3))
    for model in (Model.blackboard(), Model.message_passing(random_ports(3, 2))):
        r = run_task_by_leader(alpha, model, max_task, (3, 1, 2), seed=5)
        assert r.outputs == (3, 3, 3) and r.info["valid"]
        assert audit_name_independence(r) == []


def test_task_two_leaders_lowest_port():
    alpha = RandomnessConfiguration((1, 2, 3))
    ports = random_ports(3, 2)
    task = output_complex_task(make_m_leader_election(3, 2))
    for s in range(10):
        r = run_task_by_leader(alpha, Model.message_passing(ports), task, (None,) * 3, seed=s)
        leader = r.info["leader"]
        assert sum(o == 1 for o in r.outputs) == 2
        assert r.outputs[leader] == 1 and r.outputs[ports(leader, 1)] == 1


def test_task_blackboard_class_addressing():
    # with class sizes 1,2,2 the second leader cannot come from a pair, so a whole pair is chosen
    alpha = R((1, 2, 2))
    task = output_complex_task(make_m_leader_election(5, 2))
    for s in range(10):
        r = run_task_by_leader(alpha, Model.blackboard(), task, (None,) * 5, seed=s)
        assert r.status == LEADER and r.info["valid"]
        assert audit_name_independence(r) == []


def test_task_times_out_without_symmetry_breaking():
    alpha = RandomnessConfiguration((1, 1))
    task = output_complex_task(make_leader_election(2))
    r = run_task_by_leader(alpha, Model.blackboard(), task, (None, None), seed=0, max_rounds=16)
    assert r.status == TIMEOUT


# -- Monte Carlo ---------------------------------------------------------------


def test_monte_carlo_bb_le():
    s = monte_carlo("bb-le", R((1, 2)), 1000, seed=0)
    assert s["success_rate"] == 1.0 and s["rounds"]["median"] <= 3
    s = monte_carlo("bb-le", R((2, 2)), 100, seed=0, max_rounds=16)
    assert s["success_rate"] == 0.0 and s["status_counts"] == {"timeout": 100}
    assert len(s["failures"]) == 20


def test_monte_carlo_reproducible_and_json():
    a = monte_carlo("gcd-le", R((2, 3)), 1, seed=4)
    b = monte_carlo("gcd-le", R((2, 3)), 1, seed=4)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    c = monte_carlo("gcd-le", R((2, 3)), 40, seed=4, workers=2)
    assert c == monte_carlo("gcd-le", R((2, 3)), 40, seed=4)


def test_monte_carlo_matching_sizes():
    s = monte_carlo("matching", RandomnessConfiguration((1, 1, 2, 2, 2)), 100, seed=1, v1=[0, 1], v2=[2, 3, 4])
    assert s["matching_sizes"] == {"2": 100}


def test_monte_carlo_rejects_bad_input():
    with pytest.raises(ValueError):
        monte_carlo("nope", R((1,)), 1, 0)
    with pytest.raises(ValueError):
        monte_carlo("bb-le", R((1,)), 0, 0)

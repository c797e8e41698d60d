from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symbreak.analysis import (
    CSV_COLUMNS,
    blackboard_lower_bound,
    decide_blackboard,
    decide_message_passing_fixed_ports,
    decide_message_passing_worst_case,
    divisibility_audit,
    exact_probability,
    solvability_curve,
    succession_check,
    t_range,
)
from symbreak.errors import CapExceeded
from symbreak.knowledge import Model, adversarial_ports, random_ports
from symbreak.randomness import RandomnessConfiguration
from symbreak.tasks import make_leader_election

BB = Model.blackboard()
R = RandomnessConfiguration.from_counts
LE = make_leader_election


def test_exact_probability_examples():
    assert exact_probability(BB, R((1, 1)), LE(2), 2) == Fraction(3, 4)
    assert exact_probability(BB, RandomnessConfiguration((1, 2, 2)), LE(3), 1) == Fraction(1, 2)
    for t in range(1, 5):
        assert exact_probability(BB, RandomnessConfiguration((1, 1)), LE(2), t) == 0


def test_exact_probability_cap():
    with pytest.raises(CapExceeded):
        exact_probability(BB, R((1, 1, 1)), LE(3), 9)


def test_curve_counts_and_monotone():
    curve = solvability_curve(BB, R((1, 2)), LE(3), range(1, 4))
    probs = [r.probability for r in curve.rows]
    assert probs == sorted(probs)
    for row in curve.rows:
        assert row.probability == Fraction(row.solving, 2 ** (row.t * 2))
        assert row.total == 2 ** (row.t * 2)
    lines = curve.to_csv().splitlines()
    assert lines[0].split(",") == list(CSV_COLUMNS)
    assert len(lines) == 4
    assert curve.to_json()["rows"][0]["t"] == 1


def test_empty_range_header_only():
    curve = solvability_curve(BB, R((1, 2)), LE(3), t_range("3..2"))
    assert curve.to_csv() == ",".join(CSV_COLUMNS) + "\n"


def test_decide_blackboard_examples():
    assert decide_blackboard(R((1, 2))).solvable
    assert not decide_blackboard(R((2, 2))).solvable
    v = decide_blackboard(R((1,)))
    assert v.solvable and v.label == "solvable (n_1=1)"


def test_decide_message_passing_examples():
    assert decide_message_passing_worst_case(R((2, 3))).solvable
    v = decide_message_passing_worst_case(R((2, 2)))
    assert not v.solvable and v.label == "unsolvable (gcd=2)"
    assert decide_message_passing_worst_case(R((2, 4, 6))).criterion == "gcd=2"
    assert decide_message_passing_fixed_ports(R((2, 2))).label == "unknown (fixed ports, g>1)"
    assert decide_message_passing_fixed_ports(R((2, 3))).solvable


def test_lower_bound_examples():
    assert blackboard_lower_bound(2, 3)[0] == Fraction(7, 8)
    assert blackboard_lower_bound(1, 5) == (1, 1)
    assert blackboard_lower_bound(3, 1) == (Fraction(1, 4), 0)
    with pytest.raises(ValueError):
        blackboard_lower_bound(0, 1)


@given(st.integers(1, 8), st.integers(1, 12))
def test_tight_bound_dominates_crude(k, t):
    tight, crude = blackboard_lower_bound(k, t)
    assert tight >= crude
    assert 0 < tight <= 1


def test_succession_examples():
    for t in range(4):
        assert succession_check(BB, R((1, 1)), LE(2), t).ok
    mp = Model.message_passing(random_ports(3, 4))
    rep = succession_check(mp, RandomnessConfiguration((1, 2, 2)), LE(3), 2)
    assert rep.ok and rep.checked > 0
    assert succession_check(BB, R((1, 1)), LE(2), 0).checked == 0


def test_divisibility_examples():
    rep = divisibility_audit(R((2, 2)), 2)
    assert rep.ok and rep.sizes_seen(2) <= {2, 4}
    rep = divisibility_audit(R((3, 3)), 2)
    assert rep.ok and rep.sizes_seen(2) <= {3, 6}
    rep = divisibility_audit(R((2, 3)), 2)
    assert rep.ok and rep.g == 1


def test_adversarial_probability_zero():
    alpha = R((2, 2))
    model = Model.message_passing(adversarial_ports(alpha)[0])
    for t in range(1, 4):
        assert exact_probability(model, alpha, LE(4), t) == 0


def test_fixed_ports_may_break_symmetry():
    # a non-adversarial table can solve leader election even though g > 1
    alpha = R((2, 2))
    hits = [
        exact_probability(Model.message_passing(random_ports(4, s)), alpha, LE(4), 2)
        for s in range(10)
    ]
    assert any(h > 0 for h in hits)


def test_t_range():
    assert list(t_range("1..4")) == [1, 2, 3, 4]
    assert list(t_range("3")) == [3]
    assert list(t_range("5..4")) == []

"""Executable protocols on a lockstep anonymous network."""

from .blackboard import elect_blackboard, run_blackboard_le
from .engine import DONE, LEADER, STUCK, TIMEOUT, Network, ProtocolRun, audit_name_independence
from .gcd import elect_gcd, euclid_schedule, run_gcd_le
from .matching import MatchingState, create_matching, run_create_matching
from .montecarlo import PROTOCOLS, monte_carlo, run_trials, summarize
from .reduction import LeaderTask, function_task, max_task, output_complex_task, run_task_by_leader

__all__ = [
    "DONE", "LEADER", "STUCK", "TIMEOUT", "PROTOCOLS",
    "Network", "ProtocolRun", "MatchingState", "LeaderTask",
    "audit_name_independence", "create_matching", "elect_blackboard", "elect_gcd",
    "euclid_schedule", "function_task", "max_task", "monte_carlo", "output_complex_task",
    "run_blackboard_le", "run_create_matching", "run_gcd_le", "run_task_by_leader",
    "run_trials", "summarize",
]

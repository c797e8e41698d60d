"""Topological tools for randomized symmetry breaking in anonymous synchronous networks."""

from .analysis import (
    EventualVerdict,
    SolvabilityCurve,
    blackboard_lower_bound,
    decide_blackboard,
    decide_message_passing_fixed_ports,
    decide_message_passing_worst_case,
    divisibility_audit,
    exact_probability,
    solvability_curve,
    succession_check,
)
from .complexes import ChromaticComplex, Simplex, Vertex, check_simplicial_map, project_pi
from .errors import (
    AsymmetricTask,
    CapExceeded,
    InvalidArity,
    InvalidConfiguration,
    InvalidConstruction,
    MapIncomplete,
    ProtocolTimeout,
    StuckAtGCD,
    SymbreakError,
)
from .knowledge import Model, PortAssignment, adversarial_ports, random_ports, refine, validate_ports
from .randomness import RandomnessConfiguration, Realization, enumerate_consistent, probability
from .tasks import OutputComplex, make_leader_election, make_m_leader_election, solves_realization

__version__ = "0.1.0"

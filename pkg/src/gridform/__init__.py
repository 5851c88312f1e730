"""Pattern formation for oblivious robots on regular grids.

Simulator for a swarm of anonymous, memoryless robots that rearrange
themselves into a goal multiset of grid vertices, driven entirely by
snapshots of the current configuration. Ships the decision rule, an
adversarial scheduler harness with runtime monitors, and a small CLI.
"""

from .config import Config, apply_move, is_initial, load_config, load_pattern
from .decision import Command, DecisionError, compute, evaluate
from .harness import MonitorError, SimResult, simulate
from .symmetry import automorphisms, classify, is_symmetric, similar

__all__ = [
    "Command",
    "Config",
    "DecisionError",
    "MonitorError",
    "SimResult",
    "apply_move",
    "automorphisms",
    "classify",
    "compute",
    "evaluate",
    "is_initial",
    "is_symmetric",
    "load_config",
    "load_pattern",
    "similar",
    "simulate",
]

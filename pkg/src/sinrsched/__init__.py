"""Capacity maximization, power control, scheduling and routing under the SINR model."""

from .capacity import (ChannelAssignment, FeasibilityViolation, assign_powers, audit_greedy,
                       greedy_select, maximize_capacity)
from .model import (Admissibility, FeasibilityReport, InputError, Instance, InstanceParams, Link,
                    MetricSpace, admissible, check_feasible, distance, sinr_of)
from .routing import RoutingProblem, build_routing_lp, decompose_flow, prune_paths, round_paths, solve_clm
from .scheduling import (MultiHopRequest, MultiHopSchedule, Schedule, dilation, schedule_multi_hop,
                         schedule_single_hop, slot_bound)
from .simplex import LinearProgram, solve_lp
from .weights import WeightGraph, link_weight, max_weight, out_weight, tau

__version__ = "0.1.0"

"""Headless scenario simulation: synthetic pose traces and a deterministic runner."""

from meetmotion.sim.traces import Scenario, ScenarioError, TraceParticipant, TraceSegment
from meetmotion.sim.runner import RunResult, run_scenario, write_report

__all__ = [
    "Scenario",
    "ScenarioError",
    "TraceParticipant",
    "TraceSegment",
    "RunResult",
    "run_scenario",
    "write_report",
]

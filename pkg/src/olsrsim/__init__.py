"""Deterministic OLSRv2-style routing simulator with pluggable attackers."""
from .params import ProtocolParams
from .engine import Engine, TraceResult
from .scenario import ScenarioSpec, ScenarioError, load_scenario, loads_scenario
from .runner import MetricsReport, run, simulate

__all__ = [
    "ProtocolParams", "Engine", "TraceResult", "ScenarioSpec", "ScenarioError",
    "load_scenario", "loads_scenario", "MetricsReport", "run", "simulate",
]

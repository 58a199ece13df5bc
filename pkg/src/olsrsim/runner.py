"""Run a scenario end to end and build its report."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional

from . import analysis as A
from .adversary import make_agent
from .engine import Engine
from .metrics import METRICS, compare, normalise
from .scenario import ScenarioSpec


@dataclass
class AssertionResult:
    id: str
    passed: bool
    observed: Any
    expected: Any
    tolerance: float
    op: str = "eq"
    metric: str = ""
    error: str = ""

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "result": "pass" if self.passed else "fail",
            "observed": normalise(self.observed),
            "expected": normalise(self.expected),
            "tolerance": self.tolerance,
            "op": self.op,
            "metric": self.metric,
        }
        if self.error:
            d["error"] = self.error
        return d


@dataclass
class MetricsReport:
    scenario: str
    seed: int
    duration: float
    coverage: Dict[str, Dict[str, int]] = field(default_factory=dict)
    consistency: Dict[str, Any] = field(default_factory=dict)
    loops: Dict[str, List[List[str]]] = field(default_factory=dict)
    rates: Dict[str, Any] = field(default_factory=dict)
    misdelivery: Dict[str, str] = field(default_factory=dict)
    assertions: List[AssertionResult] = field(default_factory=list)
    events: int = 0

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "duration": self.duration,
            "events": self.events,
            "passed": self.passed,
            "coverage": self.coverage,
            "consistency": self.consistency,
            "loops": self.loops,
            "rates": self.rates,
            "misdelivery": self.misdelivery,
            "assertions": [a.to_dict() for a in self.assertions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"


def build_engine(spec: ScenarioSpec, seed: Optional[int] = None) -> Engine:
    eng = Engine(spec.params, spec.seed if seed is None else seed)
    for n in spec.nodes:
        eng.add_node(make_agent(n.handle, n.ids, spec.params, n.willingness, n.attack))
    for l in spec.links:
        eng.add_link(l.src, l.dst, l.receivable, l.latency)
        if l.bidirectional:
            eng.add_link(l.dst, l.src, l.receivable, l.latency)
    for p in spec.probes:
        eng.at(p.at, lambda e, p=p: e.probe(p.src, p.dst, p.ttl))
    return eng


class RunContext:
    """A finished run plus lazily computed views used by metrics."""

    def __init__(self, spec: ScenarioSpec, engine: Engine, rate_window: float = 1.0):
        self.spec = spec
        self.engine = engine
        self.records = engine.records
        self.duration = spec.duration
        self.warmup = 3.0 * spec.params.tc_interval
        self.steady_t0 = A.steady_start(spec.duration, spec.params.tc_interval)
        self.rate_window = rate_window
        self.notes: Dict[str, Any] = {}

    @cached_property
    def rates(self) -> A.RateSeries:
        return A.rate_series(self.records, self.engine.router_handles(), self.duration, self.rate_window)

    @cached_property
    def baseline(self) -> "RunContext":
        base = self.spec.without_attacks()
        eng = build_engine(base, self.engine.seed)
        eng.run(base.duration)
        return RunContext(base, eng, self.rate_window)


def simulate(spec: ScenarioSpec, seed: Optional[int] = None) -> RunContext:
    eng = build_engine(spec, seed)
    eng.run(spec.duration)
    return RunContext(spec, eng)


def evaluate(ctx: RunContext) -> List[AssertionResult]:
    out = []
    for a in ctx.spec.assertions:
        try:
            observed = METRICS[a.metric](ctx, **a.selector)
            ok = compare(a.op, observed, a.expected, a.tolerance)
            out.append(AssertionResult(a.id, ok, observed, a.expected, a.tolerance, a.op, a.metric))
        except TypeError as e:
            out.append(AssertionResult(a.id, False, None, a.expected, a.tolerance, a.op, a.metric,
                                       f"bad selector: {e}"))
    return out


def build_report(ctx: RunContext) -> MetricsReport:
    eng = ctx.engine
    honest = eng.honest_handles()
    rep = MetricsReport(ctx.spec.name, eng.seed, ctx.duration, events=eng.events_executed)
    for h in honest:
        origin = eng.nodes[h].state.self_id
        rep.coverage[origin] = A.coverage_counts(ctx.records, origin, honest)
    rep.consistency = A.consistency_check(A.snapshots(eng)).to_dict()
    ids = sorted({rid for h in eng.router_handles() for rid in eng.nodes[h].ids})
    for rid in ids:
        rep.loops[rid] = [list(c) for c in A.loops_toward(eng, rid)]
    rs = ctx.rates
    rep.rates = {
        "window": rs.window,
        "steady_from": ctx.steady_t0,
        "routers": {
            h: {
                c: {"total": rs.total(h, c), "steady_per_s": round(rs.rate(h, c, ctx.steady_t0), 6)}
                for c in A.RATE_KINDS.values()
            }
            for h in eng.router_handles()
        },
    }
    for t in eng.traces:
        rep.misdelivery[f"{t.src}->{t.dst}@{t.at:g}"] = t.landing()
    rep.assertions = evaluate(ctx)
    return rep


def run(spec: ScenarioSpec, seed: Optional[int] = None) -> MetricsReport:
    """Simulate ``spec`` and evaluate its assertions."""
    return build_report(simulate(spec, seed))

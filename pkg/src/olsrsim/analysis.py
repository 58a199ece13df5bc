"""Read-only measurements over a finished (or paused) run.

Everything here works on log records, snapshots or next-hop maps and never
touches router state, so re-running an analysis gives the same answer.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from . import protocol as P
from .engine import Engine, LogRecord, TraceResult
from .messages import RouterId

Edge = Tuple[RouterId, RouterId]

RATE_KINDS = {
    "HELLO_TX": "hellos_sent",
    "TC_TX": "tcs_sent",
    "MPR_CALC": "mpr_recalcs",
    "ROUTE_CALC": "route_recalcs",
}


class AnalysisError(ValueError):
    pass


# ---------------------------------------------------------------------------
# snapshots and consistency


@dataclass(frozen=True)
class TopologySnapshot:
    router: str
    router_id: RouterId
    time: float
    perceived_edges: frozenset
    advertised_edges: frozenset
    perceived_distances: Mapping[RouterId, int]
    symmetric_neighbors: frozenset = frozenset()
    mprs: frozenset = frozenset()
    topology_set_size: int = 0

    def to_dict(self) -> dict:
        return {
            "router": self.router,
            "id": self.router_id,
            "time": self.time,
            "perceived_edges": [f"{u}-{v}" for u, v in sorted(self.perceived_edges)],
            "advertised_edges": [f"{u}-{v}" for u, v in sorted(self.advertised_edges)],
            "distances": dict(sorted(self.perceived_distances.items())),
            "symmetric_neighbors": sorted(self.symmetric_neighbors),
            "mprs": sorted(self.mprs),
        }


def snapshot(engine: Engine, handle: str, rid: Optional[RouterId] = None) -> TopologySnapshot:
    agent = engine.nodes[handle]
    st = agent.personas[rid].state if rid else agent.state
    return TopologySnapshot(
        router=handle,
        router_id=st.self_id,
        time=engine.now,
        perceived_edges=frozenset(P.perceived_edges(st)),
        advertised_edges=frozenset(P.advertised_edges(st)),
        perceived_distances={d: r.distance for d, r in st.routing_table.items()},
        symmetric_neighbors=frozenset(st.symmetric_neighbors()),
        mprs=frozenset(st.mpr_set()),
        topology_set_size=len(st.topology_set),
    )


def snapshots(engine: Engine, handles: Optional[Iterable[str]] = None) -> Dict[str, TopologySnapshot]:
    hs = engine.honest_handles() if handles is None else handles
    return {h: snapshot(engine, h) for h in hs}


@dataclass
class ConsistencyReport:
    pairwise_diffs: Dict[Tuple[str, str], Set[Edge]]
    consistent: bool
    layer: str = "advertised"

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "layer": self.layer,
            "diffs": {
                f"{a}|{b}": [f"{u}-{v}" for u, v in sorted(d)]
                for (a, b), d in sorted(self.pairwise_diffs.items()) if d
            },
        }


def consistency_check(snaps: Mapping[str, TopologySnapshot], layer: str = "advertised") -> ConsistencyReport:
    """Pairwise symmetric differences of the routers' maps.

    ``layer="advertised"`` compares the flooded link-state layer, which every
    router should hold identically once converged. ``layer="perceived"``
    compares whole maps; those legitimately differ in their local (ND) part.
    """
    if layer not in ("advertised", "perceived"):
        raise AnalysisError(f"unknown layer {layer!r}")
    attr = "advertised_edges" if layer == "advertised" else "perceived_edges"
    diffs = {}
    for a, b in itertools.combinations(sorted(snaps), 2):
        diffs[(a, b)] = set(getattr(snaps[a], attr) ^ getattr(snaps[b], attr))
    return ConsistencyReport(diffs, all(not d for d in diffs.values()), layer)


def perceived_vs_effective(engine: Engine, handle: str) -> Set[Edge]:
    """Edges in a router's map that cannot carry transit data.

    The effective topology keeps only physical two-way links between routers
    that forward data for others (a blackhole's links are perceived but not
    effective).
    """
    faithful = {}
    for h, a in engine.nodes.items():
        if a.kind == "WORMHOLE_TAP":
            continue
        faithful[h] = a.data_action("\x00transit-probe") == "forward"
    effective: Set[Edge] = set()
    for u, links in engine.out_links.items():
        for v, l in links.items():
            if not l.receivable or u not in faithful or v not in faithful:
                continue
            back = engine.out_links.get(v, {}).get(u)
            if back is None or not back.receivable:
                continue
            if not (faithful[u] and faithful[v]):
                continue
            for x in engine.nodes[u].ids:
                for y in engine.nodes[v].ids:
                    effective.add(P._edge(x, y))
    st = engine.nodes[handle].state
    return set(P.perceived_edges(st)) - effective


# ---------------------------------------------------------------------------
# flooding coverage


def _tc_proc(records: Iterable[LogRecord], origin: RouterId, t0: float, t1: float):
    for r in records:
        if r.kind == "TC_PROC" and r.data.get("orig") == origin and t0 <= r.t <= t1:
            yield r


def flooding_coverage(
    records: Sequence[LogRecord], origin: RouterId, seq: Optional[int] = None,
    t0: float = 0.0, t1: float = float("inf"),
) -> Set[str]:
    """Handles that processed TC ``(origin, seq)`` (any seq when omitted)."""
    if seq is not None and not any(
        r.kind in ("TC_TX", "TC_PROC") and r.data.get("orig") == origin and r.data.get("seq") == seq
        for r in records
    ):
        raise AnalysisError(f"no TC {origin}/{seq} in the log")
    return {
        r.node for r in _tc_proc(records, origin, t0, t1)
        if seq is None or r.data.get("seq") == seq
    }


def coverage_counts(
    records: Sequence[LogRecord], origin: RouterId, handles: Iterable[str],
    t0: float = 0.0, t1: float = float("inf"), outcome: Optional[str] = None,
) -> Dict[str, int]:
    """Per handle, the number of distinct TCs from ``origin`` it processed."""
    seen: Dict[str, Set[int]] = {h: set() for h in handles}
    for r in _tc_proc(records, origin, t0, t1):
        if r.node in seen and (outcome is None or r.data.get("outcome") == outcome):
            seen[r.node].add(r.data["seq"])
    return {h: len(s) for h, s in seen.items()}


def originated_tcs(records: Sequence[LogRecord], t0: float, t1: float, handles: Iterable[str]) -> List[Tuple[str, RouterId, int]]:
    hs = set(handles)
    return [
        (r.node, r.data["orig"], r.data["seq"])
        for r in records
        if r.kind == "TC_TX" and r.node in hs and t0 <= r.t <= t1 and not r.data.get("forged")
    ]


def full_coverage(records: Sequence[LogRecord], handles: Sequence[str], t0: float, t1: float) -> Tuple[bool, List[str]]:
    """Did every TC originated in [t0, t1] by ``handles`` reach all the others?"""
    reached: Dict[Tuple[RouterId, int], Set[str]] = defaultdict(set)
    for r in records:
        if r.kind == "TC_PROC":
            reached[(r.data["orig"], r.data["seq"])].add(r.node)
    misses = []
    for node, orig, seq in originated_tcs(records, t0, t1, handles):
        missing = set(handles) - {node} - reached[(orig, seq)]
        if missing:
            misses.append(f"{orig}/{seq} missed {','.join(sorted(missing))}")
    return not misses, misses


# ---------------------------------------------------------------------------
# loops and misdelivery


def find_loops(next_hop: Mapping[str, Optional[str]]) -> List[Tuple[str, ...]]:
    """Every cycle of a next-hop map, each rotated to start at its smallest member."""
    cycles = set()
    for start in sorted(next_hop):
        path: List[str] = []
        index: Dict[str, int] = {}
        h: Optional[str] = start
        while h is not None and h not in index:
            index[h] = len(path)
            path.append(h)
            h = next_hop.get(h)
        if h is not None:
            cyc = path[index[h]:]
            i = cyc.index(min(cyc))
            cycles.add(tuple(cyc[i:] + cyc[:i]))
    return sorted(cycles)


def loops_toward(engine: Engine, dst: RouterId) -> List[Tuple[str, ...]]:
    return find_loops(engine.next_hop_map(dst))


def misdelivery_matrix(traces: Iterable[TraceResult]) -> Dict[Tuple[str, str], str]:
    """(src, dst) -> the handle that took the packet, or the failure outcome.

    When a pair was traced several times the latest trace wins.
    """
    return {(t.src, t.dst): t.landing() for t in traces}


# ---------------------------------------------------------------------------
# rates


@dataclass
class RateSeries:
    window: float
    t_end: float
    series: Dict[str, Dict[str, List[int]]] = field(default_factory=dict)  # handle -> counter -> bins

    def total(self, handle: str, counter: str) -> int:
        return sum(self.series.get(handle, {}).get(counter, []))

    def rate(self, handle: str, counter: str, t0: float, t1: Optional[float] = None) -> float:
        """Mean events per second over whole windows in [t0, t1)."""
        t1 = self.t_end if t1 is None else t1
        bins = self.series.get(handle, {}).get(counter, [])
        lo = int(t0 // self.window + (0 if t0 % self.window == 0 else 1))
        hi = int(t1 // self.window)
        if hi <= lo:
            return 0.0
        return sum(bins[lo:hi]) / ((hi - lo) * self.window)


def rate_series(records: Sequence[LogRecord], handles: Iterable[str], t_end: float, window: float = 1.0) -> RateSeries:
    nbins = max(1, int(-(-t_end // window)))
    rs = RateSeries(window, t_end)
    for h in handles:
        rs.series[h] = {c: [0] * nbins for c in RATE_KINDS.values()}
    for r in records:
        c = RATE_KINDS.get(r.kind)
        if c is None or r.node not in rs.series:
            continue
        if r.kind in ("HELLO_TX", "TC_TX") and r.data.get("forged"):
            continue
        i = min(int(r.t // window), nbins - 1)
        rs.series[r.node][c][i] += 1
    return rs


def steady_start(duration: float, tc_interval: float) -> float:
    return max(duration / 3.0, 3.0 * tc_interval)


def amplification(
    rates: RateSeries, baseline: RateSeries, t0: float, t1: Optional[float] = None,
) -> Dict[str, Dict[str, Optional[float]]]:
    """Per router and counter, attack rate / baseline rate over [t0, t1)."""
    if rates.window != baseline.window or rates.t_end != baseline.t_end:
        raise AnalysisError("rate series come from mismatched runs")
    out: Dict[str, Dict[str, Optional[float]]] = {}
    for h in sorted(set(rates.series) & set(baseline.series)):
        out[h] = {}
        for c in RATE_KINDS.values():
            b = baseline.rate(h, c, t0, t1)
            a = rates.rate(h, c, t0, t1)
            out[h][c] = (a / b) if b > 0 else (1.0 if a == 0 else None)
    return out


# ---------------------------------------------------------------------------
# misc time series


def route_flaps(records: Sequence[LogRecord], handle: str, dst: RouterId, t0: float = 0.0) -> int:
    """Number of times the route to ``dst`` appeared or vanished after t0."""
    present = None
    flips = 0
    for r in records:
        if r.kind != "ROUTE" or r.node != handle or r.data.get("dst") != dst:
            continue
        now = r.data["route"] is not None
        if present is not None and now != present and r.t >= t0:
            flips += 1
        present = now
    return flips


def mean_jitter(engine: Engine, handle: str, t0: float = 0.0, t1: float = float("inf")) -> Optional[float]:
    samples = [j for (t, _o, _s, j) in getattr(engine.nodes[handle], "jitter_samples", []) if t0 <= t <= t1]
    return sum(samples) / len(samples) if samples else None


def applied_validities(records: Sequence[LogRecord], handle: str, origin: RouterId) -> List[float]:
    return [
        r.data["validity"] for r in records
        if r.kind == "TC_PROC" and r.node == handle and r.data.get("orig") == origin
        and r.data.get("outcome") == "applied"
    ]

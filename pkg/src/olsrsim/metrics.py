"""Named metrics and comparison operators used by scenario assertions.

A metric is ``fn(ctx, **selector)`` where ``ctx`` is a finished run (see
``runner.RunContext``). Values are normalised to JSON types before they are
compared, so a set compares equal to a sorted list.
"""
from __future__ import annotations

import json
import math
from collections import deque
from typing import Any, Callable, Dict

from . import analysis as A

METRICS: Dict[str, Callable[..., Any]] = {}


def metric(name: str):
    def deco(fn):
        METRICS[name] = fn
        return fn
    return deco


def normalise(v: Any) -> Any:
    if isinstance(v, (set, frozenset)):
        return sorted(normalise(x) for x in v)
    if isinstance(v, (list, tuple)):
        return [normalise(x) for x in v]
    if isinstance(v, dict):
        return {str(k): normalise(x) for k, x in v.items()}
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


# ---------------------------------------------------------------------------
# operators


def _approx(o, e, tol):
    return o is not None and abs(o - e) <= tol


def _approx_rel(o, e, tol):
    return o is not None and abs(o - e) <= tol * abs(e)


def _as_set(v):
    return {json.dumps(x, sort_keys=True) for x in (v if isinstance(v, list) else [v])}


OPS: Dict[str, Callable[[Any, Any, float], bool]] = {
    "eq": lambda o, e, t: _approx(o, e, t) if isinstance(o, (int, float)) and isinstance(e, (int, float)) and not isinstance(o, bool) else o == e,
    "ne": lambda o, e, t: o != e,
    "lt": lambda o, e, t: o is not None and o < e,
    "le": lambda o, e, t: o is not None and o <= e,
    "gt": lambda o, e, t: o is not None and o > e,
    "ge": lambda o, e, t: o is not None and o >= e,
    "approx": _approx,
    "approx_rel": _approx_rel,
    "in": lambda o, e, t: o in e,
    "not_in": lambda o, e, t: o not in e,
    "contains": lambda o, e, t: _as_set(e) <= _as_set(o),
    "not_contains": lambda o, e, t: not (_as_set(e) & _as_set(o)),
    "subset": lambda o, e, t: _as_set(o) <= _as_set(e),
    "superset": lambda o, e, t: _as_set(o) >= _as_set(e),
    "disjoint": lambda o, e, t: not (_as_set(o) & _as_set(e)),
    "within": lambda o, e, t: o is not None and e[0] - t <= o <= e[1] + t,
    "len_eq": lambda o, e, t: len(o) == e,
    "len_ge": lambda o, e, t: len(o) >= e,
}


def compare(op: str, observed: Any, expected: Any, tolerance: float) -> bool:
    try:
        return bool(OPS[op](normalise(observed), normalise(expected), tolerance))
    except TypeError:
        return False


# ---------------------------------------------------------------------------
# metrics


def _state(ctx, node):
    return ctx.engine.nodes[ctx.engine.handle_for(node)].state


@metric("coverage")
def coverage(ctx, origin, node=None, t0=0.0, t1=None, outcome=None):
    """Distinct TCs from ``origin`` processed by ``node`` (or every honest router)."""
    t1 = ctx.duration if t1 is None else t1
    handles = [ctx.engine.handle_for(node)] if node else ctx.engine.honest_handles()
    counts = A.coverage_counts(ctx.records, origin, handles, t0, t1, outcome)
    return counts[handles[0]] if node else counts


@metric("coverage_set")
def coverage_set(ctx, origin, seq=None, t0=0.0, t1=None):
    """Handles that processed at least one TC from ``origin``."""
    t1 = ctx.duration if t1 is None else t1
    return sorted(A.flooding_coverage(ctx.records, origin, seq, t0, t1))


@metric("full_coverage")
def full_coverage(ctx, t0=None, t1=None):
    """Every TC originated by an honest router in the window reached all others."""
    t0 = ctx.warmup if t0 is None else t0
    t1 = ctx.duration - ctx.spec.params.tc_interval if t1 is None else t1
    ok, misses = A.full_coverage(ctx.records, ctx.engine.honest_handles(), t0, t1)
    ctx.notes.setdefault("full_coverage_misses", misses[:10])
    return ok


@metric("mpr_set")
def mpr_set(ctx, node, id=None):
    agent = ctx.engine.nodes[ctx.engine.handle_for(node)]
    st = agent.personas[id].state if id else agent.state
    return sorted(st.mpr_set())


@metric("symmetric_links")
def symmetric_links(ctx, node):
    return len(_state(ctx, node).symmetric_neighbors())


@metric("topology_set_size")
def topology_set_size(ctx, node):
    return len(_state(ctx, node).topology_set)


@metric("consistent")
def consistent(ctx, layer="advertised", nodes=None):
    snaps = A.snapshots(ctx.engine, nodes)
    return A.consistency_check(snaps, layer).consistent


@metric("perceived_edges")
def perceived_edges(ctx, node):
    snap = A.snapshot(ctx.engine, ctx.engine.handle_for(node))
    return [f"{u}-{v}" for u, v in sorted(snap.perceived_edges)]


@metric("perceived_vs_effective")
def perceived_vs_effective(ctx, node):
    return [f"{u}-{v}" for u, v in sorted(A.perceived_vs_effective(ctx.engine, ctx.engine.handle_for(node)))]


@metric("loops")
def loops(ctx, dst):
    return [sorted(c) for c in A.loops_toward(ctx.engine, dst)]


@metric("landing")
def landing(ctx, src, dst, at=None):
    """Where a data packet from src to dst ends up (probe result, else a trace at the end)."""
    for t in reversed(ctx.engine.traces):
        if t.src == src and t.dst == dst and (at is None or abs(t.at - at) < 1e-9):
            return t.landing()
    return ctx.engine.trace_data(src, dst).landing()


@metric("trace_path")
def trace_path(ctx, src, dst):
    return list(ctx.engine.trace_data(src, dst).path)


@metric("route")
def route(ctx, node, dst):
    r = _state(ctx, node).routing_table.get(dst)
    return None if r is None else [r.next_hop, r.distance]


@metric("counter")
def counter(ctx, node, name):
    return getattr(_state(ctx, node).counters, name)


@metric("rate")
def rate(ctx, node, counter):
    return ctx.rates.rate(ctx.engine.handle_for(node), counter, ctx.steady_t0)


@metric("rate_ratio")
def rate_ratio(ctx, node, counter):
    """Steady-state rate over the same scenario with every attack switched off."""
    h = ctx.engine.handle_for(node)
    amp = A.amplification(ctx.rates, ctx.baseline.rates, ctx.steady_t0)
    return amp[h][counter]


@metric("route_flaps")
def route_flaps(ctx, node, dst, t0=None):
    t0 = ctx.warmup if t0 is None else t0
    return A.route_flaps(ctx.records, ctx.engine.handle_for(node), dst, t0)


@metric("mean_jitter")
def mean_jitter(ctx, node, t0=0.0, t1=None, relative=False):
    """Mean send-minus-receive delay of forwarded TCs (as a fraction of max_jitter if relative)."""
    t1 = ctx.duration if t1 is None else t1
    m = A.mean_jitter(ctx.engine, ctx.engine.handle_for(node), t0, t1)
    if m is None or not relative:
        return m
    return m / ctx.spec.params.max_jitter


@metric("validity")
def validity(ctx, node, origin):
    return sorted(set(A.applied_validities(ctx.records, ctx.engine.handle_for(node), origin)))


@metric("log_count")
def log_count(ctx, kind, node=None, t0=0.0, t1=None, match=None):
    """Number of log records of ``kind`` (optionally at ``node`` and matching data fields)."""
    t1 = ctx.duration if t1 is None else t1
    match = match or {}
    h = ctx.engine.handle_for(node) if node else None
    return sum(
        1 for r in ctx.records
        if r.kind == kind and (h is None or r.node == h) and t0 <= r.t <= t1
        and all(normalise(r.data.get(k)) == v for k, v in match.items())
    )


@metric("distances_match_bfs")
def distances_match_bfs(ctx):
    """Every honest routing table equals hop-count BFS over the real two-way links."""
    eng = ctx.engine
    adj: Dict[str, set] = {h: set() for h in eng.router_handles()}
    for u, links in eng.out_links.items():
        for v, l in links.items():
            back = eng.out_links.get(v, {}).get(u)
            if l.receivable and back is not None and back.receivable and u in adj and v in adj:
                adj[u].add(v)
    bad = []
    for h in eng.honest_handles():
        dist = {h: 0}
        q = deque([h])
        while q:
            x = q.popleft()
            for y in sorted(adj[x]):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    q.append(y)
        expected = {eng.nodes[y].state.self_id: d for y, d in dist.items() if d > 0}
        got = {d: r.distance for d, r in eng.nodes[h].state.routing_table.items()}
        if got != expected:
            bad.append(h)
    ctx.notes.setdefault("bfs_mismatch", bad)
    return not bad


@metric("recalcs_cover_flips")
def recalcs_cover_flips(ctx):
    """Honest routers whose route_recalcs fall short of the content-changing TCs they applied."""
    short = []
    for h in ctx.engine.honest_handles():
        flips = sum(1 for r in ctx.records if r.kind == "TC_PROC" and r.node == h and r.data.get("changed"))
        if ctx.engine.nodes[h].state.counters.route_recalcs < flips:
            short.append(h)
    return short


@metric("spoof_leaks")
def spoof_leaks(ctx, node):
    """(originator, id) pairs where an honest TC advertises an id claimed by the
    attacker at ``node`` without being physically next to the real holder."""
    eng = ctx.engine
    spoofed = set(eng.nodes[node].ids)
    holders = {}
    for h in eng.honest_handles():
        holders[eng.nodes[h].state.self_id] = h
    leaks = set()
    for r in ctx.records:
        if r.kind != "TC_TX" or r.node not in holders.values() or r.data.get("forged"):
            continue
        for rid in r.data.get("adv", ()):
            if rid in spoofed:
                real = holders.get(rid)
                if real is None or real not in eng.out_links.get(r.node, {}):
                    leaks.add((r.data["orig"], rid))
    return sorted(leaks)


@metric("attack_events")
def attack_events(ctx, node):
    return sum(1 for r in ctx.records if r.kind == "ATTACK" and r.node == node)


@metric("events")
def events(ctx):
    return ctx.engine.events_executed


@metric("link_change")
def link_change(ctx, node, neighbor, after=0.0, change="excluded"):
    """Seconds from ``after`` until ``node`` stops using its link to ``neighbor``
    (``excluded``: not usable, ``removed``: record gone). None if it never happens."""
    h = ctx.engine.handle_for(node)
    for r in ctx.records:
        if r.kind != "LINK" or r.node != h or r.data.get("nbr") != neighbor or r.t < after:
            continue
        if change == "removed" and r.data.get("status") is None:
            return r.t - after
        if change == "excluded" and not r.data.get("usable"):
            return r.t - after
    return None


@metric("recalcs_per_flip")
def recalcs_per_flip(ctx, node, attacker, counter="mpr_recalcs", t0=0.0):
    """Victim recalculations per attacker flip after ``t0``."""
    h = ctx.engine.handle_for(node)
    kind = {"mpr_recalcs": "MPR_CALC", "route_recalcs": "ROUTE_CALC"}[counter]
    flips = sum(1 for r in ctx.records if r.kind == "ATTACK" and r.node == attacker and r.t >= t0)
    calcs = sum(1 for r in ctx.records if r.kind == kind and r.node == h and r.t >= t0)
    return calcs / flips if flips else None

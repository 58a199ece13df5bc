import random
import re

import pytest
from hypothesis import HealthCheck, given, settings, strategies as hst

from olsrsim.engine import Engine, EngineError
from olsrsim.library import chain, honest
from olsrsim.messages import LinkStatus
from olsrsim.params import ProtocolParams
from olsrsim.runner import build_engine

from conftest import bfs, make_spec, random_graph, run_graph

LINE = re.compile(r"^t=\d+\.\d{6} node=\S+ kind=[A-Z_]+ detail=.*$")


def test_same_seed_gives_byte_identical_log():
    spec = make_spec(honest(*"abcdef"), chain(*"abcdef") + [["a", "f"]], duration=30.0, seed=5)
    logs = []
    for _ in range(2):
        eng = build_engine(spec)
        eng.run(spec.duration)
        logs.append("\n".join(eng.event_log()))
    assert logs[0] == logs[1]


def test_different_seed_changes_timing():
    spec = make_spec(honest(*"abcd"), chain(*"abcd"), duration=20.0)
    a, b = build_engine(spec, seed=1), build_engine(spec, seed=2)
    a.run(20.0)
    b.run(20.0)
    assert a.event_log() != b.event_log()


def test_log_lines_follow_format(chain_ctx):
    lines = chain_ctx.engine.event_log()
    assert lines
    bad = [l for l in lines if not LINE.match(l)]
    assert bad == []
    kinds = {r.kind for r in chain_ctx.records}
    assert {"HELLO_TX", "TC_TX", "RX", "LINK", "MPR_CALC", "ROUTE_CALC"} <= kinds


def test_log_times_are_monotone(chain_ctx):
    ts = [r.t for r in chain_ctx.records]
    assert ts == sorted(ts)


def test_chain_converges(chain_ctx):
    eng = chain_ctx.engine
    rt = eng.nodes["a"].state.routing_table
    assert {d: r.distance for d, r in rt.items()} == {"b": 1, "c": 2, "d": 3, "e": 4}
    res = eng.trace_data("a", "e")
    assert res.outcome == "DELIVERED" and res.path == tuple("abcde")


def test_trace_ttl_expiry_and_missing_route(chain_ctx):
    eng = chain_ctx.engine
    assert eng.trace_data("a", "e", ttl=2).outcome == "TTL_EXPIRED"
    res = eng.trace_data("a", "nowhere")
    assert (res.outcome, res.reason) == ("DROPPED", "no-route")
    with pytest.raises(EngineError):
        eng.trace_data("ghost", "a")


def test_unidirectional_link_never_symmetric():
    links = [["a", "b"], {"from": "b", "to": "c", "bidirectional": False}]
    ctx = run_graph(honest(*"abc"), links, duration=30.0)
    eng = ctx.engine
    assert "c" not in eng.nodes["b"].state.symmetric_neighbors()
    assert "b" not in eng.nodes["c"].state.symmetric_neighbors()
    assert "c" not in eng.nodes["a"].state.routing_table
    assert eng.nodes["c"].state.neighbor_set["b"].status is LinkStatus.HEARD


def test_jam_blocks_reception_only():
    spec = make_spec(honest("a", "b"), [["a", "b"]])
    eng = build_engine(spec)
    eng.jam("b")
    eng.run(20.0)
    assert eng.nodes["b"].state.neighbor_set == {}
    assert "b" in eng.nodes["a"].state.neighbor_set


def test_engine_rejects_bad_links_and_past_events():
    eng = Engine(ProtocolParams(), 1)
    with pytest.raises(EngineError):
        eng.add_link("a", "b")
    eng.now = 5.0
    with pytest.raises(EngineError):
        eng.schedule(1.0, "CALL", "-", None)


def test_cancelled_timer_does_not_fire():
    fired = []

    class Stub:
        handle, kind = "s", "HONEST"

        def start(self, engine):
            engine.set_timer("s", "x", 1.0)
            engine.cancel_timer("s", "x")
            engine.set_timer("s", "y", 2.0)

        def on_timer(self, engine, name, now):
            fired.append(name)

    eng = Engine(ProtocolParams(), 0)
    eng.add_node(Stub())
    eng.run(5.0)
    assert fired == ["y"]


def test_rearmed_timer_fires_once_at_new_time():
    fired = []

    class Stub:
        handle, kind = "s", "HONEST"

        def start(self, engine):
            engine.set_timer("s", "x", 1.0)
            engine.set_timer("s", "x", 3.0)

        def on_timer(self, engine, name, now):
            fired.append(now)

    eng = Engine(ProtocolParams(), 0)
    eng.add_node(Stub())
    eng.run(5.0)
    assert fired == [3.0]


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(hst.integers(2, 8), hst.integers(0, 10_000))
def test_routes_equal_bfs_on_small_graphs(n, seed):
    names, edges = random_graph(random.Random(seed), n)
    ctx = run_graph(names, [list(e) for e in edges], duration=40.0, seed=seed)
    adj = {h: set() for h in names}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    for h in names:
        want = {d: k for d, k in bfs(adj, h).items() if d != h}
        got = {d: r.distance for d, r in ctx.engine.nodes[h].state.routing_table.items()}
        assert got == want, h

"""Builders for the shipped scenario set: one scenario per attack plus an
adversary-free baseline per topology family.

Each builder returns a plain dict in the scenario JSON schema;
``build_all`` validates them into :class:`ScenarioSpec` objects.
"""
from __future__ import annotations

import random
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .scenario import ScenarioSpec, parse_scenario

Builder = Callable[[], dict]
BUILDERS: Dict[str, Builder] = {}


def builder(name: str):
    def deco(fn):
        BUILDERS[name] = fn
        return fn
    return deco


# ---------------------------------------------------------------------------
# helpers


def chain(*hs: str) -> List[list]:
    return [[u, v] for u, v in zip(hs, hs[1:])]


def honest(*hs: str) -> List[dict]:
    return [{"handle": h} for h in hs]


def attacker(handle: str, attack: str, params: dict, ids: Optional[Sequence[str]] = None,
             willingness: int = 3) -> dict:
    node = {"handle": handle, "willingness": willingness,
            "attack": {"type": attack, "params": params}}
    if ids is not None:
        node["ids"] = list(ids)
    return node


def check(aid: str, metric: str, expected, op: str = "eq", tolerance: float = 0.0, **selector) -> dict:
    return {"id": aid, "metric": metric, "selector": selector, "op": op,
            "expected": expected, "tolerance": tolerance}


def scenario(name: str, description: str, nodes, links, assertions=(), probes=(),
             duration: float = 60.0, seed: int = 1, params: Optional[dict] = None,
             family: str = "attack") -> dict:
    return {
        "name": name, "description": description, "family": family, "seed": seed,
        "duration": duration, "params": params or {}, "nodes": list(nodes),
        "links": list(links), "probes": list(probes), "assertions": list(assertions),
    }


def converged_checks(dst: str) -> List[dict]:
    return [
        check("consistent", "consistent", True),
        check("routes-match-bfs", "distances_match_bfs", True),
        check("full-coverage", "full_coverage", True),
        check(f"no-loops-to-{dst}", "loops", [], dst=dst),
    ]


def random_connected(n: int, extra: int, seed: int, prefix: str = "n") -> Tuple[List[str], List[list]]:
    """A random spanning tree plus ``extra`` chords, reproducible from ``seed``."""
    rng = random.Random(seed)
    names = [f"{prefix}{i:02d}" for i in range(n)]
    edges = set()
    for i in range(1, n):
        j = rng.randrange(i)
        edges.add((names[j], names[i]))
    target = min(len(edges) + extra, n * (n - 1) // 2)
    while len(edges) < target:
        u, v = sorted(rng.sample(names, 2))
        edges.add((u, v))
    return names, [list(e) for e in sorted(edges)]


# ---------------------------------------------------------------------------
# baselines, one per topology family


@builder("baseline_chain")
def baseline_chain():
    hs = list("abcdefgh")
    return scenario("baseline_chain", "Eight routers in a line, no attacker.",
                    honest(*hs), chain(*hs), converged_checks("a"),
                    probes=[{"at": 59.0, "src": "a", "dst": "h"}], family="chain")


@builder("baseline_ring")
def baseline_ring():
    hs = [f"r{i}" for i in range(9)]
    return scenario("baseline_ring", "Nine routers in a ring, no attacker.",
                    honest(*hs), chain(*hs) + [[hs[-1], hs[0]]], converged_checks("r0"), family="ring")


@builder("baseline_grid")
def baseline_grid():
    hs = [f"g{r}{c}" for r in range(4) for c in range(4)]
    links = []
    for r in range(4):
        for c in range(4):
            if c < 3:
                links.append([f"g{r}{c}", f"g{r}{c + 1}"])
            if r < 3:
                links.append([f"g{r}{c}", f"g{r + 1}{c}"])
    return scenario("baseline_grid", "4 x 4 grid, no attacker.",
                    honest(*hs), links, converged_checks("g00"), family="grid")


@builder("baseline_random")
def baseline_random():
    hs, links = random_connected(20, 12, seed=7)
    return scenario("baseline_random", "20 routers, random connected graph, no attacker.",
                    honest(*hs), links, converged_checks(hs[0]), family="random")


# ---------------------------------------------------------------------------
# flooding disruption


@builder("fig01a_spoof_1hop_dup")
def fig01a():
    return scenario(
        "fig01a_spoof_1hop_dup",
        "X claims b and advertises no neighbors; HELLOs are additive so a still picks d.",
        honest("a", "b", "c", "d", "e") + [attacker("X", "A1", {"target": "b"})],
        [["a", "b"], ["a", "d"], ["a", "X"], ["d", "c"], ["d", "e"]],
        [
            check("a-selects-d", "mpr_set", ["d"], node="a"),
            check("a-keeps-b-symmetric", "route", ["b", 1], node="a", dst="b"),
        ],
    )


@builder("fig01b_spoof_1hop_link")
def fig01b():
    return scenario(
        "fig01b_spoof_1hop_link",
        "X claims b, advertises its real link to c and never forwards; a picks b over d "
        "so c gets no flooded TCs from s.",
        honest("t", "s", "a", "b", "c", "d", "e") + [attacker("X", "A2", {"target": "b"})],
        [["t", "s"], ["s", "a"], ["a", "b"], ["a", "X"], ["a", "d"], ["b", "e"],
         ["X", "c"], ["d", "e"], ["d", "c"]],
        [
            check("a-selects-b-not-d", "mpr_set", ["b", "s"], node="a"),
            check("c-no-tcs-from-s", "coverage", 0, origin="s", node="c"),
            check("e-gets-tcs-from-s", "coverage", 1, op="ge", origin="s", node="e"),
        ],
    )


@builder("fig02_spoof_2hop_dup")
def fig02():
    return scenario(
        "fig02_spoof_2hop_dup",
        "X claims x next to a and c; b sees equal neighbor sets, picks a, and the real x "
        "never receives flooded traffic from the left.",
        honest("s", "b", "a", "c", "x", "y") + [attacker("X", "A3", {"target": "x"})],
        [["s", "b"], ["b", "a"], ["b", "c"], ["a", "X"], ["c", "X"], ["c", "x"], ["x", "y"]],
        [
            check("b-selects-a", "mpr_set", ["a"], node="b"),
            check("x-no-tcs-from-b", "coverage", 0, origin="b", node="x"),
            check("a-gets-tcs-from-b", "coverage", 1, op="ge", origin="b", node="a"),
        ],
    )


@builder("fig03_spoof_2hop_cover")
def fig03():
    return scenario(
        "fig03_spoof_2hop_cover",
        "X claims x next to a and b; b's 2-hop set via a is already 1-hop, so b never "
        "selects a and x gets nothing from b or c.",
        honest("c", "b", "a", "x", "w") + [attacker("X", "A4", {"target": "x"})],
        [["c", "b"], ["b", "a"], ["a", "x"], ["x", "w"], ["X", "a"], ["X", "b"]],
        [
            check("b-does-not-select-a", "mpr_set", ["a"], op="disjoint", node="b"),
            check("x-no-tcs-from-b", "coverage", 0, origin="b", node="x"),
            check("a-gets-tcs-from-b", "coverage", 1, op="ge", origin="b", node="a"),
        ],
    )


@builder("fig04b_link_spoof")
def fig04b():
    return scenario(
        "fig04b_link_spoof",
        "X spoofs links to c and the absent w; a picks X as its only MPR, X never "
        "forwards, so a's TCs stop at b.",
        honest("s", "a", "b", "c", "d", "e") + [attacker("X", "A5", {"targets": ["c", "w"]})],
        [["s", "a"], ["a", "b"], ["a", "X"], ["b", "c"], ["c", "d"], ["d", "e"]],
        [
            check("a-mprs-only-X", "mpr_set", ["X"], node="a"),
            check("c-no-tcs-from-a", "coverage", 0, origin="a", node="c"),
            check("d-no-tcs-from-a", "coverage", 0, origin="a", node="d"),
            check("coverage-of-a-excludes-c", "coverage_set", ["c", "d", "e"], op="disjoint", origin="a"),
            check("c-map", "perceived_edges", ["a-b", "b-c", "c-d", "d-e"], node="c"),
            check("d-map", "perceived_edges", ["b-c", "c-d", "d-e"], node="d"),
        ],
    )


@builder("fig05_jamming")
def fig05():
    hs = ["a", "b", "c", "d", "e", "f"]
    mesh = [["a", "b"], ["a", "c"], ["b", "d"], ["c", "d"], ["c", "e"], ["d", "f"], ["e", "f"], ["b", "c"]]
    links = []
    for u, v in mesh:
        if "b" in (u, v):
            other = v if u == "b" else u
            links.append({"from": "b", "to": other, "bidirectional": False})
            links.append({"from": other, "to": "b", "receivable": False, "bidirectional": False})
        else:
            links.append([u, v])
    rest = [h for h in hs if h != "b"]
    return scenario(
        "fig05_jamming",
        "Every reception at b is jammed; b still transmits. b ends with no symmetric "
        "links and an empty topology set; the others agree among themselves.",
        honest(*hs), links,
        [
            check("b-no-symmetric-links", "symmetric_links", 0, node="b"),
            check("b-empty-topology", "topology_set_size", 0, node="b"),
            check("others-consistent", "consistent", True, nodes=rest),
            check("others-no-route-to-b", "route", None, node="a", dst="b"),
        ],
        family="attack",
    )


# ---------------------------------------------------------------------------
# jitter, hop limit, hop count


@builder("a06_tc_burst")
def a06():
    return scenario(
        "a06_tc_burst",
        "X, adjacent only to v, selects v as MPR and bursts 50 TCs in 0.1 s; v's "
        "effective forwarding jitter collapses. Without the burst v relays one TC "
        "stream (from b) and its jitter stays uniform.",
        honest("a", "b", "v", "c") + [attacker("X", "A6", {"burst_size": 50, "burst_window": 0.1, "at": 60.0})],
        chain("a", "b", "v", "c") + [["X", "v"]],
        [
            check("v-selected-by-X", "mpr_set", ["v"], node="X"),
            check("v-jitter-collapses", "mean_jitter", 0.1, op="lt", node="v", t0=60.0, t1=61.0, relative=True),
            check("v-jitter-before-burst", "mean_jitter", [0.35, 0.65], op="within", node="v", t0=5.0,
                  t1=59.0, relative=True),
        ],
        duration=90.0, params={"tc_interval": 1.0},
    )


@builder("fig07_hop_limit")
def fig07():
    hs = ["t", "s", "a", "b", "c", "d", "e", "f", "g"]
    return scenario(
        "fig07_hop_limit",
        "X relays every TC at once with hop limit 2; c takes X's copy first and drops "
        "b's as a duplicate, so s's TCs never reach e and beyond.",
        honest(*hs) + [attacker("X", "A7", {"mode": "hop_limit", "value": 2}, willingness=1)],
        chain(*hs) + [["X", "a"], ["X", "c"]],
        [
            check("a-selects-b", "mpr_set", ["b", "s"], node="a"),
            check("c-gets-s", "coverage", 1, op="ge", origin="s", node="c"),
            check("d-gets-s", "coverage", 1, op="ge", origin="s", node="d"),
            check("e-misses-s", "coverage", 0, origin="s", node="e"),
            check("g-misses-s", "coverage", 0, origin="s", node="g"),
            check("c-drops-b-copy", "log_count", 1, op="ge", kind="TC_DUP", node="c",
                  match={"orig": "s", "sender": "b"}),
        ],
    )


@builder("fig08_hop_count")
def fig08():
    return scenario(
        "fig08_hop_count",
        "c rewrites hop count to 0 under a distance-dependent validity schedule; d keeps "
        "a's links for 2 s of every 5 s, so its route to t flaps.",
        honest("t", "a", "b", "d") + [attacker("c", "A7", {"mode": "hop_count", "value": 0})],
        chain("t", "a", "b", "c", "d"),
        [
            check("d-validity-2s", "validity", [2.0], node="d", origin="a"),
            check("d-route-to-t-flaps", "route_flaps", 2, op="ge", node="d", dst="t"),
        ],
        params={"tc_validity_schedule": [[1, 2.0], [2, 4.0], [3, 6.0]]},
    )


# ---------------------------------------------------------------------------
# data plane


@builder("fig09_blackhole")
def fig09():
    return scenario(
        "fig09_blackhole",
        "b runs the control plane honestly and drops all transit data.",
        honest("s", "d") + [attacker("b", "A8", {})],
        chain("s", "b", "d"),
        [
            check("s-has-route", "route", ["b", 2], node="s", dst="d"),
            check("data-dropped-at-b", "landing", "DROPPED@b", src="s", dst="d"),
            check("perceived-not-effective", "perceived_vs_effective", 1, op="len_ge", node="s"),
        ],
        probes=[{"at": 50.0, "src": "s", "dst": "d"}],
    )


def _wormhole(mode: str, name: str, landing: str) -> dict:
    hs = [f"n{i:02d}" for i in range(11)]
    taps = [
        {"handle": "T1", "ids": [], "attack": {"type": "A9", "params": {"peer": "T2", "mode": mode}}},
        {"handle": "T2", "ids": [], "attack": {"type": "A9", "params": {"peer": "T1", "mode": mode}}},
    ]
    return scenario(
        name,
        f"Two taps tunnel everything they hear ({mode}) between the ends of a 10-hop chain.",
        honest(*hs) + taps,
        chain(*hs) + [["T1", "n00"], ["T2", "n10"]],
        [
            check("one-hop-route", "route", ["n10", 1], node="n00", dst="n10"),
            check("data-outcome", "landing", landing, src="n00", dst="n10"),
        ],
        probes=[{"at": 50.0, "src": "n00", "dst": "n10"}],
    )


@builder("a09_wormhole_data")
def a09_data():
    return _wormhole("CONTROL_AND_DATA", "a09_wormhole_data", "n10")


@builder("a09_wormhole_control")
def a09_control():
    return _wormhole("CONTROL_ONLY", "a09_wormhole_control", "DROPPED@T1")


# ---------------------------------------------------------------------------
# sequence numbers and timing


def _spoofer_chain(name, desc, attack, params, checks, duration=60.0):
    return scenario(
        name, desc,
        honest("t", "a", "b", "c", "d", "e") + [attacker("X", attack, dict(params, target="a"))],
        chain("t", "a", "b", "c", "d", "e") + [["X", "b"]],
        checks, duration=duration,
    )


@builder("a10_seqnum_exhaust")
def a10():
    at = 20.0
    return _spoofer_chain(
        "a10_seqnum_exhaust",
        "X, posing as a, floods TCs with sequence numbers 0..999; a's real TCs are "
        "duplicates everywhere until the duplicate records expire.",
        "A10", {"at": at, "count": 1000},
        [
            check("c-suppressed", "coverage", 0, origin="a", node="c", t0=at + 0.5, t1=at + 29.5),
            check("e-suppressed", "coverage", 0, origin="a", node="e", t0=at + 0.5, t1=at + 29.5),
            check("c-recovers", "coverage", 1, op="ge", origin="a", node="c", t0=at + 30.0, outcome="applied"),
        ],
        duration=70.0,
    )


@builder("a11_ansn_jump")
def a11():
    at = 20.0
    return _spoofer_chain(
        "a11_ansn_jump",
        "X, posing as a, sends one TC with ANSN 1000 ahead; a's later TCs look stale "
        "and a's links fade out once the forged record expires.",
        "A11", {"at": at, "jump": 1000},
        [
            check("c-ignores-a", "coverage", 3, op="ge", origin="a", node="c", t0=at + 0.5, outcome="stale"),
            check("c-applies-none", "coverage", 0, origin="a", node="c", t0=at + 0.5, outcome="applied"),
            check("c-loses-t", "route", None, node="c", dst="t"),
        ],
    )


@builder("a12_interval_forge")
def a12():
    at = 20.0
    return _spoofer_chain(
        "a12_interval_forge",
        "X, posing as a, claims a 1 ms HELLO interval; b counts misses every millisecond "
        "and excludes the link.",
        "A12", {"at": at, "interval": 0.001, "victims": ["b"]},
        [check("b-excludes-a", "link_change", 0.006, op="le", node="b", neighbor="a", after=at)],
    )


@builder("a13_validity_forge")
def a13():
    at = 20.0
    return _spoofer_chain(
        "a13_validity_forge",
        "X, posing as a, sends a HELLO valid for 1 ms; b drops the link to a.",
        "A13", {"at": at, "validity": 0.001, "victims": ["b"]},
        [check("b-tears-down-a", "link_change", 0.1, op="le", node="b", neighbor="a", after=at,
               change="removed")],
    )


# ---------------------------------------------------------------------------
# indirect jamming


@builder("fig11_indirect_jam_nd")
def fig11():
    return scenario(
        "fig11_indirect_jam_nd",
        "X toggles a phantom 2-hop link each time a's HELLO shows the last toggle; a "
        "ends up sending HELLOs at the minimum interval.",
        honest("a", "c", "d", "e") + [attacker("X", "A14", {"victim": "a", "phantom": "b", "start": 15.0})],
        [["a", "c"], ["a", "d"], ["c", "e"], ["a", "X"]],
        [
            check("hello-amplification", "rate_ratio", 4.0, op="approx_rel", tolerance=0.15,
                  node="a", counter="hellos_sent"),
            check("recalc-per-cycle", "recalcs_per_flip", 1.0, op="ge", node="a", attacker="X", t0=15.0),
        ],
        duration=90.0,
    )


@builder("fig11_indirect_jam_willingness")
def fig11_will():
    return scenario(
        "fig11_indirect_jam_willingness",
        "Same as the phantom-link variant, but X toggles its own willingness between "
        "7 and 0 instead.",
        honest("a", "c", "d", "e") + [attacker("X", "A14", {"victim": "a", "variant": "willingness", "start": 15.0})],
        [["a", "c"], ["a", "d"], ["c", "e"], ["a", "X"]],
        [
            check("hello-amplification", "rate_ratio", 4.0, op="approx_rel", tolerance=0.15,
                  node="a", counter="hellos_sent"),
            check("recalc-per-cycle", "recalcs_per_flip", 1.0, op="ge", node="a", attacker="X", t0=15.0),
        ],
        duration=90.0,
    )


@builder("fig12_indirect_jam_lsa")
def fig12():
    return scenario(
        "fig12_indirect_jam_lsa",
        "X alternates selecting a as MPR and declaring the link lost, keyed on a's TCs; a "
        "re-originates TCs at the minimum interval and every router recomputes routes.",
        honest("b", "a", "c", "d") + [attacker("X", "A15", {"targets": ["a"], "start": 15.0}, willingness=0)],
        [["b", "a"], ["a", "c"], ["c", "d"], ["a", "X"]],
        [
            check("tc-amplification-bounded", "rate_ratio", 4.0 * 1.15, op="le", node="a", counter="tcs_sent"),
            check("tc-amplification-real", "rate_ratio", 2.0, op="ge", node="a", counter="tcs_sent"),
            check("recalcs-cover-flips", "recalcs_cover_flips", []),
        ],
        duration=90.0,
    )


# ---------------------------------------------------------------------------
# inconsistent topology maps


@builder("fig13_id_spoof_nd")
def fig13():
    hs = ["x", "a", "b", "c", "d", "v", "w"]
    return scenario(
        "fig13_id_spoof_nd",
        "X at the far end claims x; traffic for x from w and v lands at X, from a and b "
        "at the real x.",
        honest(*hs) + [attacker("X", "A16", {"ids": ["x"]}, willingness=0)],
        chain(*hs) + [["w", "X"]],
        [
            check("w-to-x-lands-X", "landing", "X", src="w", dst="x"),
            check("v-to-x-lands-X", "landing", "X", src="v", dst="x"),
            check("a-to-x-lands-x", "landing", "x", src="a", dst="x"),
            check("b-to-x-lands-x", "landing", "x", src="b", dst="x"),
            check("stealth", "spoof_leaks", [], node="X"),
        ],
    )


@builder("fig14_id_spoof_nd_stealth")
def fig14():
    hs = ["a", "b", "c", "d", "e", "f", "g"]
    return scenario(
        "fig14_id_spoof_nd_stealth",
        "X next to d claims a, b, f and g with willingness 0 and no MPRs; d delivers "
        "to X, c reaches the real b, c's route to a is a tie.",
        honest(*hs) + [attacker("X", "A16", {"ids": ["a", "b", "f", "g"]}, willingness=0)],
        chain(*hs) + [["X", "d"]],
        [
            check("d-to-a-lands-X", "landing", "X", src="d", dst="a"),
            check("d-to-b-lands-X", "landing", "X", src="d", dst="b"),
            check("d-to-f-lands-X", "landing", "X", src="d", dst="f"),
            check("d-to-g-lands-X", "landing", "X", src="d", dst="g"),
            check("c-to-b-lands-b", "landing", "b", src="c", dst="b"),
            check("c-to-a-either", "landing", ["a", "X"], op="in", src="c", dst="a"),
            check("stealth", "spoof_leaks", [], node="X"),
        ],
    )


@builder("fig15_id_spoof_lsa")
def fig15():
    hs = ["a", "b", "c", "d", "e", "f"]
    return scenario(
        "fig15_id_spoof_lsa",
        "X claims a and selects f as MPR, so f advertises f-a network-wide; b, c reach "
        "the real a, e, f land at X, d is a tie.",
        honest(*hs) + [attacker("X", "A17", {"target": "a", "mpr_targets": ["f"]})],
        chain(*hs) + [["f", "X"]],
        [
            check("b-to-a", "landing", "a", src="b", dst="a"),
            check("c-to-a", "landing", "a", src="c", dst="a"),
            check("e-to-a-lands-X", "landing", "X", src="e", dst="a"),
            check("f-to-a-lands-X", "landing", "X", src="f", dst="a"),
            check("d-to-a-either", "landing", ["a", "X"], op="in", src="d", dst="a"),
            check("c-map-has-both-a-links", "perceived_edges", ["a-b", "a-f"], op="contains", node="c"),
            check("d-map-has-both-a-links", "perceived_edges", ["a-b", "a-f"], op="contains", node="d"),
        ],
    )


@builder("fig19_link_spoof_nd_stealth")
def fig19():
    hs = list("abcdefghi")
    return scenario(
        "fig19_link_spoof_nd_stealth",
        "X next to e learns every id from overheard TCs and spoofs links to all of them "
        "except those within 2 hops; e picks X as its only MPR and never notices.",
        honest(*hs) + [attacker("X", "A18", {"learn": True, "phantom": "z"})],
        chain(*hs) + [["X", "e"]],
        [
            check("e-mprs-only-X", "mpr_set", ["X"], node="e"),
            check("no-nearby-spoofs", "perceived_edges", ["X-d", "X-f"], op="not_contains", node="e"),
            check("far-spoofs", "perceived_edges", ["X-a", "X-i", "X-z"], op="contains", node="e"),
            check("e-tcs-stop-at-neighbors", "coverage", 0, origin="e", node="c", t0=30.0),
        ],
    )


@builder("fig21_link_spoof_lsa")
def fig21():
    hs = list("abcdefg")
    return scenario(
        "fig21_link_spoof_lsa",
        "X advertises a link X-a in its TCs; routers nearer b reach a, routers nearer X "
        "route into X, e is a tie.",
        honest(*hs) + [attacker("X", "A19", {"spoofed_links": ["a"]})],
        chain(*hs) + [["g", "X"]],
        [
            check("b-to-a", "landing", "a", src="b", dst="a"),
            check("c-to-a", "landing", "a", src="c", dst="a"),
            check("d-to-a", "landing", "a", src="d", dst="a"),
            check("f-to-a-into-X", "landing", "DROPPED@X", src="f", dst="a"),
            check("g-to-a-into-X", "landing", "DROPPED@X", src="g", dst="a"),
            check("e-either", "landing", ["a", "DROPPED@X"], op="in", src="e", dst="a"),
        ],
    )


def _loop(name: str, attack: str, params: dict, desc: str) -> dict:
    return scenario(
        name, desc,
        honest("a", "b", "c", "d", "e", "f", "g") + [attacker("X", attack, dict(params, target="g"))],
        [["a", "b"], ["a", "c"], ["a", "X"], ["X", "d"], ["c", "e"], ["e", "f"], ["f", "g"]],
        [
            check("loop-f-g", "loops", [["f", "g"]], dst="a"),
            check("trace-f-to-a-loops", "landing", "LOOP", src="f", dst="a"),
        ],
        probes=[{"at": 55.0, "src": "f", "dst": "a"}],
    )


@builder("fig23_loop")
def fig23():
    return _loop("fig23_loop", "A20", {},
                 "X claims g and runs ND and LSA under it; f routes to a through g, the real g "
                 "routes back through f.")


@builder("fig24_loop_nd")
def fig24():
    return _loop("fig24_loop_nd", "A21", {"mpr_targets": ["a"]},
                 "X claims g and selects a as MPR, so a advertises the link a-g; f and the "
                 "real g bounce packets for a between them.")


# ---------------------------------------------------------------------------


# attack -> shipped scenario covering it
ATTACK_SCENARIOS = {
    "A1": "fig01a_spoof_1hop_dup", "A2": "fig01b_spoof_1hop_link", "A3": "fig02_spoof_2hop_dup",
    "A4": "fig03_spoof_2hop_cover", "A5": "fig04b_link_spoof", "A6": "a06_tc_burst",
    "A7": "fig07_hop_limit", "A8": "fig09_blackhole", "A9": "a09_wormhole_data",
    "A10": "a10_seqnum_exhaust", "A11": "a11_ansn_jump", "A12": "a12_interval_forge",
    "A13": "a13_validity_forge", "A14": "fig11_indirect_jam_nd", "A15": "fig12_indirect_jam_lsa",
    "A16": "fig14_id_spoof_nd_stealth", "A17": "fig15_id_spoof_lsa", "A18": "fig19_link_spoof_nd_stealth",
    "A19": "fig21_link_spoof_lsa", "A20": "fig23_loop", "A21": "fig24_loop_nd",
}


def build(name: str) -> ScenarioSpec:
    return parse_scenario(BUILDERS[name]())


def build_all() -> Dict[str, ScenarioSpec]:
    return {name: build(name) for name in BUILDERS}

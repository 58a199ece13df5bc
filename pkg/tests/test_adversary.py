import pytest

from olsrsim import adversary as ADV
from olsrsim.agent import RouterAgent
from olsrsim.engine import WormholeTap
from olsrsim.library import attacker, build, chain, honest
from olsrsim.params import ProtocolParams
from olsrsim.runner import build_engine, simulate

from conftest import make_spec

PARAMS = ProtocolParams()


def attack_records(ctx, handle="X"):
    return [r for r in ctx.records if r.kind == "ATTACK" and r.node == handle]


# ---------------------------------------------------------------------------
# configuration


def test_alias_resolves_to_catalog_id():
    cfg = ADV.AttackConfig("ansn_jump", {"target": "a", "jump": 5, "at": 1})
    assert cfg.attack == "A11" and cfg.name == "ansn_jump"
    cfg.validate()


@pytest.mark.parametrize("attack, params, field", [
    ("A11", {"target": "a", "at": 1}, "jump"),
    ("A6", {"burst_size": 5, "at": 1}, "burst_window"),
    ("A9", {"peer": "T"}, "mode"),
    ("A9", {"peer": "T", "mode": "BOTH"}, "mode"),
    ("A5", {}, "targets"),
    ("A14", {"victim": "a", "variant": "loud"}, "variant"),
])
def test_validation_names_the_field(attack, params, field):
    with pytest.raises(ADV.AttackConfigError, match=rf"attack\.params\.{field}:"):
        ADV.AttackConfig(attack, params).validate()


def test_unknown_attack_rejected():
    with pytest.raises(ADV.AttackConfigError):
        ADV.AttackConfig("A42").validate()


def test_claimed_ids():
    assert ADV.AttackConfig("A16", {"ids": ["a", "b"]}).claimed_ids(["X"]) == ["a", "b"]
    assert ADV.AttackConfig("A2", {"target": "b", "ids": ["b", "q"]}).claimed_ids(["X"]) == ["b", "q"]
    assert ADV.AttackConfig("A8").claimed_ids(["X"]) == ["X"]


def test_make_agent_classes():
    assert type(ADV.make_agent("X", ["X"], PARAMS)) is RouterAgent
    off = ADV.AttackConfig("A8", enabled=False)
    assert type(ADV.make_agent("X", ["X"], PARAMS, attack=off)) is RouterAgent
    tap = ADV.make_agent("T", ["T"], PARAMS, attack=ADV.AttackConfig("A9", {"peer": "U", "mode": "CONTROL_ONLY"}))
    assert isinstance(tap, WormholeTap)
    a11 = ADV.make_agent("X", ["X"], PARAMS, attack=ADV.AttackConfig("A11", {"target": "a", "jump": 5, "at": 1}))
    assert isinstance(a11, ADV.AnsnJump) and a11.ids == ["a"]
    a16 = ADV.make_agent("X", ["X"], PARAMS, willingness=7,
                         attack=ADV.AttackConfig("A16", {"ids": ["a", "b"]}))
    assert all(p.state.willingness == 0 for p in a16.personas.values())


# ---------------------------------------------------------------------------
# overhearing


def ring_with_listener():
    hs = [f"r{i}" for i in range(9)]
    nodes = honest(*hs) + [attacker("X", "A8", {})]
    links = chain(*hs) + [[hs[-1], hs[0]], ["X", "r0"]]
    ctx = simulate(make_spec(nodes, links, duration=40.0))
    return ctx, set(hs)


def test_overhear_learns_every_id_on_a_ring():
    ctx, ids = ring_with_listener()
    x = ctx.engine.nodes["X"]
    # r0 advertises X itself; learn mode strips the attacker's own ids later
    assert ADV.overhear_learn(x, 1000.0, 40.0) - set(x.ids) == ids


def test_overhear_zero_window_learns_nothing():
    ctx, _ = ring_with_listener()
    x = ctx.engine.nodes["X"]
    assert ADV.overhear_learn(x, 0.0, 40.0) == set()
    assert ADV.overhear_learn(x, 0.0, 40.0, phantom="z") == {"z"}


def test_overhear_window_forgets_old_ids():
    ctx, _ = ring_with_listener()
    x = ctx.engine.nodes["X"]
    # nothing is overheard after the run ends
    assert ADV.overhear_learn(x, 5.0, 1000.0) == set()


# ---------------------------------------------------------------------------
# behaviour echoes


def test_disabled_attack_is_bit_identical_to_honest():
    nodes_off = honest("a", "b", "c") + [dict(attacker("X", "A8", {}), attack={"type": "A8", "enabled": False})]
    nodes_honest = honest("a", "b", "c") + [{"handle": "X", "willingness": 3}]
    links = chain("a", "b", "c") + [["b", "X"]]
    logs = []
    for nodes in (nodes_off, nodes_honest):
        eng = build_engine(make_spec(nodes, links, duration=30.0, seed=9))
        eng.run(30.0)
        logs.append(eng.event_log())
    assert logs[0] == logs[1]


def test_tc_burst_echoes_parameters():
    ctx = simulate(build("a06_tc_burst"))
    (rec,) = attack_records(ctx)
    assert rec.t == 60.0
    assert "n=50 window=0.1" in rec.detail
    burst = [r for r in ctx.records if r.kind == "TC_TX" and r.node == "X" and 60.0 <= r.t <= 60.1]
    assert len(burst) == 50


def test_ansn_jump_echoes_parameters():
    ctx = simulate(build("a11_ansn_jump"))
    (rec,) = attack_records(ctx)
    seen = max(r.data["ansn"] for r in ctx.records
               if r.kind == "TC_TX" and r.node == "a" and r.t < 20.0)
    assert rec.t == 20.0
    assert rec.data["ansn"] == seen + 1000


def test_seqnum_sweep_covers_count():
    ctx = simulate(build("a10_seqnum_exhaust"))
    (rec,) = attack_records(ctx)
    assert (rec.data["first"], rec.data["last"]) == (0, 999)
    forged = [r for r in ctx.records if r.kind == "RX" and r.node == "b" and r.t >= 20.0 and r.t < 20.01
              and r.data["sender"] == "a" and r.data["src"] == "X"]
    assert len(forged) == 1000


def test_hop_count_relay_rewrites_field():
    ctx = simulate(build("fig08_hop_count"))
    relayed = [r for r in ctx.records if r.kind == "TC_TX" and r.node == "c" and r.data.get("forged")]
    assert relayed
    rx = [r.data["msg"] for r in ctx.records
          if r.kind == "RX" and r.node == "d" and r.data["src"] == "c" and r.data["msg"].kind == "TC"
          and r.data["msg"].originator != "c"]
    assert rx and all(m.hop_count == 0 for m in rx)


def test_indirect_jam_lsa_sends_only_hellos():
    ctx = simulate(build("fig12_indirect_jam_lsa"))
    sent = {r.kind for r in ctx.records if r.node == "X" and r.kind.endswith("_TX")}
    assert sent == {"HELLO_TX"}
    assert attack_records(ctx)


def test_indirect_jam_nd_flips_follow_victim():
    ctx = simulate(build("fig11_indirect_jam_nd"))
    flips = attack_records(ctx)
    assert len(flips) > 10
    assert all(r.t >= 15.0 for r in flips)


def test_blackhole_drops_only_transit():
    ctx = simulate(build("fig09_blackhole"))
    b = ctx.engine.nodes["b"]
    assert b.data_action("b") == "absorb"
    assert b.data_action("d") == "drop"


def test_id_spoof_attacker_never_forwards_or_originates_tcs():
    ctx = simulate(build("fig13_id_spoof_nd"))
    assert not [r for r in ctx.records if r.node == "X" and r.kind == "TC_TX"]

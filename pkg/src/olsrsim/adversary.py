"""Attacker behaviors.

Each attack is a small deviation from :class:`RouterAgent`; anything an
attack does not override stays honest. ``make_agent`` builds the right
agent for a node description and returns a plain honest router when the
attack is absent or disabled.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Set

from . import protocol as P
from .agent import Persona, RouterAgent
from .engine import CONTROL_AND_DATA, CONTROL_ONLY, WormholeTap
from .messages import (
    HelloMessage,
    LinkStatus,
    NeighborEntry,
    RouterId,
    TcMessage,
    ValiditySchedule,
    describe,
)
from .params import ProtocolParams

INF = math.inf


class AttackConfigError(ValueError):
    pass


# attack -> (name, required params)
CATALOG: Dict[str, tuple] = {
    "A1": ("spoof_1hop_dup", ("target",)),
    "A2": ("spoof_1hop_link", ("target",)),
    "A3": ("spoof_2hop_dup", ("target",)),
    "A4": ("spoof_2hop_cover", ("target",)),
    "A5": ("link_spoof_hello", ()),
    "A6": ("tc_burst", ("burst_size", "burst_window", "at")),
    "A7": ("hop_field", ("mode", "value")),
    "A8": ("blackhole", ()),
    "A9": ("wormhole", ("peer", "mode")),
    "A10": ("seqnum_exhaust", ("target", "at", "count")),
    "A11": ("ansn_jump", ("target", "jump", "at")),
    "A12": ("interval_forge", ("target", "at", "interval")),
    "A13": ("validity_forge", ("target", "at", "validity")),
    "A14": ("indirect_jam_nd", ("victim",)),
    "A15": ("indirect_jam_lsa", ()),
    "A16": ("id_spoof_nd", ("ids",)),
    "A17": ("id_spoof_lsa", ("target",)),
    "A18": ("link_spoof_nd_stealth", ()),
    "A19": ("link_spoof_lsa", ("spoofed_links",)),
    "A20": ("loop_lsa", ("target",)),
    "A21": ("loop_nd", ("target", "mpr_targets")),
}

_ALIASES = {name: key for key, (name, _) in CATALOG.items()}


@dataclass
class AttackConfig:
    attack: str
    params: Dict[str, Any] = field(default_factory=dict)
    enabled: bool = True

    def __post_init__(self):
        self.attack = _ALIASES.get(self.attack, self.attack)

    @property
    def name(self) -> str:
        return CATALOG[self.attack][0]

    def validate(self) -> None:
        if self.attack not in CATALOG:
            raise AttackConfigError(f"attack: unknown attack {self.attack!r}")
        for key in CATALOG[self.attack][1]:
            if key not in self.params:
                raise AttackConfigError(
                    f"attack.params.{key}: required by {self.attack} ({self.name})"
                )
        if self.attack == "A5" and not ("targets" in self.params or self.params.get("learn")):
            raise AttackConfigError("attack.params.targets: A5 needs targets or learn=true")
        if self.attack == "A7" and self.params["mode"] not in ("hop_limit", "hop_count"):
            raise AttackConfigError("attack.params.mode: must be hop_limit or hop_count")
        if self.attack == "A9" and self.params["mode"] not in (CONTROL_ONLY, CONTROL_AND_DATA):
            raise AttackConfigError(f"attack.params.mode: must be {CONTROL_ONLY} or {CONTROL_AND_DATA}")
        if self.attack == "A14" and self.params.get("variant", "phantom") not in ("phantom", "willingness"):
            raise AttackConfigError("attack.params.variant: must be phantom or willingness")

    def claimed_ids(self, default: Sequence[RouterId]) -> List[RouterId]:
        if self.attack == "A16":
            return list(self.params["ids"])
        if self.attack in _SPOOFERS:
            extra = [i for i in self.params.get("ids", []) if i != self.params["target"]]
            return [self.params["target"], *extra]
        return list(default)


_SPOOFERS = {"A1", "A2", "A3", "A4", "A10", "A11", "A12", "A13", "A17", "A20", "A21"}


class Adversary(RouterAgent):
    kind = "ADVERSARY"
    sends_tc = False
    forwards = False
    selects_mprs = True
    # ids of forced MPRs (always flagged when symmetric)
    forced_mprs: Set[RouterId] = frozenset()

    def __init__(self, handle, ids, params: ProtocolParams, config: AttackConfig, willingness=P.WILL_DEFAULT):
        super().__init__(handle, ids, params, willingness)
        self.config = config
        self.cfg = config.params
        self.overheard: Dict[RouterId, float] = {}
        self.data_mode = self.cfg.get("data", "drop")

    # overhearing
    def on_raw(self, engine, msg, sender, now):
        if isinstance(msg, TcMessage):
            self.overheard[msg.originator] = now
            for n in msg.advertised_neighbors:
                self.overheard[n] = now
        self.on_observe(engine, msg, sender, now)

    def on_observe(self, engine, msg, sender, now):
        pass

    def originates_tc(self, p: Persona) -> bool:
        return self.sends_tc

    def does_mpr_selection(self, p: Persona) -> bool:
        return self.selects_mprs

    def adjust_mprs(self, p: Persona) -> None:
        st = p.state
        for n in self.forced_mprs:
            rec = st.neighbor_set.get(n)
            if rec is not None and st.is_usable(rec):
                rec.is_mpr = True

    def forward_allowed(self, p, msg, sender) -> bool:
        return self.forwards and super().forward_allowed(p, msg, sender)

    def data_action(self, dst: RouterId) -> str:
        if self.claims(dst):
            return "absorb"
        return "forward" if self.data_mode == "forward" else "drop"

    def emit(self, engine, msgs, sender: RouterId, note: str = "") -> None:
        for m in msgs:
            kind = "HELLO_TX" if isinstance(m, HelloMessage) else "TC_TX"
            data = dict(id=sender, seq=m.msg_seq_num, forged=True)
            if isinstance(m, TcMessage):
                data.update(orig=m.originator, ansn=m.ansn, adv=m.advertised_neighbors)
            engine.log(self.handle, kind, describe(m) + (f" {note}" if note else ""), **data)
        engine.broadcast(self.handle, list(msgs), sender)


def overhear_learn(agent: Adversary, window: float, now: float, phantom: Optional[RouterId] = None) -> Set[RouterId]:
    """Ids seen in overheard TCs within ``window`` seconds before ``now``."""
    if window <= 0:
        learned: Set[RouterId] = set()
    else:
        learned = {rid for rid, t in agent.overheard.items() if t >= now - window}
    if phantom is not None:
        learned.add(phantom)
    return learned


# ---------------------------------------------------------------------------
# flooding disruption by identity / link spoofing


class Spoof1HopDup(Adversary):
    """A1: claims an id and advertises no neighbors at all."""

    selects_mprs = False

    def build_hello(self, p, now):
        msg = P.generate_hello(p.state, now)
        return dataclasses.replace(msg, neighbor_entries=())


class SpoofNeighbor(Adversary):
    """A2/A3/A4/A17: honest ND under a claimed id; never forwards."""

    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        self.forced_mprs = set(self.cfg.get("mpr_targets", ()))


class LinkSpoofHello(Adversary):
    """A5/A18: HELLOs carry SYMMETRIC links to routers that are not neighbors."""

    stealth = False

    def spoofed_ids(self, p: Persona, now: float) -> Set[RouterId]:
        if self.cfg.get("learn"):
            ids = overhear_learn(self, self.cfg.get("window", INF), now, self.cfg.get("phantom"))
        else:
            ids = set(self.cfg.get("targets", ()))
        ids -= set(self.cfg.get("exclude", ()))
        ids -= set(self.ids)
        st = p.state
        ids -= set(st.neighbor_set)
        if self.stealth:
            near = set(st.symmetric_neighbors())
            for targets in st.two_hop_targets().values():
                near |= targets
            ids -= near
        return ids

    def build_hello(self, p, now):
        msg = P.generate_hello(p.state, now)
        spoofed = self.spoofed_ids(p, now)
        entries = list(msg.neighbor_entries) + [
            NeighborEntry(n, LinkStatus.SYMMETRIC) for n in sorted(spoofed)
        ]
        return dataclasses.replace(msg, neighbor_entries=tuple(entries))


class LinkSpoofStealth(LinkSpoofHello):
    """A18: A5 minus every id within two hops, so no nearby router can cross-check."""

    stealth = True


# ---------------------------------------------------------------------------
# jitter and hop fields


class TcBurst(Adversary):
    """A6: at ``at`` emits ``burst_size`` distinct-seq TCs inside ``burst_window``."""

    sends_tc = True
    forwards = True

    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        self._pending: List[tuple] = []

    def attack_start(self, engine):
        engine.set_timer(self.handle, "atk:burst", float(self.cfg["at"]))

    def on_attack_timer(self, engine, name, now):
        n = int(self.cfg["burst_size"])
        window = float(self.cfg["burst_window"])
        st = self.state
        sched = ValiditySchedule.constant(self.params.tc_validity)
        for i in range(n):
            msg = TcMessage(
                originator=st.self_id, msg_seq_num=st.next_msg_seq_num, ansn=st.ansn,
                hop_count=0, hop_limit=P.MAX_HOP_LIMIT, interval_time=self.params.tc_interval,
                validity_time=sched, advertised_neighbors=tuple(sorted(st.advertised_set)),
            )
            st.next_msg_seq_num += 1
            self._pending.append((now + window * i / n, msg))
        engine.log(self.handle, "ATTACK", f"burst n={n} window={window}", attack="A6")
        self._drain(engine, now)

    def _drain(self, engine, now):
        ready = [m for t, m in self._pending if t <= now]
        self._pending = [(t, m) for t, m in self._pending if t > now]
        if ready:
            self.emit(engine, ready, self.state.self_id, "burst")
        if self._pending:
            engine.set_timer(self.handle, "atk:drain", min(t for t, _ in self._pending))

    def on_timer(self, engine, name, now):
        if name == "atk:drain":
            self._drain(engine, now)
            self.reschedule_housekeeping(engine)
            return
        super().on_timer(engine, name, now)


class HopField(Adversary):
    """A7: relays every TC at once with a rewritten hop limit or hop count."""

    sends_tc = True

    def forward_allowed(self, p, msg, sender):
        return False

    def on_observe(self, engine, msg, sender, now):
        if not isinstance(msg, TcMessage):
            return
        st = self.state
        if msg.originator == st.self_id:
            return
        if not P.check_and_record_forward(st, msg.originator, msg.msg_seq_num, now):
            return
        value = self.cfg["value"]
        if self.cfg["mode"] == "hop_limit":
            out = dataclasses.replace(msg, hop_count=msg.hop_count + 1, hop_limit=int(value))
        else:
            hc = {"max": P.MAX_HOP_LIMIT, "zero": 0}.get(value, value)
            out = dataclasses.replace(msg, hop_count=int(hc), hop_limit=msg.hop_limit - 1)
        st.counters.tcs_forwarded += 1
        self.emit(engine, [out], st.self_id, "hop-field")


class Blackhole(Adversary):
    """A8: honest control plane, silently drops all transit data."""

    sends_tc = True
    forwards = True


# ---------------------------------------------------------------------------
# sequence numbers and timing


class _SpoofedOriginator(Adversary):
    """Claims ``target`` and flags every neighbor as MPR so forged TCs flood."""

    def adjust_mprs(self, p):
        st = p.state
        for n, rec in st.neighbor_set.items():
            rec.is_mpr = st.is_usable(rec)

    selects_mprs = False

    def react(self, engine, p, delta, now):
        if delta.neighborhood_changed or delta.link_status_changed:
            before = p.state.mpr_set()
            self.adjust_mprs(p)
            if p.state.mpr_set() != before:
                self.request_hello(engine, p, now)
        # no LSA, no routing

    def forged_tc(self, seq, ansn, adv, validity=None) -> TcMessage:
        v = validity if validity is not None else self.params.tc_validity
        return TcMessage(
            originator=self.cfg["target"], msg_seq_num=int(seq), ansn=int(ansn),
            hop_count=0, hop_limit=P.MAX_HOP_LIMIT, interval_time=self.params.tc_interval,
            validity_time=ValiditySchedule.constant(v), advertised_neighbors=tuple(adv),
        )


class SeqnumExhaust(_SpoofedOriginator):
    """A10: one packet of ``count`` forged TCs sweeping message seq numbers."""

    def attack_start(self, engine):
        engine.set_timer(self.handle, "atk:sweep", float(self.cfg["at"]))

    def on_attack_timer(self, engine, name, now):
        start = int(self.cfg.get("start", 0))
        ansn = int(self.cfg.get("ansn", 0))
        msgs = [self.forged_tc(s, ansn, ()) for s in range(start, start + int(self.cfg["count"]))]
        engine.log(self.handle, "ATTACK", f"sweep {start}..{start + len(msgs) - 1} as {self.cfg['target']}",
                   attack="A10", first=start, last=start + len(msgs) - 1)
        engine.broadcast(self.handle, msgs, self.cfg["target"])


class AnsnJump(_SpoofedOriginator):
    """A11: a single forged TC whose ANSN is far ahead of the real one."""

    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        self.seen_ansn = 0
        self.seen_seq = 0
        self.seen_adv: tuple = ()

    def on_observe(self, engine, msg, sender, now):
        if isinstance(msg, TcMessage) and msg.originator == self.cfg["target"]:
            if msg.ansn >= self.seen_ansn:
                self.seen_ansn = msg.ansn
                self.seen_adv = msg.advertised_neighbors
            self.seen_seq = max(self.seen_seq, msg.msg_seq_num)

    def attack_start(self, engine):
        engine.set_timer(self.handle, "atk:jump", float(self.cfg["at"]))

    def on_attack_timer(self, engine, name, now):
        ansn = self.seen_ansn + int(self.cfg["jump"])
        seq = self.cfg.get("seq", self.seen_seq + 10_000)
        adv = self.cfg.get("advertise", self.seen_adv)
        msg = self.forged_tc(seq, ansn, adv, self.cfg.get("validity"))
        engine.log(self.handle, "ATTACK", f"ansn jump {self.seen_ansn}->{ansn} as {self.cfg['target']}",
                   attack="A11", ansn=ansn, seq=int(seq))
        engine.broadcast(self.handle, [msg], self.cfg["target"])


class TimingForge(_SpoofedOriginator):
    """A12/A13: one forged HELLO with a tiny interval or validity time."""

    def start(self, engine):
        # silent until the forged HELLO
        self.attack_start(engine)

    def attack_start(self, engine):
        engine.set_timer(self.handle, "atk:forge", float(self.cfg["at"]))

    def on_attack_timer(self, engine, name, now):
        p = self.primary
        victims = self.cfg.get("victims")
        if victims is None:
            victims = sorted(n for n, r in p.state.neighbor_set.items() if r.status is not LinkStatus.LOST)
        interval = float(self.cfg.get("interval", self.params.hello_interval))
        validity = float(self.cfg.get("validity", self.params.hello_validity))
        msg = HelloMessage(
            originator=self.cfg["target"], msg_seq_num=p.state.next_hello_seq_num,
            willingness=p.state.willingness, interval_time=interval,
            validity_time=ValiditySchedule.constant(validity),
            neighbor_entries=tuple(NeighborEntry(v, LinkStatus.SYMMETRIC) for v in victims),
        )
        p.state.next_hello_seq_num += 1
        self.emit(engine, [msg], self.cfg["target"], "forged-timing")


# ---------------------------------------------------------------------------
# indirect jamming


class IndirectJamND(Adversary):
    """A14: flips a phantom 2-hop link (or its willingness) whenever the
    victim's HELLO shows the previous flip took effect."""

    selects_mprs = False

    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        self.variant = self.cfg.get("variant", "phantom")
        self.phantom = self.cfg.get("phantom", "phantom")
        self.victim = self.cfg["victim"]
        self.up = True  # SYM / willingness 7 phase
        self.flips = 0
        self.active = False

    def attack_start(self, engine):
        engine.set_timer(self.handle, "atk:start", float(self.cfg.get("start", 0.0)))

    def on_attack_timer(self, engine, name, now):
        self.active = True
        self.send_hello(engine, self.primary, now)

    def build_hello(self, p, now):
        msg = P.generate_hello(p.state, now)
        if not self.active:
            return msg
        if self.variant == "phantom":
            status = LinkStatus.SYMMETRIC if self.up else LinkStatus.LOST
            entries = msg.neighbor_entries + (NeighborEntry(self.phantom, status),)
            return dataclasses.replace(msg, neighbor_entries=entries)
        return dataclasses.replace(msg, willingness=P.WILL_ALWAYS if self.up else P.WILL_NEVER)

    def on_observe(self, engine, msg, sender, now):
        if not self.active or not isinstance(msg, HelloMessage) or msg.originator != self.victim:
            return
        e = msg.entry_for(self.state.self_id)
        selected = bool(e and e.mpr)
        if selected == self.up:
            self.up = not self.up
            self.flips += 1
            engine.log(self.handle, "ATTACK", f"flip {'up' if self.up else 'down'} n={self.flips}",
                       attack="A14", flips=self.flips)
            self.send_hello(engine, self.primary, now)


class IndirectJamLSA(Adversary):
    """A15: alternately selects each victim as MPR and declares the link LOST,
    moving on only after the victim's TC reflects the previous step."""

    selects_mprs = False

    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        self.primary.state.willingness = int(self.cfg.get("willingness", P.WILL_NEVER))
        self.targets = self.cfg.get("targets", "all")
        self.phase: Dict[RouterId, str] = {}  # victim -> "MPR" | "LOST"
        self.flips = 0
        self.active = False

    def is_target(self, rid):
        return self.targets == "all" or rid in self.targets

    def attack_start(self, engine):
        engine.set_timer(self.handle, "atk:start", float(self.cfg.get("start", 0.0)))

    def on_attack_timer(self, engine, name, now):
        self.active = True
        self.send_hello(engine, self.primary, now)

    def build_hello(self, p, now):
        msg = P.generate_hello(p.state, now)
        if not self.active:
            return msg
        entries = []
        for e in msg.neighbor_entries:
            if self.is_target(e.neighbor):
                ph = self.phase.setdefault(e.neighbor, "MPR")
                if ph == "MPR":
                    e = NeighborEntry(e.neighbor, LinkStatus.SYMMETRIC, True)
                else:
                    e = NeighborEntry(e.neighbor, LinkStatus.LOST)
            entries.append(e)
        return dataclasses.replace(msg, neighbor_entries=tuple(entries))

    def on_observe(self, engine, msg, sender, now):
        if not self.active or not isinstance(msg, TcMessage):
            return
        v = msg.originator
        if v not in self.phase:
            return
        me = self.state.self_id
        advertised = me in msg.advertised_neighbors
        ph = self.phase[v]
        if (ph == "MPR" and advertised) or (ph == "LOST" and not advertised):
            self.phase[v] = "LOST" if ph == "MPR" else "MPR"
            self.flips += 1
            engine.log(self.handle, "ATTACK", f"victim={v} phase={self.phase[v]} n={self.flips}",
                       attack="A15", victim=v, phase=self.phase[v])
            self.send_hello(engine, self.primary, now)


# ---------------------------------------------------------------------------
# inconsistent topology


class IdSpoofND(Adversary):
    """A16: claims remote ids, willingness 0, selects no MPRs, ND only."""

    selects_mprs = False

    def __init__(self, handle, ids, params, config, willingness=P.WILL_NEVER):
        super().__init__(handle, ids, params, config, P.WILL_NEVER)


class LinkSpoofLSA(Adversary):
    """A19: honest router whose TCs also advertise links to ``spoofed_links``."""

    sends_tc = True
    forwards = True

    def build_tc(self, p, now):
        st = p.state
        spoofed = set(self.cfg["spoofed_links"])
        adv = tuple(sorted(set(st.advertised_set) | spoofed))
        msg = P.generate_tc(st, now)
        if msg is None:
            sched = self.params.tc_validity_schedule
            msg = TcMessage(
                originator=st.self_id, msg_seq_num=st.next_msg_seq_num, ansn=st.ansn,
                hop_count=0, hop_limit=P.MAX_HOP_LIMIT, interval_time=self.params.tc_interval,
                validity_time=ValiditySchedule.of(sched) if sched else ValiditySchedule.constant(self.params.tc_validity),
            )
            st.next_msg_seq_num += 1
            st.counters.tcs_sent += 1
        return dataclasses.replace(msg, advertised_neighbors=adv)


class LoopLSA(SpoofNeighbor):
    """A20: a full protocol participant under a stolen id."""

    sends_tc = True
    forwards = True


_CLASSES = {
    "A1": Spoof1HopDup,
    "A2": SpoofNeighbor,
    "A3": SpoofNeighbor,
    "A4": SpoofNeighbor,
    "A5": LinkSpoofHello,
    "A6": TcBurst,
    "A7": HopField,
    "A8": Blackhole,
    "A10": SeqnumExhaust,
    "A11": AnsnJump,
    "A12": TimingForge,
    "A13": TimingForge,
    "A14": IndirectJamND,
    "A15": IndirectJamLSA,
    "A16": IdSpoofND,
    "A17": SpoofNeighbor,
    "A18": LinkSpoofStealth,
    "A19": LinkSpoofLSA,
    "A20": LoopLSA,
    "A21": SpoofNeighbor,
}


def make_agent(
    handle: str,
    ids: Sequence[RouterId],
    params: ProtocolParams,
    willingness: int = P.WILL_DEFAULT,
    attack: Optional[AttackConfig] = None,
):
    if attack is None or not attack.enabled:
        return RouterAgent(handle, ids, params, willingness)
    attack.validate()
    if attack.attack == "A9":
        return WormholeTap(handle, attack.params["peer"], attack.params["mode"],
                           float(attack.params.get("tunnel_latency", 0.0)))
    cls = _CLASSES[attack.attack]
    claimed = attack.claimed_ids(ids)
    will = int(attack.params.get("willingness", willingness))
    return cls(handle, claimed, params, attack, will)


# adversary-side entry points under the names the scenario docs use

def adversary_on_timer(agent: Adversary, engine, name: str, now: float) -> None:
    agent.on_attack_timer(engine, name, now)


def adversary_on_receive(agent: Adversary, engine, msg, sender: RouterId, now: float) -> None:
    agent.on_raw(engine, msg, sender, now)

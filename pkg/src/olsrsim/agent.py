"""Per-node protocol driver: timers, triggered messages and the forward queue.

A node may speak under several identities ("personas"); honest nodes have
exactly one. Adversaries subclass :class:`RouterAgent` and override the
hook methods near the bottom.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Sequence

from . import protocol as P
from .flooding import ForwardJob, earliest_due, flush_piggyback, forward_decision, schedule_forward
from .messages import ControlMessage, HelloMessage, RouterId, TcMessage, describe
from .params import ProtocolParams

if TYPE_CHECKING:  # pragma: no cover
    from .engine import Engine

INF = math.inf


@dataclass
class Persona:
    state: P.RouterState
    last_hello: float = -INF
    last_tc: float = -INF
    hello_due: float = INF
    tc_due: float = INF
    # neighbor -> (status, usable) as last logged
    links: Dict[RouterId, tuple] = field(default_factory=dict)

    @property
    def rid(self) -> RouterId:
        return self.state.self_id


class RouterAgent:
    kind = "HONEST"

    def __init__(
        self,
        handle: str,
        ids: Sequence[RouterId],
        params: ProtocolParams,
        willingness: int = P.WILL_DEFAULT,
    ):
        self.handle = handle
        self.params = params
        self.personas: Dict[RouterId, Persona] = {}
        for rid in ids:
            st = P.RouterState(self_id=rid, params=params, willingness=willingness)
            self.personas[rid] = Persona(st)
        self.fwd_queue: List[ForwardJob] = []
        self.jitter_samples: List[tuple] = []  # (time, originator, seq, jitter)

    # -- identity ---------------------------------------------------------
    @property
    def ids(self) -> List[RouterId]:
        return list(self.personas)

    @property
    def primary(self) -> Persona:
        return next(iter(self.personas.values()))

    @property
    def state(self) -> P.RouterState:
        return self.primary.state

    def claims(self, rid: RouterId) -> bool:
        return rid in self.personas

    # -- engine entry points ---------------------------------------------
    def start(self, engine: "Engine") -> None:
        for p in self._ordered():
            p.hello_due = engine.rng.uniform(0.0, self.params.hello_interval)
            engine.set_timer(self.handle, f"hello:{p.rid}", p.hello_due)
            if self.originates_tc(p):
                p.tc_due = engine.rng.uniform(0.0, self.params.tc_interval)
                engine.set_timer(self.handle, f"tc:{p.rid}", p.tc_due)
        self.attack_start(engine)

    def on_timer(self, engine: "Engine", name: str, now: float) -> None:
        what, _, arg = name.partition(":")
        if what == "hello":
            self.send_hello(engine, self.personas[arg], now)
        elif what == "tc":
            self.send_tc(engine, self.personas[arg], now)
        elif what == "house":
            for p in self._ordered():
                delta = P.expire(p.state, now)
                if delta:
                    engine.log(self.handle, "EXPIRE", f"id={p.rid}", id=p.rid)
                self.react(engine, p, delta, now)
        elif what == "flush":
            self.flush(engine, now)
        else:
            self.on_attack_timer(engine, name, now)
        self.reschedule_housekeeping(engine)

    def on_deliver(self, engine: "Engine", msg: ControlMessage, sender: RouterId, now: float) -> None:
        self.on_raw(engine, msg, sender, now)
        if isinstance(msg, HelloMessage):
            for p in self._ordered():
                if msg.originator == p.rid:
                    continue
                delta = P.process_hello(p.state, msg, now)
                self.react(engine, p, delta, now)
        else:
            for p in self._ordered():
                self.handle_tc(engine, p, msg, sender, now)
        self.reschedule_housekeeping(engine)

    # -- message generation ----------------------------------------------
    def send_hello(self, engine: "Engine", p: Persona, now: float) -> None:
        msg = self.build_hello(p, now)
        p.last_hello = now
        p.hello_due = now + self.params.hello_interval
        engine.set_timer(self.handle, f"hello:{p.rid}", p.hello_due)
        if msg is None:
            return
        engine.log(self.handle, "HELLO_TX", describe(msg), id=p.rid, seq=msg.msg_seq_num)
        engine.broadcast(self.handle, [msg], p.rid)

    def send_tc(self, engine: "Engine", p: Persona, now: float) -> None:
        p.tc_due = now + self.params.tc_interval
        engine.set_timer(self.handle, f"tc:{p.rid}", p.tc_due)
        msg = self.build_tc(p, now)
        if msg is None:
            return
        p.last_tc = now
        engine.log(
            self.handle, "TC_TX", describe(msg),
            id=p.rid, orig=msg.originator, seq=msg.msg_seq_num, ansn=msg.ansn,
            adv=msg.advertised_neighbors,
        )
        engine.broadcast(self.handle, [msg], p.rid)

    def request_hello(self, engine: "Engine", p: Persona, now: float) -> None:
        due = max(now, p.last_hello + self.params.min_hello_interval)
        if due < p.hello_due:
            p.hello_due = due
            engine.set_timer(self.handle, f"hello:{p.rid}", due)

    def request_tc(self, engine: "Engine", p: Persona, now: float) -> None:
        if not self.originates_tc(p):
            return
        due = max(now, p.last_tc + self.params.min_tc_interval)
        if due < p.tc_due:
            p.tc_due = due
            engine.set_timer(self.handle, f"tc:{p.rid}", due)

    # -- state reactions --------------------------------------------------
    def react(self, engine: "Engine", p: Persona, delta: P.StateDelta, now: float) -> None:
        if not delta:
            return
        st = p.state
        hello_needed = delta.link_status_changed
        if delta.link_status_changed:
            self.log_links(engine, p)
        if delta.neighborhood_changed or delta.link_status_changed:
            if self.does_mpr_selection(p):
                old = st.mpr_set()
                new = P.select_mprs(st)
                self.adjust_mprs(p)
                new = st.mpr_set()
                engine.log(
                    self.handle, "MPR_CALC",
                    f"id={p.rid} mprs=[{','.join(sorted(new))}]",
                    id=p.rid, mprs=tuple(sorted(new)),
                )
                hello_needed = hello_needed or new != old
            else:
                self.adjust_mprs(p)
        if hello_needed:
            self.request_hello(engine, p, now)
        if P.update_advertised_set(st):
            engine.log(
                self.handle, "ANSN",
                f"id={p.rid} ansn={st.ansn} adv=[{','.join(sorted(st.advertised_set))}]",
                id=p.rid, ansn=st.ansn,
            )
            self.request_tc(engine, p, now)
        if delta.neighborhood_changed or delta.topology_changed or delta.link_status_changed:
            self.recompute_routes(engine, p)

    def log_links(self, engine: "Engine", p: Persona) -> None:
        st = p.state
        now = {n: (r.status.value, st.is_usable(r)) for n, r in st.neighbor_set.items()}
        for n in sorted(set(now) | set(p.links)):
            old, new = p.links.get(n), now.get(n)
            if old == new:
                continue
            if new is None:
                engine.log(self.handle, "LINK", f"id={p.rid} nbr={n} removed",
                           id=p.rid, nbr=n, status=None, usable=False)
            else:
                lq = st.neighbor_set[n].link_quality
                engine.log(self.handle, "LINK",
                           f"id={p.rid} nbr={n} status={new[0]} usable={new[1]} lq={lq:.3f}",
                           id=p.rid, nbr=n, status=new[0], usable=new[1], lq=lq)
        p.links = now

    def recompute_routes(self, engine: "Engine", p: Persona) -> None:
        st = p.state
        old = dict(st.routing_table)
        new = P.compute_routing_table(st)
        engine.log(self.handle, "ROUTE_CALC", f"id={p.rid} n={len(new)}", id=p.rid)
        for d in sorted(set(old) | set(new)):
            o, n = old.get(d), new.get(d)
            if o == n:
                continue
            if n is None:
                engine.log(self.handle, "ROUTE", f"id={p.rid} dst={d} del", id=p.rid, dst=d, route=None)
            else:
                engine.log(
                    self.handle, "ROUTE",
                    f"id={p.rid} dst={d} nh={n.next_hop} dist={n.distance}",
                    id=p.rid, dst=d, route=(n.next_hop, n.distance),
                )

    # -- TC reception and forwarding -------------------------------------
    def handle_tc(self, engine: "Engine", p: Persona, msg: TcMessage, sender: RouterId, now: float) -> None:
        st = p.state
        if msg.originator == p.rid:
            engine.log(self.handle, "TC_OWN", f"id={p.rid} orig={msg.originator} seq={msg.msg_seq_num}",
                       id=p.rid, orig=msg.originator, seq=msg.msg_seq_num)
            return
        if P.check_and_record_duplicate(st, msg.originator, msg.msg_seq_num, now):
            if self.processes_tc(p):
                delta, outcome = P.process_tc(st, msg, msg.hop_count + 1, now)
                engine.log(
                    self.handle, "TC_PROC",
                    f"id={p.rid} orig={msg.originator} seq={msg.msg_seq_num} "
                    f"ansn={msg.ansn} from={sender} hc={msg.hop_count} hl={msg.hop_limit} {outcome}",
                    id=p.rid, orig=msg.originator, seq=msg.msg_seq_num, ansn=msg.ansn,
                    sender=sender, hc=msg.hop_count, hl=msg.hop_limit, outcome=outcome,
                    changed=delta.topology_changed, adv=msg.advertised_neighbors,
                    validity=msg.validity_time.validity_for(msg.hop_count + 1),
                )
                self.react(engine, p, delta, now)
        else:
            engine.log(self.handle, "TC_DUP",
                       f"id={p.rid} orig={msg.originator} seq={msg.msg_seq_num} from={sender}",
                       id=p.rid, orig=msg.originator, seq=msg.msg_seq_num, sender=sender)
        self.consider_forward(engine, p, msg, sender, now)

    def consider_forward(self, engine: "Engine", p: Persona, msg: TcMessage, sender: RouterId, now: float) -> None:
        if not self.forward_allowed(p, msg, sender):
            return
        if not P.check_and_record_forward(p.state, msg.originator, msg.msg_seq_num, now):
            return
        job = schedule_forward(self.fwd_queue, msg, now, engine.rng, self.params.max_jitter,
                               sender=sender, forwarder=p.rid)
        engine.log(self.handle, "FWD_Q",
                   f"id={p.rid} orig={msg.originator} seq={msg.msg_seq_num} due={job.due:.6f}",
                   id=p.rid, orig=msg.originator, seq=msg.msg_seq_num, due=job.due)
        engine.set_timer(self.handle, "flush", earliest_due(self.fwd_queue))

    def flush(self, engine: "Engine", now: float) -> None:
        if not self.fwd_queue:
            return
        jobs = list(self.fwd_queue)
        msgs, jitters = flush_piggyback(self.fwd_queue, now)
        for job, jit in zip(jobs, jitters):
            self.jitter_samples.append((now, job.message.originator, job.message.msg_seq_num, jit))
            self.personas[job.forwarder].state.counters.tcs_forwarded += 1
        engine.log(
            self.handle, "FWD_TX",
            f"n={len(msgs)} " + " ".join(f"{m.originator}/{m.msg_seq_num}" for m in msgs),
            msgs=tuple(m.key for m in msgs), jitters=tuple(jitters),
        )
        # one packet per forwarding identity
        by_sender: Dict[RouterId, List[TcMessage]] = {}
        for job in jobs:
            by_sender.setdefault(job.forwarder, []).append(job.message)
        for rid in sorted(by_sender):
            engine.broadcast(self.handle, by_sender[rid], rid)

    def reschedule_housekeeping(self, engine: "Engine") -> None:
        t = min((p.state.next_deadline() for p in self.personas.values()), default=INF)
        if t < INF:
            engine.set_timer(self.handle, "house", max(t, engine.now))

    def _ordered(self) -> Iterable[Persona]:
        return [self.personas[k] for k in sorted(self.personas)]

    # -- hooks (honest defaults) ------------------------------------------
    def build_hello(self, p: Persona, now: float) -> Optional[HelloMessage]:
        return P.generate_hello(p.state, now)

    def build_tc(self, p: Persona, now: float) -> Optional[TcMessage]:
        return P.generate_tc(p.state, now)

    def originates_tc(self, p: Persona) -> bool:
        return True

    def processes_tc(self, p: Persona) -> bool:
        return True

    def does_mpr_selection(self, p: Persona) -> bool:
        return True

    def adjust_mprs(self, p: Persona) -> None:
        pass

    def forward_allowed(self, p: Persona, msg: TcMessage, sender: RouterId) -> bool:
        return forward_decision(p.state, msg, sender)

    def on_raw(self, engine: "Engine", msg: ControlMessage, sender: RouterId, now: float) -> None:
        pass

    def attack_start(self, engine: "Engine") -> None:
        pass

    def on_attack_timer(self, engine: "Engine", name: str, now: float) -> None:
        pass

    def data_action(self, dst: RouterId) -> str:
        """'absorb', 'drop' or 'forward' for a data packet addressed to dst."""
        return "absorb" if self.claims(dst) else "forward"

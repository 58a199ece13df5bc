"""Deterministic discrete-event engine with a ground-truth radio topology."""
from __future__ import annotations

import heapq
import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .messages import ControlMessage, RouterId, describe
from .params import ProtocolParams

CONTROL_ONLY = "CONTROL_ONLY"
CONTROL_AND_DATA = "CONTROL_AND_DATA"


@dataclass
class GroundLink:
    src: str
    dst: str
    receivable: bool = True
    latency: float = 0.001


@dataclass
class LogRecord:
    t: float
    node: str
    kind: str
    detail: str
    data: Dict[str, Any] = field(default_factory=dict, compare=False)

    def line(self) -> str:
        return f"t={self.t:.6f} node={self.node} kind={self.kind} detail={self.detail}"


@dataclass(frozen=True)
class TraceResult:
    outcome: str  # DELIVERED | DROPPED | LOOP | TTL_EXPIRED
    node: Optional[str]
    path: Tuple[str, ...]
    reason: str = ""
    cycle: Tuple[str, ...] = ()
    src: str = ""
    dst: str = ""
    at: float = 0.0

    def landing(self) -> str:
        if self.outcome == "DELIVERED":
            return self.node
        if self.outcome == "DROPPED":
            return f"DROPPED@{self.node}"
        return self.outcome


class EngineError(RuntimeError):
    pass


class WormholeTap:
    """Half of a wormhole: relays what it hears to its peer, never routes."""

    kind = "WORMHOLE_TAP"

    def __init__(self, handle: str, peer: str, mode: str = CONTROL_AND_DATA, tunnel_latency: float = 0.0):
        self.handle = handle
        self.peer = peer
        self.mode = mode
        self.tunnel_latency = tunnel_latency
        self.ids: List[RouterId] = []
        self.relayed = 0

    def claims(self, rid: RouterId) -> bool:
        return False

    def start(self, engine: "Engine") -> None:
        pass

    def on_timer(self, engine, name, now) -> None:
        pass

    def on_deliver(self, engine: "Engine", msg: ControlMessage, sender: RouterId, now: float) -> None:
        self.relayed += 1
        engine.schedule(now + self.tunnel_latency, "TUNNEL", self.peer, (msg, sender))

    def data_action(self, dst: RouterId) -> str:
        return "forward" if self.mode == CONTROL_AND_DATA else "drop"


class Engine:
    def __init__(self, params: Optional[ProtocolParams] = None, seed: int = 0):
        self.params = params or ProtocolParams()
        self.seed = seed
        self.rng = random.Random(seed)
        self.nodes: Dict[str, Any] = {}
        self.out_links: Dict[str, Dict[str, GroundLink]] = {}
        self.now = 0.0
        self.records: List[LogRecord] = []
        self.traces: List[TraceResult] = []
        self._queue: List[tuple] = []
        self._seq = itertools.count()
        self._timers: Dict[Tuple[str, str], int] = {}
        self._started = False
        self.events_executed = 0

    # -- topology ---------------------------------------------------------
    def add_node(self, agent) -> None:
        if agent.handle in self.nodes:
            raise EngineError(f"duplicate handle {agent.handle!r}")
        self.nodes[agent.handle] = agent
        self.out_links.setdefault(agent.handle, {})

    def add_link(self, src: str, dst: str, receivable: bool = True, latency: Optional[float] = None) -> None:
        for h in (src, dst):
            if h not in self.nodes:
                raise EngineError(f"link endpoint {h!r} is not a node")
        lat = self.params.default_latency if latency is None else latency
        self.out_links[src][dst] = GroundLink(src, dst, receivable, lat)

    def jam(self, handle: str) -> None:
        """Block every reception at ``handle``; its transmissions still go out."""
        for links in self.out_links.values():
            if handle in links:
                links[handle].receivable = False

    def receivers(self, handle: str) -> List[GroundLink]:
        return [l for _, l in sorted(self.out_links[handle].items()) if l.receivable]

    # -- scheduling -------------------------------------------------------
    def schedule(self, at: float, kind: str, node: str, payload: Any = None) -> int:
        if at < self.now:
            raise EngineError(f"event scheduled in the past ({at} < {self.now})")
        seq = next(self._seq)
        heapq.heappush(self._queue, (at, seq, kind, node, payload))
        return seq

    def set_timer(self, handle: str, name: str, at: float) -> None:
        seq = self.schedule(max(at, self.now), "TIMER", handle, name)
        self._timers[(handle, name)] = seq

    def cancel_timer(self, handle: str, name: str) -> None:
        self._timers.pop((handle, name), None)

    def at(self, t: float, fn: Callable[["Engine"], None]) -> None:
        """Run ``fn(engine)`` at simulation time ``t`` (probes, snapshots)."""
        self.schedule(t, "CALL", "-", fn)

    def log(self, node: str, kind: str, detail: str, **data) -> None:
        self.records.append(LogRecord(self.now, node, kind, detail, data))

    def broadcast(self, handle: str, msgs: Sequence[ControlMessage], sender: RouterId) -> int:
        n = 0
        for link in self.receivers(handle):
            self.schedule(self.now + link.latency, "DELIVER", link.dst, (tuple(msgs), sender, handle))
            n += 1
        return n

    # -- main loop --------------------------------------------------------
    def start(self) -> None:
        if self._started:
            return
        self._started = True
        for h in sorted(self.nodes):
            self.nodes[h].start(self)

    def run(self, until: float) -> None:
        self.start()
        while self._queue and self._queue[0][0] <= until:
            at, seq, kind, node, payload = heapq.heappop(self._queue)
            self.now = at
            if kind == "TIMER":
                if self._timers.get((node, payload)) != seq:
                    continue
                del self._timers[(node, payload)]
                self.events_executed += 1
                self.nodes[node].on_timer(self, payload, at)
            elif kind == "DELIVER":
                self.events_executed += 1
                msgs, sender, src = payload
                agent = self.nodes[node]
                for m in msgs:
                    self.log(node, "RX", f"from={src} sender={sender} {describe(m)}",
                             src=src, sender=sender, msg=m)
                    agent.on_deliver(self, m, sender, at)
            elif kind == "TUNNEL":
                self.events_executed += 1
                msg, sender = payload
                self.log(node, "TUNNEL", f"sender={sender} {describe(msg)}", sender=sender)
                self.broadcast(node, [msg], sender)
            elif kind == "CALL":
                self.events_executed += 1
                payload(self)
        self.now = max(self.now, until)

    def event_log(self) -> List[str]:
        return [r.line() for r in self.records]

    # -- lookups ----------------------------------------------------------
    def honest_handles(self) -> List[str]:
        return sorted(h for h, a in self.nodes.items() if a.kind == "HONEST")

    def router_handles(self) -> List[str]:
        return sorted(h for h, a in self.nodes.items() if a.kind != "WORMHOLE_TAP")

    def handle_for(self, rid_or_handle: str) -> str:
        if rid_or_handle in self.nodes:
            return rid_or_handle
        claim = [h for h in sorted(self.nodes) if self.nodes[h].claims(rid_or_handle)]
        honest = [h for h in claim if self.nodes[h].kind == "HONEST"]
        if honest:
            return honest[0]
        if claim:
            return claim[0]
        raise EngineError(f"unknown router {rid_or_handle!r}")

    def neighbors_claiming(self, handle: str, rid: RouterId) -> List[Tuple[Tuple[str, ...], str]]:
        """Physical next hops from ``handle`` towards identity ``rid``.

        Returns ``(intermediate taps, final handle)`` pairs, direct links first.
        """
        out = []
        for link in self.receivers(handle):
            agent = self.nodes[link.dst]
            if agent.kind == "WORMHOLE_TAP":
                peer = agent.peer
                for l2 in self.receivers(peer):
                    if self.nodes[l2.dst].claims(rid):
                        out.append(((link.dst, peer), l2.dst))
            elif agent.claims(rid):
                out.append(((), link.dst))
        out.sort(key=lambda e: (len(e[0]), e[1]))
        return out

    # -- data plane -------------------------------------------------------
    def trace_data(self, src: str, dst: RouterId, ttl: int = 64) -> TraceResult:
        try:
            h = self.handle_for(src)
        except EngineError:
            raise EngineError(f"trace source {src!r} unknown")
        path = [h]
        seen = {h: 0}
        base = dict(src=src, dst=dst, at=self.now)
        while True:
            agent = self.nodes[h]
            action = agent.data_action(dst)
            if action == "absorb":
                return TraceResult("DELIVERED", h, tuple(path), **base)
            if action == "drop":
                return TraceResult("DROPPED", h, tuple(path), reason="dropped-by-node", **base)
            route = agent.state.routing_table.get(dst)
            if route is None:
                return TraceResult("DROPPED", h, tuple(path), reason="no-route", **base)
            hops = self.neighbors_claiming(h, route.next_hop)
            if not hops:
                return TraceResult("DROPPED", h, tuple(path), reason="no-link", **base)
            taps, nxt = hops[0]
            for t in taps:
                path.append(t)
                if self.nodes[t].data_action(dst) == "drop":
                    return TraceResult("DROPPED", t, tuple(path), reason="tunnel-control-only", **base)
            ttl -= 1
            if nxt in seen:
                cycle = tuple(x for x in path[seen[nxt]:] if self.nodes[x].kind != "WORMHOLE_TAP")
                path.append(nxt)
                return TraceResult("LOOP", nxt, tuple(path), cycle=cycle, **base)
            path.append(nxt)
            if ttl <= 0:
                return TraceResult("TTL_EXPIRED", nxt, tuple(path), **base)
            seen[nxt] = len(path) - 1
            h = nxt

    def probe(self, src: str, dst: RouterId, ttl: int = 64) -> TraceResult:
        res = self.trace_data(src, dst, ttl)
        self.traces.append(res)
        detail = f"src={src} dst={dst} outcome={res.outcome} at={res.node} path={'>'.join(res.path)}"
        if res.reason:
            detail += f" reason={res.reason}"
        self.log("-", "PROBE", detail, trace=res)
        return res

    def next_hop_map(self, dst: RouterId) -> Dict[str, Optional[str]]:
        """handle -> physical next handle towards ``dst`` (None when it stops)."""
        out: Dict[str, Optional[str]] = {}
        for h in self.router_handles():
            agent = self.nodes[h]
            if agent.data_action(dst) != "forward":
                out[h] = None
                continue
            route = agent.state.routing_table.get(dst)
            hops = self.neighbors_claiming(h, route.next_hop) if route else []
            out[h] = hops[0][1] if hops else None
        return out

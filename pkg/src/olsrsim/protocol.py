"""OLSRv2 router state machine.

Every operation takes a :class:`RouterState` and mutates it in place; the
ones that consume messages or time return a :class:`StateDelta` that tells
the caller which recalculations and triggered messages are due.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, FrozenSet, List, Mapping, Optional, Set, Tuple

from .messages import (
    HelloMessage,
    LinkStatus,
    NeighborEntry,
    RouterId,
    TcMessage,
    ValiditySchedule,
)
from .params import ProtocolParams

log = logging.getLogger(__name__)

WILL_NEVER = 0
WILL_DEFAULT = 3
WILL_ALWAYS = 7
MAX_HOP_LIMIT = 255


@dataclass
class NeighborRecord:
    neighbor: RouterId
    status: LinkStatus
    willingness: int
    expiry: float
    expected_interval: float
    is_mpr: bool = False
    is_mpr_selector: bool = False
    link_quality: float = 1.0
    # Start of the current expected-message slot and its miss deadline.
    slot_ref: float = 0.0
    lq_deadline: float = float("inf")
    # SYMMETRIC holds until this time unless refreshed by a HELLO listing us.
    sym_expiry: float = float("-inf")


@dataclass
class TwoHopRecord:
    via_neighbor: RouterId
    target: RouterId
    expiry: float


@dataclass
class TopologyRecord:
    advertiser: RouterId
    destination: RouterId
    ansn_at_receipt: int
    expiry: float


@dataclass
class DuplicateRecord:
    originator: RouterId
    msg_seq_num: int
    expiry: float


@dataclass(frozen=True)
class Route:
    next_hop: RouterId
    distance: int
    via_lsa: bool = False


@dataclass
class Counters:
    mpr_recalcs: int = 0
    route_recalcs: int = 0
    hellos_sent: int = 0
    tcs_sent: int = 0
    tcs_forwarded: int = 0


@dataclass
class StateDelta:
    neighborhood_changed: bool = False
    mpr_selector_changed: bool = False
    topology_changed: bool = False
    link_status_changed: bool = False

    def __or__(self, other: "StateDelta") -> "StateDelta":
        return StateDelta(
            self.neighborhood_changed or other.neighborhood_changed,
            self.mpr_selector_changed or other.mpr_selector_changed,
            self.topology_changed or other.topology_changed,
            self.link_status_changed or other.link_status_changed,
        )

    def __bool__(self) -> bool:
        return (
            self.neighborhood_changed
            or self.mpr_selector_changed
            or self.topology_changed
            or self.link_status_changed
        )


@dataclass
class RouterState:
    self_id: RouterId
    params: ProtocolParams = field(default_factory=ProtocolParams)
    willingness: int = WILL_DEFAULT
    neighbor_set: Dict[RouterId, NeighborRecord] = field(default_factory=dict)
    two_hop_set: Dict[Tuple[RouterId, RouterId], TwoHopRecord] = field(default_factory=dict)
    topology_set: Dict[Tuple[RouterId, RouterId], TopologyRecord] = field(default_factory=dict)
    # Latest accepted ANSN per advertiser. Kept for the whole run: ANSN
    # wraparound is not modelled, so a jumped value is never forgotten.
    ansn_table: Dict[RouterId, int] = field(default_factory=dict)
    duplicate_set: Dict[Tuple[RouterId, int], DuplicateRecord] = field(default_factory=dict)
    forwarded_set: Dict[Tuple[RouterId, int], DuplicateRecord] = field(default_factory=dict)
    ansn: int = 0
    advertised_set: FrozenSet[RouterId] = frozenset()
    tc_prev_empty: bool = True
    routing_table: Dict[RouterId, Route] = field(default_factory=dict)
    next_msg_seq_num: int = 0
    next_hello_seq_num: int = 0
    pending_queue: List = field(default_factory=list)
    counters: Counters = field(default_factory=Counters)
    events: Deque[str] = field(default_factory=lambda: deque(maxlen=64))

    # -- derived views -------------------------------------------------
    def is_usable(self, rec: NeighborRecord) -> bool:
        """SYMMETRIC and not excluded by the link-quality estimator."""
        return (
            rec.status is LinkStatus.SYMMETRIC
            and rec.link_quality >= self.params.lq_threshold
        )

    def symmetric_neighbors(self) -> Set[RouterId]:
        return {n for n, r in self.neighbor_set.items() if self.is_usable(r)}

    def mpr_set(self) -> Set[RouterId]:
        return {n for n, r in self.neighbor_set.items() if r.is_mpr}

    def mpr_selectors(self) -> Set[RouterId]:
        return {
            n for n, r in self.neighbor_set.items()
            if r.is_mpr_selector and self.is_usable(r)
        }

    def two_hop_targets(self) -> Dict[RouterId, Set[RouterId]]:
        """via-neighbor -> targets, restricted to usable via-neighbors."""
        sym = self.symmetric_neighbors()
        out: Dict[RouterId, Set[RouterId]] = {}
        for (via, target) in self.two_hop_set:
            if via in sym and target != self.self_id:
                out.setdefault(via, set()).add(target)
        return out

    def neighborhood_signature(self):
        sym = self.symmetric_neighbors()
        return (
            frozenset((n, self.neighbor_set[n].willingness) for n in sym),
            frozenset(
                k for k in self.two_hop_set if k[0] in sym and k[1] != self.self_id
            ),
        )

    def next_deadline(self) -> float:
        """Earliest time at which expire() has something to do."""
        t = float("inf")
        for r in self.neighbor_set.values():
            t = min(t, r.expiry)
            if r.link_quality >= self.params.lq_threshold:
                t = min(t, r.lq_deadline)
        # duplicate tables are checked lazily against their expiry
        for table in (self.two_hop_set, self.topology_set):
            for r in table.values():
                t = min(t, r.expiry)
        return t


# ---------------------------------------------------------------------------
# link quality


def ewma_quality(quality: float, on_time: bool, alpha: float) -> float:
    return (1 - alpha) * quality + alpha * (1.0 if on_time else 0.0)


def update_link_quality(
    rec: NeighborRecord,
    expected_interval: float,
    actual_gap: float,
    params: ProtocolParams,
) -> float:
    on_time = actual_gap <= params.lq_grace * expected_interval
    rec.link_quality = ewma_quality(rec.link_quality, on_time, params.lq_alpha)
    return rec.link_quality


def _catch_up_misses(rec: NeighborRecord, now: float, params: ProtocolParams) -> int:
    """Charge one miss per expected slot whose deadline has passed."""
    misses = 0
    if rec.expected_interval <= 0:
        return 0
    while rec.lq_deadline <= now:
        update_link_quality(rec, rec.expected_interval, float("inf"), params)
        rec.slot_ref += rec.expected_interval
        rec.lq_deadline = rec.slot_ref + params.lq_grace * rec.expected_interval
        misses += 1
    return misses


# ---------------------------------------------------------------------------
# HELLO


def generate_hello(state: RouterState, now: float) -> HelloMessage:
    entries = []
    for nid in sorted(state.neighbor_set):
        rec = state.neighbor_set[nid]
        if rec.status is LinkStatus.LOST:
            status = LinkStatus.LOST
        elif state.is_usable(rec):
            status = LinkStatus.SYMMETRIC
        else:
            status = LinkStatus.HEARD
        entries.append(
            NeighborEntry(nid, status, rec.is_mpr and status is LinkStatus.SYMMETRIC)
        )
    msg = HelloMessage(
        originator=state.self_id,
        msg_seq_num=state.next_hello_seq_num,
        willingness=state.willingness,
        interval_time=state.params.hello_interval,
        validity_time=ValiditySchedule.constant(state.params.hello_validity),
        neighbor_entries=tuple(entries),
    )
    state.next_hello_seq_num += 1
    state.counters.hellos_sent += 1
    return msg


def process_hello(state: RouterState, msg: HelloMessage, now: float) -> StateDelta:
    if msg.originator == state.self_id:
        return StateDelta()
    params = state.params
    before_sig = state.neighborhood_signature()
    before_sel = state.mpr_selectors()
    before_status = {n: (r.status, state.is_usable(r)) for n, r in state.neighbor_set.items()}

    rec = state.neighbor_set.get(msg.originator)
    if rec is None:
        rec = NeighborRecord(
            neighbor=msg.originator,
            status=LinkStatus.HEARD,
            willingness=msg.willingness,
            expiry=now,
            expected_interval=msg.interval_time,
            slot_ref=now,
        )
        state.neighbor_set[msg.originator] = rec
    else:
        _catch_up_misses(rec, now, params)
        update_link_quality(rec, rec.expected_interval, now - rec.slot_ref, params)
    rec.expected_interval = msg.interval_time
    rec.slot_ref = now
    rec.lq_deadline = now + params.lq_grace * msg.interval_time
    rec.willingness = msg.willingness
    validity = msg.validity_time.validity_for(1)
    rec.expiry = now + validity

    # HELLOs are additive: one that does not mention us leaves an
    # established SYMMETRIC link alone until its symmetric time runs out.
    mine = msg.entry_for(state.self_id)
    if mine is not None and mine.status is LinkStatus.LOST:
        rec.status = LinkStatus.LOST
        rec.sym_expiry = float("-inf")
    elif mine is not None:
        rec.status = LinkStatus.SYMMETRIC
        rec.sym_expiry = now + validity
    elif rec.status is LinkStatus.SYMMETRIC and rec.sym_expiry <= now:
        rec.status = LinkStatus.HEARD
    if mine is not None:
        rec.is_mpr_selector = mine.mpr and rec.status is LinkStatus.SYMMETRIC
    elif rec.status is not LinkStatus.SYMMETRIC:
        rec.is_mpr_selector = False

    if state.is_usable(rec):
        for e in msg.neighbor_entries:
            if e.neighbor == state.self_id:
                continue
            key = (msg.originator, e.neighbor)
            if e.status is LinkStatus.SYMMETRIC:
                state.two_hop_set[key] = TwoHopRecord(msg.originator, e.neighbor, now + validity)
            else:
                state.two_hop_set.pop(key, None)
    else:
        rec.is_mpr = False
        _drop_two_hop_via(state, msg.originator)

    after_status = {n: (r.status, state.is_usable(r)) for n, r in state.neighbor_set.items()}
    return StateDelta(
        neighborhood_changed=state.neighborhood_signature() != before_sig,
        mpr_selector_changed=state.mpr_selectors() != before_sel,
        link_status_changed=after_status != before_status,
    )


def _drop_two_hop_via(state: RouterState, via: RouterId) -> None:
    for key in [k for k in state.two_hop_set if k[0] == via]:
        del state.two_hop_set[key]


# ---------------------------------------------------------------------------
# MPR selection


def greedy_mpr(
    willingness: Mapping[RouterId, int],
    coverage: Mapping[RouterId, Set[RouterId]],
    targets: Set[RouterId],
) -> Tuple[Set[RouterId], Set[RouterId]]:
    """Greedy MPR selection over explicit inputs.

    Returns ``(mprs, uncoverable)``. Neighbors with willingness 7 are always
    selected; the rest are picked one at a time by most uncovered targets,
    then higher willingness, then smallest id.
    """
    candidates = {n for n, w in willingness.items() if w > WILL_NEVER}
    coverable = set()
    for n in candidates:
        coverable |= coverage.get(n, set()) & targets
    uncoverable = targets - coverable

    mprs = {n for n in candidates if willingness[n] == WILL_ALWAYS}
    uncovered = set(coverable)
    for n in mprs:
        uncovered -= coverage.get(n, set())

    while uncovered:
        best = min(
            (n for n in candidates - mprs if coverage.get(n, set()) & uncovered),
            key=lambda n: (-len(coverage[n] & uncovered), -willingness[n], n),
        )
        mprs.add(best)
        uncovered -= coverage[best]
    return mprs, uncoverable


def strict_two_hop_targets(state: RouterState) -> Set[RouterId]:
    sym = state.symmetric_neighbors()
    out = set()
    for targets in state.two_hop_targets().values():
        out |= targets
    return out - sym - {state.self_id}


def select_mprs(state: RouterState) -> Set[RouterId]:
    sym = state.symmetric_neighbors()
    willingness = {n: state.neighbor_set[n].willingness for n in sym}
    coverage = state.two_hop_targets()
    mprs, uncoverable = greedy_mpr(willingness, coverage, strict_two_hop_targets(state))
    for t in sorted(uncoverable):
        state.events.append(f"uncoverable 2-hop target {t}")
        log.debug("%s: 2-hop target %s has no willing cover", state.self_id, t)
    for n, rec in state.neighbor_set.items():
        rec.is_mpr = n in mprs
    state.counters.mpr_recalcs += 1
    return mprs


# ---------------------------------------------------------------------------
# TC


def update_advertised_set(state: RouterState) -> bool:
    """Advertise exactly the MPR selectors; bump the ANSN on change."""
    new = frozenset(state.mpr_selectors())
    if new == state.advertised_set:
        return False
    state.advertised_set = new
    state.ansn += 1
    return True


def generate_tc(state: RouterState, now: float) -> Optional[TcMessage]:
    empty = not state.advertised_set
    if empty and state.tc_prev_empty:
        return None
    state.tc_prev_empty = empty
    sched = state.params.tc_validity_schedule
    validity = (
        ValiditySchedule.of(sched) if sched
        else ValiditySchedule.constant(state.params.tc_validity)
    )
    msg = TcMessage(
        originator=state.self_id,
        msg_seq_num=state.next_msg_seq_num,
        ansn=state.ansn,
        hop_count=0,
        hop_limit=MAX_HOP_LIMIT,
        interval_time=state.params.tc_interval,
        validity_time=validity,
        advertised_neighbors=tuple(sorted(state.advertised_set)),
    )
    state.next_msg_seq_num += 1
    state.counters.tcs_sent += 1
    return msg


def check_and_record_duplicate(
    state: RouterState, originator: RouterId, seq: int, now: float
) -> bool:
    return _check_and_record(state.duplicate_set, state, originator, seq, now)


def check_and_record_forward(
    state: RouterState, originator: RouterId, seq: int, now: float
) -> bool:
    return _check_and_record(state.forwarded_set, state, originator, seq, now)


def is_forwarded(state: RouterState, originator: RouterId, seq: int) -> bool:
    return (originator, seq) in state.forwarded_set


def _check_and_record(table, state, originator, seq, now) -> bool:
    key = (originator, seq)
    rec = table.get(key)
    if rec is not None and rec.expiry > now:
        return False
    table[key] = DuplicateRecord(originator, seq, now + state.params.dup_hold_time)
    return True


def process_tc(
    state: RouterState, msg: TcMessage, receive_hop_count: int, now: float
) -> Tuple[StateDelta, str]:
    """Apply a TC's content.

    ``receive_hop_count`` is the hop distance to the originator as seen by
    this router (1 for a TC heard straight from its originator). The
    returned outcome is ``"own"``, ``"stale"`` or ``"applied"``.
    """
    if msg.originator == state.self_id:
        return StateDelta(), "own"
    stored = state.ansn_table.get(msg.originator)
    if stored is not None and msg.ansn < stored:
        return StateDelta(), "stale"
    state.ansn_table[msg.originator] = msg.ansn
    expiry = now + msg.validity_time.validity_for(receive_hop_count)

    old = {d for (a, d) in state.topology_set if a == msg.originator}
    for d in old:
        del state.topology_set[(msg.originator, d)]
    for d in msg.advertised_neighbors:
        state.topology_set[(msg.originator, d)] = TopologyRecord(
            msg.originator, d, msg.ansn, expiry
        )
    new = set(msg.advertised_neighbors)
    return StateDelta(topology_changed=old != new), "applied"


# ---------------------------------------------------------------------------
# routing


def compute_routing_table(state: RouterState) -> Dict[RouterId, Route]:
    """Unit-cost shortest paths over ND and LSA links.

    Equal-length ties prefer paths built only from ND links, then the
    smallest next-hop id. LSA links are undirected and links touching
    this router are taken from ND only.
    """
    me = state.self_id
    sym = state.symmetric_neighbors()
    # edge -> True when only LSA-derived
    adj: Dict[RouterId, Dict[RouterId, bool]] = {}

    def add(u, v, lsa):
        if u == v:
            return
        for a, b in ((u, v), (v, u)):
            prev = adj.setdefault(a, {}).get(b)
            adj[a][b] = lsa if prev is None else (prev and lsa)

    for n in sym:
        add(me, n, False)
    for via, targets in state.two_hop_targets().items():
        for t in targets:
            add(via, t, False)
    for (a, d) in state.topology_set:
        if me in (a, d):
            continue
        add(a, d, True)

    dist = {me: 0}
    label: Dict[RouterId, Tuple[bool, RouterId]] = {}
    frontier = []
    for n in sorted(sym):
        dist[n] = 1
        label[n] = (False, n)
        frontier.append(n)
    k = 1
    while frontier:
        nxt: Dict[RouterId, Tuple[bool, RouterId]] = {}
        for v in frontier:
            lsa_v, nh = label[v]
            for w, edge_lsa in adj.get(v, {}).items():
                if w in dist:
                    continue
                cand = (lsa_v or edge_lsa, nh)
                if w not in nxt or cand < nxt[w]:
                    nxt[w] = cand
        k += 1
        for w, lab in nxt.items():
            dist[w] = k
            label[w] = lab
        frontier = sorted(nxt)

    table = {
        d: Route(next_hop=label[d][1], distance=dist[d], via_lsa=label[d][0])
        for d in dist if d != me
    }
    state.routing_table = table
    state.counters.route_recalcs += 1
    return table


# ---------------------------------------------------------------------------
# expiry


def expire(state: RouterState, now: float) -> StateDelta:
    before_sig = state.neighborhood_signature()
    before_sel = state.mpr_selectors()
    before_status = {n: (r.status, state.is_usable(r)) for n, r in state.neighbor_set.items()}

    for nid in [n for n, r in state.neighbor_set.items() if r.expiry <= now]:
        del state.neighbor_set[nid]
        _drop_two_hop_via(state, nid)
    for rec in state.neighbor_set.values():
        if rec.status is LinkStatus.SYMMETRIC and rec.sym_expiry <= now:
            rec.status = LinkStatus.HEARD
            rec.is_mpr_selector = False
            _drop_two_hop_via(state, rec.neighbor)
        if rec.link_quality >= state.params.lq_threshold:
            _catch_up_misses(rec, now, state.params)
        if not state.is_usable(rec):
            rec.is_mpr = False
    for key in [k for k, r in state.two_hop_set.items() if r.expiry <= now]:
        del state.two_hop_set[key]
    topo_dead = [k for k, r in state.topology_set.items() if r.expiry <= now]
    for key in topo_dead:
        del state.topology_set[key]
    for table in (state.duplicate_set, state.forwarded_set):
        for key in [k for k, r in table.items() if r.expiry <= now]:
            del table[key]

    after_status = {n: (r.status, state.is_usable(r)) for n, r in state.neighbor_set.items()}
    return StateDelta(
        neighborhood_changed=state.neighborhood_signature() != before_sig,
        mpr_selector_changed=state.mpr_selectors() != before_sel,
        topology_changed=bool(topo_dead),
        link_status_changed=after_status != before_status,
    )


def perceived_edges(state: RouterState) -> Set[Tuple[RouterId, RouterId]]:
    """Undirected edges of this router's topology map (ND and LSA)."""
    me = state.self_id
    edges = {_edge(me, n) for n in state.symmetric_neighbors()}
    for via, targets in state.two_hop_targets().items():
        edges |= {_edge(via, t) for t in targets}
    edges |= {_edge(a, d) for (a, d) in state.topology_set if a != d}
    return edges


def advertised_edges(state: RouterState) -> Set[Tuple[RouterId, RouterId]]:
    """Link-state layer only: received TC links plus this router's own."""
    edges = {_edge(a, d) for (a, d) in state.topology_set if a != d}
    edges |= {_edge(state.self_id, n) for n in state.advertised_set}
    return edges


def _edge(u: RouterId, v: RouterId) -> Tuple[RouterId, RouterId]:
    return (u, v) if u <= v else (v, u)

"""Control message types: HELLO (link-local) and TC (flooded)."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Tuple, Union

# Router identifiers are plain strings; string order is the total order
# used for every deterministic tie-break.
RouterId = str


class LinkStatus(enum.Enum):
    HEARD = "HEARD"
    SYMMETRIC = "SYM"
    LOST = "LOST"


@dataclass(frozen=True)
class ValiditySchedule:
    """Validity time as a function of hop distance.

    ``entries`` is an ordered tuple of ``(up_to_hops, seconds)``; the last
    entry also applies to every greater distance.
    """

    entries: Tuple[Tuple[int, float], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("validity schedule needs at least one entry")
        hops = [h for h, _ in self.entries]
        if any(b <= a for a, b in zip(hops, hops[1:])):
            raise ValueError("up_to_hops must be strictly increasing")
        if any(v <= 0 for _, v in self.entries):
            raise ValueError("validity values must be positive")

    @classmethod
    def constant(cls, seconds: float) -> "ValiditySchedule":
        return cls(((255, float(seconds)),))

    @classmethod
    def of(cls, pairs: Iterable[Tuple[int, float]]) -> "ValiditySchedule":
        return cls(tuple((int(h), float(v)) for h, v in pairs))

    def validity_for(self, hops: int) -> float:
        for up_to, seconds in self.entries:
            if hops <= up_to:
                return seconds
        return self.entries[-1][1]


@dataclass(frozen=True)
class NeighborEntry:
    neighbor: RouterId
    status: LinkStatus
    mpr: bool = False


@dataclass(frozen=True)
class HelloMessage:
    originator: RouterId
    msg_seq_num: int
    willingness: int
    interval_time: float
    validity_time: ValiditySchedule
    neighbor_entries: Tuple[NeighborEntry, ...] = ()

    kind = "HELLO"

    def entry_for(self, rid: RouterId):
        for e in self.neighbor_entries:
            if e.neighbor == rid:
                return e
        return None


@dataclass(frozen=True)
class TcMessage:
    originator: RouterId
    msg_seq_num: int
    ansn: int
    hop_count: int
    hop_limit: int
    interval_time: float
    validity_time: ValiditySchedule
    advertised_neighbors: Tuple[RouterId, ...] = field(default=())

    kind = "TC"

    @property
    def key(self) -> Tuple[RouterId, int]:
        return (self.originator, self.msg_seq_num)


ControlMessage = Union[HelloMessage, TcMessage]


def describe(msg: ControlMessage) -> str:
    """Compact, stable text rendering used by the event log."""
    if isinstance(msg, HelloMessage):
        ents = ",".join(
            f"{e.neighbor}:{e.status.value}{'*' if e.mpr else ''}"
            for e in msg.neighbor_entries
        )
        return (
            f"HELLO orig={msg.originator} seq={msg.msg_seq_num} "
            f"will={msg.willingness} itime={msg.interval_time:g} "
            f"vtime={msg.validity_time.validity_for(1):g} nbrs=[{ents}]"
        )
    adv = ",".join(msg.advertised_neighbors)
    return (
        f"TC orig={msg.originator} seq={msg.msg_seq_num} ansn={msg.ansn} "
        f"hc={msg.hop_count} hl={msg.hop_limit} adv=[{adv}]"
    )

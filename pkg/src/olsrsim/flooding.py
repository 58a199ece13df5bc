"""MPR flooding: forwarding rule, jittered scheduling and piggybacking."""
from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass
from typing import List, Tuple

from .messages import RouterId, TcMessage
from .protocol import MAX_HOP_LIMIT, RouterState


@dataclass
class ForwardJob:
    message: TcMessage
    due: float
    received_from: RouterId
    received_at: float
    forwarder: RouterId = ""


def forward_decision(state: RouterState, msg: TcMessage, sender: RouterId) -> bool:
    return (
        sender in state.mpr_selectors()
        and msg.hop_limit > 1
        and msg.hop_count < MAX_HOP_LIMIT
        and msg.originator != state.self_id
    )


def forwarded_copy(msg: TcMessage) -> TcMessage:
    return dataclasses.replace(msg, hop_count=msg.hop_count + 1, hop_limit=msg.hop_limit - 1)


def schedule_forward(
    queue: List[ForwardJob],
    msg: TcMessage,
    now: float,
    rng: random.Random,
    max_jitter: float,
    sender: RouterId = "",
    forwarder: RouterId = "",
) -> ForwardJob:
    job = ForwardJob(
        message=forwarded_copy(msg),
        due=now + rng.uniform(0.0, max_jitter),
        received_from=sender,
        received_at=now,
        forwarder=forwarder,
    )
    queue.append(job)
    return job


def earliest_due(queue: List[ForwardJob]) -> float:
    return min((j.due for j in queue), default=float("inf"))


def flush_piggyback(
    queue: List[ForwardJob], now: float
) -> Tuple[List[TcMessage], List[float]]:
    """Send every queued job now, due or not, as one transmission.

    Returns the messages and each job's effective jitter (send time minus
    receipt time). The queue is emptied.
    """
    msgs = [j.message for j in queue]
    jitters = [now - j.received_at for j in queue]
    queue.clear()
    return msgs, jitters

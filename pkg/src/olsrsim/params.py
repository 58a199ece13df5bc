"""Protocol and estimator parameters shared by every router in a run."""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Optional, Tuple


@dataclass(frozen=True)
class ProtocolParams:
    hello_interval: float = 2.0
    tc_interval: float = 5.0
    validity_multiplier: float = 3.0
    min_interval_divisor: float = 4.0
    max_jitter: Optional[float] = None  # None -> hello_interval / 4
    dup_hold_time: float = 30.0
    lq_alpha: float = 0.3
    lq_grace: float = 1.5
    lq_threshold: float = 0.3
    # Distance-dependent TC validity as [(up_to_hops, seconds), ...].
    # None -> a single entry of validity_multiplier * tc_interval.
    tc_validity_schedule: Optional[Tuple[Tuple[int, float], ...]] = None
    default_latency: float = 0.001

    def __post_init__(self):
        if self.max_jitter is None:
            object.__setattr__(self, "max_jitter", self.hello_interval / 4)
        if self.tc_validity_schedule is not None:
            sched = tuple((int(h), float(v)) for h, v in self.tc_validity_schedule)
            object.__setattr__(self, "tc_validity_schedule", sched)

    @property
    def min_hello_interval(self) -> float:
        return self.hello_interval / self.min_interval_divisor

    @property
    def min_tc_interval(self) -> float:
        return self.tc_interval / self.min_interval_divisor

    @property
    def hello_validity(self) -> float:
        return self.hello_interval * self.validity_multiplier

    @property
    def tc_validity(self) -> float:
        return self.tc_interval * self.validity_multiplier

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        if d["tc_validity_schedule"] is not None:
            d["tc_validity_schedule"] = [list(e) for e in d["tc_validity_schedule"]]
        return d

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "ProtocolParams":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise KeyError(f"unknown parameter(s): {sorted(unknown)}")
        return cls(**d)


def field_names() -> List[str]:
    return [f.name for f in fields(ProtocolParams)]

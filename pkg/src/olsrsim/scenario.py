"""Scenario files: JSON description of a topology, its attackers, probes and
the assertions a run must satisfy.

``load_scenario`` validates everything before a simulation starts and
reports problems by field path (``nodes[3].attack.params.jump``) plus the
closest line in the source file.
"""
from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .adversary import CATALOG, AttackConfig, AttackConfigError
from .messages import ValiditySchedule
from .metrics import METRICS, OPS
from .params import ProtocolParams, field_names

HONEST = "HONEST"
ADVERSARY = "ADVERSARY"
WORMHOLE_TAP = "WORMHOLE_TAP"
KINDS = (HONEST, ADVERSARY, WORMHOLE_TAP)


class ScenarioError(ValueError):
    def __init__(self, path: str, message: str, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = f"{path}" + (f" (line {line})" if line else "")
        super().__init__(f"{where}: {message}")


@dataclass
class NodeSpec:
    handle: str
    ids: List[str]
    kind: str = HONEST
    willingness: int = 3
    attack: Optional[AttackConfig] = None

    def to_dict(self) -> dict:
        d: Dict[str, Any] = {"handle": self.handle, "ids": list(self.ids), "kind": self.kind,
                             "willingness": self.willingness}
        if self.attack is not None:
            d["attack"] = {"type": self.attack.attack, "params": copy.deepcopy(self.attack.params),
                           "enabled": self.attack.enabled}
        return d


@dataclass
class LinkSpec:
    src: str
    dst: str
    receivable: bool = True
    latency: Optional[float] = None
    bidirectional: bool = True

    def to_dict(self) -> dict:
        return {"from": self.src, "to": self.dst, "receivable": self.receivable,
                "latency": self.latency, "bidirectional": self.bidirectional}


@dataclass
class ProbeSpec:
    at: float
    src: str
    dst: str
    ttl: int = 64

    def to_dict(self) -> dict:
        return {"at": self.at, "src": self.src, "dst": self.dst, "ttl": self.ttl}


@dataclass
class AssertionSpec:
    id: str
    metric: str
    selector: Dict[str, Any] = field(default_factory=dict)
    op: str = "eq"
    expected: Any = None
    tolerance: float = 0.0

    def to_dict(self) -> dict:
        return {"id": self.id, "metric": self.metric, "selector": copy.deepcopy(self.selector),
                "op": self.op, "expected": copy.deepcopy(self.expected), "tolerance": self.tolerance}


@dataclass
class ScenarioSpec:
    name: str
    seed: int = 1
    duration: float = 60.0
    params: ProtocolParams = field(default_factory=ProtocolParams)
    nodes: List[NodeSpec] = field(default_factory=list)
    links: List[LinkSpec] = field(default_factory=list)
    probes: List[ProbeSpec] = field(default_factory=list)
    assertions: List[AssertionSpec] = field(default_factory=list)
    description: str = ""
    family: str = ""

    # -- helpers ---------------------------------------------------------
    def node(self, handle: str) -> NodeSpec:
        for n in self.nodes:
            if n.handle == handle:
                return n
        raise KeyError(handle)

    @property
    def has_attack(self) -> bool:
        return any(n.attack is not None and n.attack.enabled for n in self.nodes)

    def without_attacks(self) -> "ScenarioSpec":
        """Same topology and seed with every attack switched off."""
        out = copy.deepcopy(self)
        for n in out.nodes:
            if n.attack is not None:
                n.attack.enabled = False
        return out

    def without_adversaries(self) -> "ScenarioSpec":
        """Same scenario with attacker nodes and their links removed."""
        out = copy.deepcopy(self)
        bad = {n.handle for n in out.nodes if n.attack is not None}
        out.nodes = [n for n in out.nodes if n.handle not in bad]
        out.links = [l for l in out.links if l.src not in bad and l.dst not in bad]
        out.probes = [p for p in out.probes if p.src not in bad]
        return out

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "family": self.family,
            "seed": self.seed,
            "duration": self.duration,
            "params": self.params.to_dict(),
            "nodes": [n.to_dict() for n in self.nodes],
            "links": [l.to_dict() for l in self.links],
            "probes": [p.to_dict() for p in self.probes],
            "assertions": [a.to_dict() for a in self.assertions],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


# ---------------------------------------------------------------------------
# parsing


def _need(d: dict, key: str, path: str):
    if key not in d:
        raise ScenarioError(f"{path}.{key}" if path else key, "required field missing")
    return d[key]


def _num(v, path, minimum=None, strict=False, integer=False):
    ok = isinstance(v, int) if integer else isinstance(v, (int, float))
    if isinstance(v, bool) or not ok:
        raise ScenarioError(path, f"expected {'an integer' if integer else 'a number'}, got {v!r}")
    if minimum is not None and (v <= minimum if strict else v < minimum):
        raise ScenarioError(path, f"must be {'>' if strict else '>='} {minimum}")
    return v


def _check_keys(d: dict, allowed, path: str):
    if not isinstance(d, dict):
        raise ScenarioError(path or "<root>", "expected an object")
    for k in d:
        if k not in allowed:
            raise ScenarioError(f"{path}.{k}" if path else k, "unknown field")


def parse_params(d: dict) -> ProtocolParams:
    _check_keys(d, field_names(), "params")
    for k, v in d.items():
        if k == "tc_validity_schedule":
            if v is None:
                continue
            try:
                ValiditySchedule.of([tuple(e) for e in v])
            except (TypeError, ValueError) as e:
                raise ScenarioError("params.tc_validity_schedule", str(e))
        elif k == "max_jitter" and v is None:
            continue
        else:
            _num(v, f"params.{k}", 0, strict=k not in ("max_jitter", "default_latency"))
    return ProtocolParams.from_dict(d)


def parse_scenario(data: dict) -> ScenarioSpec:
    _check_keys(data, {"name", "description", "family", "seed", "duration", "params",
                       "nodes", "links", "probes", "assertions"}, "")
    name = _need(data, "name", "")
    if not isinstance(name, str) or not name:
        raise ScenarioError("name", "must be a non-empty string")
    seed = _num(data.get("seed", 1), "seed", 0, integer=True)
    params = parse_params(data.get("params", {}))
    duration = _num(data.get("duration", 60.0), "duration", 0, strict=True)

    nodes: List[NodeSpec] = []
    for i, nd in enumerate(data.get("nodes", [])):
        path = f"nodes[{i}]"
        _check_keys(nd, {"handle", "ids", "kind", "willingness", "attack"}, path)
        handle = _need(nd, "handle", path)
        if not isinstance(handle, str) or not handle:
            raise ScenarioError(f"{path}.handle", "must be a non-empty string")
        ids = nd.get("ids", [handle])
        if not isinstance(ids, list) or not all(isinstance(x, str) and x for x in ids):
            raise ScenarioError(f"{path}.ids", "must be a list of non-empty strings")
        will = _num(nd.get("willingness", 3), f"{path}.willingness", 0, integer=True)
        if will > 7:
            raise ScenarioError(f"{path}.willingness", "must be in 0..7")
        attack = None
        if "attack" in nd and nd["attack"] is not None:
            ad = nd["attack"]
            _check_keys(ad, {"type", "params", "enabled"}, f"{path}.attack")
            atype = _need(ad, "type", f"{path}.attack")
            attack = AttackConfig(atype, dict(ad.get("params", {})), bool(ad.get("enabled", True)))
            try:
                attack.validate()
            except AttackConfigError as e:
                field_, _, msg = str(e).partition(": ")
                raise ScenarioError(f"{path}.{field_}", msg)
        default_kind = HONEST
        if attack is not None:
            default_kind = WORMHOLE_TAP if attack.attack == "A9" else ADVERSARY
        kind = nd.get("kind", default_kind)
        if kind not in KINDS:
            raise ScenarioError(f"{path}.kind", f"must be one of {', '.join(KINDS)}")
        if kind != default_kind:
            raise ScenarioError(f"{path}.kind", f"{kind} does not match the attack configuration")
        if kind == HONEST and len(ids) != 1:
            raise ScenarioError(f"{path}.ids", "an honest node claims exactly one id")
        nodes.append(NodeSpec(handle, list(ids), kind, will, attack))

    handles = {}
    for i, n in enumerate(nodes):
        if n.handle in handles:
            raise ScenarioError(f"nodes[{i}].handle", f"duplicate handle {n.handle!r}")
        handles[n.handle] = n
    for i, n in enumerate(nodes):
        if n.kind == WORMHOLE_TAP:
            peer = n.attack.params["peer"]
            p = handles.get(peer)
            if p is None or p.kind != WORMHOLE_TAP or p.attack.params.get("peer") != n.handle:
                raise ScenarioError(f"nodes[{i}].attack.params.peer", "wormhole peer must be a tap pointing back")

    links: List[LinkSpec] = []
    for i, ld in enumerate(data.get("links", [])):
        path = f"links[{i}]"
        if isinstance(ld, list):
            if len(ld) != 2:
                raise ScenarioError(path, "shorthand link must be [from, to]")
            ld = {"from": ld[0], "to": ld[1]}
        _check_keys(ld, {"from", "to", "receivable", "latency", "bidirectional"}, path)
        src, dst = _need(ld, "from", path), _need(ld, "to", path)
        for key, h in (("from", src), ("to", dst)):
            if h not in handles:
                raise ScenarioError(f"{path}.{key}", f"unknown node {h!r}")
        if src == dst:
            raise ScenarioError(path, "self-link")
        lat = ld.get("latency")
        if lat is not None:
            _num(lat, f"{path}.latency", 0)
        links.append(LinkSpec(src, dst, bool(ld.get("receivable", True)), lat,
                              bool(ld.get("bidirectional", True))))

    known_ids = set(handles)
    for n in nodes:
        known_ids |= set(n.ids)
    probes: List[ProbeSpec] = []
    for i, pd in enumerate(data.get("probes", [])):
        path = f"probes[{i}]"
        _check_keys(pd, {"at", "src", "dst", "ttl"}, path)
        at = _num(_need(pd, "at", path), f"{path}.at", 0)
        if at > duration:
            raise ScenarioError(f"{path}.at", "probe after the end of the run")
        src = _need(pd, "src", path)
        if src not in known_ids:
            raise ScenarioError(f"{path}.src", f"unknown router {src!r}")
        dst = _need(pd, "dst", path)
        ttl = _num(pd.get("ttl", 64), f"{path}.ttl", 1, integer=True)
        probes.append(ProbeSpec(float(at), src, dst, ttl))

    assertions: List[AssertionSpec] = []
    seen_ids = set()
    for i, ad in enumerate(data.get("assertions", [])):
        path = f"assertions[{i}]"
        _check_keys(ad, {"id", "metric", "selector", "op", "expected", "tolerance"}, path)
        aid = _need(ad, "id", path)
        if aid in seen_ids:
            raise ScenarioError(f"{path}.id", f"duplicate assertion id {aid!r}")
        seen_ids.add(aid)
        metric = _need(ad, "metric", path)
        if metric not in METRICS:
            raise ScenarioError(f"{path}.metric", f"unknown metric {metric!r}")
        op = ad.get("op", "eq")
        if op not in OPS:
            raise ScenarioError(f"{path}.op", f"unknown op {op!r}")
        sel = ad.get("selector", {})
        if not isinstance(sel, dict):
            raise ScenarioError(f"{path}.selector", "expected an object")
        tol = _num(ad.get("tolerance", 0.0), f"{path}.tolerance", 0)
        assertions.append(AssertionSpec(aid, metric, dict(sel), op, ad.get("expected"), tol))

    warmup = 3.0 * params.tc_interval
    if nodes and duration <= warmup:
        raise ScenarioError("duration", f"must exceed the warm-up of {warmup:g} s (3 x tc_interval)")

    return ScenarioSpec(
        name=name, seed=seed, duration=float(duration), params=params, nodes=nodes,
        links=links, probes=probes, assertions=assertions,
        description=str(data.get("description", "")), family=str(data.get("family", "")),
    )


def _locate(text: str, data: Any, path: str) -> Optional[int]:
    """Best-effort source line for a field path: the leaf key if present,
    searched from the enclosing node/assertion, else that anchor's line."""
    tokens = re.findall(r"[^.\[\]]+", path)
    cur, start = data, 0
    for t in tokens:
        if isinstance(cur, dict) and t in cur:
            cur = cur[t]
        elif isinstance(cur, list) and t.isdigit() and int(t) < len(cur):
            cur = cur[int(t)]
        else:
            break
        if isinstance(cur, dict):
            for k in ("handle", "id"):
                if isinstance(cur.get(k), str):
                    m = re.compile(rf'"{k}"\s*:\s*"{re.escape(cur[k])}"').search(text, start)
                    if m:
                        start = m.start()
    if tokens:
        m = re.compile(rf'"{re.escape(tokens[-1])}"\s*:').search(text, start)
        if m:
            start = m.start()
    if start == 0 and not (tokens and text.startswith(f'"{tokens[-1]}"')):
        return None
    return text.count("\n", 0, start) + 1


def loads_scenario(text: str) -> ScenarioSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError("<json>", e.msg, e.lineno)
    try:
        return parse_scenario(data)
    except ScenarioError as e:
        if e.line is None:
            raise ScenarioError(e.path, str(e).split(": ", 1)[-1], _locate(text, data, e.path)) from None
        raise


def load_scenario(path) -> ScenarioSpec:
    p = Path(path)
    if not p.is_file():
        raise ScenarioError("<file>", f"no such scenario file: {p}")
    return loads_scenario(p.read_text())


def dump_scenario(spec: ScenarioSpec, path) -> None:
    Path(path).write_text(spec.dumps())


def known_attacks() -> List[Tuple[str, str]]:
    return [(k, v[0]) for k, v in CATALOG.items()]

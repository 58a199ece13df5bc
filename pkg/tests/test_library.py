import json
import time
from pathlib import Path

import pytest

from olsrsim.library import ATTACK_SCENARIOS, BUILDERS, build_all
from olsrsim.runner import run
from olsrsim.scenario import load_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"
SPECS = build_all()


def test_every_attack_has_a_scenario():
    assert sorted(ATTACK_SCENARIOS, key=lambda a: int(a[1:])) == [f"A{i}" for i in range(1, 22)]
    for names in ATTACK_SCENARIOS.values():
        for n in (names if isinstance(names, (list, tuple)) else [names]):
            assert n in BUILDERS


def test_baseline_per_topology_family():
    fams = {s.family for s in SPECS.values() if s.name.startswith("baseline_")}
    assert fams == {"chain", "ring", "grid", "random"}
    assert all(not s.has_attack for n, s in SPECS.items() if n.startswith("baseline_"))


def test_shipped_files_match_builders():
    files = {p.stem for p in SCENARIOS.glob("*.json")}
    assert files == set(SPECS)
    for name, spec in SPECS.items():
        assert load_scenario(SCENARIOS / f"{name}.json") == spec, name


def test_loop_scenario_has_eight_nodes_including_x():
    d = json.loads((SCENARIOS / "fig23_loop.json").read_text())
    handles = [n["handle"] for n in d["nodes"]]
    assert len(handles) == 8 and "X" in handles


@pytest.mark.parametrize("name", sorted(SPECS))
def test_scenario_passes_quickly(name):
    t = time.perf_counter()
    rep = run(SPECS[name])
    elapsed = time.perf_counter() - t
    failed = [a.to_dict() for a in rep.assertions if not a.passed]
    assert failed == []
    assert elapsed < 5.0

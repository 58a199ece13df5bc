import random
import sys
from collections import deque

import pytest

from olsrsim.library import chain, honest, scenario
from olsrsim.runner import simulate
from olsrsim.scenario import parse_scenario


def make_spec(nodes, links, duration=40.0, seed=1, params=None, assertions=(), probes=(), name="t"):
    """Validated spec from builder-style nodes/links (handles may be plain strings)."""
    nodes = [{"handle": n} if isinstance(n, str) else n for n in nodes]
    return parse_scenario(scenario(name, "", nodes, links, assertions, probes,
                                   duration=duration, seed=seed, params=params))


def run_graph(nodes, links, **kw):
    return simulate(make_spec(nodes, links, **kw))


def bfs(adj, src):
    dist = {src: 0}
    q = deque([src])
    while q:
        x = q.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def random_graph(rng: random.Random, n: int, p_extra: float = 0.3):
    """Connected undirected graph on n0..n{n-1}: random tree plus chords."""
    names = [f"n{i}" for i in range(n)]
    edges = set()
    for i in range(1, n):
        edges.add((names[rng.randrange(i)], names[i]))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p_extra:
                edges.add((names[i], names[j]))
    return names, sorted(edges)


@pytest.fixture
def chain_ctx():
    hs = list("abcde")
    return simulate(make_spec(honest(*hs), chain(*hs), duration=40.0))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.CRITERIA):
        title = mod.CRITERIA[n][0]
        if n in mod.RESULTS:
            status = "PASS" if mod.RESULTS[n][0] else "FAIL"
        else:
            status = "NOT RUN"
        terminalreporter.write_line(f"criterion {n:2d} {status}: {title}")

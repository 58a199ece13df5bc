import itertools
import math

import pytest
from hypothesis import given, strategies as hst

from olsrsim import protocol as P
from olsrsim.messages import HelloMessage, LinkStatus, NeighborEntry, TcMessage, ValiditySchedule
from olsrsim.params import ProtocolParams

PARAMS = ProtocolParams()


def hello(orig, entries=(), seq=0, will=3, interval=2.0, validity=6.0):
    return HelloMessage(orig, seq, will, interval, ValiditySchedule.constant(validity),
                        tuple(NeighborEntry(n, s, m) for n, s, m in entries))


def tc(orig, seq, ansn, adv, hop_count=0, sched=None):
    return TcMessage(orig, seq, ansn, hop_count, 255, 5.0,
                     sched or ValiditySchedule.constant(15.0), tuple(adv))


def sym_pair(now=0.0, validity=6.0):
    """State at 'a' with b already SYMMETRIC."""
    st = P.RouterState("a", PARAMS)
    P.process_hello(st, hello("b", validity=validity), now)
    P.process_hello(st, hello("b", [("a", LinkStatus.HEARD, False)], seq=1, validity=validity), now + 0.1)
    return st


# ---------------------------------------------------------------------------
# neighborhood discovery


def test_first_hello_makes_heard_link():
    st = P.RouterState("a", PARAMS)
    delta = P.process_hello(st, hello("b"), 0.0)
    assert st.neighbor_set["b"].status is LinkStatus.HEARD
    assert st.symmetric_neighbors() == set()
    assert delta.link_status_changed


def test_hello_listing_us_makes_symmetric():
    st = sym_pair()
    assert st.neighbor_set["b"].status is LinkStatus.SYMMETRIC
    assert st.symmetric_neighbors() == {"b"}


def test_hello_not_mentioning_us_keeps_symmetric_until_sym_expiry():
    st = sym_pair()
    P.process_hello(st, hello("b", [], seq=2), 2.0)
    assert st.neighbor_set["b"].status is LinkStatus.SYMMETRIC
    # sym time was set at 0.1 + 6.0; a silent HELLO after that demotes
    P.process_hello(st, hello("b", [], seq=3), 6.2)
    assert st.neighbor_set["b"].status is LinkStatus.HEARD


def test_hello_not_mentioning_us_keeps_selector_flag():
    st = P.RouterState("a", PARAMS)
    P.process_hello(st, hello("b"), 0.0)
    P.process_hello(st, hello("b", [("a", LinkStatus.SYMMETRIC, True)], seq=1), 0.1)
    assert st.mpr_selectors() == {"b"}
    P.process_hello(st, hello("b", [("z", LinkStatus.SYMMETRIC, False)], seq=2), 1.0)
    assert st.mpr_selectors() == {"b"}


def test_hello_listing_us_lost_drops_symmetry():
    st = sym_pair()
    P.process_hello(st, hello("b", [("a", LinkStatus.LOST, False)], seq=2), 1.0)
    assert st.neighbor_set["b"].status is LinkStatus.LOST
    assert "b" not in st.symmetric_neighbors()


def test_expire_demotes_then_removes():
    st = sym_pair()
    P.process_hello(st, hello("b", [("a", LinkStatus.SYMMETRIC, False), ("c", LinkStatus.SYMMETRIC, False)],
                              seq=2), 1.0)
    assert ("b", "c") in st.two_hop_set
    P.expire(st, 7.0 + 1e-9)
    assert st.neighbor_set == {}
    assert st.two_hop_set == {}


def test_own_hello_ignored():
    st = P.RouterState("a", PARAMS)
    assert not P.process_hello(st, hello("a"), 0.0)
    assert st.neighbor_set == {}


def test_generate_hello_reports_heard_and_mpr_flags():
    st = sym_pair()
    P.process_hello(st, hello("c"), 0.2)
    st.neighbor_set["b"].is_mpr = True
    msg = P.generate_hello(st, 0.3)
    assert msg.entry_for("b") == NeighborEntry("b", LinkStatus.SYMMETRIC, True)
    assert msg.entry_for("c") == NeighborEntry("c", LinkStatus.HEARD, False)
    assert st.counters.hellos_sent == 1


# ---------------------------------------------------------------------------
# link quality


@given(hst.floats(0.0, 1.0), hst.lists(hst.booleans(), max_size=40), hst.floats(0.05, 0.95))
def test_ewma_matches_closed_form(q0, hits, alpha):
    q = q0
    for h in hits:
        q = P.ewma_quality(q, h, alpha)
    n = len(hits)
    closed = (1 - alpha) ** n * q0 + sum(alpha * (1 - alpha) ** (n - 1 - k) * h for k, h in enumerate(hits))
    assert math.isclose(q, closed, abs_tol=1e-9)


def test_four_misses_cross_default_threshold():
    # 0.7 ** k <= 0.3 first at k = 4
    q, k = 1.0, 0
    while q >= PARAMS.lq_threshold:
        q = P.ewma_quality(q, False, PARAMS.lq_alpha)
        k += 1
    assert k == 4


def test_catch_up_charges_missed_slots():
    st = sym_pair(validity=60.0)
    rec = st.neighbor_set["b"]
    P.expire(st, 0.1 + 1.5 * 2.0 + 2.0 * 3 + 1e-6)  # four deadlines passed
    assert rec.link_quality == pytest.approx(0.7 ** 4)
    assert "b" not in st.symmetric_neighbors()


# ---------------------------------------------------------------------------
# MPR selection


def brute_force_coverable(willingness, coverage, targets):
    out = set()
    for n, w in willingness.items():
        if w > 0:
            out |= coverage.get(n, set()) & targets
    return out


mpr_inputs = hst.integers(1, 6).flatmap(lambda n: hst.tuples(
    hst.lists(hst.integers(0, 7), min_size=n, max_size=n),
    hst.lists(hst.sets(hst.integers(0, 7), max_size=5), min_size=n, max_size=n),
))


@given(mpr_inputs)
def test_greedy_mpr_covers_every_coverable_target(inp):
    wills, covers = inp
    willingness = {f"n{i}": w for i, w in enumerate(wills)}
    coverage = {f"n{i}": {f"t{x}" for x in c} for i, c in enumerate(covers)}
    targets = {f"t{x}" for x in range(8)}
    mprs, uncoverable = P.greedy_mpr(willingness, coverage, targets)
    coverable = brute_force_coverable(willingness, coverage, targets)
    covered = set().union(*(coverage[m] for m in mprs)) & targets if mprs else set()
    assert covered == coverable
    assert uncoverable == targets - coverable
    assert all(willingness[m] > 0 for m in mprs)
    assert {n for n, w in willingness.items() if w == 7} <= mprs


@given(mpr_inputs)
def test_greedy_mpr_not_smaller_than_optimum(inp):
    wills, covers = inp
    willingness = {f"n{i}": w for i, w in enumerate(wills)}
    coverage = {f"n{i}": {f"t{x}" for x in c} for i, c in enumerate(covers)}
    targets = {f"t{x}" for x in range(8)}
    mprs, _ = P.greedy_mpr(willingness, coverage, targets)
    need = brute_force_coverable(willingness, coverage, targets)
    cands = [n for n, w in willingness.items() if w > 0]
    best = None
    for k in range(len(cands) + 1):
        for combo in itertools.combinations(cands, k):
            got = set().union(*(coverage[c] for c in combo)) if combo else set()
            if need <= got:
                best = k
                break
        if best is not None:
            break
    assert best <= len(mprs)


def test_greedy_prefers_wider_then_willing_then_smaller_id():
    will = {"p": 3, "q": 3, "r": 6}
    cov = {"p": {"x", "y"}, "q": {"x"}, "r": {"x"}}
    assert P.greedy_mpr(will, cov, {"x", "y"})[0] == {"p"}
    will = {"p": 3, "q": 5}
    cov = {"p": {"x"}, "q": {"x"}}
    assert P.greedy_mpr(will, cov, {"x"})[0] == {"q"}
    will = {"q": 3, "p": 3}
    assert P.greedy_mpr(will, cov, {"x"})[0] == {"p"}


def test_willingness_zero_never_selected():
    mprs, unc = P.greedy_mpr({"z": 0}, {"z": {"x"}}, {"x"})
    assert mprs == set() and unc == {"x"}


# ---------------------------------------------------------------------------
# TC processing and duplicates


def test_duplicate_rejected_until_hold_time():
    st = P.RouterState("a", PARAMS)
    assert P.check_and_record_duplicate(st, "o", 1, 0.0)
    assert not P.check_and_record_duplicate(st, "o", 1, 10.0)
    assert P.check_and_record_duplicate(st, "o", 2, 10.0)
    assert P.check_and_record_duplicate(st, "o", 1, PARAMS.dup_hold_time + 0.001)


@given(hst.lists(hst.tuples(hst.sampled_from("opq"), hst.integers(0, 5)), max_size=40))
def test_duplicate_set_accepts_each_key_once(keys):
    s = P.RouterState("a", PARAMS)
    accepted = [k for k in keys if P.check_and_record_duplicate(s, k[0], k[1], 1.0)]
    assert sorted(accepted) == sorted(set(keys))


def test_processed_and_forwarded_sets_are_separate():
    st = P.RouterState("a", PARAMS)
    assert P.check_and_record_duplicate(st, "o", 1, 0.0)
    assert P.check_and_record_forward(st, "o", 1, 0.0)
    assert P.is_forwarded(st, "o", 1)


def test_stale_ansn_ignored():
    st = P.RouterState("a", PARAMS)
    _, out = P.process_tc(st, tc("o", 1, 5, ["x"]), 2, 0.0)
    assert out == "applied"
    _, out = P.process_tc(st, tc("o", 2, 4, ["y"]), 2, 1.0)
    assert out == "stale"
    assert set(st.topology_set) == {("o", "x")}


def test_equal_ansn_refreshes_and_replaces():
    st = P.RouterState("a", PARAMS)
    P.process_tc(st, tc("o", 1, 5, ["x"]), 2, 0.0)
    delta, out = P.process_tc(st, tc("o", 2, 5, ["x"]), 2, 3.0)
    assert out == "applied" and not delta.topology_changed
    assert st.topology_set[("o", "x")].expiry == 18.0


def test_own_tc_not_applied():
    st = P.RouterState("a", PARAMS)
    assert P.process_tc(st, tc("a", 1, 1, ["x"]), 1, 0.0)[1] == "own"


def test_validity_schedule_by_distance():
    sched = ValiditySchedule.of([(1, 2.0), (2, 4.0), (3, 6.0)])
    assert [sched.validity_for(h) for h in (1, 2, 3, 9)] == [2.0, 4.0, 6.0, 6.0]


def test_forged_zero_hop_count_gets_one_hop_validity():
    # a TC arriving with hop_count 0 is treated as 1 hop away: 2 s record life
    sched = ValiditySchedule.of([(1, 2.0), (2, 4.0), (3, 6.0)])
    st = P.RouterState("d", PARAMS)
    P.process_tc(st, tc("a", 1, 1, ["b"], hop_count=0, sched=sched), 0 + 1, 10.0)
    assert st.topology_set[("a", "b")].expiry == 12.0


@pytest.mark.parametrize("bad", [(), ((2, 1.0), (1, 2.0)), ((1, 0.0),)])
def test_validity_schedule_rejects_bad_entries(bad):
    with pytest.raises(ValueError):
        ValiditySchedule(bad)


def test_empty_tc_sent_once_after_nonempty():
    st = P.RouterState("a", PARAMS)
    assert P.generate_tc(st, 0.0) is None
    st.advertised_set = frozenset({"b"})
    assert P.generate_tc(st, 1.0) is not None
    st.advertised_set = frozenset()
    assert P.generate_tc(st, 2.0).advertised_neighbors == ()
    assert P.generate_tc(st, 3.0) is None


def test_advertised_set_bumps_ansn_only_on_change():
    st = sym_pair()
    st.neighbor_set["b"].is_mpr_selector = True
    assert P.update_advertised_set(st) and st.ansn == 1
    assert not P.update_advertised_set(st) and st.ansn == 1


# ---------------------------------------------------------------------------
# routing


def test_routes_from_nd_and_lsa():
    st = sym_pair()
    P.process_hello(st, hello("b", [("a", LinkStatus.SYMMETRIC, False), ("c", LinkStatus.SYMMETRIC, False)],
                              seq=2), 1.0)
    P.process_tc(st, tc("c", 1, 1, ["d"]), 2, 1.0)
    P.process_tc(st, tc("d", 1, 1, ["e", "a"]), 3, 1.0)
    rt = P.compute_routing_table(st)
    assert {d: (r.next_hop, r.distance) for d, r in rt.items()} == {
        "b": ("b", 1), "c": ("b", 2), "d": ("b", 3), "e": ("b", 4)}
    assert rt["d"].via_lsa and not rt["c"].via_lsa


def test_tie_prefers_nd_path_then_smaller_next_hop():
    st = P.RouterState("a", PARAMS)
    for n in ("b", "c"):
        P.process_hello(st, hello(n), 0.0)
    P.process_hello(st, hello("c", [("a", LinkStatus.SYMMETRIC, False), ("z", LinkStatus.SYMMETRIC, False)],
                              seq=1), 0.1)
    P.process_hello(st, hello("b", [("a", LinkStatus.SYMMETRIC, False)], seq=1), 0.1)
    P.process_tc(st, tc("b", 1, 1, ["z"]), 1, 0.1)
    assert st.symmetric_neighbors() == {"b", "c"}
    rt = P.compute_routing_table(st)
    assert rt["z"] == P.Route("c", 2, False)

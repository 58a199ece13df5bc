import pytest

from olsrsim.metrics import OPS, compare, normalise


@pytest.mark.parametrize("op, observed, expected, tol, ok", [
    ("eq", 1.0, 1.05, 0.1, True),
    ("eq", 1.0, 1.2, 0.1, False),
    ("eq", {"b", "a"}, ["a", "b"], 0.0, True),
    ("eq", True, 1, 0.0, True),
    ("approx_rel", 3.5, 4.0, 0.15, True),
    ("approx_rel", 3.3, 4.0, 0.15, False),
    ("within", 0.7, [0.35, 0.65], 0.0, False),
    ("within", 0.5, [0.35, 0.65], 0.0, True),
    ("lt", None, 1, 0.0, False),
    ("in", "X", ["a", "X"], 0.0, True),
    ("contains", ["a-b", "b-c"], ["a-b"], 0.0, True),
    ("not_contains", ["a-b"], ["x-y"], 0.0, True),
    ("disjoint", ["c"], ["c", "d"], 0.0, False),
    ("subset", ["a"], ["a", "b"], 0.0, True),
    ("len_ge", [1], 1, 0.0, True),
    ("ge", "text", 1, 0.0, False),  # type errors count as failure
])
def test_operators(op, observed, expected, tol, ok):
    assert compare(op, observed, expected, tol) is ok


def test_every_operator_is_covered():
    assert {"eq", "ne", "lt", "le", "gt", "ge", "approx", "approx_rel", "in", "not_in", "contains",
            "not_contains", "subset", "superset", "disjoint", "within", "len_eq", "len_ge"} == set(OPS)


def test_normalise():
    assert normalise({"k": {3, 1}, 2: (float("inf"),)}) == {"k": [1, 3], "2": ["inf"]}

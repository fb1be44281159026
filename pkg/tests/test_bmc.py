"""Bounded enumeration oracle."""

from pathlib import Path

import pytest

from sevloop import lower, parse_cts, parse_mini
from sevloop.bmc import bmc
from sevloop.engine import replay_trace

CORPUS = Path(__file__).parent / "corpus"


def load(name):
    return lower(parse_mini((CORPUS / name).read_text()))


def test_safe_program_safe_up_to_bound():
    v = bmc(load("branches.c"), 10)
    assert v.kind == "SAFE_UP_TO"
    assert v.bound == 10


def test_weakened_program_has_counterexample():
    ts = load("branches_weak.c")
    v = bmc(ts, 10)
    assert v.kind == "CEX"
    replay = replay_trace(ts, v.trace)
    assert replay is not None
    goal, _ = replay
    assert v.witness.satisfies(goal.store)


def test_bound_zero_without_initial_error():
    v = bmc(load("branches.c"), 0)
    assert v.kind == "SAFE_UP_TO"
    assert v.nodes == 1


def test_monotone_in_bound():
    ts = load("branches_weak.c")
    first = None
    for b in range(3, 12):
        v = bmc(ts, b)
        if first is None and v.kind == "CEX":
            first = b
        if first is not None:
            assert v.kind == "CEX", b


def test_negative_bound_rejected():
    with pytest.raises(ValueError):
        bmc(load("branches.c"), -1)


def test_trace_is_lexicographically_first():
    ts = parse_cts("""
vars x;
init 0;
frame auto;
trans 0 1 { }
trans 0 error { }
trans 1 error { }
""")
    v = bmc(ts, 5)
    assert v.kind == "CEX"
    # rule 0 (0->1) explores first, so the first error found is via point 1
    assert [r.index for r in v.trace] == [0, 2]

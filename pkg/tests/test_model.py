import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rrap.model import (
    Evaluation,
    InvalidAllocation,
    LengthMismatch,
    ProblemError,
    SerialParallelProblem,
    Subsystem,
    compare,
    deb_key,
    evaluate_constraints,
    evaluate_reliability,
    load_problem,
)

from .conftest import KNOWN_OPTIMUM

BENCH_R = [0.9, 0.75, 0.65, 0.80, 0.85, 0.93, 0.78, 0.66, 0.78, 0.91, 0.79, 0.77, 0.67, 0.79, 0.67]
BENCH_C = [5, 4, 9, 7, 7, 5, 6, 9, 4, 5, 6, 7, 9, 8, 6]
BENCH_W = [8, 9, 6, 7, 8, 8, 9, 6, 7, 8, 9, 7, 6, 5, 7]


def single(r=0.9, c=1, w=1, cb=3, wb=3):
    return SerialParallelProblem.from_arrays([r], [c], [w], cb, wb)


def test_bundled_benchmark_matches_table(rrap15):
    assert rrap15.reliabilities == tuple(BENCH_R)
    assert rrap15.costs == tuple(BENCH_C)
    assert rrap15.weights == tuple(BENCH_W)
    assert (rrap15.cost_budget, rrap15.weight_budget) == (400, 414)
    assert rrap15.n == 15


def test_known_optimum(rrap15):
    assert evaluate_reliability(rrap15, KNOWN_OPTIMUM) == pytest.approx(0.945613, abs=5e-7)
    ev = evaluate_constraints(rrap15, KNOWN_OPTIMUM)
    assert (ev.cost_used, ev.weight_used, ev.feasible, ev.violation) == (392, 414, True, 0.0)


def test_all_ones(rrap15):
    ones = (1,) * 15
    # product of the benchmark reliability row, multiplied out directly
    assert evaluate_reliability(rrap15, ones) == pytest.approx(0.02187147321377687, rel=1e-12)
    ev = evaluate_constraints(rrap15, ones)
    assert (ev.cost_used, ev.weight_used, ev.feasible) == (97, 110, True)


def test_grossly_over_budget(rrap15):
    ev = evaluate_constraints(rrap15, (100,) * 15)
    assert not ev.feasible
    assert ev.violation > 0
    assert ev.violation == pytest.approx((9700 - 400) / 400 + (11000 - 414) / 414)


@pytest.mark.parametrize("x, expected", [(1, 0.9), (2, 0.99), (3, 0.999)])
def test_single_subsystem(x, expected):
    assert evaluate_reliability(single(cb=5, wb=5), [x]) == pytest.approx(expected, rel=1e-14)


def test_errors(rrap15):
    with pytest.raises(LengthMismatch):
        evaluate_reliability(rrap15, (1, 2, 3))
    with pytest.raises(LengthMismatch):
        evaluate_constraints(rrap15, (1,) * 16)
    with pytest.raises(InvalidAllocation):
        evaluate_reliability(rrap15, (0,) + (1,) * 14)


def test_log_space_agrees_with_direct_product(rrap15):
    direct = math.prod(1 - (1 - r) ** x for r, x in zip(BENCH_R, KNOWN_OPTIMUM))
    assert evaluate_reliability(rrap15, KNOWN_OPTIMUM) == pytest.approx(direct, rel=1e-12)


def test_large_n_does_not_underflow():
    n = 5000
    problem = SerialParallelProblem.from_arrays([0.5] * n, [1] * n, [1] * n, n, n)
    # 0.5**5000 is below the smallest double; the log path still yields the right log value
    r = evaluate_reliability(problem, (1,) * n)
    assert r == 0.0 or math.log(r) == pytest.approx(n * math.log(0.5))
    big = SerialParallelProblem.from_arrays([0.999] * n, [1] * n, [1] * n, n, n)
    assert math.log(evaluate_reliability(big, (1,) * n)) == pytest.approx(n * math.log(0.999), rel=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(r=1.0),
        dict(r=0.0),
        dict(c=0),
        dict(w=0),
        dict(cb=0),
    ],
)
def test_problem_validation(kwargs):
    with pytest.raises(ProblemError):
        single(**kwargs)


def test_problem_rejects_empty_and_non_integer():
    with pytest.raises(ProblemError):
        SerialParallelProblem((), 1, 1)
    with pytest.raises(ProblemError):
        Subsystem(0.9, 1.5, 1)


def test_load_problem_roundtrip(tmp_path, rrap15):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(rrap15.to_dict()))
    assert load_problem(path) == rrap15
    assert load_problem("rrap15.json") == rrap15


def test_load_problem_errors(tmp_path):
    with pytest.raises(ProblemError):
        load_problem(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ProblemError):
        load_problem(bad)
    bad.write_text(json.dumps({"subsystems": [{"r": 0.9}], "cost_budget": 1, "weight_budget": 1}))
    with pytest.raises(ProblemError):
        load_problem(bad)


def ev(r=0.5, feasible=True, v=0.0):
    return Evaluation(r, 0, 0, feasible, v)


def test_compare_examples():
    assert compare(ev(0.5), ev(0.99, False, 0.2)) == 1
    assert compare(ev(0.93), ev(0.91)) == 1
    assert compare(ev(0.9, False, 0.1), ev(0.2, False, 0.4)) == 1
    assert compare(ev(0.9), ev(0.9)) == 0
    assert compare(ev(0.91), ev(0.93)) == -1


evaluations = st.builds(
    lambda feasible, r, v: Evaluation(r, 0, 0, feasible, 0.0 if feasible else v),
    st.booleans(),
    st.floats(0.01, 1.0),
    st.floats(1e-6, 10.0),
)


@settings(max_examples=300, deadline=None)
@given(evaluations, evaluations, evaluations)
def test_compare_is_total_preorder(a, b, c):
    assert compare(a, b) == -compare(b, a)
    if compare(a, b) >= 0 and compare(b, c) >= 0:
        assert compare(a, c) >= 0
    # the sort key realizes the same order
    assert compare(a, b) == (deb_key(a) > deb_key(b)) - (deb_key(a) < deb_key(b))


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.tuples(st.floats(0.01, 0.99), st.integers(1, 9), st.integers(1, 9)), min_size=1, max_size=12),
    st.data(),
)
def test_reliability_bounded_by_each_factor(rows, data):
    r, c, w = zip(*rows)
    problem = SerialParallelProblem.from_arrays(r, c, w, sum(c) * 10, sum(w) * 10)
    alloc = data.draw(st.lists(st.integers(1, 8), min_size=len(rows), max_size=len(rows)))
    rs = evaluate_reliability(problem, alloc)
    factors = [1 - (1 - ri) ** x for ri, x in zip(r, alloc)]
    assert rs <= min(factors) * (1 + 1e-12)
    ev = evaluate_constraints(problem, alloc)
    assert isinstance(ev.cost_used, int) and isinstance(ev.weight_used, int)
    assert ev.cost_used == sum(ci * x for ci, x in zip(c, alloc))
    assert ev.feasible == (ev.cost_used <= problem.cost_budget and ev.weight_used <= problem.weight_budget)
    assert (ev.violation == 0) == ev.feasible


def test_monotone_in_each_component(rrap15):
    rng = np.random.default_rng(0)
    for _ in range(200):
        alloc = rng.integers(1, 8, 15).tolist()
        i = int(rng.integers(15))
        bumped = list(alloc)
        bumped[i] += 1
        assert evaluate_reliability(rrap15, bumped) > evaluate_reliability(rrap15, alloc)

"""Exact global optima for RRAP instances.

The objective is separable: maximizing R_s is maximizing
``sum_i log(1 - (1 - R_i) ** x_i)`` under two integer knapsack constraints,
which a DP over (subsystem, cost, weight) states solves exactly. A brute-force
enumerator over the bounded box serves as an independent cross-check on small
instances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import Allocation, RrapError, SerialParallelProblem, evaluate_reliability

DEFAULT_STATE_CAP = 10**8
DEFAULT_EXHAUSTIVE_CAP = 10**7
# objectives within this relative distance are treated as ties
TIE_RTOL = 1e-10


class StateCapExceeded(RrapError):
    pass


class SearchSpaceTooLarge(RrapError):
    pass


@dataclass(frozen=True)
class OracleResult:
    best_allocation: Allocation
    best_reliability: float
    states_explored: int

    def to_dict(self) -> dict:
        return {
            "best_allocation": list(self.best_allocation),
            "best_reliability": self.best_reliability,
            "states_explored": self.states_explored,
        }


def upper_bounds(problem: SerialParallelProblem) -> list[int]:
    """Largest x_i that fits when every other subsystem takes a single component."""
    total_c = sum(problem.costs)
    total_w = sum(problem.weights)
    return [
        min(
            (problem.cost_budget - (total_c - s.cost)) // s.cost,
            (problem.weight_budget - (total_w - s.weight)) // s.weight,
        )
        for s in problem.subsystems
    ]


def _log_terms(problem: SerialParallelProblem, bounds: list[int]) -> list[np.ndarray]:
    # terms[i][x - 1] = log(1 - (1 - R_i) ** x)
    out = []
    for s, u in zip(problem.subsystems, bounds):
        x = np.arange(1, u + 1, dtype=np.float64)
        out.append(np.log1p(-np.exp(x * math.log1p(-s.reliability))))
    return out


def _is_tie(a: float, b: float) -> bool:
    return abs(a - b) <= TIE_RTOL * max(abs(a), abs(b)) + 1e-300


def solve_exact_dp(problem: SerialParallelProblem, state_cap: int = DEFAULT_STATE_CAP) -> OracleResult:
    """Provably optimal allocation by dynamic programming.

    ``best[i][c, w]`` is the largest log-reliability subsystems ``i..N-1`` can
    reach spending at most ``c`` cost and ``w`` weight (``-inf`` when even one
    component each does not fit). The allocation is rebuilt front to back,
    taking the smallest x_i that stays optimal, so ties resolve to the
    lexicographically smallest optimum.
    """
    n = problem.n
    bc, bw = problem.cost_budget, problem.weight_budget
    cells = (n + 1) * (bc + 1) * (bw + 1)
    if cells > state_cap:
        raise StateCapExceeded(
            f"DP needs {cells} states ((N+1)*(cost+1)*(weight+1)), above the cap of {state_cap}"
        )
    bounds = upper_bounds(problem)
    terms = _log_terms(problem, bounds)

    layers = [None] * (n + 1)
    layers[n] = np.zeros((bc + 1, bw + 1))
    for i in range(n - 1, -1, -1):
        s = problem.subsystems[i]
        nxt = layers[i + 1]
        cur = np.full_like(nxt, -np.inf)
        for x in range(1, bounds[i] + 1):
            dc, dw = s.cost * x, s.weight * x
            if dc > bc or dw > bw:
                break
            np.maximum(cur[dc:, dw:], nxt[: bc + 1 - dc, : bw + 1 - dw] + terms[i][x - 1], out=cur[dc:, dw:])
        layers[i] = cur

    states = int(sum(np.isfinite(layer).sum() for layer in layers))
    best = float(layers[0][bc, bw])
    assert np.isfinite(best), "load-time validation guarantees the all-ones allocation fits"

    alloc = []
    c, w = bc, bw
    for i, s in enumerate(problem.subsystems):
        target = float(layers[i][c, w])
        for x in range(1, bounds[i] + 1):
            dc, dw = s.cost * x, s.weight * x
            if dc > c or dw > w:
                continue
            value = terms[i][x - 1] + layers[i + 1][c - dc, w - dw]
            if np.isfinite(value) and _is_tie(float(value), target):
                alloc.append(x)
                c, w = c - dc, w - dw
                break
        else:  # pragma: no cover - the max is always attained by some x
            raise AssertionError(f"DP reconstruction failed at subsystem {i}")

    alloc = tuple(alloc)
    return OracleResult(alloc, evaluate_reliability(problem, alloc), states)


def solve_exhaustive(problem: SerialParallelProblem, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> OracleResult:
    """Enumerate the whole box [1, u_1] x ... x [1, u_N].

    Reliability here is the plain product of the subsystem terms, so this path
    shares nothing with the DP beyond the bounds.
    """
    bounds = upper_bounds(problem)
    size = math.prod(bounds)
    if size > cap:
        raise SearchSpaceTooLarge(f"box holds {size} allocations, above the cap of {cap}")

    # vectorize over the last axis, loop over the rest in lexicographic order
    last = problem.subsystems[-1]
    x_last = np.arange(1, bounds[-1] + 1)
    last_term = 1.0 - (1.0 - last.reliability) ** x_last
    best_rel, best_alloc = -1.0, None
    for head in itertools.product(*(range(1, u + 1) for u in bounds[:-1])):
        head_cost = sum(s.cost * x for s, x in zip(problem.subsystems, head))
        head_weight = sum(s.weight * x for s, x in zip(problem.subsystems, head))
        head_rel = math.prod(1.0 - (1.0 - s.reliability) ** x for s, x in zip(problem.subsystems, head))
        ok = (head_cost + last.cost * x_last <= problem.cost_budget) & (
            head_weight + last.weight * x_last <= problem.weight_budget
        )
        if not ok.any():
            continue
        rel = np.where(ok, head_rel * last_term, -1.0)
        top = rel.max()
        k = int(np.argmax(rel >= top - TIE_RTOL * top))
        if best_alloc is None or (rel[k] > best_rel and not _is_tie(float(rel[k]), best_rel)):
            best_rel, best_alloc = float(rel[k]), head + (int(x_last[k]),)
    return OracleResult(best_alloc, best_rel, size)

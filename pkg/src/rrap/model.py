"""Serial-parallel RRAP model: problem data, exact evaluators, feasibility ordering.

A serial-parallel system is a chain of subsystems; subsystem ``i`` holds ``x_i``
identical components in parallel, each working with probability ``R_i``.
System reliability is the product of the per-subsystem terms
``1 - (1 - R_i) ** x_i``, subject to linear cost and weight budgets.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

Allocation = tuple[int, ...]


class RrapError(ValueError):
    """Base class for all validation errors raised by this package."""


class ProblemError(RrapError):
    pass


class LengthMismatch(RrapError):
    pass


class InvalidAllocation(RrapError):
    pass


@dataclass(frozen=True)
class Subsystem:
    reliability: float
    cost: int
    weight: int

    def __post_init__(self):
        if not 0.0 < self.reliability < 1.0:
            raise ProblemError(f"subsystem reliability must lie in (0, 1), got {self.reliability}")
        for name in ("cost", "weight"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ProblemError(f"subsystem {name} must be an integer, got {value!r}")
            if value < 1:
                raise ProblemError(f"subsystem {name} must be >= 1, got {value}")


@dataclass(frozen=True)
class SerialParallelProblem:
    """N subsystems in series with shared cost and weight budgets.

    Construction rejects problems where the all-ones allocation is already
    over budget, since every subsystem needs at least one component.
    """

    subsystems: tuple[Subsystem, ...]
    cost_budget: int
    weight_budget: int
    name: str = "unnamed"
    # log(1 - R_i), cached for the evaluators
    _log_unrel: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "subsystems", tuple(self.subsystems))
        if not self.subsystems:
            raise ProblemError("problem needs at least one subsystem")
        for name in ("cost_budget", "weight_budget"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ProblemError(f"{name} must be an integer, got {value!r}")
        min_cost = sum(s.cost for s in self.subsystems)
        min_weight = sum(s.weight for s in self.subsystems)
        if self.cost_budget < min_cost:
            raise ProblemError(
                f"cost budget {self.cost_budget} is below the all-ones cost {min_cost}"
            )
        if self.weight_budget < min_weight:
            raise ProblemError(
                f"weight budget {self.weight_budget} is below the all-ones weight {min_weight}"
            )
        object.__setattr__(
            self, "_log_unrel", tuple(math.log1p(-s.reliability) for s in self.subsystems)
        )

    @property
    def n(self) -> int:
        return len(self.subsystems)

    @property
    def reliabilities(self) -> tuple[float, ...]:
        return tuple(s.reliability for s in self.subsystems)

    @property
    def costs(self) -> tuple[int, ...]:
        return tuple(s.cost for s in self.subsystems)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(s.weight for s in self.subsystems)

    @classmethod
    def from_arrays(cls, reliabilities, costs, weights, cost_budget, weight_budget, name="unnamed"):
        if not len(reliabilities) == len(costs) == len(weights):
            raise ProblemError("reliability, cost and weight rows differ in length")
        subsystems = tuple(
            Subsystem(float(r), int(c), int(w)) for r, c, w in zip(reliabilities, costs, weights)
        )
        return cls(subsystems, int(cost_budget), int(weight_budget), name)

    @classmethod
    def from_dict(cls, data: dict) -> "SerialParallelProblem":
        try:
            subsystems = tuple(
                Subsystem(float(s["r"]), s["c"], s["w"]) for s in data["subsystems"]
            )
            return cls(subsystems, data["cost_budget"], data["weight_budget"], data.get("name", "unnamed"))
        except (KeyError, TypeError) as exc:
            raise ProblemError(f"malformed problem description: {exc!r}") from exc

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "subsystems": [
                {"r": s.reliability, "c": s.cost, "w": s.weight} for s in self.subsystems
            ],
            "cost_budget": self.cost_budget,
            "weight_budget": self.weight_budget,
        }


def load_problem(path: str | Path) -> SerialParallelProblem:
    """Read a problem JSON file.

    ``path`` may also name a bundled benchmark (``"rrap15"`` or
    ``"rrap15.json"``) when no such file exists on disk.
    """
    p = Path(path)
    if p.is_file():
        text = p.read_text()
    else:
        bundled = resources.files("rrap") / "benchmarks" / (p.stem + ".json")
        if p.parent != Path(".") or not bundled.is_file():
            raise ProblemError(f"problem file not found: {path}")
        text = bundled.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: invalid JSON ({exc})") from exc
    return SerialParallelProblem.from_dict(data)


def benchmark_problem() -> SerialParallelProblem:
    """The bundled 15-subsystem benchmark (budgets 400 / 414)."""
    return load_problem("rrap15")


@dataclass(frozen=True)
class Evaluation:
    system_reliability: float
    cost_used: int
    weight_used: int
    feasible: bool
    violation: float

    def to_dict(self) -> dict:
        return {
            "system_reliability": self.system_reliability,
            "cost_used": self.cost_used,
            "weight_used": self.weight_used,
            "feasible": self.feasible,
            "violation": self.violation,
        }


def _check_allocation(problem: SerialParallelProblem, alloc: Sequence[int]) -> None:
    if len(alloc) != problem.n:
        raise LengthMismatch(f"allocation has {len(alloc)} entries, problem has {problem.n} subsystems")
    for i, x in enumerate(alloc):
        if x < 1:
            raise InvalidAllocation(f"x_{i + 1} = {x}; every subsystem needs at least one component")


def evaluate_reliability(problem: SerialParallelProblem, alloc: Sequence[int]) -> float:
    """System reliability, accumulated as a sum of logs to survive large N."""
    _check_allocation(problem, alloc)
    return _reliability(problem, alloc)


def _reliability(problem: SerialParallelProblem, alloc: Sequence[int]) -> float:
    log_r = math.fsum(
        math.log1p(-math.exp(q * x)) for q, x in zip(problem._log_unrel, alloc)
    )
    return math.exp(log_r)


def evaluate_constraints(problem: SerialParallelProblem, alloc: Sequence[int]) -> Evaluation:
    _check_allocation(problem, alloc)
    cost_used = sum(s.cost * int(x) for s, x in zip(problem.subsystems, alloc))
    weight_used = sum(s.weight * int(x) for s, x in zip(problem.subsystems, alloc))
    over_cost = max(0, cost_used - problem.cost_budget)
    over_weight = max(0, weight_used - problem.weight_budget)
    return Evaluation(
        system_reliability=_reliability(problem, alloc),
        cost_used=cost_used,
        weight_used=weight_used,
        feasible=over_cost == 0 and over_weight == 0,
        violation=over_cost / problem.cost_budget + over_weight / problem.weight_budget,
    )


def deb_key(ev: Evaluation) -> tuple[int, float]:
    """Sort key realizing Deb's ordering: larger keys are better."""
    if ev.feasible:
        return (1, ev.system_reliability)
    return (0, -ev.violation)


def compare(a: Evaluation, b: Evaluation) -> int:
    """Deb's feasibility ordering. Returns 1 if ``a`` is better, -1 if ``b`` is, 0 on a tie.

    Any feasible evaluation beats any infeasible one; feasible pairs are
    ranked by reliability, infeasible pairs by (smaller) violation.
    """
    if a.feasible != b.feasible:
        return 1 if a.feasible else -1
    if a.feasible:
        ka, kb = a.system_reliability, b.system_reliability
    else:
        ka, kb = -a.violation, -b.violation
    return (ka > kb) - (ka < kb)


def beats(a: Evaluation, b: Evaluation) -> bool:
    return compare(a, b) > 0

"""Redundancy sizing against an uptime target for ``n`` series and ``m`` parallel units."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SlaSpec:
    unit_reliability: float
    target: float
    unit_cost: float = 1000.0

    def __post_init__(self):
        if not 0.0 < self.unit_reliability < 1.0:
            raise ValueError(f"unit reliability must lie in (0, 1), got {self.unit_reliability}")
        if not 0.0 < self.target < 1.0:
            raise ValueError(f"target must lie in (0, 1), got {self.target}")
        if self.unit_cost < 0:
            raise ValueError(f"unit cost must be non-negative, got {self.unit_cost}")


@dataclass(frozen=True)
class SlaSizing:
    n: int
    m: int
    reliability: float
    total_cost: float


@dataclass(frozen=True)
class NotAchievable:
    best_reliability: float
    reason: str


def serial_reliability(r: float, n: int) -> float:
    return r**n


def sla_reliability(r: float, n: int, m: int) -> float:
    return r**n * (1.0 - (1.0 - r) ** m)


def sla_size(spec: SlaSpec, max_n: int, max_m: int) -> SlaSizing | NotAchievable:
    """Cheapest (n, m) meeting the target, cost = unit_cost * (n + m).

    Ties go to smaller n, then smaller m.
    """
    if max_n < 1 or max_m < 1:
        raise ValueError("max_n and max_m must be >= 1")
    r = spec.unit_reliability
    best = None
    for n in range(1, max_n + 1):
        for m in range(1, max_m + 1):
            rel = sla_reliability(r, n, m)
            if rel >= spec.target and (best is None or n + m < best[0] + best[1]):
                best = (n, m, rel)
    if best is not None:
        n, m, rel = best
        return SlaSizing(n, m, rel, spec.unit_cost * (n + m))

    # r**n * (parallel term) < r for every n >= 1, so the grid's ceiling is at n=1, m=max_m
    ceiling = sla_reliability(r, 1, max_m)
    if spec.target >= r:
        reason = (
            f"the series factor r**n never exceeds r = {r}, which is already below "
            f"the target {spec.target}"
        )
    else:
        reason = (
            f"best reachable reliability within n <= {max_n}, m <= {max_m} "
            f"is {ceiling:.9f} < target {spec.target}"
        )
    return NotAchievable(ceiling, reason)

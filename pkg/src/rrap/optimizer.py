"""Harmony search (IMHS), HS-selection differential evolution (MDE) and their alternating hybrid.

Candidates carry a real-valued genotype in [1, u_i] per subsystem and are
decoded to integer redundancy levels by round-half-up. Both phases share one
selection rule: a new candidate replaces the population's worst member only if
it beats that member under Deb's feasibility ordering. The incumbent therefore
never gets worse.

Every call to :func:`rrap.model.evaluate_constraints` counts as one function
evaluation (FE); nothing is cached.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import model
from .model import Allocation, Evaluation, SerialParallelProblem, compare, deb_key
from .oracle import upper_bounds

# reliability counts as reaching a target within six-decimal reporting grain
TARGET_TOL = 5e-7


@dataclass(frozen=True)
class HybridConfig:
    cr: float = 0.3
    f: float = 1.0
    bw: float = 0.5
    par: float = 0.2
    hmcr: float = 0.95
    population_size: int = 20
    phase_length: int = 50
    max_fe: int = 250_000
    stall_phases: int = 20
    seed: int = 0

    def __post_init__(self):
        for name in ("cr", "par", "hmcr"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {getattr(self, name)}")
        if self.f <= 0 or self.bw <= 0:
            raise ValueError("f and bw must be positive")
        if self.population_size < 4:
            raise ValueError("population_size must be >= 4 (DE/rand/1 needs three distinct partners)")
        if self.phase_length < 1:
            raise ValueError("phase_length must be >= 1")
        if self.stall_phases < 1:
            raise ValueError("stall_phases must be >= 1")
        if self.max_fe < self.population_size:
            raise ValueError("max_fe must cover at least the initial population")

    def replace(self, **changes) -> "HybridConfig":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_params(cls, params: dict[str, str], base: "HybridConfig | None" = None) -> "HybridConfig":
        """Apply ``key=value`` string overrides, coercing to each field's type."""
        base = base or cls()
        types = {f.name: type(getattr(base, f.name)) for f in dataclasses.fields(cls)}
        changes = {}
        for key, raw in params.items():
            if key not in types:
                raise ValueError(f"unknown parameter {key!r}; expected one of {sorted(types)}")
            try:
                changes[key] = types[key](raw)
            except ValueError as exc:
                raise ValueError(f"bad value for {key}: {raw!r}") from exc
        return dataclasses.replace(base, **changes)


def decode(genotype, bounds) -> Allocation:
    """Round half up and clamp each component into [1, u_i]."""
    rounded = np.floor(np.asarray(genotype, dtype=np.float64) + 0.5)
    return tuple(np.clip(rounded, 1, np.asarray(bounds)).astype(int).tolist())


@dataclass
class Candidate:
    genotype: np.ndarray
    allocation: Allocation
    evaluation: Evaluation
    key: tuple[int, float] = field(init=False, repr=False)

    def __post_init__(self):
        self.key = deb_key(self.evaluation)


@dataclass
class Population:
    members: list[Candidate]

    @property
    def best_index(self) -> int:
        members = self.members
        return max(range(len(members)), key=lambda k: members[k].key)

    @property
    def worst_index(self) -> int:
        members = self.members
        return min(range(len(members)), key=lambda k: members[k].key)

    @property
    def best(self) -> Candidate:
        return self.members[self.best_index]


class _TargetReached(Exception):
    pass


@dataclass
class SearchState:
    """Per-run bookkeeping shared by the phases: RNG, FE counter and incumbent history."""

    problem: SerialParallelProblem
    config: HybridConfig
    target: float | None = None
    rng: np.random.Generator = field(init=False)
    bounds: np.ndarray = field(init=False)
    fe_used: int = 0
    best_curve: list[tuple[int, float, bool]] = field(default_factory=list)
    incumbent: Candidate | None = None
    fe_to_target: int | None = None

    def __post_init__(self):
        self.rng = np.random.default_rng(self.config.seed)
        self.bounds = np.asarray(upper_bounds(self.problem), dtype=np.float64)

    @property
    def budget_left(self) -> int:
        return self.config.max_fe - self.fe_used

    def make(self, genotype: np.ndarray) -> Candidate:
        genotype = np.clip(genotype, 1.0, self.bounds)
        alloc = decode(genotype, self.bounds)
        ev = model.evaluate_constraints(self.problem, alloc)
        self.fe_used += 1
        cand = Candidate(genotype, alloc, ev)
        if self.incumbent is None or cand.key > self.incumbent.key:
            self.incumbent = cand
            self.best_curve.append((self.fe_used, ev.system_reliability, ev.feasible))
            if (
                self.target is not None
                and ev.feasible
                and ev.system_reliability >= self.target - TARGET_TOL
            ):
                self.fe_to_target = self.fe_used
        return cand

    def offer(self, pop: Population, cand: Candidate) -> None:
        """HS selection: ``cand`` replaces the worst member iff it beats it.

        A candidate whose allocation is already in the population is dropped,
        otherwise the memory collapses onto a single point.
        """
        worst = pop.worst_index
        if cand.key > pop.members[worst].key and all(
            m.allocation != cand.allocation for m in pop.members
        ):
            pop.members[worst] = cand
        if self.fe_to_target is not None:
            raise _TargetReached


def init_population(state: SearchState) -> Population:
    size = min(state.config.population_size, state.budget_left)
    members = []
    for _ in range(size):
        members.append(state.make(state.rng.uniform(1.0, state.bounds)))
    return Population(members)


def imhs_phase(pop: Population, state: SearchState) -> Population:
    """``phase_length`` generations of harmony search.

    A generation is one improvisation per population slot, so an IMHS phase
    costs the same ``phase_length * population_size`` FE as an MDE phase.
    """
    cfg = state.config
    n = len(state.bounds)
    p = len(pop.members)
    for _ in range(cfg.phase_length * p):
        if state.budget_left <= 0:
            break
        use_memory = state.rng.random(n) < cfg.hmcr
        pitch = state.rng.random(n) < cfg.par
        donors = state.rng.integers(0, p, size=n)
        shift = state.rng.uniform(-cfg.bw, cfg.bw, size=n)
        fresh = state.rng.uniform(1.0, state.bounds)
        memory = np.array([pop.members[d].genotype[i] for i, d in enumerate(donors)])
        memory = np.where(pitch, memory + shift, memory)
        state.offer(pop, state.make(np.where(use_memory, memory, fresh)))
    return pop


def _distinct_partners(rng: np.random.Generator, p: int, i: int) -> tuple[int, int, int]:
    picked: list[int] = []
    while len(picked) < 3:
        k = int(rng.integers(p))
        if k != i and k not in picked:
            picked.append(k)
    return picked[0], picked[1], picked[2]


def mde_phase(pop: Population, state: SearchState) -> Population:
    """``phase_length`` generations of DE/rand/1/bin with worst-member replacement."""
    cfg = state.config
    n = len(state.bounds)
    p = len(pop.members)
    for _ in range(cfg.phase_length):
        for i in range(p):
            if state.budget_left <= 0:
                return pop
            r1, r2, r3 = _distinct_partners(state.rng, p, i)
            g = pop.members
            mutant = g[r1].genotype + cfg.f * (g[r2].genotype - g[r3].genotype)
            cross = state.rng.random(n) < cfg.cr
            cross[state.rng.integers(n)] = True
            trial = np.where(cross, mutant, g[i].genotype)
            state.offer(pop, state.make(trial))
    return pop


@dataclass(frozen=True)
class RunTrace:
    algorithm: str
    seed: int
    fe_used: int
    best_curve: tuple[tuple[int, float, bool], ...]
    best_allocation: Allocation
    best_reliability: float
    feasible: bool
    fe_to_target: int | None
    target: float | None
    stop_reason: str

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "fe_used": self.fe_used,
            "fe_to_target": self.fe_to_target,
            "target": self.target,
            "best_allocation": list(self.best_allocation),
            "best_reliability": self.best_reliability,
            "feasible": self.feasible,
            "stop_reason": self.stop_reason,
            "best_curve": [list(e) for e in self.best_curve],
        }


PHASES = {"imhs": imhs_phase, "mde": mde_phase}


def _run(problem, config, schedule: list[str], target, algorithm: str) -> RunTrace:
    state = SearchState(problem, config, target)
    stop = "max_fe"
    try:
        pop = init_population(state)
        if state.fe_to_target is not None:
            raise _TargetReached
        if state.bounds.max() <= 1.0:
            stop = "single_point"
        else:
            stall = 0
            k = 0
            while state.budget_left > 0:
                before = state.incumbent.evaluation
                PHASES[schedule[k % len(schedule)]](pop, state)
                k += 1
                if compare(state.incumbent.evaluation, before) > 0:
                    stall = 0
                else:
                    stall += 1
                    if stall >= config.stall_phases:
                        stop = "stalled"
                        break
    except _TargetReached:
        stop = "target"

    best = state.incumbent
    return RunTrace(
        algorithm=algorithm,
        seed=config.seed,
        fe_used=state.fe_used,
        best_curve=tuple(state.best_curve),
        best_allocation=best.allocation,
        best_reliability=best.evaluation.system_reliability,
        feasible=best.evaluation.feasible,
        fe_to_target=state.fe_to_target,
        target=target,
        stop_reason=stop,
    )


def hybrid_optimize(problem: SerialParallelProblem, config: HybridConfig, target: float | None = None) -> RunTrace:
    """Alternate IMHS and MDE phases on one shared population, IMHS first.

    Stops on budget exhaustion, after ``stall_phases`` phases without a new
    incumbent, or as soon as a feasible candidate reaches ``target``.
    """
    return _run(problem, config, ["imhs", "mde"], target, "hybrid")


def solo_optimize(
    problem: SerialParallelProblem,
    config: HybridConfig,
    variant: Literal["imhs", "mde"],
    target: float | None = None,
) -> RunTrace:
    if variant not in PHASES:
        raise ValueError(f"unknown variant {variant!r}")
    return _run(problem, config, [variant], target, variant)


ALGORITHMS = ("hybrid", "imhs", "mde")


def optimize(problem: SerialParallelProblem, config: HybridConfig, algorithm: str, target: float | None = None) -> RunTrace:
    if algorithm == "hybrid":
        return hybrid_optimize(problem, config, target)
    if algorithm in PHASES:
        return solo_optimize(problem, config, algorithm, target)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


"""Multi-seed benchmark campaigns and their CSV/JSON reports."""

from __future__ import annotations

import csv
import io
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .model import SerialParallelProblem
from .optimizer import HybridConfig, RunTrace, optimize

CSV_HEADER = ("seed", "fe_used", "fe_to_target", "best_reliability", "feasible")
# published row names for each algorithm this package runs
LITERATURE_NAMES = {"hybrid": "IMHS+MDE", "imhs": "IMHS"}


@dataclass(frozen=True)
class RunSummary:
    seed: int
    fe_used: int
    fe_to_target: int | None
    best_reliability: float
    feasible: bool
    best_allocation: tuple[int, ...]

    @classmethod
    def from_trace(cls, trace: RunTrace) -> "RunSummary":
        return cls(
            trace.seed,
            trace.fe_used,
            trace.fe_to_target,
            trace.best_reliability,
            trace.feasible,
            trace.best_allocation,
        )


@dataclass(frozen=True)
class CampaignResult:
    problem: str
    algorithm: str
    runs: int
    target: float | None
    success_count: int
    fe_to_target_median: float | None
    fe_to_target_mean: float | None
    best_reliability_overall: float
    per_run: tuple[RunSummary, ...]

    def summary_dict(self) -> dict:
        return {
            "problem": self.problem,
            "algorithm": self.algorithm,
            "runs": self.runs,
            "target": self.target,
            "success_count": self.success_count,
            "fe_to_target_median": self.fe_to_target_median,
            "fe_to_target_mean": self.fe_to_target_mean,
            "best_reliability_overall": self.best_reliability_overall,
        }

    def to_dict(self) -> dict:
        d = self.summary_dict()
        d["per_run"] = [
            {
                "seed": r.seed,
                "fe_used": r.fe_used,
                "fe_to_target": r.fe_to_target,
                "best_reliability": r.best_reliability,
                "feasible": r.feasible,
                "best_allocation": list(r.best_allocation),
            }
            for r in self.per_run
        ]
        return d


def aggregate(problem: str, algorithm: str, target: float | None, runs: list[RunSummary]) -> CampaignResult:
    hits = [r.fe_to_target for r in runs if r.fe_to_target is not None]
    feasible = [r.best_reliability for r in runs if r.feasible]
    return CampaignResult(
        problem=problem,
        algorithm=algorithm,
        runs=len(runs),
        target=target,
        success_count=len(hits),
        fe_to_target_median=float(statistics.median(hits)) if hits else None,
        fe_to_target_mean=float(statistics.fmean(hits)) if hits else None,
        best_reliability_overall=max(feasible) if feasible else max(r.best_reliability for r in runs),
        per_run=tuple(runs),
    )


def _one_run(args) -> RunTrace:
    problem, config, algorithm, target = args
    return optimize(problem, config, algorithm, target)


def run_campaign(
    problem: SerialParallelProblem,
    algorithm: str,
    config: HybridConfig,
    runs: int = 25,
    target: float | None = None,
    jobs: int = 1,
    base_seed: int | None = None,
) -> tuple[CampaignResult, list[RunTrace]]:
    """Run ``runs`` independent seeds ``base_seed + k``; results do not depend on ``jobs``."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    base = config.seed if base_seed is None else base_seed
    tasks = [(problem, config.replace(seed=base + k), algorithm, target) for k in range(runs)]
    if jobs == 1:
        traces = [_one_run(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            traces = list(pool.map(_one_run, tasks))
    summaries = [RunSummary.from_trace(t) for t in traces]
    return aggregate(problem.name, algorithm, target, summaries), traces


def _fmt_fe(value) -> str:
    return "" if value is None else str(value)


def campaign_csv(result: CampaignResult) -> str:
    """One row per run plus a trailing summary row.

    The summary row reads ``summary, <total fe_used>, <median fe_to_target>,
    <best reliability overall>, <success_count>/<runs>``.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in result.per_run:
        writer.writerow([r.seed, r.fe_used, _fmt_fe(r.fe_to_target), repr(r.best_reliability), str(r.feasible).lower()])
    median = result.fe_to_target_median
    writer.writerow([
        "summary",
        sum(r.fe_used for r in result.per_run),
        "" if median is None else repr(median),
        repr(result.best_reliability_overall),
        f"{result.success_count}/{result.runs}",
    ])
    return buf.getvalue()


def read_campaign_csv(text: str, problem: str = "", algorithm: str = "", target: float | None = None):
    """Parse a campaign CSV; returns (recomputed CampaignResult, raw summary row)."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    body, summary = rows[1:-1], rows[-1]
    if summary[0] != "summary":
        raise ValueError("missing summary row")
    runs = [
        RunSummary(
            seed=int(r[0]),
            fe_used=int(r[1]),
            fe_to_target=int(r[2]) if r[2] else None,
            best_reliability=float(r[3]),
            feasible=r[4] == "true",
            best_allocation=(),
        )
        for r in body
    ]
    return aggregate(problem, algorithm, target, runs), summary


def load_literature() -> dict:
    text = (resources.files("rrap") / "benchmarks" / "literature.json").read_text()
    return json.loads(text)


def literature_row(algorithm: str) -> dict | None:
    name = LITERATURE_NAMES.get(algorithm)
    for row in load_literature()["rows"]:
        if row["algorithm"] == name:
            return row
    return None


def format_report(result: CampaignResult) -> str:
    lines = [
        f"problem={result.problem} algorithm={result.algorithm} runs={result.runs} target={result.target}",
        f"success {result.success_count}/{result.runs}",
        f"best R_s overall {result.best_reliability_overall:.6f}",
    ]
    if result.success_count:
        lines.append(
            f"FE to target: median {result.fe_to_target_median:.1f}  mean {result.fe_to_target_mean:.1f}"
        )
    else:
        lines.append("FE to target: no successful runs")
    ref = literature_row(result.algorithm)
    if ref is not None:
        lines.append(
            f"literature (not reproduced): {ref['algorithm']} R_s={ref['reliability']:.6f} "
            f"FE={ref['fe']:,} ({ref['fe_statistic']})"
        )
    return "\n".join(lines)


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(dumps(payload))


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"

"""Dev-set grid search over the fusion weight and selection threshold.

The search re-runs selection and evaluation for every grid cell using
cached candidate scores and cached argument predictions; it never calls a
generation backend. Ties break toward the smaller threshold, then the
smaller weight.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .events import ContextInstance
from .generation import CandidateList, frames_from_cache
from .metrics import SUBTASKS, TRIG_C, EvalReport, evaluate_corpus
from .selector import SelectionConfig, fuse_and_select

DEFAULT_ALPHA_GRID = tuple(round(i * 0.1, 1) for i in range(11))  # 0.0 .. 1.0
DEFAULT_THETA_GRID = tuple(round(i * 0.05, 2) for i in range(1, 20))  # 0.05 .. 0.95


@dataclass(frozen=True)
class GridCell:
    alpha: float
    theta: float
    report: EvalReport


@dataclass(frozen=True)
class GridSearchResult:
    alpha: float
    theta: float
    metric: str
    table: tuple[GridCell, ...]

    def best_report(self) -> EvalReport:
        for cell in self.table:
            if cell.alpha == self.alpha and cell.theta == self.theta:
                return cell.report
        raise ValueError("best cell missing from table")


def evaluate_selection(
    dev: list[tuple[ContextInstance, CandidateList]],
    cfg: SelectionConfig,
) -> EvalReport:
    """Select with cached rank scores and score the resulting frames."""
    predictions = []
    for instance, candidates in dev:
        triggers = fuse_and_select(candidates, scorer=None, cfg=cfg)
        predictions.append((instance.doc_id, frames_from_cache(candidates, triggers)))
    return evaluate_corpus(predictions, [instance for instance, _ in dev])


def grid_search(
    dev: list[tuple[ContextInstance, CandidateList]],
    alpha_grid: list[float] | tuple[float, ...] = DEFAULT_ALPHA_GRID,
    theta_grid: list[float] | tuple[float, ...] = DEFAULT_THETA_GRID,
    metric: str = TRIG_C,
) -> GridSearchResult:
    if not dev:
        raise ValueError("empty dev set")
    if not alpha_grid or not theta_grid:
        raise ValueError("grids must be nonempty")
    if metric not in SUBTASKS:
        raise ValueError(f"unknown metric: {metric!r}")
    for value in list(alpha_grid) + list(theta_grid):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"grid value outside [0, 1]: {value}")

    table: list[GridCell] = []
    best: GridCell | None = None
    for theta in sorted(theta_grid):
        for alpha in sorted(alpha_grid):
            report = evaluate_selection(dev, SelectionConfig(alpha=alpha, theta=theta))
            cell = GridCell(alpha=alpha, theta=theta, report=report)
            table.append(cell)
            if best is None or cell.report.score(metric).f1 > best.report.score(metric).f1:
                best = cell
    return GridSearchResult(alpha=best.alpha, theta=best.theta, metric=metric, table=tuple(table))


def write_score_table(cells: list[GridCell] | tuple[GridCell, ...], path: str | Path, comment: str | None = None) -> None:
    """CSV rows (alpha, theta, four F1 columns); optional leading # comment."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh)
        writer.writerow(["alpha", "theta", "trig_i_f1", "trig_c_f1", "arg_i_f1", "arg_c_f1"])
        for cell in cells:
            writer.writerow(
                [f"{cell.alpha:g}", f"{cell.theta:g}"]
                + [f"{cell.report.score(name).f1:.6f}" for name in SUBTASKS]
            )

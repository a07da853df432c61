"""Report rendering: delimited ranking tables and score charts.

Charts are written straight to files (Agg backend), so reports work on
headless hosts. Tables round to 3 decimals to mirror how the scores are
usually quoted; the machine-readable JSON path keeps full precision.
"""
from __future__ import annotations

import csv
import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .fixtures import ReferenceRow
from .matching import MatchResult

BEST_COLOR = "#2a9d8f"
OTHER_COLOR = "#888888"

RANKING_FIELDS = [
    "rank",
    "station_id",
    "connector_index",
    "mode",
    "distance_km",
    "charge_hours",
    "wait_hours",
    "cost_currency",
    "norm_distance",
    "norm_charge_time",
    "norm_wait_time",
    "norm_cost",
    "score",
]


def ranking_csv_text(result: MatchResult) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(RANKING_FIELDS)
    for rank, c in enumerate(result.ranking, start=1):
        raw, norm = c.raw, c.normalized
        writer.writerow(
            [
                rank,
                c.station_id,
                c.connector_index,
                c.mode,
                f"{raw.distance_km:.6f}",
                f"{raw.charge_hours:.6f}",
                f"{raw.wait_hours:.6f}",
                f"{raw.cost_currency:.6f}",
                f"{norm.distance_km:.6f}",
                f"{norm.charge_hours:.6f}",
                f"{norm.wait_hours:.6f}",
                f"{norm.cost_currency:.6f}",
                f"{c.score:.6f}",
            ]
        )
    return out.getvalue()


def write_ranking_csv(path: str | Path, result: MatchResult) -> Path:
    path = Path(path)
    path.write_text(ranking_csv_text(result), encoding="utf-8")
    return path


def render_ranking_chart(path: str | Path, result: MatchResult, title: str) -> Path:
    path = Path(path)
    labels = [c.station_id for c in result.ranking]
    scores = [c.score for c in result.ranking]
    colors = [BEST_COLOR if c is result.best else OTHER_COLOR for c in result.ranking]

    fig, ax = plt.subplots(figsize=(max(6.0, 0.35 * len(labels)), 4.0))
    ax.bar(range(len(labels)), scores, color=colors)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90, fontsize=8)
    ax.set_xlabel("station id (ascending score)")
    ax.set_ylabel("performance metric (lower is better)")
    ax.set_title(title)
    ax.set_ylim(0.0, 1.0)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_scenario_csv(
    path: str | Path, rows: list[ReferenceRow], computed: list[float], scenario: str
) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["id", "wait", "distance", "cost", "charge_time", "computed", "reference", "deviation"]
        )
        for row, value in zip(rows, computed):
            reference = row.reference_score(scenario)
            writer.writerow(
                [
                    row.station_id,
                    row.wait,
                    row.distance,
                    row.cost,
                    row.charge_time,
                    f"{value:.6f}",
                    f"{reference:.3f}",
                    f"{abs(value - reference):.6f}",
                ]
            )
    return path


def render_scenario_chart(
    path: str | Path, rows: list[ReferenceRow], computed: list[float], scenario: str
) -> Path:
    """Computed vs reference scores per station, best station highlighted."""
    path = Path(path)
    best = min(range(len(computed)), key=computed.__getitem__)
    labels = [row.station_id for row in rows]
    reference = [row.reference_score(scenario) for row in rows]
    colors = [BEST_COLOR if i == best else OTHER_COLOR for i in range(len(rows))]

    fig, ax = plt.subplots(figsize=(9.0, 4.0))
    positions = range(len(rows))
    ax.bar(positions, computed, width=0.6, color=colors, label="computed")
    ax.plot(positions, reference, "k.", markersize=7, label="reference")
    ax.set_xticks(positions)
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_xlabel("station id")
    ax.set_ylabel("performance metric (lower is better)")
    ax.set_title(f"case study scenario {scenario.upper()}")
    ax.set_ylim(0.0, 1.0)
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path

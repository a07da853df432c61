"""Bundled case-study data: the Hasselt station catalog, the Nissan Leaf
profile, and the reference score table for the two benchmark scenarios.

The reference CSV carries the normalized feature columns and the scores
each scenario should reproduce; those columns are the ground truth. The
raw station catalog is a reconstruction (coordinates, tariffs and
charger counts chosen to reproduce the same normalized columns) and is
illustrative: tests assert the selected winners, never raw attributes.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources

from .errors import FixtureMissing
from .geo import GeoPoint
from .matching import FeatureTuple, Weights
from .model import EVProfile, Station
from . import codec

CASE_STUDY_ORIGIN = GeoPoint(50.9307, 5.3325)  # Hasselt city centre

SCENARIOS = {
    "s1": Weights(w_distance=0.25, w_charge_time=0.25, w_wait_time=0.25, w_cost=0.25),
    "s2": Weights(w_distance=0.4, w_charge_time=0.1, w_wait_time=0.4, w_cost=0.1),
}

# Any computed scenario score may differ from its reference value by at
# most this much; the bound absorbs the reference table's own rounding.
REFERENCE_TOLERANCE = 0.002


@dataclass(frozen=True)
class ReferenceRow:
    station_id: str
    wait: float
    distance: float
    cost: float
    charge_time: float
    s1: float
    s2: float

    def features(self) -> FeatureTuple:
        return FeatureTuple(
            distance_km=self.distance,
            charge_hours=self.charge_time,
            wait_hours=self.wait,
            cost_currency=self.cost,
        )

    def reference_score(self, scenario: str) -> float:
        return {"s1": self.s1, "s2": self.s2}[scenario]


def _read_data(name: str) -> str:
    try:
        return resources.files("wecharge").joinpath("data", name).read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise FixtureMissing(f"bundled data file {name!r} is missing") from exc


def load_reference_table() -> list[ReferenceRow]:
    rows = []
    for record in csv.DictReader(_read_data("case_study_reference.csv").splitlines()):
        rows.append(
            ReferenceRow(
                station_id=record["id"],
                wait=float(record["wait"]),
                distance=float(record["distance"]),
                cost=float(record["cost"]),
                charge_time=float(record["charge_time"]),
                s1=float(record["s1"]),
                s2=float(record["s2"]),
            )
        )
    return rows


def load_case_study_stations() -> list[Station]:
    return [codec.station_from_dict(d) for d in json.loads(_read_data("case_study_stations.json"))]


def load_leaf_profile() -> EVProfile:
    return codec.ev_profile_from_dict(json.loads(_read_data("nissan_leaf_2018.json")))

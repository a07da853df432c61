"""Matching pipeline: hard-constraint filter, feature computation,
max-normalization, weighted scoring, and best-option selection.

The pipeline is stateless and pure; it reads an immutable snapshot of the
station list, so any number of match calls may run concurrently.

Scoring uses sum-to-one weight normalization: each weight is divided by
the weight total, making the score a convex combination of the four
normalized features (lower is better). Dividing by the weight *mean*
instead would scale every score by exactly 4 and leave the ranking
untouched, so the convex form is canonical here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import ComponentOutOfRange, EmptyCandidateSet, NoFeasibleStation, ZeroWeightSum
from .geo import GeoPoint, great_circle_distance
from .model import (
    AvailabilityWindow,
    Connector,
    CurrentKind,
    EVProfile,
    Station,
    charge_duration,
    remaining_range,
)

# Waiting time is modelled as inversely proportional to charger count;
# the proportionality constant cancels under max-normalization, so it is
# pinned to one hour for reproducibility.
WAIT_PROPORTIONALITY_HOURS = 1.0

DEFAULT_SAFETY_MARGIN = 0.10


class ExclusionReason(str, Enum):
    INCOMPATIBLE_PLUG = "IncompatiblePlug"
    UNREACHABLE = "Unreachable"
    UNAVAILABLE = "Unavailable"
    OPTED_OUT = "OptedOut"


@dataclass(frozen=True)
class Exclusion:
    station_id: str
    connector_index: int | None  # None when the whole station is excluded
    reason: ExclusionReason


@dataclass(frozen=True)
class Weights:
    w_distance: float
    w_charge_time: float
    w_wait_time: float
    w_cost: float

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if value < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.total() <= 0:
            raise ZeroWeightSum("at least one preference weight must be positive")

    def total(self) -> float:
        return self.w_distance + self.w_charge_time + self.w_wait_time + self.w_cost

    def as_dict(self) -> dict[str, float]:
        return {
            "w_distance": self.w_distance,
            "w_charge_time": self.w_charge_time,
            "w_wait_time": self.w_wait_time,
            "w_cost": self.w_cost,
        }


@dataclass(frozen=True)
class MatchRequest:
    ev: EVProfile
    origin: GeoPoint
    weights: Weights
    window: AvailabilityWindow
    safety_margin: float = DEFAULT_SAFETY_MARGIN

    def __post_init__(self):
        if not (0.0 <= self.safety_margin < 1.0):
            raise ValueError("safety_margin must lie in [0, 1)")


@dataclass(frozen=True)
class FeatureTuple:
    distance_km: float
    charge_hours: float
    wait_hours: float
    cost_currency: float

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and nonnegative")

    def as_dict(self) -> dict[str, float]:
        return {
            "distance_km": self.distance_km,
            "charge_hours": self.charge_hours,
            "wait_hours": self.wait_hours,
            "cost_currency": self.cost_currency,
        }


@dataclass
class CandidateOption:
    station_id: str
    connector_index: int
    mode: str
    raw: FeatureTuple
    normalized: FeatureTuple | None = None
    score: float | None = None


@dataclass(frozen=True)
class MatchResult:
    best: CandidateOption
    ranking: list[CandidateOption] = field(default_factory=list)
    excluded: list[Exclusion] = field(default_factory=list)


def filter_hard_constraints(
    req: MatchRequest, stations: list[Station]
) -> tuple[list[tuple[Station, int]], list[Exclusion]]:
    """Keep (station, connector) pairs the vehicle can actually use.

    A pair survives iff the plug and current kind are usable, the station
    is within the vehicle's safe remaining range, the station has not
    opted out, and some availability window fully contains the requested
    window. Each failing pair (or station) is recorded with a reason.
    """
    candidates: list[tuple[Station, int]] = []
    excluded: list[Exclusion] = []
    reach_km = remaining_range(req.ev) * (1.0 - req.safety_margin)

    for station in stations:
        if station.opted_out:
            excluded.append(Exclusion(station.id, None, ExclusionReason.OPTED_OUT))
            continue

        usable: list[int] = []
        for index, connector in enumerate(station.connectors):
            if connector.plug not in req.ev.plug_types or (
                connector.power.current_kind is CurrentKind.DC
                and req.ev.dc_max_power_kw <= 0
            ):
                excluded.append(
                    Exclusion(station.id, index, ExclusionReason.INCOMPATIBLE_PLUG)
                )
            else:
                usable.append(index)
        if not usable:
            continue

        if great_circle_distance(req.origin, station.location) > reach_km:
            excluded.append(Exclusion(station.id, None, ExclusionReason.UNREACHABLE))
            continue
        if not any(w.contains(req.window) for w in station.availability):
            excluded.append(Exclusion(station.id, None, ExclusionReason.UNAVAILABLE))
            continue

        candidates.extend((station, index) for index in usable)

    return candidates, excluded


def compute_features(req: MatchRequest, station: Station, connector: Connector) -> FeatureTuple:
    """Raw option features for one surviving (station, connector) pair."""
    return FeatureTuple(
        distance_km=great_circle_distance(req.origin, station.location),
        charge_hours=charge_duration(req.ev, connector.power),
        wait_hours=WAIT_PROPORTIONALITY_HOURS / station.charger_count,
        cost_currency=req.ev.battery_capacity_kwh * connector.tariff_per_kwh,
    )


def normalize(candidates: list[CandidateOption]) -> list[CandidateOption]:
    """Divide each feature column by its maximum over the candidate set.

    A column whose maximum is 0 is identical across candidates and must
    not influence the ranking, so it normalizes to all zeros.
    """
    if not candidates:
        raise EmptyCandidateSet("cannot normalize an empty candidate set")
    maxima = {
        name: max(c.raw.as_dict()[name] for c in candidates)
        for name in ("distance_km", "charge_hours", "wait_hours", "cost_currency")
    }
    for candidate in candidates:
        raw = candidate.raw.as_dict()
        candidate.normalized = FeatureTuple(
            **{name: raw[name] / maxima[name] if maxima[name] > 0 else 0.0 for name in maxima}
        )
    return candidates


def score(weights: Weights, candidate: CandidateOption) -> float:
    """Performance metric: weighted mean of the normalized features."""
    total = weights.total()
    if total <= 0:
        raise ZeroWeightSum("weights sum to zero")
    if candidate.normalized is None:
        raise ValueError("candidate has no normalized features; run normalize() first")
    n = candidate.normalized
    value = (
        weights.w_distance * n.distance_km
        + weights.w_charge_time * n.charge_hours
        + weights.w_wait_time * n.wait_hours
        + weights.w_cost * n.cost_currency
    ) / total
    candidate.score = value
    return value


def match(req: MatchRequest, stations: list[Station]) -> MatchResult:
    """Full pipeline: filter, features, normalize, score, ascending sort.

    Ties break on smaller raw distance, then lexicographically smaller
    station id (then connector index and mode, so multi-connector
    stations rank deterministically too).
    """
    pairs, excluded = filter_hard_constraints(req, stations)
    candidates = [
        CandidateOption(
            station_id=station.id,
            connector_index=index,
            mode=mode.value,
            raw=compute_features(req, station, station.connectors[index]),
        )
        for station, index in pairs
        for mode in sorted(station.connectors[index].mode_tags, key=lambda m: m.value)
    ]
    if not candidates:
        raise NoFeasibleStation(
            "no station satisfies the hard constraints",
            details={"excluded": [_exclusion_dict(e) for e in excluded]},
        )

    normalize(candidates)
    for candidate in candidates:
        score(req.weights, candidate)
    candidates.sort(
        key=lambda c: (c.score, c.raw.distance_km, c.station_id, c.connector_index, c.mode)
    )
    return MatchResult(best=candidates[0], ranking=candidates, excluded=excluded)


def score_fixture(weights: Weights, table: list[FeatureTuple]) -> list[float]:
    """Score rows that are already normalized, without re-normalizing.

    Supports replaying published benchmark tables whose raw inputs were
    never released.
    """
    for row in table:
        for name, value in row.as_dict().items():
            if not (0.0 <= value <= 1.0):
                raise ComponentOutOfRange(f"{name}={value} outside [0, 1]")
    rows = [
        CandidateOption(station_id="", connector_index=0, mode="", raw=row, normalized=row)
        for row in table
    ]
    return [score(weights, row) for row in rows]


def _exclusion_dict(e: Exclusion) -> dict:
    return {
        "station_id": e.station_id,
        "connector_index": e.connector_index,
        "reason": e.reason.value,
    }

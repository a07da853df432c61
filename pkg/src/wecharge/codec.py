"""JSON (de)serialization for the wire and file formats.

One codec backs the station catalog files, the event log, and the HTTP
payloads, so a station registered via POST and fetched via GET is
field-for-field identical. Field names are lower_snake_case; enums are
carried by their canonical string values; timestamps are ISO 8601 UTC.

Parsing is strict: unknown enum identifiers and invariant violations are
rejected here rather than leaking into the engine.
"""
from __future__ import annotations

from datetime import datetime, timezone

from .errors import InvalidRequest, InvalidStation, ZeroWeightSum
from .geo import GeoPoint
from .matching import (
    DEFAULT_SAFETY_MARGIN,
    CandidateOption,
    Exclusion,
    ExclusionReason,
    FeatureTuple,
    MatchRequest,
    MatchResult,
    Weights,
)
from .model import (
    AvailabilityWindow,
    ChargeMode,
    Connector,
    CurrentKind,
    EVProfile,
    Ownership,
    PlugType,
    PowerSpec,
    Station,
)

_CONSTRUCTION_ERRORS = (ValueError, TypeError, KeyError)


def parse_timestamp(value: str) -> datetime:
    ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def window_from_dict(data: dict) -> AvailabilityWindow:
    return AvailabilityWindow(
        start=parse_timestamp(data["start"]), end=parse_timestamp(data["end"])
    )


def window_to_dict(window: AvailabilityWindow) -> dict:
    return {"start": format_timestamp(window.start), "end": format_timestamp(window.end)}


def _power_from_dict(data: dict) -> PowerSpec:
    return PowerSpec(
        rated_power_kw=float(data["rated_power_kw"]),
        current_kind=CurrentKind(data["current_kind"]),
        phases=int(data.get("phases", 1)),
        amperage_a=float(data["amperage_a"]),
        voltage_v=float(data["voltage_v"]),
    )


def _power_to_dict(spec: PowerSpec) -> dict:
    return {
        "rated_power_kw": spec.rated_power_kw,
        "current_kind": spec.current_kind.value,
        "phases": spec.phases,
        "amperage_a": spec.amperage_a,
        "voltage_v": spec.voltage_v,
    }


def _connector_from_dict(data: dict) -> Connector:
    return Connector(
        plug=PlugType(data["plug"]),
        power=_power_from_dict(data["power"]),
        tariff_per_kwh=float(data["tariff_per_kwh"]),
        mode_tags=frozenset(ChargeMode(tag) for tag in data["mode_tags"]),
    )


def _connector_to_dict(connector: Connector) -> dict:
    return {
        "plug": connector.plug.value,
        "power": _power_to_dict(connector.power),
        "tariff_per_kwh": connector.tariff_per_kwh,
        "mode_tags": sorted(tag.value for tag in connector.mode_tags),
    }


def station_from_dict(data: dict) -> Station:
    try:
        location = data["location"]
        return Station(
            id=str(data["id"]),
            name=str(data.get("name", "")),
            location=GeoPoint(float(location["latitude"]), float(location["longitude"])),
            connectors=tuple(_connector_from_dict(c) for c in data["connectors"]),
            charger_count=int(data["charger_count"]),
            ownership=Ownership(data["ownership"]),
            opted_out=bool(data.get("opted_out", False)),
            availability=tuple(window_from_dict(w) for w in data.get("availability", [])),
            metadata=dict(data.get("metadata", {})),
        )
    except _CONSTRUCTION_ERRORS as exc:
        raise InvalidStation(f"invalid station payload: {exc}") from exc


def station_to_dict(station: Station) -> dict:
    return {
        "id": station.id,
        "name": station.name,
        "location": {
            "latitude": station.location.latitude,
            "longitude": station.location.longitude,
        },
        "connectors": [_connector_to_dict(c) for c in station.connectors],
        "charger_count": station.charger_count,
        "ownership": station.ownership.value,
        "opted_out": station.opted_out,
        "availability": [window_to_dict(w) for w in station.availability],
        "metadata": station.metadata,
    }


def ev_profile_from_dict(data: dict) -> EVProfile:
    try:
        return EVProfile(
            model_name=str(data["model_name"]),
            battery_capacity_kwh=float(data["battery_capacity_kwh"]),
            total_range_km=float(data["total_range_km"]),
            plug_types=frozenset(PlugType(p) for p in data["plug_types"]),
            ac_max_power_kw=float(data["ac_max_power_kw"]),
            dc_max_power_kw=float(data.get("dc_max_power_kw", 0.0)),
            current_soc=float(data["current_soc"]),
        )
    except _CONSTRUCTION_ERRORS as exc:
        raise InvalidRequest(f"invalid EV profile: {exc}") from exc


def ev_profile_to_dict(ev: EVProfile) -> dict:
    return {
        "model_name": ev.model_name,
        "battery_capacity_kwh": ev.battery_capacity_kwh,
        "total_range_km": ev.total_range_km,
        "plug_types": sorted(p.value for p in ev.plug_types),
        "ac_max_power_kw": ev.ac_max_power_kw,
        "dc_max_power_kw": ev.dc_max_power_kw,
        "current_soc": ev.current_soc,
    }


def weights_from_dict(data: dict) -> Weights:
    try:
        return Weights(
            w_distance=float(data["w_distance"]),
            w_charge_time=float(data["w_charge_time"]),
            w_wait_time=float(data["w_wait_time"]),
            w_cost=float(data["w_cost"]),
        )
    except ZeroWeightSum:
        raise
    except _CONSTRUCTION_ERRORS as exc:
        raise InvalidRequest(f"invalid weights: {exc}") from exc


def match_request_from_dict(data: dict) -> MatchRequest:
    try:
        origin = data["origin"]
        return MatchRequest(
            ev=ev_profile_from_dict(data["ev"]),
            origin=GeoPoint(float(origin["latitude"]), float(origin["longitude"])),
            weights=weights_from_dict(data["weights"]),
            window=window_from_dict(data["window"]),
            safety_margin=float(data.get("safety_margin", DEFAULT_SAFETY_MARGIN)),
        )
    except (ZeroWeightSum, InvalidRequest):
        raise
    except _CONSTRUCTION_ERRORS as exc:
        raise InvalidRequest(f"invalid match request: {exc}") from exc


def match_request_to_dict(req: MatchRequest) -> dict:
    return {
        "ev": ev_profile_to_dict(req.ev),
        "origin": {"latitude": req.origin.latitude, "longitude": req.origin.longitude},
        "weights": req.weights.as_dict(),
        "window": window_to_dict(req.window),
        "safety_margin": req.safety_margin,
    }


def _feature_tuple_to_dict(features: FeatureTuple) -> dict:
    return features.as_dict()


def candidate_to_dict(candidate: CandidateOption) -> dict:
    return {
        "station_id": candidate.station_id,
        "connector_index": candidate.connector_index,
        "mode": candidate.mode,
        "raw": _feature_tuple_to_dict(candidate.raw),
        "normalized": _feature_tuple_to_dict(candidate.normalized)
        if candidate.normalized is not None
        else None,
        "score": candidate.score,
    }


def candidate_from_dict(data: dict) -> CandidateOption:
    return CandidateOption(
        station_id=data["station_id"],
        connector_index=int(data["connector_index"]),
        mode=data["mode"],
        raw=FeatureTuple(**data["raw"]),
        normalized=FeatureTuple(**data["normalized"]) if data.get("normalized") else None,
        score=data.get("score"),
    )


def exclusion_to_dict(exclusion: Exclusion) -> dict:
    return {
        "station_id": exclusion.station_id,
        "connector_index": exclusion.connector_index,
        "reason": exclusion.reason.value,
    }


def exclusion_from_dict(data: dict) -> Exclusion:
    index = data.get("connector_index")
    return Exclusion(
        station_id=data["station_id"],
        connector_index=None if index is None else int(index),
        reason=ExclusionReason(data["reason"]),
    )


def match_result_to_dict(result: MatchResult) -> dict:
    return {
        "best": candidate_to_dict(result.best),
        "ranking": [candidate_to_dict(c) for c in result.ranking],
        "excluded": [exclusion_to_dict(e) for e in result.excluded],
    }


def match_result_from_dict(data: dict) -> MatchResult:
    return MatchResult(
        best=candidate_from_dict(data["best"]),
        ranking=[candidate_from_dict(c) for c in data["ranking"]],
        excluded=[exclusion_from_dict(e) for e in data["excluded"]],
    )

from __future__ import annotations

from datetime import datetime, timezone

import pytest

from wecharge import fixtures
from wecharge.geo import GeoPoint
from wecharge.model import (
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


def utc(*args) -> datetime:
    return datetime(*args, tzinfo=timezone.utc)


def window(start_hour: int, end_hour: int, day: int = 1) -> AvailabilityWindow:
    return AvailabilityWindow(utc(2025, 6, day, start_hour), utc(2025, 6, day, end_hour))


ALL_DAY = AvailabilityWindow(utc(2025, 1, 1), utc(2030, 1, 1))


def ac_spec(rated_kw: float, phases: int = 1) -> PowerSpec:
    # amperage derived from the rating so the nameplate sanity bound holds
    return PowerSpec(
        rated_power_kw=rated_kw,
        current_kind=CurrentKind.AC,
        phases=phases,
        amperage_a=rated_kw * 1000.0 / (230.0 * phases),
        voltage_v=230.0,
    )


def dc_spec(rated_kw: float) -> PowerSpec:
    return PowerSpec(
        rated_power_kw=rated_kw,
        current_kind=CurrentKind.DC,
        phases=1,
        amperage_a=rated_kw * 1000.0 / 400.0,
        voltage_v=400.0,
    )


def make_station(
    station_id: str,
    lat: float,
    lon: float,
    *,
    connectors=None,
    charger_count: int = 2,
    opted_out: bool = False,
    availability=(ALL_DAY,),
    ownership: Ownership = Ownership.PUBLIC,
) -> Station:
    if connectors is None:
        connectors = [
            Connector(
                plug=PlugType.TYPE2,
                power=ac_spec(22.0, phases=3),
                tariff_per_kwh=0.30,
                mode_tags=frozenset({ChargeMode.CHARGE_ONLY}),
            )
        ]
    return Station(
        id=station_id,
        name=f"station {station_id}",
        location=GeoPoint(lat, lon),
        connectors=tuple(connectors),
        charger_count=charger_count,
        ownership=ownership,
        opted_out=opted_out,
        availability=tuple(availability),
    )


@pytest.fixture
def leaf() -> EVProfile:
    return fixtures.load_leaf_profile()


@pytest.fixture
def case_study_stations():
    return fixtures.load_case_study_stations()


@pytest.fixture
def reference_rows():
    return fixtures.load_reference_table()

"""Domain model: vehicles, stations, connectors, and charge physics.

All types are immutable values validated at construction; the operations
at the bottom are pure functions, safe to call from any thread.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from .errors import NoDcCapability
from .geo import GeoPoint

# Nameplate ratings are rounded, so rated power only has to agree with
# voltage * amperage * phases to within this relative bound.
POWER_SANITY_TOLERANCE = 0.25


class PlugType(str, Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    CCS = "CCS"
    CHADEMO = "CHAdeMO"
    DOMESTIC_SCHUKO = "DomesticSchuko"


class CurrentKind(str, Enum):
    AC = "AC"
    DC = "DC"


class ChargeMode(str, Enum):
    """Charging service modes. Only CHARGE_ONLY has implemented semantics;
    the V2G and arbitrage tags are carried as pass-through labels."""

    CHARGE_ONLY = "ChargeOnly"
    V2G_DSO = "V2G_DSO"
    V2G_TSO = "V2G_TSO"
    ARBITRAGE = "Arbitrage"


class Ownership(str, Enum):
    PRIVATE = "Private"
    SME = "SME"
    PUBLIC = "Public"


@dataclass(frozen=True)
class PowerSpec:
    rated_power_kw: float
    current_kind: CurrentKind
    phases: int
    amperage_a: float
    voltage_v: float

    def __post_init__(self):
        if self.rated_power_kw <= 0:
            raise ValueError("rated_power_kw must be > 0")
        if self.amperage_a <= 0 or self.voltage_v <= 0:
            raise ValueError("amperage and voltage must be > 0")
        if self.current_kind is CurrentKind.DC:
            if self.phases != 1:
                raise ValueError("DC specs carry phases = 1 by convention")
        elif self.phases not in (1, 3):
            raise ValueError("AC phases must be 1 or 3")
        electrical_kw = self.voltage_v * self.amperage_a * self.phases / 1000.0
        if abs(self.rated_power_kw - electrical_kw) > POWER_SANITY_TOLERANCE * electrical_kw:
            raise ValueError(
                f"rated power {self.rated_power_kw} kW inconsistent with "
                f"V*A*phases = {electrical_kw:.2f} kW"
            )


@dataclass(frozen=True)
class EVProfile:
    model_name: str
    battery_capacity_kwh: float
    total_range_km: float
    plug_types: frozenset[PlugType]
    ac_max_power_kw: float
    dc_max_power_kw: float  # 0 = no DC capability
    current_soc: float

    def __post_init__(self):
        if self.battery_capacity_kwh <= 0:
            raise ValueError("battery_capacity_kwh must be > 0")
        if self.total_range_km <= 0:
            raise ValueError("total_range_km must be > 0")
        if not self.plug_types:
            raise ValueError("plug_types must be nonempty")
        if self.ac_max_power_kw <= 0:
            raise ValueError("ac_max_power_kw must be > 0")
        if self.dc_max_power_kw < 0:
            raise ValueError("dc_max_power_kw must be >= 0")
        if not (0.0 <= self.current_soc <= 1.0):
            raise ValueError("current_soc must lie in [0, 1]")
        object.__setattr__(self, "plug_types", frozenset(self.plug_types))


@dataclass(frozen=True)
class Connector:
    plug: PlugType
    power: PowerSpec
    tariff_per_kwh: float
    mode_tags: frozenset[ChargeMode]

    def __post_init__(self):
        if self.tariff_per_kwh < 0:
            raise ValueError("tariff_per_kwh must be >= 0")
        if not self.mode_tags:
            raise ValueError("mode_tags must be nonempty")
        object.__setattr__(self, "mode_tags", frozenset(self.mode_tags))


@dataclass(frozen=True)
class AvailabilityWindow:
    start: datetime
    end: datetime

    def __post_init__(self):
        object.__setattr__(self, "start", _as_utc(self.start))
        object.__setattr__(self, "end", _as_utc(self.end))
        if self.start >= self.end:
            raise ValueError("window start must precede end")

    def contains(self, other: AvailabilityWindow) -> bool:
        return self.start <= other.start and other.end <= self.end

    def overlaps(self, other: AvailabilityWindow) -> bool:
        return self.start < other.end and other.start < self.end


def _as_utc(ts: datetime) -> datetime:
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


@dataclass(frozen=True)
class Station:
    id: str
    name: str
    location: GeoPoint
    connectors: tuple[Connector, ...]
    charger_count: int
    ownership: Ownership
    opted_out: bool = False
    availability: tuple[AvailabilityWindow, ...] = ()
    metadata: dict = field(default_factory=dict)  # opaque (manufacturer, payment modes, ...)

    def __post_init__(self):
        if not self.id:
            raise ValueError("station id must be nonempty")
        object.__setattr__(self, "connectors", tuple(self.connectors))
        object.__setattr__(self, "availability", tuple(self.availability))
        if not self.connectors:
            raise ValueError("connectors must be nonempty")
        if self.charger_count < 1:
            raise ValueError("charger_count must be >= 1")
        for prev, cur in zip(self.availability, self.availability[1:]):
            if cur.start < prev.end:
                raise ValueError("availability windows must be sorted and non-overlapping")


def effective_charge_power(ev: EVProfile, spec: PowerSpec) -> float:
    """Deliverable power in kW: the lesser of station rating and the
    vehicle-side acceptance limit for the spec's current kind."""
    if spec.current_kind is CurrentKind.AC:
        return min(spec.rated_power_kw, ev.ac_max_power_kw)
    if ev.dc_max_power_kw <= 0:
        raise NoDcCapability(f"{ev.model_name} cannot charge on DC")
    return min(spec.rated_power_kw, ev.dc_max_power_kw)


def charge_duration(ev: EVProfile, spec: PowerSpec) -> float:
    """Hours to charge the full battery capacity at constant effective power.

    Full capacity (zero-SoC convention) on purpose: the duration feature
    compares stations, it is not a billing estimate.
    """
    return ev.battery_capacity_kwh / effective_charge_power(ev, spec)


def remaining_range(ev: EVProfile) -> float:
    """Kilometres the vehicle can still travel on its current charge."""
    return ev.current_soc * ev.total_range_km

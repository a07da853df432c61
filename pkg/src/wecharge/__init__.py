"""wecharge: match incoming EVs to the best available charging station.

The pipeline filters stations by hard constraints (plug compatibility,
remaining range, availability), scores the survivors with a normalized
weighted sum of distance, charge duration, expected wait and cost, and
returns the lowest-scoring option. A registry adds availability
bookkeeping, owner opt-out and atomic pre-booking; the service and CLI
expose the whole thing over HTTP and the shell.
"""
from .geo import GeoPoint, great_circle_distance
from .matching import (
    CandidateOption,
    FeatureTuple,
    MatchRequest,
    MatchResult,
    Weights,
    match,
    score_fixture,
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
    charge_duration,
    effective_charge_power,
    remaining_range,
)
from .registry import Reservation, ReservationStatus, StationRegistry

__version__ = "0.1.0"

__all__ = [
    "AvailabilityWindow",
    "CandidateOption",
    "ChargeMode",
    "Connector",
    "CurrentKind",
    "EVProfile",
    "FeatureTuple",
    "GeoPoint",
    "MatchRequest",
    "MatchResult",
    "Ownership",
    "PlugType",
    "PowerSpec",
    "Reservation",
    "ReservationStatus",
    "Station",
    "StationRegistry",
    "Weights",
    "charge_duration",
    "effective_charge_power",
    "great_circle_distance",
    "match",
    "remaining_range",
    "score_fixture",
]

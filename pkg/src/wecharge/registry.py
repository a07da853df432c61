"""Mutable source of truth for stations: registration, opt-out, and
atomic pre-booking with overstay flagging.

Concurrency model: many concurrent readers, serialized writers. Every
mutation runs under one lock, so reserve() is atomic with respect to
overlapping reserve() calls. snapshot() hands out immutable values that
are safe to share with any consumer.

Durability is an append-only event log (one JSON record per line, with a
versioned header line) replayed at startup; in-memory state is the
authoritative runtime view.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from . import codec
from .errors import (
    DuplicateId,
    InvalidTransition,
    NotYetEnded,
    ParseError,
    SlotTaken,
    Unavailable,
    UnknownReservation,
    UnknownStation,
)
from .model import AvailabilityWindow, Station

LOG_FORMAT = "wecharge-events"
LOG_VERSION = 1


class ReservationStatus(str, Enum):
    CONFIRMED = "Confirmed"
    CANCELLED = "Cancelled"
    COMPLETED = "Completed"
    OVERSTAYED = "Overstayed"


@dataclass(frozen=True)
class Reservation:
    reservation_id: str
    station_id: str
    connector_index: int
    window: AvailabilityWindow
    vehicle_id: str
    status: ReservationStatus

    def to_dict(self) -> dict:
        return {
            "reservation_id": self.reservation_id,
            "station_id": self.station_id,
            "connector_index": self.connector_index,
            "window": codec.window_to_dict(self.window),
            "vehicle_id": self.vehicle_id,
            "status": self.status.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> Reservation:
        return cls(
            reservation_id=data["reservation_id"],
            station_id=data["station_id"],
            connector_index=int(data["connector_index"]),
            window=codec.window_from_dict(data["window"]),
            vehicle_id=data["vehicle_id"],
            status=ReservationStatus(data["status"]),
        )


@dataclass(frozen=True)
class RegistrySnapshot:
    """Point-in-time view; station availability already has confirmed
    reservations folded in (per charger capacity)."""

    stations: tuple[Station, ...]
    version: int


class StationRegistry:
    def __init__(self, log_path: str | Path | None = None):
        self._lock = threading.Lock()
        self._stations: dict[str, Station] = {}
        self._reservations: dict[str, Reservation] = {}
        self._notifications: list[dict] = []
        self._version = 0
        self._reservation_seq = 0
        self._log_path = Path(log_path) if log_path else None
        self._log_handle = None
        if self._log_path is not None:
            self._open_log()

    # ---- persistence ----

    def _open_log(self):
        exists = self._log_path.exists() and self._log_path.stat().st_size > 0
        if exists:
            self._replay()
        self._log_handle = self._log_path.open("a", encoding="utf-8")
        if not exists:
            header = {"format": LOG_FORMAT, "version": LOG_VERSION}
            self._log_handle.write(json.dumps(header) + "\n")
            self._log_handle.flush()

    def _replay(self):
        with self._log_path.open(encoding="utf-8") as handle:
            header = json.loads(handle.readline())
            if header.get("format") != LOG_FORMAT or header.get("version") != LOG_VERSION:
                raise ParseError(f"unsupported event log header: {header}")
            for line in handle:
                line = line.strip()
                if line:
                    record = json.loads(line)
                    self._apply(record["event"], record["payload"])

    def _append(self, event: str, payload: dict):
        if self._log_handle is None:
            return
        record = {
            "event": event,
            "ts": codec.format_timestamp(datetime.now(timezone.utc)),
            "payload": payload,
        }
        self._log_handle.write(json.dumps(record) + "\n")
        self._log_handle.flush()

    def _apply(self, event: str, payload: dict):
        """Rebuild in-memory state from one logged event."""
        if event == "station_registered":
            station = codec.station_from_dict(payload)
            self._stations[station.id] = station
        elif event == "opt_out_set":
            station = self._stations[payload["station_id"]]
            self._stations[station.id] = replace(station, opted_out=payload["opted_out"])
        elif event == "reservation_made":
            reservation = Reservation.from_dict(payload)
            self._reservations[reservation.reservation_id] = reservation
            seq = int(reservation.reservation_id.lstrip("r"))
            self._reservation_seq = max(self._reservation_seq, seq)
        elif event in ("reservation_cancelled", "reservation_completed", "overstay_flagged"):
            reservation = self._reservations[payload["reservation_id"]]
            status = {
                "reservation_cancelled": ReservationStatus.CANCELLED,
                "reservation_completed": ReservationStatus.COMPLETED,
                "overstay_flagged": ReservationStatus.OVERSTAYED,
            }[event]
            self._reservations[reservation.reservation_id] = replace(reservation, status=status)
            if event == "overstay_flagged":
                self._notifications.append(payload["notification"])
        else:
            raise ParseError(f"unknown event type {event!r}")
        self._version += 1

    def close(self):
        if self._log_handle is not None:
            self._log_handle.close()
            self._log_handle = None

    # ---- mutations (serialized) ----

    def register_station(self, station: Station) -> str:
        with self._lock:
            if station.id in self._stations:
                raise DuplicateId(f"station {station.id!r} already registered")
            self._stations[station.id] = station
            self._version += 1
            self._append("station_registered", codec.station_to_dict(station))
            return station.id

    def set_opt_out(self, station_id: str, opted_out: bool) -> int:
        """Flip the owner's participation flag. Existing confirmed
        reservations stay honored; only new matching is affected."""
        with self._lock:
            station = self._require_station(station_id)
            self._stations[station_id] = replace(station, opted_out=opted_out)
            self._version += 1
            self._append("opt_out_set", {"station_id": station_id, "opted_out": opted_out})
            return self._version

    def reserve(
        self, station_id: str, connector_index: int, window: AvailabilityWindow, vehicle_id: str
    ) -> Reservation:
        """Atomic check-and-commit of a charging slot.

        Succeeds iff the window lies inside a declared availability window
        and fewer than charger_count confirmed reservations overlap it at
        every instant; on success the slot is consumed for subsequent
        availability checks.
        """
        with self._lock:
            station = self._require_station(station_id)
            if station.opted_out:
                raise Unavailable(f"station {station_id!r} has opted out")
            if not (0 <= connector_index < len(station.connectors)):
                raise Unavailable(f"station {station_id!r} has no connector {connector_index}")
            if not any(w.contains(window) for w in station.availability):
                raise Unavailable(
                    f"station {station_id!r} is not available for the requested window"
                )
            if self._peak_occupancy(station_id, window) >= station.charger_count:
                raise SlotTaken(
                    f"all {station.charger_count} chargers at station {station_id!r} "
                    "are booked in the requested window"
                )
            self._reservation_seq += 1
            reservation = Reservation(
                reservation_id=f"r{self._reservation_seq:06d}",
                station_id=station_id,
                connector_index=connector_index,
                window=window,
                vehicle_id=vehicle_id,
                status=ReservationStatus.CONFIRMED,
            )
            self._reservations[reservation.reservation_id] = reservation
            self._version += 1
            self._append("reservation_made", reservation.to_dict())
            return reservation

    def cancel(self, reservation_id: str) -> Reservation:
        with self._lock:
            reservation = self._transition(
                reservation_id, ReservationStatus.CANCELLED, "reservation_cancelled"
            )
            return reservation

    def complete(self, reservation_id: str) -> Reservation:
        with self._lock:
            return self._transition(
                reservation_id, ReservationStatus.COMPLETED, "reservation_completed"
            )

    def flag_overstay(self, reservation_id: str, now: datetime) -> Reservation:
        """Mark a reservation whose vehicle is still plugged in after the
        window ended, and queue a notification event for polling.

        The clock is an explicit input; the registry never reads wall
        time for this decision.
        """
        with self._lock:
            reservation = self._reservations.get(reservation_id)
            if reservation is None:
                raise UnknownReservation(f"no reservation {reservation_id!r}")
            if reservation.status is not ReservationStatus.CONFIRMED:
                raise InvalidTransition(
                    f"cannot flag overstay from status {reservation.status.value}"
                )
            if now.tzinfo is None:
                now = now.replace(tzinfo=timezone.utc)
            if now <= reservation.window.end:
                raise NotYetEnded(
                    f"reservation {reservation_id!r} runs until "
                    f"{codec.format_timestamp(reservation.window.end)}"
                )
            updated = replace(reservation, status=ReservationStatus.OVERSTAYED)
            self._reservations[reservation_id] = updated
            notification = {
                "reservation_id": reservation_id,
                "station_id": reservation.station_id,
                "vehicle_id": reservation.vehicle_id,
                "window": codec.window_to_dict(reservation.window),
                "noted_at": codec.format_timestamp(now),
            }
            self._notifications.append(notification)
            self._version += 1
            self._append(
                "overstay_flagged",
                {"reservation_id": reservation_id, "notification": notification},
            )
            return updated

    # ---- reads ----

    def snapshot(self) -> RegistrySnapshot:
        """Consistent point-in-time view with effective availability:
        declared windows minus intervals where confirmed reservations
        already saturate the charger capacity."""
        with self._lock:
            stations = tuple(
                replace(
                    station,
                    availability=self._effective_availability(station),
                    metadata=dict(station.metadata),
                )
                for station in self._stations.values()
            )
            return RegistrySnapshot(stations=stations, version=self._version)

    def get_station(self, station_id: str) -> Station:
        with self._lock:
            station = self._require_station(station_id)
            return replace(
                station,
                availability=self._effective_availability(station),
                metadata=dict(station.metadata),
            )

    def get_reservation(self, reservation_id: str) -> Reservation:
        with self._lock:
            reservation = self._reservations.get(reservation_id)
            if reservation is None:
                raise UnknownReservation(f"no reservation {reservation_id!r}")
            return reservation

    def reservations(self) -> list[Reservation]:
        with self._lock:
            return list(self._reservations.values())

    def notifications(self) -> list[dict]:
        """Pollable overstay notification events, oldest first."""
        with self._lock:
            return [dict(n) for n in self._notifications]

    # ---- internals (call with lock held) ----

    def _transition(
        self, reservation_id: str, status: ReservationStatus, event: str
    ) -> Reservation:
        reservation = self._reservations.get(reservation_id)
        if reservation is None:
            raise UnknownReservation(f"no reservation {reservation_id!r}")
        if reservation.status is not ReservationStatus.CONFIRMED:
            raise InvalidTransition(
                f"cannot move reservation {reservation_id!r} from "
                f"{reservation.status.value} to {status.value}"
            )
        updated = replace(reservation, status=status)
        self._reservations[reservation_id] = updated
        self._version += 1
        self._append(event, {"reservation_id": reservation_id})
        return updated

    def _require_station(self, station_id: str) -> Station:
        station = self._stations.get(station_id)
        if station is None:
            raise UnknownStation(f"no station {station_id!r}")
        return station

    def _confirmed_windows(self, station_id: str) -> list[AvailabilityWindow]:
        return [
            r.window
            for r in self._reservations.values()
            if r.station_id == station_id and r.status is ReservationStatus.CONFIRMED
        ]

    def _peak_occupancy(self, station_id: str, window: AvailabilityWindow) -> int:
        """Max number of confirmed reservations active at any instant
        inside ``window``."""
        events = []
        for w in self._confirmed_windows(station_id):
            if w.overlaps(window):
                events.append((max(w.start, window.start), 1))
                events.append((min(w.end, window.end), -1))
        events.sort()
        peak = count = 0
        for _, delta in events:
            count += delta
            peak = max(peak, count)
        return peak

    def _effective_availability(self, station: Station) -> tuple[AvailabilityWindow, ...]:
        saturated = _saturated_intervals(
            self._confirmed_windows(station.id), station.charger_count
        )
        effective: list[AvailabilityWindow] = []
        for window in station.availability:
            effective.extend(_subtract(window, saturated))
        return tuple(effective)


def _saturated_intervals(
    windows: list[AvailabilityWindow], capacity: int
) -> list[tuple[datetime, datetime]]:
    """Intervals during which ``capacity`` or more windows overlap."""
    events: list[tuple[datetime, int]] = []
    for w in windows:
        events.append((w.start, 1))
        events.append((w.end, -1))
    events.sort(key=lambda e: (e[0], e[1]))  # ends before starts at the same instant
    intervals: list[tuple[datetime, datetime]] = []
    count = 0
    saturated_since: datetime | None = None
    for ts, delta in events:
        count += delta
        if count >= capacity and saturated_since is None:
            saturated_since = ts
        elif count < capacity and saturated_since is not None:
            if ts > saturated_since:
                intervals.append((saturated_since, ts))
            saturated_since = None
    return intervals


def _subtract(
    window: AvailabilityWindow, holes: list[tuple[datetime, datetime]]
) -> list[AvailabilityWindow]:
    """Remove ``holes`` from ``window``, keeping the leftover pieces."""
    pieces: list[AvailabilityWindow] = []
    cursor = window.start
    for start, end in sorted(holes):
        if end <= cursor or start >= window.end:
            continue
        if start > cursor:
            pieces.append(AvailabilityWindow(cursor, min(start, window.end)))
        cursor = max(cursor, end)
        if cursor >= window.end:
            return pieces
    if cursor < window.end:
        pieces.append(AvailabilityWindow(cursor, window.end))
    return pieces

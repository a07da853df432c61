"""Exception hierarchy shared by the engine, registry, service and CLI.

Every error carries a stable machine-readable ``code`` so the HTTP layer
can map failures onto a closed error enumeration.
"""
from __future__ import annotations


class WechargeError(Exception):
    code = "InternalError"

    def __init__(self, message: str = "", details: dict | None = None):
        super().__init__(message or self.code)
        self.details = details or {}


class InvalidStation(WechargeError):
    code = "InvalidStation"


class InvalidRequest(WechargeError):
    code = "InvalidRequest"


class NoDcCapability(WechargeError):
    code = "NoDcCapability"


class EmptyCandidateSet(WechargeError):
    code = "EmptyCandidateSet"


class ZeroWeightSum(WechargeError):
    code = "ZeroWeightSum"


class ComponentOutOfRange(WechargeError):
    code = "ComponentOutOfRange"


class NoFeasibleStation(WechargeError):
    """Raised by match() when nothing survives the hard-constraint filter.

    ``details["excluded"]`` lists one ``{station_id, connector_index, reason}``
    record per rejected (station, connector) pair.
    """

    code = "NoFeasibleStation"


class DuplicateId(WechargeError):
    code = "DuplicateId"


class UnknownStation(WechargeError):
    code = "UnknownStation"


class UnknownReservation(WechargeError):
    code = "UnknownReservation"


class SlotTaken(WechargeError):
    code = "SlotTaken"


class Unavailable(WechargeError):
    code = "Unavailable"


class InvalidTransition(WechargeError):
    code = "InvalidTransition"


class NotYetEnded(WechargeError):
    code = "NotYetEnded"


class ParseError(WechargeError):
    code = "ParseError"


class FixtureMissing(WechargeError):
    code = "FixtureMissing"

"""HTTP/JSON service exposing the registry and the matcher.

Matching and booking are deliberately separate endpoints: /match is
read-only and returns a full explainable ranking, so a human can pick an
option before /reservations commits a slot.

All errors, 4xx and 5xx alike, use one envelope:
``{"code": <ApiError code>, "message": <text>, "details": {...}}``.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import codec
from .errors import WechargeError
from .matching import match
from .registry import StationRegistry

_STATUS_BY_CODE = {
    "InvalidStation": 400,
    "InvalidRequest": 400,
    "ParseError": 400,
    "NoFeasibleStation": 404,
    "UnknownStation": 404,
    "UnknownReservation": 404,
    "DuplicateId": 409,
    "SlotTaken": 409,
    "Unavailable": 409,
    "InvalidTransition": 409,
    "NotYetEnded": 409,
    "ZeroWeightSum": 422,
    "ComponentOutOfRange": 422,
    "NoDcCapability": 422,
}

_CODE_BY_HTTP_STATUS = {404: "UnknownRoute", 405: "MethodNotAllowed"}


@dataclass
class ServiceConfig:
    bind: str = "127.0.0.1"
    port: int = 8080
    event_log: str | None = None


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Read the JSON config file (if any), then apply environment
    overrides WECHARGE_BIND, WECHARGE_PORT and WECHARGE_EVENT_LOG."""
    config = ServiceConfig()
    if path is not None:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        config.bind = data.get("bind", config.bind)
        config.port = int(data.get("port", config.port))
        config.event_log = data.get("event_log", config.event_log)
    config.bind = os.environ.get("WECHARGE_BIND", config.bind)
    config.port = int(os.environ.get("WECHARGE_PORT", config.port))
    config.event_log = os.environ.get("WECHARGE_EVENT_LOG", config.event_log)
    return config


def _error_response(code: str, message: str, details: dict | None = None) -> JSONResponse:
    status = _STATUS_BY_CODE.get(code, 500)
    body = {"code": code, "message": message, "details": details or {}}
    return JSONResponse(status_code=status, content=body)


def create_app(registry: StationRegistry) -> FastAPI:
    app = FastAPI(title="wecharge", version="0.1.0")
    app.state.registry = registry
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(WechargeError)
    async def wecharge_error(_: Request, exc: WechargeError):
        return _error_response(exc.code, str(exc), exc.details)

    @app.exception_handler(RequestValidationError)
    async def body_error(_: Request, exc: RequestValidationError):
        return _error_response("ParseError", "request body is not valid JSON")

    @app.exception_handler(StarletteHTTPException)
    async def http_error(_: Request, exc: StarletteHTTPException):
        code = _CODE_BY_HTTP_STATUS.get(exc.status_code, "InternalError")
        return JSONResponse(
            status_code=exc.status_code,
            content={"code": code, "message": str(exc.detail), "details": {}},
        )

    @app.exception_handler(Exception)
    async def unexpected_error(_: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"code": "InternalError", "message": str(exc), "details": {}},
        )

    @app.post("/stations", status_code=201)
    def register_station(payload: dict = Body(...)):
        station = codec.station_from_dict(payload)
        return {"station_id": registry.register_station(station)}

    @app.get("/stations")
    def list_stations():
        snapshot = registry.snapshot()
        return {
            "version": snapshot.version,
            "stations": [codec.station_to_dict(s) for s in snapshot.stations],
        }

    @app.get("/stations/{station_id}")
    def get_station(station_id: str):
        return codec.station_to_dict(registry.get_station(station_id))

    @app.post("/stations/{station_id}/opt-out")
    def set_opt_out(station_id: str, payload: dict = Body(...)):
        opted_out = bool(payload.get("opted_out", True))
        version = registry.set_opt_out(station_id, opted_out)
        return {"station_id": station_id, "opted_out": opted_out, "version": version}

    @app.post("/match")
    def run_match(payload: dict = Body(...)):
        request = codec.match_request_from_dict(payload)
        snapshot = registry.snapshot()
        result = match(request, list(snapshot.stations))
        return codec.match_result_to_dict(result)

    @app.post("/reservations", status_code=201)
    def make_reservation(payload: dict = Body(...)):
        reservation = registry.reserve(
            station_id=str(payload["station_id"]),
            connector_index=int(payload.get("connector_index", 0)),
            window=codec.window_from_dict(payload["window"]),
            vehicle_id=str(payload.get("vehicle_id", "")),
        )
        return reservation.to_dict()

    @app.get("/reservations/{reservation_id}")
    def get_reservation(reservation_id: str):
        return registry.get_reservation(reservation_id).to_dict()

    @app.delete("/reservations/{reservation_id}")
    def cancel_reservation(reservation_id: str):
        return registry.cancel(reservation_id).to_dict()

    @app.post("/reservations/{reservation_id}/overstay")
    def flag_overstay(reservation_id: str, payload: dict = Body(...)):
        now = codec.parse_timestamp(payload["now"])
        return registry.flag_overstay(reservation_id, now).to_dict()

    @app.get("/notifications")
    def notifications():
        return {"notifications": registry.notifications()}

    return app


def serve(config: ServiceConfig, registry: StationRegistry | None = None):
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    if registry is None:
        registry = StationRegistry(log_path=config.event_log)
    uvicorn.run(create_app(registry), host=config.bind, port=config.port, log_level="info")

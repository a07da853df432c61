"""Operator CLI: load station catalogs, run matches, replay the bundled
case study, and serve the HTTP API.

Exit codes are a stable scripting contract: 0 success, 1 domain failure
(no feasible station, reference deviation exceeded, rejected catalog
records), 2 usage or parse errors.
"""
from __future__ import annotations

import json
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timedelta, timezone
from pathlib import Path

import click
import httpx

from . import codec, fixtures, report
from .errors import (
    FixtureMissing,
    InvalidRequest,
    InvalidStation,
    ParseError,
    WechargeError,
    ZeroWeightSum,
)
from .geo import GeoPoint
from .matching import MatchRequest, MatchResult, Weights, match
from .model import AvailabilityWindow, Station
from .registry import StationRegistry
from .service import ServiceConfig, load_config, serve

USAGE_ERRORS = (ZeroWeightSum, InvalidRequest, InvalidStation, ParseError, FixtureMissing)


def _fail(exc: WechargeError) -> None:
    click.echo(f"error [{exc.code}]: {exc}", err=True)
    if exc.details.get("excluded"):
        for entry in exc.details["excluded"]:
            connector = entry.get("connector_index")
            suffix = "" if connector is None else f" connector {connector}"
            click.echo(f"  station {entry['station_id']}{suffix}: {entry['reason']}", err=True)
    sys.exit(2 if isinstance(exc, USAGE_ERRORS) else 1)


def _parse_window(text: str | None) -> AvailabilityWindow:
    if text is None:
        start = datetime.now(timezone.utc)
        return AvailabilityWindow(start, start + timedelta(hours=1))
    try:
        start_text, end_text = text.split(",", 1)
        return AvailabilityWindow(
            codec.parse_timestamp(start_text.strip()), codec.parse_timestamp(end_text.strip())
        )
    except (ValueError, TypeError) as exc:
        raise InvalidRequest(f"cannot parse window {text!r}: {exc}") from exc


def _load_catalog_file(path: str) -> tuple[list[Station], list[dict]]:
    try:
        records = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read catalog {path!r}: {exc}") from exc
    if not isinstance(records, list):
        raise ParseError(f"catalog {path!r} must be a JSON array of stations")
    stations, rejects = [], []
    for index, record in enumerate(records):
        try:
            stations.append(codec.station_from_dict(record))
        except WechargeError as exc:
            rejects.append(
                {
                    "index": index,
                    "id": record.get("id") if isinstance(record, dict) else None,
                    "error": str(exc),
                }
            )
    return stations, rejects


def _load_ev(path: str | None):
    if path is None:
        return fixtures.load_leaf_profile()
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read EV profile {path!r}: {exc}") from exc
    return codec.ev_profile_from_dict(data)


@click.group()
def main():
    """Match incoming EVs to the best available charging station."""


@main.group()
def catalog():
    """Station catalog operations."""


@catalog.command("load")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--service", "service_url", help="Register through a running service.")
@click.option("--log", "log_path", type=click.Path(dir_okay=False), help="Embedded registry event log.")
def catalog_load(file: str, service_url: str | None, log_path: str | None):
    """Register every station in FILE (JSON array of station objects)."""
    if not service_url and not log_path:
        raise click.UsageError("provide --service URL or --log PATH to receive the catalog")
    try:
        stations, rejects = _load_catalog_file(file)
        registered = 0
        if service_url:
            with httpx.Client(base_url=service_url, timeout=30.0) as client:
                for station in stations:
                    response = client.post("/stations", json=codec.station_to_dict(station))
                    if response.status_code == 201:
                        registered += 1
                    else:
                        body = response.json()
                        rejects.append(
                            {"index": None, "id": station.id, "error": body.get("message", "")}
                        )
        else:
            registry = StationRegistry(log_path=log_path)
            try:
                for station in stations:
                    try:
                        registry.register_station(station)
                        registered += 1
                    except WechargeError as exc:
                        rejects.append({"index": None, "id": station.id, "error": str(exc)})
            finally:
                registry.close()
    except WechargeError as exc:
        _fail(exc)
    click.echo(f"registered {registered} station(s), rejected {len(rejects)}")
    for reject in rejects:
        where = f"record {reject['index']}" if reject["index"] is not None else f"id {reject['id']}"
        click.echo(f"  reject {where}: {reject['error']}", err=True)
    if rejects:
        sys.exit(1)


def _print_ranking_table(result: MatchResult):
    header = (
        f"{'rank':>4} {'id':>4} {'conn':>4} {'mode':<10} "
        f"{'d_km':>8} {'t_h':>7} {'s_h':>6} {'cost':>7} "
        f"{'~d':>6} {'~t':>6} {'~s':>6} {'~c':>6} {'score':>7}"
    )
    click.echo(header)
    for rank, c in enumerate(result.ranking, start=1):
        raw, norm = c.raw, c.normalized
        click.echo(
            f"{rank:>4} {c.station_id:>4} {c.connector_index:>4} {c.mode:<10} "
            f"{raw.distance_km:>8.3f} {raw.charge_hours:>7.3f} {raw.wait_hours:>6.3f} "
            f"{raw.cost_currency:>7.3f} "
            f"{norm.distance_km:>6.3f} {norm.charge_hours:>6.3f} {norm.wait_hours:>6.3f} "
            f"{norm.cost_currency:>6.3f} {c.score:>7.3f}"
        )
    best = result.best
    click.echo(f"best: station {best.station_id} (score {best.score:.3f})")
    for exclusion in result.excluded:
        connector = "" if exclusion.connector_index is None else f" connector {exclusion.connector_index}"
        click.echo(f"excluded: station {exclusion.station_id}{connector}: {exclusion.reason.value}")


@main.command("match")
@click.option("--lat", type=float, required=True, help="Vehicle latitude.")
@click.option("--lon", type=float, required=True, help="Vehicle longitude.")
@click.option("--w-distance", type=float, required=True)
@click.option("--w-time", type=float, required=True, help="Charge-duration weight.")
@click.option("--w-wait", type=float, required=True)
@click.option("--w-cost", type=float, required=True)
@click.option("--ev", "ev_path", type=click.Path(exists=True, dir_okay=False), help="EV profile JSON (default: bundled Nissan Leaf 2018).")
@click.option("--window", "window_text", help="Requested window 'start,end' (ISO 8601); default: the next hour.")
@click.option("--safety-margin", type=float, default=0.10, show_default=True, help="Fraction of remaining range held back.")
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, dir_okay=False), help="Match against a catalog file.")
@click.option("--service", "service_url", help="Match through a running service.")
@click.option("--log", "log_path", type=click.Path(dir_okay=False), help="Match against an embedded registry event log.")
@click.option("--format", "output_format", type=click.Choice(["table", "json", "csv"]), default="table", show_default=True)
@click.option("--report-dir", type=click.Path(file_okay=False), help="Write ranking.csv and ranking.png here.")
def match_command(
    lat, lon, w_distance, w_time, w_wait, w_cost, ev_path, window_text,
    safety_margin, catalog_path, service_url, log_path, output_format, report_dir,
):
    """Rank feasible stations for an incoming EV and pick the best one."""
    sources = [s for s in (catalog_path, service_url, log_path) if s]
    if len(sources) != 1:
        raise click.UsageError("provide exactly one of --catalog, --service, --log")
    try:
        weights = Weights(
            w_distance=w_distance, w_charge_time=w_time, w_wait_time=w_wait, w_cost=w_cost
        )
        request = MatchRequest(
            ev=_load_ev(ev_path),
            origin=GeoPoint(lat, lon),
            weights=weights,
            window=_parse_window(window_text),
            safety_margin=safety_margin,
        )
        if service_url:
            with httpx.Client(base_url=service_url, timeout=30.0) as client:
                response = client.post("/match", json=codec.match_request_to_dict(request))
                body = response.json()
                if response.status_code != 200:
                    raise_for_body(body)
                result = codec.match_result_from_dict(body)
        else:
            if catalog_path:
                stations, rejects = _load_catalog_file(catalog_path)
                if rejects:
                    raise ParseError(f"catalog has {len(rejects)} invalid record(s)")
            else:
                registry = StationRegistry(log_path=log_path)
                try:
                    stations = list(registry.snapshot().stations)
                finally:
                    registry.close()
            result = match(request, stations)
    except WechargeError as exc:
        _fail(exc)

    if output_format == "json":
        click.echo(json.dumps(codec.match_result_to_dict(result), indent=2))
    elif output_format == "csv":
        click.echo(report.ranking_csv_text(result), nl=False)
    else:
        _print_ranking_table(result)

    if report_dir:
        directory = Path(report_dir)
        directory.mkdir(parents=True, exist_ok=True)
        report.write_ranking_csv(directory / "ranking.csv", result)
        report.render_ranking_chart(
            directory / "ranking.png", result, title="station ranking (ascending score)"
        )
        click.echo(f"report written to {directory}", err=True)


def raise_for_body(body: dict):
    code = body.get("code", "InternalError")
    exc = WechargeError(body.get("message", code), details=body.get("details") or {})
    exc.code = code
    for klass in USAGE_ERRORS:
        if klass.code == code:
            usage_exc = klass(body.get("message", code), details=body.get("details") or {})
            raise usage_exc
    raise exc


@main.command("case-study")
@click.option("--scenario", type=click.Choice(["s1", "s2", "both"]), default="both", show_default=True)
@click.option("--report-dir", type=click.Path(file_okay=False), help="Write per-scenario CSVs and charts here.")
def case_study(scenario: str, report_dir: str | None):
    """Replay the bundled Hasselt case study against its reference scores."""
    from .matching import score_fixture

    try:
        rows = fixtures.load_reference_table()
    except WechargeError as exc:
        _fail(exc)

    names = ["s1", "s2"] if scenario == "both" else [scenario]
    exceeded = False
    for name in names:
        weights = fixtures.SCENARIOS[name]
        computed = score_fixture(weights, [row.features() for row in rows])
        deviations = [
            abs(value - row.reference_score(name)) for row, value in zip(rows, computed)
        ]
        best_index = min(range(len(computed)), key=computed.__getitem__)

        click.echo(f"scenario {name.upper()}  (weights: {weights.as_dict()})")
        click.echo(f"{'id':>4} {'computed':>9} {'reference':>10} {'deviation':>10}")
        for row, value, deviation in zip(rows, computed, deviations):
            click.echo(
                f"{row.station_id:>4} {value:>9.3f} {row.reference_score(name):>10.3f} "
                f"{deviation:>10.4f}"
            )
        click.echo(
            f"best: station {rows[best_index].station_id} "
            f"(score {computed[best_index]:.3f}); "
            f"max deviation {max(deviations):.4f} "
            f"(tolerance {fixtures.REFERENCE_TOLERANCE})"
        )
        if max(deviations) > fixtures.REFERENCE_TOLERANCE:
            exceeded = True

        if report_dir:
            directory = Path(report_dir)
            directory.mkdir(parents=True, exist_ok=True)
            report.write_scenario_csv(directory / f"case_study_{name}.csv", rows, computed, name)
            report.render_scenario_chart(
                directory / f"case_study_{name}.png", rows, computed, name
            )
    if report_dir:
        click.echo(f"report written to {report_dir}", err=True)
    if exceeded:
        click.echo("deviation tolerance exceeded", err=True)
        sys.exit(1)


@main.command("serve")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--bind", help="Override bind address.")
@click.option("--port", type=int, help="Override port.")
@click.option("--log", "log_path", type=click.Path(dir_okay=False), help="Override event-log path.")
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, dir_okay=False), help="Preload a catalog file.")
@click.option("--case-study", "preload_case_study", is_flag=True, help="Preload the bundled case-study catalog.")
def serve_command(config_path, bind, port, log_path, catalog_path, preload_case_study):
    """Run the HTTP service."""
    try:
        config = load_config(config_path)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config: {exc}")
    if bind:
        config.bind = bind
    if port:
        config.port = port
    if log_path:
        config.event_log = log_path

    registry = StationRegistry(log_path=config.event_log)
    preload: list[Station] = []
    if catalog_path:
        stations, rejects = _load_catalog_file(catalog_path)
        preload.extend(stations)
        for reject in rejects:
            click.echo(f"  reject {reject['id'] or reject['index']}: {reject['error']}", err=True)
    if preload_case_study:
        preload.extend(fixtures.load_case_study_stations())
    skipped = 0
    for station in preload:
        try:
            registry.register_station(station)
        except WechargeError:
            skipped += 1  # already present in the event log
    if preload:
        click.echo(f"preloaded {len(preload) - skipped} station(s), {skipped} already present")
    click.echo(f"serving on http://{config.bind}:{config.port}")
    serve(ServiceConfig(config.bind, config.port, config.event_log), registry=registry)


@main.command("stress-reserve")
@click.option("--station", "station_id", required=True)
@click.option("--connector", "connector_index", type=int, default=0, show_default=True)
@click.option("--window", "window_text", required=True, help="Contended window 'start,end'.")
@click.option("--attempts", type=int, default=64, show_default=True)
@click.option("--service", "service_url", help="Hammer a running service.")
@click.option("--log", "log_path", type=click.Path(dir_okay=False), help="Hammer an embedded registry.")
def stress_reserve(station_id, connector_index, window_text, attempts, service_url, log_path):
    """Fire N concurrent reservation attempts at one window and report
    how many were confirmed (used by the atomicity check)."""
    if not service_url and not log_path:
        raise click.UsageError("provide --service URL or --log PATH")
    try:
        window = _parse_window(window_text)
    except WechargeError as exc:
        _fail(exc)

    barrier = threading.Barrier(attempts)
    outcomes: list[str] = []

    def attempt_registry(registry: StationRegistry, vehicle: str) -> str:
        barrier.wait()
        try:
            registry.reserve(station_id, connector_index, window, vehicle)
            return "confirmed"
        except WechargeError as exc:
            return exc.code

    def attempt_service(vehicle: str) -> str:
        payload = {
            "station_id": station_id,
            "connector_index": connector_index,
            "window": codec.window_to_dict(window),
            "vehicle_id": vehicle,
        }
        with httpx.Client(base_url=service_url, timeout=30.0) as client:
            barrier.wait()
            response = client.post("/reservations", json=payload)
            if response.status_code == 201:
                return "confirmed"
            return response.json().get("code", "InternalError")

    with ThreadPoolExecutor(max_workers=attempts) as pool:
        if service_url:
            futures = [pool.submit(attempt_service, f"ev-{i}") for i in range(attempts)]
        else:
            registry = StationRegistry(log_path=log_path)
            futures = [
                pool.submit(attempt_registry, registry, f"ev-{i}") for i in range(attempts)
            ]
        outcomes = [f.result() for f in futures]
        if not service_url:
            registry.close()

    confirmed = outcomes.count("confirmed")
    slot_taken = outcomes.count("SlotTaken")
    other = attempts - confirmed - slot_taken
    click.echo(f"confirmed={confirmed} slot_taken={slot_taken} other={other}")


if __name__ == "__main__":
    main()

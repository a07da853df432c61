import json
from importlib import resources

import pytest
from click.testing import CliRunner

from conftest import make_station, window
from wecharge import codec, fixtures
from wecharge.cli import main
from wecharge.matching import MatchRequest, match
from wecharge.registry import StationRegistry


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def catalog_path():
    return str(resources.files("wecharge").joinpath("data", "case_study_stations.json"))


MATCH_COMMON = [
    "--lat", "50.9307", "--lon", "5.3325",
    "--window", "2025-06-02T09:00:00Z,2025-06-02T11:00:00Z",
]


def weights_args(d, t, s, c):
    return ["--w-distance", str(d), "--w-time", str(t), "--w-wait", str(s), "--w-cost", str(c)]


class TestCatalogLoad:
    def test_full_case_study_catalog_registers_25(self, runner, catalog_path, tmp_path):
        log = tmp_path / "events.ndjson"
        result = runner.invoke(main, ["catalog", "load", catalog_path, "--log", str(log)])
        assert result.exit_code == 0, result.output
        assert "registered 25 station(s), rejected 0" in result.output
        registry = StationRegistry(log_path=log)
        assert len(registry.snapshot().stations) == 25
        registry.close()

    def test_empty_catalog_is_success(self, runner, tmp_path):
        empty = tmp_path / "empty.json"
        empty.write_text("[]")
        result = runner.invoke(main, ["catalog", "load", str(empty), "--log", str(tmp_path / "e.log")])
        assert result.exit_code == 0
        assert "registered 0 station(s)" in result.output

    def test_one_malformed_record_loads_rest_and_exits_nonzero(self, runner, catalog_path, tmp_path):
        records = json.loads(
            resources.files("wecharge").joinpath("data", "case_study_stations.json").read_text()
        )
        records[14]["location"]["latitude"] = 95.0  # corrupt one station
        damaged = tmp_path / "damaged.json"
        damaged.write_text(json.dumps(records))
        log = tmp_path / "events.ndjson"
        result = runner.invoke(main, ["catalog", "load", str(damaged), "--log", str(log)])
        assert result.exit_code == 1
        assert "registered 24 station(s), rejected 1" in result.output
        assert "record 14" in result.output

    def test_unparseable_file_is_usage_error(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        result = runner.invoke(main, ["catalog", "load", str(bad), "--log", str(tmp_path / "x.log")])
        assert result.exit_code == 2

    def test_requires_a_destination(self, runner, catalog_path):
        result = runner.invoke(main, ["catalog", "load", catalog_path])
        assert result.exit_code == 2


class TestMatchCommand:
    def test_equal_weights_select_station_1(self, runner, catalog_path):
        result = runner.invoke(
            main,
            ["match", *MATCH_COMMON, *weights_args(0.25, 0.25, 0.25, 0.25),
             "--catalog", catalog_path],
        )
        assert result.exit_code == 0, result.output
        assert "best: station 1 " in result.output
        assert "excluded: station 15 connector 0: IncompatiblePlug" in result.output

    def test_distance_wait_heavy_selects_station_12(self, runner, catalog_path):
        result = runner.invoke(
            main,
            ["match", *MATCH_COMMON, *weights_args(0.4, 0.1, 0.4, 0.1),
             "--catalog", catalog_path],
        )
        assert result.exit_code == 0
        assert "best: station 12 " in result.output

    def test_zero_weights_are_a_usage_error(self, runner, catalog_path):
        result = runner.invoke(
            main,
            ["match", *MATCH_COMMON, *weights_args(0, 0, 0, 0), "--catalog", catalog_path],
        )
        assert result.exit_code == 2

    def test_no_feasible_station_exits_1_with_reasons(self, runner, tmp_path):
        station = codec.station_to_dict(make_station("lonely", 50.94, 5.34, opted_out=True))
        catalog = tmp_path / "catalog.json"
        catalog.write_text(json.dumps([station]))
        result = runner.invoke(
            main,
            ["match", *MATCH_COMMON, *weights_args(0.25, 0.25, 0.25, 0.25),
             "--catalog", str(catalog)],
        )
        assert result.exit_code == 1
        assert "OptedOut" in result.output

    def test_json_output_round_trips_to_engine_result(self, runner, catalog_path):
        result = runner.invoke(
            main,
            ["match", *MATCH_COMMON, *weights_args(0.25, 0.25, 0.25, 0.25),
             "--catalog", catalog_path, "--format", "json"],
        )
        assert result.exit_code == 0
        parsed = codec.match_result_from_dict(json.loads(result.output))

        request = MatchRequest(
            ev=fixtures.load_leaf_profile(),
            origin=fixtures.CASE_STUDY_ORIGIN,
            weights=fixtures.SCENARIOS["s1"],
            window=window(9, 11, day=2),
        )
        direct = match(request, fixtures.load_case_study_stations())
        assert codec.match_result_to_dict(parsed) == codec.match_result_to_dict(direct)

    def test_report_dir_gets_csv_and_chart(self, runner, catalog_path, tmp_path):
        report_dir = tmp_path / "out"
        result = runner.invoke(
            main,
            ["match", *MATCH_COMMON, *weights_args(0.25, 0.25, 0.25, 0.25),
             "--catalog", catalog_path, "--report-dir", str(report_dir)],
        )
        assert result.exit_code == 0
        ranking_csv = (report_dir / "ranking.csv").read_text().splitlines()
        assert ranking_csv[0].startswith("rank,station_id")
        assert len(ranking_csv) == 25  # header + 24 candidates
        assert (report_dir / "ranking.png").stat().st_size > 0

    def test_csv_format_prints_delimited_ranking(self, runner, catalog_path):
        result = runner.invoke(
            main,
            ["match", *MATCH_COMMON, *weights_args(0.25, 0.25, 0.25, 0.25),
             "--catalog", catalog_path, "--format", "csv"],
        )
        assert result.exit_code == 0
        assert result.output.startswith("rank,station_id")


class TestCaseStudyCommand:
    def test_both_scenarios_pass_and_print(self, runner):
        result = runner.invoke(main, ["case-study", "--scenario", "both"])
        assert result.exit_code == 0, result.output
        assert "scenario S1" in result.output
        assert "scenario S2" in result.output
        # S1 best is 0.4835, right on the 3-decimal rounding boundary
        assert "best: station 1 (score 0.48" in result.output
        assert "best: station 12 (score 0.396)" in result.output

    def test_single_scenario_runs_alone(self, runner):
        result = runner.invoke(main, ["case-study", "--scenario", "s2"])
        assert result.exit_code == 0
        assert "scenario S1" not in result.output
        assert "best: station 12" in result.output

    def test_report_dir_gets_scenario_files(self, runner, tmp_path):
        report_dir = tmp_path / "case"
        result = runner.invoke(main, ["case-study", "--report-dir", str(report_dir)])
        assert result.exit_code == 0
        for name in ("case_study_s1.csv", "case_study_s1.png",
                     "case_study_s2.csv", "case_study_s2.png"):
            assert (report_dir / name).exists()
        first = (report_dir / "case_study_s1.csv").read_text().splitlines()
        assert first[0] == "id,wait,distance,cost,charge_time,computed,reference,deviation"
        assert len(first) == 25


class TestStressReserve:
    def test_reports_single_confirmation_on_one_charger(self, runner, tmp_path):
        log = tmp_path / "events.ndjson"
        registry = StationRegistry(log_path=log)
        registry.register_station(make_station("solo", 50.94, 5.34, charger_count=1))
        registry.close()
        result = runner.invoke(
            main,
            ["stress-reserve", "--station", "solo",
             "--window", "2025-06-02T09:00:00Z,2025-06-02T11:00:00Z",
             "--attempts", "16", "--log", str(log)],
        )
        assert result.exit_code == 0, result.output
        assert "confirmed=1 slot_taken=15 other=0" in result.output

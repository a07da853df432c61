import pytest
from hypothesis import given, strategies as st

from conftest import ac_spec, dc_spec, utc
from wecharge.errors import NoDcCapability
from wecharge.model import (
    AvailabilityWindow,
    ChargeMode,
    Connector,
    CurrentKind,
    EVProfile,
    PlugType,
    PowerSpec,
    charge_duration,
    effective_charge_power,
    remaining_range,
)


def leaf_like(soc: float = 0.5, ac_kw: float = 6.6, dc_kw: float = 50.0) -> EVProfile:
    return EVProfile(
        model_name="Nissan Leaf 2018",
        battery_capacity_kwh=40.0,
        total_range_km=378.0,
        plug_types=frozenset({PlugType.TYPE2}),
        ac_max_power_kw=ac_kw,
        dc_max_power_kw=dc_kw,
        current_soc=soc,
    )


class TestPowerSpec:
    def test_rejects_nonpositive_power(self):
        with pytest.raises(ValueError):
            PowerSpec(0.0, CurrentKind.AC, 1, 16.0, 230.0)

    def test_rejects_dc_with_three_phases(self):
        with pytest.raises(ValueError):
            PowerSpec(50.0, CurrentKind.DC, 3, 100.0, 500.0)

    def test_rejects_bad_phase_count(self):
        with pytest.raises(ValueError):
            PowerSpec(11.0, CurrentKind.AC, 2, 16.0, 230.0)

    def test_rejects_nameplate_inconsistent_with_electricals(self):
        # 50 kW claimed from a 230 V / 16 A single-phase supply
        with pytest.raises(ValueError):
            PowerSpec(50.0, CurrentKind.AC, 1, 16.0, 230.0)

    def test_accepts_rounded_nameplate(self):
        # 22 kW nameplate versus 22.08 kW electrical is within the sanity bound
        PowerSpec(22.0, CurrentKind.AC, 3, 32.0, 230.0)


class TestEVProfile:
    @pytest.mark.parametrize("soc", [-0.1, 1.1])
    def test_rejects_soc_outside_unit_interval(self, soc):
        with pytest.raises(ValueError):
            leaf_like(soc=soc)

    def test_rejects_empty_plug_set(self):
        with pytest.raises(ValueError):
            EVProfile("x", 40.0, 378.0, frozenset(), 6.6, 0.0, 0.5)

    def test_rejects_zero_ac_limit(self):
        with pytest.raises(ValueError):
            leaf_like(ac_kw=0.0)


class TestConnector:
    def test_rejects_negative_tariff(self):
        with pytest.raises(ValueError):
            Connector(PlugType.TYPE2, ac_spec(22.0, 3), -0.01, frozenset({ChargeMode.CHARGE_ONLY}))

    def test_rejects_empty_modes(self):
        with pytest.raises(ValueError):
            Connector(PlugType.TYPE2, ac_spec(22.0, 3), 0.30, frozenset())


class TestAvailabilityWindow:
    def test_rejects_reversed_window(self):
        with pytest.raises(ValueError):
            AvailabilityWindow(utc(2025, 6, 1, 12), utc(2025, 6, 1, 9))

    def test_naive_timestamps_become_utc(self):
        from datetime import datetime

        w = AvailabilityWindow(datetime(2025, 6, 1, 9), datetime(2025, 6, 1, 12))
        assert w.start.tzinfo is not None


class TestEffectiveChargePower:
    def test_vehicle_limit_caps_fast_ac(self):
        # 22 kW post, 6.6 kW onboard charger: the vehicle is the bottleneck
        assert effective_charge_power(leaf_like(), ac_spec(22.0, phases=3)) == 6.6

    def test_domestic_socket_is_station_limited(self):
        assert effective_charge_power(leaf_like(), ac_spec(2.3)) == 2.3

    def test_equal_limits_return_that_limit(self):
        assert effective_charge_power(leaf_like(), ac_spec(6.6)) == 6.6

    def test_dc_capped_by_vehicle_dc_limit(self):
        assert effective_charge_power(leaf_like(), dc_spec(150.0)) == 50.0

    def test_dc_without_capability_raises(self):
        with pytest.raises(NoDcCapability):
            effective_charge_power(leaf_like(dc_kw=0.0), dc_spec(50.0))

    @given(
        rated=st.floats(min_value=0.5, max_value=500.0, allow_nan=False),
        ac_limit=st.floats(min_value=1.0, max_value=50.0, allow_nan=False),
        dc_limit=st.floats(min_value=1.0, max_value=400.0, allow_nan=False),
        kind=st.sampled_from([CurrentKind.AC, CurrentKind.DC]),
    )
    def test_never_exceeds_either_side(self, rated, ac_limit, dc_limit, kind):
        ev = leaf_like(ac_kw=ac_limit, dc_kw=dc_limit)
        spec = ac_spec(rated) if kind is CurrentKind.AC else dc_spec(rated)
        power = effective_charge_power(ev, spec)
        assert power <= rated
        assert power <= (ac_limit if kind is CurrentKind.AC else dc_limit)


class TestChargeDuration:
    def test_dc_fast_charge_duration(self):
        # 40 kWh at 50 kW: 0.8 h, within 10% of the quoted 45 minutes
        assert charge_duration(leaf_like(), dc_spec(50.0)) == pytest.approx(0.8)

    def test_slow_ac_duration(self):
        assert charge_duration(leaf_like(), ac_spec(3.7)) == pytest.approx(10.8108, abs=1e-3)

    def test_unit_ratio(self):
        ev = leaf_like(ac_kw=40.0)
        assert charge_duration(ev, ac_spec(40.0, phases=3)) == pytest.approx(1.0)

    @given(
        rated=st.lists(
            st.floats(min_value=1.0, max_value=300.0, allow_nan=False), min_size=2, max_size=6
        )
    )
    def test_monotone_non_increasing_in_rated_power(self, rated):
        ev = leaf_like()
        durations = [charge_duration(ev, ac_spec(kw)) for kw in sorted(rated)]
        assert all(a >= b for a, b in zip(durations, durations[1:]))


class TestRemainingRange:
    def test_zero_soc(self):
        assert remaining_range(leaf_like(soc=0.0)) == 0.0

    def test_full_soc_is_total_range(self):
        assert remaining_range(leaf_like(soc=1.0)) == 378.0

    def test_linear_in_soc(self):
        assert remaining_range(leaf_like(soc=0.5)) == pytest.approx(189.0)

// Preference panel state and its deterministic mapping onto a match
// request. Sliders are 0..100 and map linearly onto weights; only their
// ratios matter to the service, so the scale is cosmetic.

import type { EvProfileWire, GeoPointWire, MatchRequestWire, TimeWindowWire, WeightsWire } from "./types.js";

export interface SliderValues {
  distance: number;
  chargeTime: number;
  waitTime: number;
  cost: number;
}

export interface PreferencePanelState {
  sliders: SliderValues;
  evProfileId: string;
  origin: GeoPointWire;
  window: TimeWindowWire;
  safetyMargin?: number;
}

export interface EvProfileOption {
  id: string;
  label: string;
  profile: EvProfileWire;
}

export const EV_PROFILES: readonly EvProfileOption[] = [
  {
    id: "leaf-2018",
    label: "Nissan Leaf 2018 (40 kWh)",
    profile: {
      model_name: "Nissan Leaf 2018",
      battery_capacity_kwh: 40.0,
      total_range_km: 378.0,
      plug_types: ["Type2"],
      ac_max_power_kw: 6.6,
      dc_max_power_kw: 50.0,
      current_soc: 0.5,
    },
  },
  {
    id: "compact-ccs",
    label: "Compact CCS (52 kWh)",
    profile: {
      model_name: "Compact CCS",
      battery_capacity_kwh: 52.0,
      total_range_km: 395.0,
      plug_types: ["Type2", "CCS"],
      ac_max_power_kw: 11.0,
      dc_max_power_kw: 100.0,
      current_soc: 0.6,
    },
  },
];

export const SLIDER_MAX = 100;

export function clampSlider(value: number): number {
  if (!Number.isFinite(value)) return 0;
  return Math.min(SLIDER_MAX, Math.max(0, value));
}

export function slidersToWeights(sliders: SliderValues): WeightsWire {
  return {
    w_distance: clampSlider(sliders.distance) / SLIDER_MAX,
    w_charge_time: clampSlider(sliders.chargeTime) / SLIDER_MAX,
    w_wait_time: clampSlider(sliders.waitTime) / SLIDER_MAX,
    w_cost: clampSlider(sliders.cost) / SLIDER_MAX,
  };
}

export function allSlidersZero(sliders: SliderValues): boolean {
  const w = slidersToWeights(sliders);
  return w.w_distance + w.w_charge_time + w.w_wait_time + w.w_cost === 0;
}

/** Inline message shown instead of issuing a request, or null when the
 * panel is submittable. Mirrors the service's ZeroWeightSum contract. */
export function panelBlockReason(state: PreferencePanelState): string | null {
  if (allSlidersZero(state.sliders)) {
    return "Set at least one preference above zero to rank stations.";
  }
  if (findProfile(state.evProfileId) === undefined) {
    return `Unknown EV profile "${state.evProfileId}".`;
  }
  return null;
}

export function findProfile(id: string): EvProfileOption | undefined {
  return EV_PROFILES.find((option) => option.id === id);
}

/** Build the request body. Key order is fixed, so an identical panel
 * state always serializes to an identical body. */
export function buildMatchRequest(state: PreferencePanelState): MatchRequestWire {
  const blocked = panelBlockReason(state);
  if (blocked !== null) {
    throw new Error(blocked);
  }
  const profile = findProfile(state.evProfileId)!;
  const request: MatchRequestWire = {
    ev: profile.profile,
    origin: { latitude: state.origin.latitude, longitude: state.origin.longitude },
    weights: slidersToWeights(state.sliders),
    window: { start: state.window.start, end: state.window.end },
  };
  if (state.safetyMargin !== undefined) {
    request.safety_margin = state.safetyMargin;
  }
  return request;
}

export function defaultPanelState(now: Date = new Date()): PreferencePanelState {
  const start = new Date(now);
  start.setSeconds(0, 0);
  const end = new Date(start.getTime() + 60 * 60 * 1000);
  return {
    sliders: { distance: 50, chargeTime: 50, waitTime: 50, cost: 50 },
    evProfileId: EV_PROFILES[0]!.id,
    origin: { latitude: 50.9307, longitude: 5.3325 }, // Hasselt city centre
    window: { start: start.toISOString(), end: end.toISOString() },
  };
}

// Wire types for the wecharge HTTP API (see ../docs/api.md).
// Field names match the service's lower_snake_case JSON exactly.

export interface GeoPointWire {
  latitude: number;
  longitude: number;
}

export interface TimeWindowWire {
  start: string; // ISO 8601
  end: string;
}

export interface WeightsWire {
  w_distance: number;
  w_charge_time: number;
  w_wait_time: number;
  w_cost: number;
}

export interface EvProfileWire {
  model_name: string;
  battery_capacity_kwh: number;
  total_range_km: number;
  plug_types: string[];
  ac_max_power_kw: number;
  dc_max_power_kw: number;
  current_soc: number;
}

export interface MatchRequestWire {
  ev: EvProfileWire;
  origin: GeoPointWire;
  weights: WeightsWire;
  window: TimeWindowWire;
  safety_margin?: number;
}

export interface FeatureWire {
  distance_km: number;
  charge_hours: number;
  wait_hours: number;
  cost_currency: number;
}

export interface CandidateWire {
  station_id: string;
  connector_index: number;
  mode: string;
  raw: FeatureWire;
  normalized: FeatureWire | null;
  score: number | null;
}

export interface ExclusionWire {
  station_id: string;
  connector_index: number | null;
  reason: string;
}

export interface MatchResultWire {
  best: CandidateWire;
  ranking: CandidateWire[];
  excluded: ExclusionWire[];
}

export interface StationWire {
  id: string;
  name: string;
  location: GeoPointWire;
  charger_count: number;
  ownership: string;
  opted_out: boolean;
  availability: TimeWindowWire[];
  connectors: unknown[];
  metadata: Record<string, unknown>;
}

export interface ReservationWire {
  reservation_id: string;
  station_id: string;
  connector_index: number;
  window: TimeWindowWire;
  vehicle_id: string;
  status: "Confirmed" | "Cancelled" | "Completed" | "Overstayed";
}

export interface ApiErrorWire {
  code: string;
  message: string;
  details: Record<string, unknown>;
}

// Pure view models: wire payloads in, display-ready rows out. Keeping
// this free of DOM makes the ranking presentation unit-testable.

import { candidateKey } from "./rematch.js";
import { ApiError } from "./api.js";
import type { ExclusionWire, MatchResultWire } from "./types.js";

export interface FeatureBarsView {
  distance: number;
  chargeTime: number;
  waitTime: number;
  cost: number;
}

export interface RankingRowView {
  key: string;
  rank: number;
  stationId: string;
  connectorIndex: number;
  mode: string;
  /** clamped to [0, 1]; the UI never shows a score outside that range */
  score: number;
  scoreText: string;
  bars: FeatureBarsView;
  best: boolean;
  selected: boolean;
}

export interface ExcludedRowView {
  stationId: string;
  connectorText: string;
  reason: string;
}

export interface RankingViewModel {
  rows: RankingRowView[];
  excluded: ExcludedRowView[];
  bestKey: string | null;
}

export function clamp01(value: number | null | undefined): number {
  if (value === null || value === undefined || Number.isNaN(value)) return 0;
  return Math.min(1, Math.max(0, value));
}

function excludedRow(e: ExclusionWire): ExcludedRowView {
  return {
    stationId: e.station_id,
    connectorText: e.connector_index === null ? "all connectors" : `connector ${e.connector_index}`,
    reason: e.reason,
  };
}

export function rankingViewModel(
  result: MatchResultWire,
  selectionKey: string | null,
): RankingViewModel {
  const bestKey = candidateKey(result.best);
  const rows = result.ranking.map((candidate, index) => {
    const key = candidateKey(candidate);
    const normalized = candidate.normalized;
    return {
      key,
      rank: index + 1,
      stationId: candidate.station_id,
      connectorIndex: candidate.connector_index,
      mode: candidate.mode,
      score: clamp01(candidate.score),
      scoreText: clamp01(candidate.score).toFixed(3),
      bars: {
        distance: clamp01(normalized?.distance_km),
        chargeTime: clamp01(normalized?.charge_hours),
        waitTime: clamp01(normalized?.wait_hours),
        cost: clamp01(normalized?.cost_currency),
      },
      best: key === bestKey,
      selected: key === selectionKey,
    };
  });
  return { rows, excluded: result.excluded.map(excludedRow), bestKey };
}

export interface ErrorViewModel {
  code: string;
  message: string;
  /** per-station reasons when the service explains an empty match */
  exclusions: ExcludedRowView[];
  retryable: boolean;
}

export function errorViewModel(error: ApiError): ErrorViewModel {
  const raw = error.details["excluded"];
  const exclusions = Array.isArray(raw) ? (raw as ExclusionWire[]).map(excludedRow) : [];
  return {
    code: error.code,
    message: error.message,
    exclusions,
    retryable: error.code === "ServiceUnreachable",
  };
}

// Thin typed client for the wecharge service. Every non-2xx response is
// surfaced as an ApiError carrying the envelope's machine-readable code;
// network-level failures become code "ServiceUnreachable" so the UI can
// show a retry banner without losing state.

import type {
  ApiErrorWire,
  MatchRequestWire,
  MatchResultWire,
  ReservationWire,
  StationWire,
  TimeWindowWire,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly details: Record<string, unknown>;

  constructor(code: string, message: string, status: number, details: Record<string, unknown> = {}) {
    super(message);
    this.name = "ApiError";
    this.code = code;
    this.status = status;
    this.details = details;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ReservationPayload {
  station_id: string;
  connector_index: number;
  window: TimeWindowWire;
  vehicle_id: string;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async match(request: MatchRequestWire): Promise<MatchResultWire> {
    return this.call("POST", "/match", request);
  }

  async listStations(): Promise<{ version: number; stations: StationWire[] }> {
    return this.call("GET", "/stations");
  }

  async reserve(payload: ReservationPayload): Promise<ReservationWire> {
    return this.call("POST", "/reservations", payload);
  }

  async cancelReservation(reservationId: string): Promise<ReservationWire> {
    return this.call("DELETE", `/reservations/${reservationId}`);
  }

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new ApiError("ServiceUnreachable", `cannot reach ${this.baseUrl}`, 0);
    }
    if (response.ok) {
      return (await response.json()) as T;
    }
    let envelope: ApiErrorWire;
    try {
      envelope = (await response.json()) as ApiErrorWire;
    } catch {
      envelope = { code: "InternalError", message: response.statusText, details: {} };
    }
    throw new ApiError(
      envelope.code ?? "InternalError",
      envelope.message ?? response.statusText,
      response.status,
      envelope.details ?? {},
    );
  }
}

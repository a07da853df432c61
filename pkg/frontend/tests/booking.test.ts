import { describe, expect, it } from "vitest";

import { ApiError, type ReservationPayload } from "../src/api.js";
import { BookingFlow } from "../src/booking.js";
import type { CandidateWire, ReservationWire } from "../src/types.js";

const WINDOW = { start: "2026-06-01T09:00:00.000Z", end: "2026-06-01T11:00:00.000Z" };

const OPTION: CandidateWire = {
  station_id: "12",
  connector_index: 0,
  mode: "ChargeOnly",
  raw: { distance_km: 1, charge_hours: 6, wait_hours: 0.5, cost_currency: 14 },
  normalized: null,
  score: 0.4,
};

function reservation(id: string): ReservationWire {
  return {
    reservation_id: id,
    station_id: "12",
    connector_index: 0,
    window: WINDOW,
    vehicle_id: "browser-1",
    status: "Confirmed",
  };
}

class FakeReservations {
  reserveCalls: ReservationPayload[] = [];
  cancelCalls: string[] = [];
  failWith: ApiError | null = null;

  async reserve(payload: ReservationPayload): Promise<ReservationWire> {
    this.reserveCalls.push(payload);
    if (this.failWith) throw this.failWith;
    return reservation("r000001");
  }

  async cancelReservation(id: string): Promise<ReservationWire> {
    this.cancelCalls.push(id);
    return { ...reservation(id), status: "Cancelled" };
  }
}

class FakeRematcher {
  calls = 0;
  async rematchNow(): Promise<void> {
    this.calls += 1;
  }
}

describe("BookingFlow", () => {
  it("confirms a successful booking with the reservation details", async () => {
    const service = new FakeReservations();
    const rematcher = new FakeRematcher();
    const flow = new BookingFlow(service, rematcher, "browser-1");
    const state = await flow.book(OPTION, WINDOW);
    expect(state.phase).toBe("confirmed");
    expect(state.reservation!.reservation_id).toBe("r000001");
    expect(service.reserveCalls[0]).toEqual({
      station_id: "12",
      connector_index: 0,
      window: WINDOW,
      vehicle_id: "browser-1",
    });
    expect(rematcher.calls).toBe(0);
  });

  it("on SlotTaken shows an inline message and auto re-matches", async () => {
    const service = new FakeReservations();
    service.failWith = new ApiError("SlotTaken", "all chargers booked", 409);
    const rematcher = new FakeRematcher();
    const flow = new BookingFlow(service, rematcher, "browser-1");
    const state = await flow.book(OPTION, WINDOW);
    expect(state.phase).toBe("slot_taken");
    expect(state.message).toMatch(/booked by someone else/i);
    expect(rematcher.calls).toBe(1);
  });

  it("other failures land in the error phase without re-matching", async () => {
    const service = new FakeReservations();
    service.failWith = new ApiError("Unavailable", "station opted out", 409);
    const rematcher = new FakeRematcher();
    const flow = new BookingFlow(service, rematcher, "browser-1");
    const state = await flow.book(OPTION, WINDOW);
    expect(state.phase).toBe("error");
    expect(state.message).toMatch(/Unavailable/);
    expect(rematcher.calls).toBe(0);
  });

  it("cancel releases the reservation and refreshes the ranking", async () => {
    const service = new FakeReservations();
    const rematcher = new FakeRematcher();
    const flow = new BookingFlow(service, rematcher, "browser-1");
    await flow.book(OPTION, WINDOW);
    const state = await flow.cancel();
    expect(state.phase).toBe("idle");
    expect(state.message).toMatch(/cancelled/i);
    expect(service.cancelCalls).toEqual(["r000001"]);
    expect(rematcher.calls).toBe(1);
  });
});

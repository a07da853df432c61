import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiError } from "../src/api.js";
import { candidateKey, RematchController } from "../src/rematch.js";
import type { PreferencePanelState } from "../src/state.js";
import type { CandidateWire, MatchRequestWire, MatchResultWire } from "../src/types.js";

function candidate(stationId: string, score: number): CandidateWire {
  return {
    station_id: stationId,
    connector_index: 0,
    mode: "ChargeOnly",
    raw: { distance_km: 1, charge_hours: 1, wait_hours: 0.5, cost_currency: 10 },
    normalized: { distance_km: 0.5, charge_hours: 1, wait_hours: 0.5, cost_currency: 1 },
    score,
  };
}

function resultOf(...stationIds: string[]): MatchResultWire {
  const ranking = stationIds.map((id, i) => candidate(id, 0.3 + i * 0.1));
  return { best: ranking[0]!, ranking, excluded: [] };
}

function panel(sliders: Partial<PreferencePanelState["sliders"]> = {}): PreferencePanelState {
  return {
    sliders: { distance: 50, chargeTime: 50, waitTime: 50, cost: 50, ...sliders },
    evProfileId: "leaf-2018",
    origin: { latitude: 50.9307, longitude: 5.3325 },
    window: { start: "2026-06-01T09:00:00.000Z", end: "2026-06-01T11:00:00.000Z" },
  };
}

class FakeService {
  calls: MatchRequestWire[] = [];
  queue: (MatchResultWire | ApiError | (() => Promise<MatchResultWire>))[] = [];

  async match(request: MatchRequestWire): Promise<MatchResultWire> {
    this.calls.push(request);
    const next = this.queue.shift();
    if (next === undefined) return resultOf("1", "2");
    if (next instanceof ApiError) throw next;
    if (typeof next === "function") return next();
    return next;
  }
}

describe("RematchController", () => {
  let service: FakeService;
  let controller: RematchController;

  beforeEach(() => {
    vi.useFakeTimers();
    service = new FakeService();
    controller = new RematchController(service, { debounceMs: 100 });
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  async function drain(): Promise<void> {
    await vi.runAllTimersAsync();
  }

  it("debounces a burst of slider changes into one request", async () => {
    controller.panelChanged(panel({ distance: 10 }));
    controller.panelChanged(panel({ distance: 20 }));
    controller.panelChanged(panel({ distance: 30 }));
    await drain();
    expect(service.calls).toHaveLength(1);
    expect(service.calls[0]!.weights.w_distance).toBeCloseTo(0.3);
    expect(controller.getState().phase).toBe("ready");
  });

  it("makes no network call when the panel has not changed", async () => {
    controller.panelChanged(panel());
    await drain();
    expect(service.calls).toHaveLength(1);
    controller.panelChanged(panel()); // identical state: debounce no-op
    await drain();
    expect(service.calls).toHaveLength(1);
  });

  it("blocks the all-zero panel with an inline message and no call", async () => {
    controller.panelChanged(panel({ distance: 0, chargeTime: 0, waitTime: 0, cost: 0 }));
    await drain();
    expect(service.calls).toHaveLength(0);
    const state = controller.getState();
    expect(state.phase).toBe("blocked");
    expect(state.blockReason).toMatch(/at least one preference/i);
  });

  it("discards stale responses when a newer request is in flight", async () => {
    let releaseFirst!: (r: MatchResultWire) => void;
    service.queue.push(
      () => new Promise<MatchResultWire>((resolve) => (releaseFirst = resolve)),
    );
    service.queue.push(resultOf("12", "13"));

    controller.panelChanged(panel({ distance: 10 }));
    await vi.advanceTimersByTimeAsync(100); // first request issued, hangs
    controller.panelChanged(panel({ distance: 90 }));
    await vi.advanceTimersByTimeAsync(100); // second request issued and resolves
    await drain();
    expect(controller.getState().result!.best.station_id).toBe("12");

    releaseFirst(resultOf("1", "2")); // stale response arrives late
    await drain();
    expect(controller.getState().result!.best.station_id).toBe("12");
    expect(service.calls).toHaveLength(2);
  });

  it("keeps the previous ranking and surfaces errors inline", async () => {
    service.queue.push(resultOf("1", "2"));
    controller.panelChanged(panel({ distance: 10 }));
    await drain();
    expect(controller.getState().phase).toBe("ready");

    service.queue.push(new ApiError("ServiceUnreachable", "cannot reach service", 0));
    controller.panelChanged(panel({ distance: 95 }));
    await drain();
    const state = controller.getState();
    expect(state.phase).toBe("error");
    expect(state.error!.code).toBe("ServiceUnreachable");
    expect(state.result!.best.station_id).toBe("1"); // previous ranking retained
  });

  it("retries after an error even for the same panel state", async () => {
    service.queue.push(new ApiError("ServiceUnreachable", "offline", 0));
    controller.panelChanged(panel({ distance: 42 }));
    await drain();
    expect(controller.getState().phase).toBe("error");

    service.queue.push(resultOf("7"));
    controller.panelChanged(panel({ distance: 42 }));
    await drain();
    expect(controller.getState().phase).toBe("ready");
    expect(service.calls).toHaveLength(2);
  });

  it("preserves the selection across re-ranks while it still exists", async () => {
    service.queue.push(resultOf("1", "2", "3"));
    controller.panelChanged(panel({ distance: 10 }));
    await drain();
    const key = candidateKey(controller.getState().result!.ranking[1]!);
    controller.select(key);
    expect(controller.getState().selection).toBe(key);

    service.queue.push(resultOf("2", "1")); // station 2 still present
    controller.panelChanged(panel({ distance: 80 }));
    await drain();
    expect(controller.getState().selection).toBe(key);

    service.queue.push(resultOf("9", "8")); // station 2 gone
    controller.panelChanged(panel({ distance: 99 }));
    await drain();
    expect(controller.getState().selection).toBeNull();
  });

  it("rematchNow skips the debounce", async () => {
    service.queue.push(resultOf("5"));
    await controller.rematchNow(panel({ distance: 66 }));
    expect(service.calls).toHaveLength(1);
    expect(controller.getState().result!.best.station_id).toBe("5");
  });
});

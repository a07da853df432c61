// Re-match loop: debounce panel changes, keep at most one in-flight
// request, and apply only the newest response (stale ones are discarded
// by sequence number). Errors surface inline; the last good ranking and
// the panel state survive them.

import { ApiError } from "./api.js";
import { buildMatchRequest, panelBlockReason, type PreferencePanelState } from "./state.js";
import type { CandidateWire, MatchRequestWire, MatchResultWire } from "./types.js";

export interface MatchService {
  match(request: MatchRequestWire): Promise<MatchResultWire>;
}

export type RematchPhase = "idle" | "blocked" | "loading" | "ready" | "error";

export function candidateKey(c: Pick<CandidateWire, "station_id" | "connector_index" | "mode">): string {
  return `${c.station_id}/${c.connector_index}/${c.mode}`;
}

export interface RematchState {
  phase: RematchPhase;
  result: MatchResultWire | null;
  error: ApiError | null;
  blockReason: string | null;
  /** candidateKey of the driver's selection, kept across re-ranks while
   * the option still exists. */
  selection: string | null;
}

type Listener = (state: RematchState) => void;

export class RematchController {
  private state: RematchState = {
    phase: "idle",
    result: null,
    error: null,
    blockReason: null,
    selection: null,
  };
  private listeners: Listener[] = [];
  private debounceMs: number;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private pendingPanel: PreferencePanelState | null = null;
  private sequence = 0;
  private lastIssuedBody: string | null = null;
  /** resolves when the controller goes quiet; used by flush() and tests */
  private inFlight: Promise<void> = Promise.resolve();

  constructor(private readonly client: MatchService, options?: { debounceMs?: number }) {
    this.debounceMs = options?.debounceMs ?? 250;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.state);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  getState(): RematchState {
    return this.state;
  }

  /** Call on slider release / panel edits. Debounced; identical panel
   * state after the last issued request is a no-op (no network call). */
  panelChanged(panel: PreferencePanelState): void {
    const blocked = panelBlockReason(panel);
    if (blocked !== null) {
      this.cancelPending();
      this.setState({ ...this.state, phase: "blocked", blockReason: blocked });
      return;
    }
    const body = JSON.stringify(buildMatchRequest(panel));
    if (body === this.lastIssuedBody && this.state.phase !== "error") {
      return; // nothing changed since the request we already issued
    }
    this.pendingPanel = panel;
    this.cancelPending();
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.issue();
    }, this.debounceMs);
  }

  /** Skip the debounce and run any pending (or last) request now. */
  async rematchNow(panel?: PreferencePanelState): Promise<void> {
    if (panel !== undefined) {
      this.pendingPanel = panel;
    }
    this.cancelPending();
    await this.issue(true);
    await this.inFlight;
  }

  /** Wait for the debounce window and the in-flight request to settle. */
  async settle(): Promise<void> {
    if (this.timer !== null) {
      this.cancelPending();
      await this.issue();
    }
    await this.inFlight;
  }

  select(key: string | null): void {
    if (key !== null && this.state.result !== null) {
      const present = this.state.result.ranking.some((c) => candidateKey(c) === key);
      if (!present) return;
    }
    this.setState({ ...this.state, selection: key });
  }

  private cancelPending(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  private issue(force = false): Promise<void> {
    const panel = this.pendingPanel;
    if (panel === null) return Promise.resolve();
    const blocked = panelBlockReason(panel);
    if (blocked !== null) {
      this.setState({ ...this.state, phase: "blocked", blockReason: blocked });
      return Promise.resolve();
    }
    const request = buildMatchRequest(panel);
    const body = JSON.stringify(request);
    if (!force && body === this.lastIssuedBody && this.state.phase !== "error") {
      return Promise.resolve();
    }
    this.lastIssuedBody = body;
    const mySequence = ++this.sequence;
    this.setState({ ...this.state, phase: "loading", blockReason: null });
    const run = async () => {
      try {
        const result = await this.client.match(request);
        if (mySequence !== this.sequence) return; // stale response: a newer request exists
        const selection =
          this.state.selection !== null &&
          result.ranking.some((c) => candidateKey(c) === this.state.selection)
            ? this.state.selection
            : null;
        this.setState({ phase: "ready", result, error: null, blockReason: null, selection });
      } catch (error) {
        if (mySequence !== this.sequence) return;
        const apiError =
          error instanceof ApiError
            ? error
            : new ApiError("InternalError", String(error), 0);
        // keep the previous ranking on screen; the banner explains the failure
        this.setState({ ...this.state, phase: "error", error: apiError });
      }
    };
    this.inFlight = run();
    return this.inFlight;
  }

  private setState(next: RematchState): void {
    this.state = next;
    for (const listener of this.listeners) {
      listener(next);
    }
  }
}

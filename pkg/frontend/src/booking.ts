// Booking flow: reserve the selected option, show the confirmation, and
// on SlotTaken automatically re-match so the driver sees fresh options.

import { ApiError, type ReservationPayload } from "./api.js";
import type { CandidateWire, ReservationWire, TimeWindowWire } from "./types.js";

export interface ReservationService {
  reserve(payload: ReservationPayload): Promise<ReservationWire>;
  cancelReservation(reservationId: string): Promise<ReservationWire>;
}

export type BookingPhase = "idle" | "booking" | "confirmed" | "slot_taken" | "error";

export interface BookingState {
  phase: BookingPhase;
  reservation: ReservationWire | null;
  message: string | null;
}

export interface Rematcher {
  rematchNow(): Promise<void>;
}

type Listener = (state: BookingState) => void;

export class BookingFlow {
  private state: BookingState = { phase: "idle", reservation: null, message: null };
  private listeners: Listener[] = [];

  constructor(
    private readonly client: ReservationService,
    private readonly rematcher: Rematcher,
    private readonly vehicleId: string,
  ) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.state);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  getState(): BookingState {
    return this.state;
  }

  async book(option: CandidateWire, window: TimeWindowWire): Promise<BookingState> {
    this.setState({ ...this.state, phase: "booking", message: null });
    try {
      const reservation = await this.client.reserve({
        station_id: option.station_id,
        connector_index: option.connector_index,
        window,
        vehicle_id: this.vehicleId,
      });
      this.setState({ phase: "confirmed", reservation, message: null });
    } catch (error) {
      if (error instanceof ApiError && error.code === "SlotTaken") {
        this.setState({
          phase: "slot_taken",
          reservation: null,
          message: `Station ${option.station_id} was booked by someone else; ranking refreshed.`,
        });
        await this.rematcher.rematchNow();
      } else {
        const message = error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
        this.setState({ phase: "error", reservation: null, message });
      }
    }
    return this.state;
  }

  async cancel(): Promise<BookingState> {
    const reservation = this.state.reservation;
    if (reservation === null) return this.state;
    try {
      await this.client.cancelReservation(reservation.reservation_id);
      this.setState({
        phase: "idle",
        reservation: null,
        message: `Reservation ${reservation.reservation_id} cancelled.`,
      });
      await this.rematcher.rematchNow(); // the slot is visible again
    } catch (error) {
      const message = error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
      this.setState({ ...this.state, phase: "error", message });
    }
    return this.state;
  }

  private setState(next: BookingState): void {
    this.state = next;
    for (const listener of this.listeners) {
      listener(next);
    }
  }
}

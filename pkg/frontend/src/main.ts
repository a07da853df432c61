// App bootstrap: wires the preference panel to the re-match loop and the
// booking flow. Service base URL: ?api=... query param, then
// window.WECHARGE_API, then same-host port 8080.

import { ApiClient } from "./api.js";
import { BookingFlow } from "./booking.js";
import { renderBooking, renderError, renderRanking } from "./dom.js";
import { RematchController } from "./rematch.js";
import { defaultPanelState, EV_PROFILES, type PreferencePanelState } from "./state.js";
import { errorViewModel, rankingViewModel } from "./view.js";

declare global {
  interface Window {
    WECHARGE_API?: string;
  }
}

function serviceBaseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) return fromQuery;
  if (window.WECHARGE_API) return window.WECHARGE_API;
  return `http://${window.location.hostname || "127.0.0.1"}:8080`;
}

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) throw new Error(`missing element #${id}`);
  return found as T;
}

function toIso(value: string): string {
  return new Date(value).toISOString();
}

export function startApp(): void {
  const client = new ApiClient(serviceBaseUrl());
  const controller = new RematchController(client);
  const vehicleId = `browser-${Math.random().toString(36).slice(2, 10)}`;
  const booking = new BookingFlow(client, { rematchNow: () => controller.rematchNow() }, vehicleId);

  const panel: PreferencePanelState = defaultPanelState();

  const sliderIds = {
    distance: "w-distance",
    chargeTime: "w-charge-time",
    waitTime: "w-wait-time",
    cost: "w-cost",
  } as const;

  const profileSelect = element<HTMLSelectElement>("ev-profile");
  for (const option of EV_PROFILES) {
    const el = document.createElement("option");
    el.value = option.id;
    el.textContent = option.label;
    profileSelect.appendChild(el);
  }
  profileSelect.value = panel.evProfileId;

  const latInput = element<HTMLInputElement>("origin-lat");
  const lonInput = element<HTMLInputElement>("origin-lon");
  latInput.value = String(panel.origin.latitude);
  lonInput.value = String(panel.origin.longitude);

  const startInput = element<HTMLInputElement>("window-start");
  const endInput = element<HTMLInputElement>("window-end");
  startInput.value = panel.window.start.slice(0, 16);
  endInput.value = panel.window.end.slice(0, 16);

  const rankingPane = element<HTMLElement>("ranking");
  const errorPane = element<HTMLElement>("error-pane");
  const blockPane = element<HTMLElement>("block-pane");
  const bookingPane = element<HTMLElement>("booking-pane");

  const readPanel = (): PreferencePanelState => ({
    sliders: {
      distance: Number(element<HTMLInputElement>(sliderIds.distance).value),
      chargeTime: Number(element<HTMLInputElement>(sliderIds.chargeTime).value),
      waitTime: Number(element<HTMLInputElement>(sliderIds.waitTime).value),
      cost: Number(element<HTMLInputElement>(sliderIds.cost).value),
    },
    evProfileId: profileSelect.value,
    origin: { latitude: Number(latInput.value), longitude: Number(lonInput.value) },
    window: { start: toIso(startInput.value), end: toIso(endInput.value) },
  });

  const onPanelEdit = () => controller.panelChanged(readPanel());

  for (const id of Object.values(sliderIds)) {
    const slider = element<HTMLInputElement>(id);
    const label = element<HTMLElement>(`${id}-value`);
    label.textContent = slider.value;
    slider.addEventListener("input", () => {
      label.textContent = slider.value;
    });
    slider.addEventListener("change", onPanelEdit); // fires on release
  }
  for (const input of [profileSelect, latInput, lonInput, startInput, endInput]) {
    input.addEventListener("change", onPanelEdit);
  }
  element<HTMLButtonElement>("use-location").addEventListener("click", () => {
    navigator.geolocation?.getCurrentPosition((position) => {
      latInput.value = position.coords.latitude.toFixed(6);
      lonInput.value = position.coords.longitude.toFixed(6);
      onPanelEdit();
    });
  });

  controller.subscribe((state) => {
    blockPane.hidden = state.phase !== "blocked";
    if (state.phase === "blocked") blockPane.textContent = state.blockReason ?? "";
    renderError(errorPane, state.phase === "error" && state.error ? errorViewModel(state.error) : null);
    if (state.result !== null) {
      renderRanking(
        rankingPane,
        rankingViewModel(state.result, state.selection),
        (key) => controller.select(key),
        (key) => {
          const option = state.result!.ranking.find(
            (c) => `${c.station_id}/${c.connector_index}/${c.mode}` === key,
          );
          if (option) void booking.book(option, readPanel().window);
        },
      );
    }
    rankingPane.classList.toggle("loading", state.phase === "loading");
  });

  booking.subscribe((state) => renderBooking(bookingPane, state, () => void booking.cancel()));

  onPanelEdit(); // initial ranking
}

startApp();

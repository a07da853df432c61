// DOM writers for the view models. Deliberately dumb: everything worth
// testing lives in view.ts / rematch.ts / booking.ts.

import type { BookingState } from "./booking.js";
import type { ErrorViewModel, RankingViewModel, RankingRowView } from "./view.js";

const BAR_LABELS: [keyof RankingRowView["bars"], string][] = [
  ["distance", "distance"],
  ["chargeTime", "charge"],
  ["waitTime", "wait"],
  ["cost", "cost"],
];

export function renderRanking(
  container: HTMLElement,
  model: RankingViewModel,
  onSelect: (key: string) => void,
  onBook: (key: string) => void,
): void {
  container.replaceChildren();
  for (const row of model.rows) {
    const item = document.createElement("div");
    item.className = "row" + (row.best ? " best" : "") + (row.selected ? " selected" : "");
    item.dataset["key"] = row.key;

    const head = document.createElement("div");
    head.className = "row-head";
    head.innerHTML =
      `<span class="rank">#${row.rank}</span>` +
      `<span class="station">station ${row.stationId}</span>` +
      `<span class="mode">${row.mode} · connector ${row.connectorIndex}</span>` +
      `<span class="score">${row.scoreText}</span>`;
    item.appendChild(head);

    const bars = document.createElement("div");
    bars.className = "bars";
    for (const [field, label] of BAR_LABELS) {
      const wrap = document.createElement("div");
      wrap.className = "bar-wrap";
      const fill = document.createElement("div");
      fill.className = `bar bar-${field}`;
      fill.style.width = `${(row.bars[field] * 100).toFixed(1)}%`;
      const text = document.createElement("span");
      text.textContent = label;
      wrap.append(fill, text);
      bars.appendChild(wrap);
    }
    item.appendChild(bars);

    const book = document.createElement("button");
    book.textContent = row.best ? "Book best option" : "Book";
    book.addEventListener("click", (event) => {
      event.stopPropagation();
      onBook(row.key);
    });
    item.appendChild(book);
    item.addEventListener("click", () => onSelect(row.key));
    container.appendChild(item);
  }

  if (model.excluded.length > 0) {
    const excludedPane = document.createElement("div");
    excludedPane.className = "excluded";
    excludedPane.innerHTML = "<h3>Not eligible</h3>";
    for (const entry of model.excluded) {
      const line = document.createElement("div");
      line.className = "excluded-row";
      line.textContent = `station ${entry.stationId} (${entry.connectorText}): ${entry.reason}`;
      excludedPane.appendChild(line);
    }
    container.appendChild(excludedPane);
  }
}

export function renderError(container: HTMLElement, model: ErrorViewModel | null): void {
  container.replaceChildren();
  if (model === null) {
    container.hidden = true;
    return;
  }
  container.hidden = false;
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.textContent = model.retryable
    ? `${model.message} — retrying on the next change.`
    : `${model.code}: ${model.message}`;
  container.appendChild(banner);
  for (const entry of model.exclusions) {
    const line = document.createElement("div");
    line.className = "excluded-row";
    line.textContent = `station ${entry.stationId} (${entry.connectorText}): ${entry.reason}`;
    container.appendChild(line);
  }
}

export function renderBooking(
  container: HTMLElement,
  state: BookingState,
  onCancel: () => void,
): void {
  container.replaceChildren();
  if (state.phase === "idle" && state.message === null) {
    container.hidden = true;
    return;
  }
  container.hidden = false;
  const pane = document.createElement("div");
  pane.className = `booking booking-${state.phase}`;
  if (state.phase === "confirmed" && state.reservation !== null) {
    const r = state.reservation;
    pane.innerHTML =
      `<strong>Reservation ${r.reservation_id} confirmed</strong><br>` +
      `station ${r.station_id}, connector ${r.connector_index}<br>` +
      `${r.window.start} → ${r.window.end}`;
    const cancel = document.createElement("button");
    cancel.textContent = "Cancel reservation";
    cancel.addEventListener("click", onCancel);
    pane.appendChild(document.createElement("br"));
    pane.appendChild(cancel);
  } else if (state.message !== null) {
    pane.textContent = state.message;
  } else {
    pane.textContent = state.phase === "booking" ? "Booking…" : "";
  }
  container.appendChild(pane);
}

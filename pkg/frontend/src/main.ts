// Browser bootstrap: wires the view model, renderer, corpus roll and
// controller to the DOM and the live event stream.

import { EventStream, ServiceClient } from "./client";
import { MapController } from "./controller";
import { frameToSvg } from "./render";
import { CorpusRoll } from "./roll";
import { SessionEvent } from "./types";
import { MapViewModel } from "./viewmodel";

const mapHost = document.querySelector<HTMLDivElement>("#map")!;
const rollHost = document.querySelector<HTMLDivElement>("#roll")!;
const searchInput = document.querySelector<HTMLInputElement>("#search")!;
const searchLang = document.querySelector<HTMLSelectElement>("#search-lang")!;
const toastHost = document.querySelector<HTMLDivElement>("#toast")!;
const banner = document.querySelector<HTMLDivElement>("#banner")!;

const client = new ServiceClient(window.location.origin.replace(/:\d+$/, ":8000"));
const viewModel = new MapViewModel({
  width: mapHost.clientWidth || 900,
  height: mapHost.clientHeight || 700,
});
const roll = new CorpusRoll();
const controller = new MapController(client, viewModel, roll, {
  onToast: showToast,
  onSessionChange: attachStream,
});

let stream: EventStream | null = null;
let pendingEvents: SessionEvent[] = [];

function showToast(message: string): void {
  toastHost.textContent = message;
  toastHost.classList.add("visible");
  setTimeout(() => toastHost.classList.remove("visible"), 2500);
}

function attachStream(sessionId: string): void {
  stream?.close();
  pendingEvents = [];
  stream = new EventStream(client, sessionId, (event) => {
    pendingEvents.push(event);
  }, (connected) => {
    viewModel.connected = connected;
    banner.classList.toggle("visible", !connected);
  }, viewModel.state.seq);
}

searchInput.addEventListener("keydown", (keyEvent) => {
  if (keyEvent.key === "Enter" && searchInput.value.trim()) {
    controller.search(searchLang.value, searchInput.value.trim().toLowerCase());
  }
});

rollHost.addEventListener("mouseenter", () => roll.hover(true));
rollHost.addEventListener("mouseleave", () => roll.hover(false));
mapHost.addEventListener("click", (mouse) => {
  const bounds = mapHost.getBoundingClientRect();
  controller.clickAt(mouse.clientX - bounds.left, mouse.clientY - bounds.top);
});
mapHost.addEventListener("wheel", (wheel) => {
  wheel.preventDefault();
  viewModel.zoomBy(wheel.deltaY < 0 ? 1.1 : 1 / 1.1);
}, { passive: false });

function renderRoll(): void {
  const items = roll.entries.map((entry) => {
    const connector = entry.connector ? ' data-connected="1"' : "";
    return `<div class="pair"${connector}>` +
      `<div class="src">${entry.pair.source_text}</div>` +
      `<div class="tgt">${entry.pair.target_text}</div></div>`;
  });
  rollHost.innerHTML = items.join("");
  rollHost.style.transform = `translateY(${-roll.offsetPx % 40}px)`;
}

let lastTick = performance.now();
function frameLoop(now: number): void {
  const elapsed = now - lastTick;
  lastTick = now;
  // events queued by the stream are consumed once per animation frame
  for (const event of pendingEvents.splice(0)) {
    viewModel.applyEvent(event);
  }
  viewModel.animate(elapsed);
  roll.tick(elapsed);
  mapHost.innerHTML = frameToSvg(viewModel.buildFrame(),
    viewModel.viewport.width, viewModel.viewport.height);
  renderRoll();
  requestAnimationFrame(frameLoop);
}

controller.search("en", "beautiful").then(() => {
  requestAnimationFrame(frameLoop);
});

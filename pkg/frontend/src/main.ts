// Browser bootstrap: real fetch + EventSource, innerHTML mounting, and
// event delegation for the console's data-attribute buttons.

import { HttpApiClient } from "./api.js";
import { Console } from "./controller.js";
import { render } from "./render.js";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}

const base = ""; // same origin as the dispatch service
const api = new HttpApiClient(
  base,
  (input, init) => fetch(input, init),
  (url) => new EventSource(url) as unknown as {
    onmessage: ((ev: { data: string }) => void) | null;
    onerror: ((ev: unknown) => void) | null;
    close(): void;
  },
);
const ui = new Console(api, (vm) => {
  root.innerHTML = render(vm);
});

root.addEventListener("click", (ev) => {
  const target = ev.target as HTMLElement | null;
  if (!target || target.tagName !== "BUTTON") {
    return;
  }
  const verdict = target.dataset["verdict"];
  const actionId = target.dataset["actionId"];
  if (verdict && actionId) {
    void ui.submitDecision(actionId, verdict as "apply" | "reject");
    return;
  }
  const mode = target.dataset["mode"];
  if (mode) {
    void ui.setMode(mode);
    return;
  }
  if (target.dataset["toggle"] === "exercise") {
    ui.toggleExerciseMode();
    return;
  }
  const drill = target.dataset["drill"];
  if (drill) {
    void ui.drill(drill as "line-outage" | "load-spike" | "tick");
  }
});

void ui.start();

// HTML-string renderer: pure function of the view model, testable without a
// DOM. The browser shell mounts the string and delegates events by
// data-attributes.

import {
  badgeClass,
  decisionPanelVisible,
  type ViewModel,
} from "./model.js";
import type { ControlAction, Recommendation } from "./types.js";

function esc(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function fmt(x: number, digits = 3): string {
  return x.toFixed(digits);
}

function renderBars(vm: ViewModel): string {
  if (!vm.bars.length) {
    return '<p class="muted">no load buses assessed yet</p>';
  }
  const peak = Math.max(vm.bars[0].value, 1e-9);
  const rows = vm.bars
    .map((bar) => {
      const width = Math.min(100, (bar.value / Math.max(peak, 1)) * 100);
      return (
        `<div class="bar-row" data-bus="${esc(bar.bus)}">` +
        `<span class="bar-label">bus ${esc(bar.bus)}</span>` +
        `<span class="bar-track"><span class="bar-fill" style="width:${width.toFixed(1)}%"></span></span>` +
        `<span class="bar-value">${fmt(bar.value)}</span></div>`
      );
    })
    .join("");
  return `<div class="bars">${rows}</div>`;
}

function renderAction(action: ControlAction, stale: boolean): string {
  const verified =
    action.verified_l_max_after === null
      ? action.unverifiable
        ? "unverifiable"
        : "unverified"
      : `L&rarr;${fmt(action.verified_l_max_after)}`;
  const staleNote = stale
    ? '<p class="stale-note">stale: the grid moved on, refresh issued a new plan</p>'
    : "";
  return (
    `<div class="action-card${stale ? " stale" : ""}" data-action-id="${esc(action.id)}">` +
    `<header>${esc(action.kind)} &middot; bus ${action.bus}</header>` +
    `<p>inject ${fmt(action.dq, 2)} p.u. &middot; ${verified}` +
    `${action.auto_eligible ? " &middot; auto-eligible" : ""}</p>` +
    staleNote +
    `<button data-verdict="apply" data-action-id="${esc(action.id)}">apply</button>` +
    `<button data-verdict="reject" data-action-id="${esc(action.id)}">reject</button>` +
    `</div>`
  );
}

function renderPending(vm: ViewModel): string {
  if (!decisionPanelVisible(vm)) {
    return '<p class="muted">closed loop: actions are applied by the machine</p>';
  }
  if (!vm.pending.length) {
    return '<p class="muted">no pending recommendations</p>';
  }
  return vm.pending
    .map(
      (rec: Recommendation) =>
        `<section class="recommendation" data-rec-id="${esc(rec.id)}">` +
        `<h3>${esc(rec.basis)} &middot; issued t${rec.issued_tick}` +
        `${rec.incomplete ? " &middot; incomplete" : ""}</h3>` +
        rec.actions
          .map((a) => renderAction(a, vm.staleActionIds.includes(a.id)))
          .join("") +
        `</section>`,
    )
    .join("");
}

function renderTimeline(vm: ViewModel): string {
  if (!vm.timeline.length) {
    return '<p class="muted">no events yet</p>';
  }
  const items = vm.timeline
    .map((e) => {
      const detail =
        e.kind === "auto_applied" || e.kind === "operator_applied"
          ? ` bus ${e.payload["bus"]} dq ${e.payload["dq"]}`
          : "";
      return `<li class="ev-${esc(e.kind)}">t${e.tick} ${esc(e.kind)}${esc(detail)}</li>`;
    })
    .join("");
  return `<ol class="timeline">${items}</ol>`;
}

const MODES = ["monitor", "open_loop", "closed_loop", "combined"];

export function render(vm: ViewModel): string {
  const snap = vm.snapshot;
  const badge = badgeClass(vm);
  const lmax = snap?.l_report ? fmt(snap.l_report.l_max) : "&mdash;";
  const lsum = snap?.l_report ? fmt(snap.l_report.l_sum) : "&mdash;";
  const offline =
    vm.connection === "offline"
      ? '<div class="banner offline">connection lost - reconnecting, data may be stale</div>'
      : "";
  const error = vm.lastError
    ? `<div class="banner error">${esc(vm.lastError)}</div>`
    : "";
  const modeButtons = MODES.map(
    (m) =>
      `<button data-mode="${m}"${snap?.mode === m ? ' class="active"' : ""}>${m}</button>`,
  ).join("");
  const exercise = vm.exerciseMode
    ? `<div class="exercise">
         <button data-drill="line-outage">trip a line</button>
         <button data-drill="load-spike">load spike</button>
         <button data-drill="tick">advance tick</button>
       </div>`
    : "";
  return `
<div class="console">
  ${offline}
  ${error}
  <header class="topbar">
    <h1>grid console${snap ? ` &middot; ${esc(snap.case.name)}` : ""}</h1>
    <span class="badge ${esc(badge)}">${esc(badge)}</span>
    <span class="metric">tick ${snap?.tick ?? "&mdash;"}</span>
    <span class="metric">L_max ${lmax}</span>
    <span class="metric">L_sum ${lsum}</span>
    <span class="metric">mode ${snap?.mode ?? "&mdash;"}</span>
    <span class="conn ${vm.connection}">${vm.connection}</span>
  </header>
  <div class="mode-select">${modeButtons}
    <button data-toggle="exercise"${vm.exerciseMode ? ' class="active"' : ""}>exercise mode</button>
  </div>
  ${exercise}
  <main class="panes">
    <section class="pane">
      <h2>local indices</h2>
      ${renderBars(vm)}
    </section>
    <section class="pane">
      <h2>recommendations</h2>
      ${renderPending(vm)}
    </section>
    <section class="pane">
      <h2>timeline</h2>
      ${renderTimeline(vm)}
    </section>
  </main>
</div>`;
}

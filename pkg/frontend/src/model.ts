// View model and its pure reducers. Every piece of grid state shown in the
// console originates from a server snapshot; the reducers only reorder,
// bound, and annotate what the service sent.

import type {
  DispatchEvent,
  Recommendation,
  Snapshot,
  StreamDelta,
} from "./types.js";

export const TIMELINE_LIMIT = 30;

export type Connection = "connecting" | "live" | "offline";

export interface LBar {
  bus: string;
  value: number;
}

export interface ViewModel {
  connection: Connection;
  snapshot: Snapshot | null;
  bars: LBar[]; // local indices sorted descending
  pending: Recommendation[];
  timeline: DispatchEvent[]; // newest first, bounded
  staleActionIds: string[]; // decisions bounced by the server (409)
  exerciseMode: boolean;
  lastError: string | null;
}

export function initialViewModel(): ViewModel {
  return {
    connection: "connecting",
    snapshot: null,
    bars: [],
    pending: [],
    timeline: [],
    staleActionIds: [],
    exerciseMode: false,
    lastError: null,
  };
}

function bars(snapshot: Snapshot): LBar[] {
  if (!snapshot.l_report) {
    return [];
  }
  return Object.entries(snapshot.l_report.l_local)
    .map(([bus, value]) => ({ bus, value }))
    .sort((a, b) => b.value - a.value || a.bus.localeCompare(b.bus));
}

function boundedTimeline(events: DispatchEvent[]): DispatchEvent[] {
  return [...events].reverse().slice(0, TIMELINE_LIMIT);
}

export function applySnapshot(vm: ViewModel, snapshot: Snapshot): ViewModel {
  if (vm.snapshot && snapshot.tick < vm.snapshot.tick) {
    return vm; // stale full snapshot: keep the newer picture
  }
  return {
    ...vm,
    connection: "live",
    snapshot,
    bars: bars(snapshot),
    pending: snapshot.pending,
    timeline: boundedTimeline(snapshot.recent_events),
    staleActionIds: vm.staleActionIds.filter((id) =>
      snapshot.pending.some((rec) => rec.actions.some((a) => a.id === id)),
    ),
    lastError: null,
  };
}

export function applyDelta(vm: ViewModel, delta: StreamDelta): ViewModel {
  if (vm.snapshot && delta.tick < vm.snapshot.tick) {
    return vm; // out-of-order push: ignore
  }
  if (
    vm.snapshot &&
    delta.tick === vm.snapshot.tick &&
    delta.snapshot.recent_events.length <
      Math.min(vm.snapshot.recent_events.length, TIMELINE_LIMIT)
  ) {
    return vm; // same tick but older event horizon
  }
  return applySnapshot(vm, delta.snapshot);
}

export function connectionLost(vm: ViewModel): ViewModel {
  return { ...vm, connection: "offline" };
}

export function markStale(vm: ViewModel, actionId: string, why: string): ViewModel {
  return {
    ...vm,
    staleActionIds: [...vm.staleActionIds, actionId],
    lastError: why,
  };
}

export function toggleExercise(vm: ViewModel): ViewModel {
  return { ...vm, exerciseMode: !vm.exerciseMode };
}

export function reportError(vm: ViewModel, message: string): ViewModel {
  return { ...vm, lastError: message };
}

export function badgeClass(vm: ViewModel): string {
  const cls = vm.snapshot?.l_report?.state_class;
  return cls ?? "unknown";
}

export function decisionPanelVisible(vm: ViewModel): boolean {
  // closed loop never queues anything for a human; hide the panel outright
  return vm.snapshot?.mode !== "closed_loop";
}

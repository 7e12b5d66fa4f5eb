// Console controller: subscribes to the service, folds snapshots into the
// view model, and forwards operator decisions. Grid state is never mutated
// locally; a decision only lands in the view once the server acknowledges
// it and pushes the resulting snapshot.

import type { ApiClient, StreamHandle } from "./api.js";
import {
  applyDelta,
  applySnapshot,
  connectionLost,
  initialViewModel,
  markStale,
  reportError,
  toggleExercise,
  type ViewModel,
} from "./model.js";

export class Console {
  private vm: ViewModel = initialViewModel();
  private stream: StreamHandle | null = null;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private api: ApiClient,
    private onRender: (vm: ViewModel) => void,
    private reconnectDelayMs = 1000,
  ) {}

  get viewModel(): ViewModel {
    return this.vm;
  }

  private swap(vm: ViewModel): void {
    this.vm = vm;
    this.onRender(vm);
  }

  async start(): Promise<void> {
    try {
      const snapshot = await this.api.getState();
      this.swap(applySnapshot(this.vm, snapshot));
    } catch {
      this.swap(connectionLost(this.vm));
    }
    this.subscribe();
  }

  stop(): void {
    this.stream?.close();
    this.stream = null;
    if (this.reconnectTimer !== null) {
      clearTimeout(this.reconnectTimer);
      this.reconnectTimer = null;
    }
  }

  private subscribe(): void {
    this.stream?.close();
    this.stream = this.api.openStream(
      (delta) => this.swap(applyDelta(this.vm, delta)),
      () => this.onStreamDown(),
    );
  }

  private onStreamDown(): void {
    this.swap(connectionLost(this.vm));
    if (this.reconnectTimer !== null) {
      return;
    }
    this.reconnectTimer = setTimeout(async () => {
      this.reconnectTimer = null;
      try {
        // resume: catch up on missed events, then re-subscribe
        const since = this.vm.snapshot?.tick ?? -1;
        await this.api.getEvents(since);
        const snapshot = await this.api.getState();
        this.swap(applySnapshot(this.vm, snapshot));
        this.subscribe();
      } catch {
        this.onStreamDown();
      }
    }, this.reconnectDelayMs);
  }

  async submitDecision(actionId: string, verdict: "apply" | "reject"): Promise<void> {
    const pendingIds = this.vm.pending.flatMap((rec) =>
      rec.actions.map((a) => a.id),
    );
    if (!pendingIds.includes(actionId)) {
      this.swap(reportError(this.vm, `action ${actionId} is no longer pending`));
      return;
    }
    const res =
      verdict === "apply"
        ? await this.api.applyAction(actionId)
        : await this.api.rejectAction(actionId);
    if (res.status === 409) {
      this.swap(
        markStale(this.vm, actionId, "mode changed underneath this decision"),
      );
      return;
    }
    if (!res.ok && res.status !== 204) {
      this.swap(reportError(this.vm, `decision rejected: HTTP ${res.status}`));
      return;
    }
    // acknowledged: the stream delta carries the post-decision snapshot;
    // pull once as well in case the push races the poll
    try {
      const snapshot = await this.api.getState();
      this.swap(applySnapshot(this.vm, snapshot));
    } catch {
      this.swap(connectionLost(this.vm));
    }
  }

  async setMode(mode: string): Promise<void> {
    const res = await this.api.setMode(mode);
    if (!res.ok && res.status !== 204) {
      this.swap(reportError(this.vm, `mode change failed: HTTP ${res.status}`));
      return;
    }
    const snapshot = await this.api.getState();
    this.swap(applySnapshot(this.vm, snapshot));
  }

  toggleExerciseMode(): void {
    this.swap(toggleExercise(this.vm));
  }

  async drill(kind: "line-outage" | "load-spike" | "tick"): Promise<void> {
    if (!this.vm.exerciseMode) {
      this.swap(reportError(this.vm, "drills need exercise mode"));
      return;
    }
    if (kind === "tick") {
      await this.api.tick();
      return;
    }
    const snap = this.vm.snapshot;
    if (!snap) {
      return;
    }
    if (kind === "line-outage") {
      const alive = Array.from(
        { length: snap.case.n_branches },
        (_, k) => k,
      ).filter((k) => !snap.case.outaged_branches.includes(k));
      for (const k of alive) {
        const res = await this.api.injectDisturbance({ branch_outages: [k] });
        if (res.ok || res.status === 204) {
          return;
        }
        // islanding pick: try the next line
      }
      this.swap(reportError(this.vm, "no line can be tripped safely"));
      return;
    }
    const bars = this.vm.bars;
    const bus = bars.length ? bars[0].bus : null;
    if (bus === null) {
      return;
    }
    const res = await this.api.injectDisturbance({
      load_scale: { [bus]: 1.5 },
    });
    if (!res.ok && res.status !== 204) {
      this.swap(reportError(this.vm, `drill rejected: HTTP ${res.status}`));
    }
  }
}

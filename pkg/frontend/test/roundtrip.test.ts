// Scripted operator session against the mock service: receive an alarm,
// apply the top recommendation, observe the next snapshot improve - and
// verify the console never fabricates grid state locally.

import { describe, expect, it } from "vitest";

import { Console } from "../src/controller.js";
import { render } from "../src/render.js";
import type { ViewModel } from "../src/model.js";
import { MockServer } from "./mock_server.js";

function harness(server: MockServer) {
  const frames: { vm: ViewModel; html: string }[] = [];
  const ui = new Console(
    server,
    (vm) => frames.push({ vm, html: render(vm) }),
    5,
  );
  return { ui, frames };
}

describe("console round trip", () => {
  it("apply in alarm reduces the next rendered l_max, all state server-borne", async () => {
    const server = new MockServer(0.62);
    server.issueRecommendation();
    const { ui, frames } = harness(server);

    await ui.start();
    const first = frames.at(-1)!;
    expect(first.vm.snapshot?.l_report?.l_max).toBe(0.62);
    expect(first.html).toContain('class="badge alarm"');
    const topAction = first.vm.pending[0].actions[0];
    expect(topAction.id).toBe("r0-a0");

    await ui.submitDecision(topAction.id, "apply");
    const after = frames.at(-1)!;
    expect(server.applied).toEqual(["r0-a0"]);
    expect(after.vm.snapshot?.tick).toBe(1);
    expect(after.vm.snapshot?.l_report?.l_max).toBeCloseTo(0.37, 10);
    expect(after.vm.snapshot!.l_report!.l_max).toBeLessThan(
      first.vm.snapshot!.l_report!.l_max,
    );
    expect(after.html).toContain('class="badge normal"');

    // no fabricated state: every rendered l_max was served by the server
    for (const frame of frames) {
      const shown = frame.vm.snapshot?.l_report?.l_max;
      if (shown !== undefined && shown !== null) {
        expect(server.served).toContain(shown);
      }
    }
    ui.stop();
  });

  it("reject removes the card without touching the grid", async () => {
    const server = new MockServer(0.58);
    server.issueRecommendation();
    const { ui, frames } = harness(server);
    await ui.start();
    const action = frames.at(-1)!.vm.pending[0].actions[1];
    await ui.submitDecision(action.id, "reject");
    const after = frames.at(-1)!.vm;
    expect(server.applied).toEqual([]);
    expect(after.snapshot?.l_report?.l_max).toBe(0.58); // grid unchanged
    expect(
      after.pending.flatMap((r) => r.actions.map((a) => a.id)),
    ).not.toContain(action.id);
    ui.stop();
  });

  it("409 marks the card stale instead of mutating anything", async () => {
    const server = new MockServer(0.61);
    server.issueRecommendation();
    server.rejectNextWith409 = true;
    const { ui, frames } = harness(server);
    await ui.start();
    const action = frames.at(-1)!.vm.pending[0].actions[0];
    await ui.submitDecision(action.id, "apply");
    const after = frames.at(-1)!;
    expect(server.applied).toEqual([]);
    expect(after.vm.staleActionIds).toContain(action.id);
    expect(after.vm.snapshot?.l_report?.l_max).toBe(0.61);
    expect(after.html).toContain("stale");
    ui.stop();
  });

  it("decisions on non-pending actions never reach the server", async () => {
    const server = new MockServer(0.3);
    const { ui, frames } = harness(server);
    await ui.start();
    await ui.submitDecision("ghost-action", "apply");
    expect(server.applied).toEqual([]);
    expect(frames.at(-1)!.vm.lastError).toContain("no longer pending");
    ui.stop();
  });

  it("stream drop shows offline and reconnect resumes from the server", async () => {
    const server = new MockServer(0.42);
    const { ui, frames } = harness(server);
    await ui.start();
    expect(frames.at(-1)!.vm.connection).toBe("live");
    server.dropStream();
    expect(frames.at(-1)!.vm.connection).toBe("offline");
    expect(frames.at(-1)!.html).toContain("connection lost");
    server.tickCount = 3;
    await new Promise((resolve) => setTimeout(resolve, 25));
    const resumed = frames.at(-1)!.vm;
    expect(resumed.connection).toBe("live");
    expect(resumed.snapshot?.tick).toBe(3);
    expect(server.streamOpens).toBe(2);
    ui.stop();
  });

  it("out-of-order stream deltas are ignored", async () => {
    const server = new MockServer(0.45);
    const { ui, frames } = harness(server);
    await ui.start();
    server.tickCount = 7;
    server.push();
    expect(frames.at(-1)!.vm.snapshot?.tick).toBe(7);
    server.pushStale(5, 0.99);
    const vm = frames.at(-1)!.vm;
    expect(vm.snapshot?.tick).toBe(7);
    expect(vm.snapshot?.l_report?.l_max).toBe(0.45);
    ui.stop();
  });
});

import { describe, expect, it } from "vitest";

import { applySnapshot, initialViewModel } from "../src/model.js";
import { render } from "../src/render.js";
import { MockServer } from "./mock_server.js";

describe("renderer", () => {
  it("shows the snapshot badge and headline numbers", async () => {
    const server = new MockServer(0.62);
    server.issueRecommendation();
    const vm = applySnapshot(initialViewModel(), await server.getState());
    const html = render(vm);
    expect(html).toContain('class="badge alarm"');
    expect(html).toContain("0.620"); // l_max straight from the server
    expect(html).toContain("mock-grid");
  });

  it("renders bars in descending order", async () => {
    const server = new MockServer(0.62);
    const vm = applySnapshot(initialViewModel(), await server.getState());
    const html = render(vm);
    const order = [...html.matchAll(/data-bus="(\d+)"/g)].map((m) => m[1]);
    expect(order).toEqual(["14", "9", "10"]);
  });

  it("renders action cards with apply and reject controls", async () => {
    const server = new MockServer(0.62);
    server.issueRecommendation();
    const vm = applySnapshot(initialViewModel(), await server.getState());
    const html = render(vm);
    expect(html).toContain('data-action-id="r0-a0"');
    expect(html).toContain('data-verdict="apply"');
    expect(html).toContain('data-verdict="reject"');
  });

  it("hides decision cards in closed loop", async () => {
    const server = new MockServer(0.62);
    server.issueRecommendation();
    server.mode = "closed_loop";
    const vm = applySnapshot(initialViewModel(), await server.getState());
    const html = render(vm);
    expect(html).not.toContain('data-verdict="apply"');
    expect(html).toContain("applied by the machine");
  });

  it("shows the offline banner when the stream is down", () => {
    const vm = { ...initialViewModel(), connection: "offline" as const };
    const html = render(vm);
    expect(html).toContain("connection lost");
  });

  it("keeps drill controls behind the exercise toggle", async () => {
    const server = new MockServer(0.3);
    let vm = applySnapshot(initialViewModel(), await server.getState());
    expect(render(vm)).not.toContain('data-drill="line-outage"');
    vm = { ...vm, exerciseMode: true };
    expect(render(vm)).toContain('data-drill="line-outage"');
  });
});

import { describe, expect, it } from "vitest";

import { ApiClient, Job } from "../src/api";
import { pollJob } from "../src/poll";

function jobIn(state: string): Job {
  return {
    id: "j1",
    manuscript_id: "m1",
    venue: "v",
    mode: "multimodal",
    use_rag: true,
    state,
    error: state === "failed" ? "boom" : "",
    review_id: state === "done" ? "r1" : "",
    timestamps: {},
  };
}

function apiWithStates(states: string[]): { api: ApiClient; calls: () => number } {
  let call = 0;
  const fetchImpl = (async (url: RequestInfo | URL) => {
    const state = states[Math.min(call, states.length - 1)];
    call += 1;
    return new Response(JSON.stringify(jobIn(state)), {
      status: 200,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
  return { api: new ApiClient("", fetchImpl), calls: () => call };
}

describe("pollJob", () => {
  it("polls until the job is done and reports every state", async () => {
    const { api } = apiWithStates(["queued", "ingesting", "generating", "done"]);
    const seen: string[] = [];
    const waits: number[] = [];
    const handle = pollJob(api, "j1", (job) => seen.push(job.state), {
      wait: async (ms) => void waits.push(ms),
    });
    const job = await handle.done;
    expect(job.state).toBe("done");
    expect(seen).toEqual(["queued", "ingesting", "generating", "done"]);
    expect(waits).toEqual([1000, 1500, 2250]);
  });

  it("backs off toward the 5s cap", async () => {
    const states = Array(10).fill("generating").concat(["done"]);
    const { api } = apiWithStates(states);
    const waits: number[] = [];
    await pollJob(api, "j1", () => undefined, { wait: async (ms) => void waits.push(ms) }).done;
    expect(Math.max(...waits)).toBe(5000);
    for (let i = 1; i < waits.length; i += 1) {
      expect(waits[i]).toBeGreaterThanOrEqual(waits[i - 1]);
    }
  });

  it("resolves with a failed job for the caller to surface", async () => {
    const { api } = apiWithStates(["queued", "failed"]);
    const job = await pollJob(api, "j1", () => undefined, { wait: async () => undefined }).done;
    expect(job.state).toBe("failed");
    expect(job.error).toBe("boom");
  });

  it("cancel stops further polling", async () => {
    const { api, calls } = apiWithStates(["generating"]);
    let release: () => void = () => undefined;
    const gate = new Promise<void>((resolve) => (release = resolve));
    const handle = pollJob(api, "j1", () => undefined, {
      wait: () => gate,
    });
    await Promise.resolve();
    handle.cancel();
    release();
    await handle.done;
    expect(calls()).toBeLessThanOrEqual(2);
  });
});

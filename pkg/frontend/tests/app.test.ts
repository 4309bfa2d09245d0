/** Full revision-loop integration against the in-memory service:
 * upload, run, read, tick, reload, and the tick survives via server truth. */

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { App } from "../src/app";
import { fakeServer, makeReview } from "./fake_server";

function flush(times = 4): Promise<void> {
  let chain = Promise.resolve();
  for (let i = 0; i < times; i += 1) {
    chain = chain.then(() => new Promise((resolve) => setTimeout(resolve, 0)));
  }
  return chain;
}

const instantPoll = { wait: async () => undefined };

async function boot(server: ReturnType<typeof fakeServer>, storage: Storage) {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const app = new App(root, new ApiClient("", server.fetchImpl), {
    poll: instantPoll,
    storage,
  });
  await app.start();
  await flush();
  return { app, root };
}

describe("App revision loop", () => {
  let storage: Storage;

  beforeEach(() => {
    document.body.innerHTML = "";
    window.localStorage.clear();
    storage = window.localStorage;
  });

  it("uploads, runs, reviews, ticks, and survives a full reload", async () => {
    const server = fakeServer(makeReview(5));
    const { app, root } = await boot(server, storage);

    // Upload a fixture "PDF".
    await app.upload(new Blob([new Uint8Array([0x25, 0x50, 0x44, 0x46])]));
    expect(server.requests.some((r) => r === "POST /api/manuscripts")).toBe(true);
    expect(root.querySelector("#status")?.textContent).toContain("man-1");

    // Configure and run; the poller walks the job states to done.
    await app.run();
    await flush(8);
    expect(root.querySelector(".markdown")?.textContent).toContain("A compact study.");
    expect(root.querySelectorAll(".todo-list input[type=checkbox]").length).toBe(5);

    // Tick item 2 of 5 and observe the PATCH server-side.
    const box = root.querySelectorAll<HTMLInputElement>(".todo-list input[type=checkbox]")[2];
    box.checked = true;
    box.dispatchEvent(new Event("change"));
    await flush();
    expect(
      server.requests.filter((r) => r.startsWith("PATCH") && r.endsWith("/todos/2")),
    ).toHaveLength(1);
    expect(server.state.review.todos[2].done).toBe(true);
    expect(root.querySelector(".todo-progress")?.textContent).toBe("Progress: 1/5");

    // Full page reload: fresh DOM, fresh App, same storage and server.
    document.body.innerHTML = "";
    const { root: root2 } = await boot(server, storage);
    await flush(4);
    const boxes2 = root2.querySelectorAll<HTMLInputElement>(".todo-list input[type=checkbox]");
    expect(boxes2.length).toBe(5);
    expect(boxes2[2].checked).toBe(true);
    expect([...boxes2].filter((b) => b.checked)).toHaveLength(1);
    expect(root2.querySelector(".todo-progress")?.textContent).toBe("Progress: 1/5");
  });

  it("renders job stages while polling", async () => {
    const server = fakeServer(makeReview(2));
    const { app, root } = await boot(server, storage);
    await app.upload(new Blob([new Uint8Array([1])]));
    await app.run();
    await flush(8);
    const done = root.querySelectorAll(".stages .stage-done").length;
    expect(done).toBeGreaterThan(0);
    expect(root.querySelector('[data-stage="done"]')?.classList.contains("stage-active")).toBe(true);
  });

  it("shows upload errors verbatim from the api", async () => {
    const server = fakeServer();
    const failingFetch = (async () =>
      new Response(
        JSON.stringify({ code: "no_text_layer", message: "no extractable text; document appears to be scanned", detail: "" }),
        { status: 422, headers: { "Content-Type": "application/json" } },
      )) as typeof fetch;
    const root = document.createElement("div");
    document.body.appendChild(root);
    const app = new App(root, new ApiClient("", failingFetch), { poll: instantPoll, storage });
    // listVenues also fails here, which is fine: the toast shows the last error.
    await app.start().catch(() => undefined);
    await app.upload(new Blob([new Uint8Array([1])]));
    const toast = root.querySelector<HTMLElement>("#toast");
    expect(toast?.hidden).toBe(false);
    expect(toast?.textContent).toContain("no extractable text");
    expect(server.requests).toHaveLength(0);
  });

  it("completion banner appears when all items are ticked", async () => {
    const server = fakeServer(makeReview(2));
    const { app, root } = await boot(server, storage);
    await app.upload(new Blob([new Uint8Array([1])]));
    await app.run();
    await flush(8);
    for (const box of root.querySelectorAll<HTMLInputElement>(".todo-list input[type=checkbox]")) {
      box.checked = true;
      box.dispatchEvent(new Event("change"));
      await flush();
    }
    expect(root.querySelector(".todo-progress")?.textContent).toBe("Progress: 2/2");
    expect(root.querySelector<HTMLElement>(".todo-banner")?.hidden).toBe(false);
  });
});

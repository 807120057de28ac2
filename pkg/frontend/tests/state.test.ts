import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api";
import { SessionStore } from "../src/state";
import { FIXTURE_MANIFEST } from "./fixture";
import { MockServer } from "./mock-server";

function makeClient(server: MockServer): ApiClient {
  return new ApiClient("", server.fetch);
}

async function makeStore(server: MockServer): Promise<SessionStore> {
  return SessionStore.create(makeClient(server), "t-1", "gear-box", "install-gear-box");
}

describe("ApiClient", () => {
  it("creates sessions and returns snapshots", async () => {
    const server = new MockServer(FIXTURE_MANIFEST);
    const api = makeClient(server);
    const sid = await api.createSession("t-1", "gear-box", "install-gear-box");
    const snapshot = await api.getSession(sid);
    expect(snapshot.entered).toBe("FAMILIARIZATION");
    expect(snapshot.accessible).toEqual(["FAMILIARIZATION"]);
  });

  it("maps error bodies onto ApiError", async () => {
    const server = new MockServer(FIXTURE_MANIFEST);
    const api = makeClient(server);
    await expect(api.getSession("missing")).rejects.toThrowError(ApiError);
    await expect(api.getSession("missing")).rejects.toMatchObject({ status: 404 });
  });
});

describe("SessionStore", () => {
  it("refuses to enter locked modules without calling the server", async () => {
    const server = new MockServer(FIXTURE_MANIFEST);
    const store = await makeStore(server);
    const before = server.requestLog.length;
    expect(await store.enterModule("PRACTICE")).toBe(false);
    expect(server.requestLog.length).toBe(before);
  });

  it("mirrors the server opacity map exactly", async () => {
    const server = new MockServer(FIXTURE_MANIFEST);
    const store = await makeStore(server);
    const snapshot = await store.selectPart("GB-2");
    expect(snapshot.familiarization.opacity_map).toEqual({
      "GB-1": 0.2,
      "GB-2": 1.0,
      "GB-3": 0.2,
    });
    const off = await store.setContextView(false);
    expect(off.familiarization.opacity_map).toEqual({
      "GB-1": 1.0,
      "GB-2": 1.0,
      "GB-3": 1.0,
    });
  });

  it("keeps timestamps monotone", async () => {
    const server = new MockServer(FIXTURE_MANIFEST);
    const store = await makeStore(server);
    const stamps: number[] = [];
    for (const part of ["GB-1", "GB-2", "GB-3"]) {
      const snapshot = await store.selectPart(part);
      stamps.push(snapshot.last_timestamp_ms);
    }
    expect([...stamps].sort((a, b) => a - b)).toEqual(stamps);
  });

  it("serializes concurrent practice attempts", async () => {
    const server = new MockServer(FIXTURE_MANIFEST);
    const store = await makeStore(server);
    for (const part of ["GB-1", "GB-2", "GB-3"]) await store.selectPart(part);
    await store.completeModule("FAMILIARIZATION");
    await store.enterModule("PROCEDURE");
    for (let i = 0; i < 3; i++) await store.stepViewed(i);
    await store.completeModule("PROCEDURE");
    await store.enterModule("PRACTICE");

    // both drags fire "at once"; the queue must deliver them in order
    const [first, second] = await Promise.all([
      store.attempt("GB-1"),
      store.attempt("GB-2"),
    ]);
    expect(first.result).toBe("accepted");
    expect(second.result).toBe("accepted");
    expect(store.snapshot.practice?.placed).toEqual(["GB-1", "GB-2"]);
  });

  it("resume rebuilds the same view from GET endpoints", async () => {
    const server = new MockServer(FIXTURE_MANIFEST);
    const store = await makeStore(server);
    await store.selectPart("GB-1");
    const resumed = await SessionStore.resume(makeClient(server), store.sessionId);
    expect(resumed.snapshot).toEqual(store.snapshot);
  });
});

/** ApiClient against a scripted fetch: URLs, canonical bodies, and the
error states the UI presents. Response bodies come from the recorded
service fixtures, so the client is exercised on real wire bytes. */

import { describe, expect, it } from "vitest";
import { ApiClient, type FetchLike, type HttpResponse } from "../src/api.js";
import { buildPageView } from "../src/pageview.js";
import { parsePagePayload } from "../src/schema.js";
import { AnnotationSession } from "../src/session.js";
import type { AnnotationRecord, PagePayload } from "../src/types.js";
import { fixture, fixtureText } from "./helpers.js";

interface Call {
  url: string;
  init?: Parameters<FetchLike>[1];
}

function scripted(...bodies: { status: number; text: string }[]) {
  const calls: Call[] = [];
  const queue = [...bodies];
  const fetchImpl: FetchLike = async (url, init) => {
    calls.push({ url, init });
    const next = queue.shift();
    if (next === undefined) throw new Error("no scripted response left");
    const response: HttpResponse = {
      status: next.status,
      json: async () => JSON.parse(next.text),
      text: async () => next.text,
    };
    return response;
  };
  return { calls, fetchImpl };
}

const ok = (text: string) => ({ status: 200, text });
const errorFixture = (name: string) => {
  const { status, body } = fixture<{ status: number; body: unknown }>(name);
  return { status, text: JSON.stringify(body) };
};

const freshRecord = () => fixture<{ record: AnnotationRecord; canonical: string }>(
  "record-fresh.json",
);

function sessionOnFreshPage() {
  const payload = parsePagePayload(fixture<PagePayload>("page-fresh.json"));
  let now = 100.0;
  const session = new AnnotationSession("alice", () => now);
  const view = buildPageView(payload);
  session.openPage(view);
  session.paint([view.cells[0]!.id], "title");
  session.paint(view.cells.slice(1).map((c) => c.id), "text");
  now = 130.5;
  return session;
}

describe("loadPage", () => {
  it("fetches, validates, and builds the page view", async () => {
    const { calls, fetchImpl } = scripted(ok(fixtureText("page-fresh.json")));
    const client = new ApiClient("http://svc/", fetchImpl);
    const result = await client.loadPage("d".repeat(64), 1);
    expect(result.ok).toBe(true);
    if (result.ok) {
      expect(result.view.mode).toBe("fresh");
      expect(result.view.cells.length).toBeGreaterThan(0);
    }
    expect(calls[0]!.url).toBe(`http://svc/documents/${"d".repeat(64)}/pages/1`);
  });

  it("turns a 404 into a displayable error state", async () => {
    const { fetchImpl } = scripted(errorFixture("error-404.json"));
    const client = new ApiClient("http://svc", fetchImpl);
    const result = await client.loadPage("d".repeat(64), 99);
    expect(result).toMatchObject({ ok: false, status: 404 });
    if (!result.ok) expect(result.message).toMatch(/99/);
  });

  it("reports an invalid payload instead of crashing", async () => {
    const { fetchImpl } = scripted(ok('{"nope": 1}'));
    const client = new ApiClient("http://svc", fetchImpl);
    const result = await client.loadPage("d".repeat(64), 1);
    expect(result.ok).toBe(false);
    if (!result.ok) expect(result.message).toMatch(/invalid page payload/);
  });
});

describe("submitAnnotation", () => {
  it("posts the canonical bytes, not a re-serialization", async () => {
    const { record, canonical } = freshRecord();
    const { calls, fetchImpl } = scripted(errorFixture("submit-response.json"));
    const client = new ApiClient("http://svc", fetchImpl);
    const result = await client.submitAnnotation(record);
    expect(result.ok).toBe(true);
    if (result.ok) expect(result.annotationKey).toMatch(/^[0-9a-f]{64}$/);
    const call = calls[0]!;
    expect(call.url).toBe(
      `http://svc/documents/${record.doc_id}/pages/${record.page_number}/annotation`,
    );
    expect(call.init?.method).toBe("POST");
    expect(call.init?.headers?.["content-type"]).toBe("application/json");
    expect(call.init?.body).toBe(canonical);
  });

  it("surfaces per-cell validation messages on 422", async () => {
    const { fetchImpl } = scripted(errorFixture("error-422.json"));
    const client = new ApiClient("http://svc", fetchImpl);
    const result = await client.submitAnnotation(freshRecord().record);
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.status).toBe(422);
      expect(result.cellMessages).toEqual([
        "cell 1 has no label",
        "cell 0 has unknown label 'banana'",
      ]);
    }
  });
});

describe("submitAndAdvance", () => {
  it("marks the page submitted and picks the next page", async () => {
    const session = sessionOnFreshPage();
    const { calls, fetchImpl } = scripted(errorFixture("submit-response.json"));
    const client = new ApiClient("http://svc", fetchImpl);
    const result = await client.submitAndAdvance(session);
    expect(result.ok).toBe(true);
    if (result.ok) expect(result.nextPage).toBe(2);
    expect(session.dirty).toBe(false);
    expect(calls[0]!.init?.body).toBe(freshRecord().canonical);
  });

  it("rolls back on failure so a retry posts identical bytes", async () => {
    const session = sessionOnFreshPage();
    const { calls, fetchImpl } = scripted(
      { status: 500, text: '{"detail": "store offline"}' },
      errorFixture("submit-response.json"),
    );
    const client = new ApiClient("http://svc", fetchImpl);
    const failed = await client.submitAndAdvance(session);
    expect(failed.ok).toBe(false);
    if (!failed.ok) expect(failed.message).toBe("store offline");
    expect(session.dirty).toBe(true);
    const retried = await client.submitAndAdvance(session);
    expect(retried.ok).toBe(true);
    expect(session.dirty).toBe(false);
    expect(calls[1]!.init?.body).toBe(calls[0]!.init?.body);
  });
});

describe("sessionStats", () => {
  it("fetches and validates the stats payload", async () => {
    const { calls, fetchImpl } = scripted(ok(fixtureText("session-stats.json")));
    const client = new ApiClient("http://svc", fetchImpl);
    const stats = await client.sessionStats("c".repeat(64), "alice");
    expect(stats.windows.length).toBeGreaterThan(0);
    expect(calls[0]!.url).toBe(
      `http://svc/collections/${"c".repeat(64)}/session-stats?annotator=alice`,
    );
  });

  it("throws the service detail on failure", async () => {
    const { fetchImpl } = scripted({ status: 404, text: '{"detail": "no collection"}' });
    const client = new ApiClient("http://svc", fetchImpl);
    await expect(client.sessionStats("c".repeat(64))).rejects.toThrow("no collection");
  });
});

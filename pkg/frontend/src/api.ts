/** HTTP client for the annotation service.

This is the only place the UI talks to the network. Responses are
validated at the boundary; annotation posts use the canonical encoder
so the service stores exactly the bytes the UI signed off on. The
fetch implementation is injected for testability.
*/

import { z } from "zod";
import { buildPageView, type PageView } from "./pageview.js";
import { parsePagePayload, sessionStatsSchema } from "./schema.js";
import { serializeAnnotationRecord } from "./serialize.js";
import type { AnnotationSession } from "./session.js";
import type { AnnotationRecord, SessionStatsPayload } from "./types.js";

export interface HttpResponse {
  status: number;
  json(): Promise<unknown>;
  text(): Promise<string>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<HttpResponse>;

export type LoadPageResult =
  | { ok: true; view: PageView }
  | { ok: false; status: number; message: string };

export type SubmitResult =
  | { ok: true; annotationKey: string; nextPage: number | null }
  | { ok: false; status: number; message: string; cellMessages: string[] };

const submitResponseSchema = z.object({ annotation_key: z.string() });

async function detailOf(response: HttpResponse): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") return body.detail;
  } catch {
    // non-JSON error body, fall through to the status line
  }
  return `request failed with status ${response.status}`;
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl;
  }

  /** Fetch one page for annotation. Missing documents or out-of-range
  pages come back as an error state for the UI to display, not a throw. */
  async loadPage(docId: string, pageNumber: number): Promise<LoadPageResult> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/documents/${docId}/pages/${pageNumber}`,
    );
    if (response.status !== 200) {
      return { ok: false, status: response.status, message: await detailOf(response) };
    }
    let payload;
    try {
      payload = parsePagePayload(await response.json());
    } catch (err) {
      return {
        ok: false,
        status: 200,
        message: `service sent an invalid page payload: ${(err as Error).message}`,
      };
    }
    return { ok: true, view: buildPageView(payload) };
  }

  async submitAnnotation(record: AnnotationRecord): Promise<SubmitResult> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/documents/${record.doc_id}/pages/${record.page_number}/annotation`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: serializeAnnotationRecord(record),
      },
    );
    if (response.status === 201) {
      const body = submitResponseSchema.parse(await response.json());
      return { ok: true, annotationKey: body.annotation_key, nextPage: null };
    }
    const message = await detailOf(response);
    // validation problems arrive "; "-joined, one clause per bad cell,
    // with a JSON-path prefix on the first clause
    const cellMessages =
      response.status === 422 ? message.replace(/^\$[^:]*: /, "").split("; ") : [];
    return { ok: false, status: response.status, message, cellMessages };
  }

  /** Submit the open page and pick the next one to work on.

  Optimistic: the page is marked submitted (and the caller may start
  loading the next page) while the post is in flight; a failure rolls
  the mark back and re-dirties the page so nothing is silently lost. */
  async submitAndAdvance(session: AnnotationSession): Promise<SubmitResult> {
    const view = session.view;
    if (view === null) throw new Error("no page is open");
    const record = session.buildRecord();
    session.markSubmitted();
    const nextPage = session.nextUnannotatedPage();
    const result = await this.submitAnnotation(record);
    if (!result.ok) {
      session.rollbackSubmission(view.pageNumber);
      return result;
    }
    return { ...result, nextPage };
  }

  async sessionStats(
    collectionId: string,
    annotator?: string,
  ): Promise<SessionStatsPayload> {
    const query = annotator === undefined ? "" : `?annotator=${encodeURIComponent(annotator)}`;
    const response = await this.fetchImpl(
      `${this.baseUrl}/collections/${collectionId}/session-stats${query}`,
    );
    if (response.status !== 200) {
      throw new Error(await detailOf(response));
    }
    return sessionStatsSchema.parse(await response.json());
  }
}

/** Runtime validators for the service wire formats.

Parsing happens at the API boundary so the rest of the UI can trust the
shapes. The rules mirror the service's JSON Schemas, including the
cross-field annotation invariants.
*/

import { z } from "zod";

const hexKey = z.string().regex(/^[0-9a-f]{64}$/, "expected a sha256 hex key");
const cellKey = z.string().regex(/^(0|[1-9][0-9]*)$/, "cell ids are stringified integers");

const bboxSchema = z.tuple([z.number(), z.number(), z.number(), z.number()]);

const cellSchema = z.strictObject({
  id: z.number().int().nonnegative(),
  bbox: bboxSchema,
  text: z.string(),
  font_size: z.number().positive(),
});

const predictionsSchema = z.strictObject({
  model_id: hexKey,
  labels: z.array(z.string()),
  confidences: z.array(z.number().min(0).max(1)),
});

export const pagePayloadSchema = z
  .strictObject({
    format: z.literal("page-annotation.v1"),
    schema_version: z.literal(1),
    doc_id: hexKey,
    collection_id: z.string(),
    page_number: z.number().int().min(1),
    n_pages: z.number().int().min(1),
    geometry: z.strictObject({
      width: z.number().positive(),
      height: z.number().positive(),
    }),
    cells: z.array(cellSchema),
    predictions: predictionsSchema.nullable(),
    mode: z.enum(["fresh", "correction"]),
    label_set: z.array(
      z.strictObject({
        name: z.string().min(1),
        color: z.string().regex(/^#[0-9a-f]{6}$/),
      }),
    ),
  })
  .superRefine((page, ctx) => {
    if (page.predictions) {
      const n = page.cells.length;
      if (page.predictions.labels.length !== n || page.predictions.confidences.length !== n) {
        ctx.addIssue({
          code: "custom",
          path: ["predictions"],
          message: `predictions must cover all ${n} cells`,
        });
      }
    }
    // correction mode is exactly "predictions are present"
    if ((page.mode === "correction") !== (page.predictions !== null)) {
      ctx.addIssue({ code: "custom", path: ["mode"], message: "mode contradicts predictions" });
    }
  });

export const annotationRecordSchema = z
  .strictObject({
    format: z.literal("annotation-record.v1"),
    schema_version: z.literal(1),
    doc_id: hexKey,
    page_number: z.number().int().min(1),
    labels: z.record(cellKey, z.string().min(1)),
    annotator: z.string().min(1),
    started: z.number(),
    submitted: z.number(),
    source: z.enum(["fresh", "corrected-from-prediction"]),
    corrections_count: z.number().int().nonnegative().nullable(),
  })
  .superRefine((record, ctx) => {
    if (record.source === "fresh" && record.corrections_count !== null) {
      ctx.addIssue({
        code: "custom",
        path: ["corrections_count"],
        message: "fresh annotations have no prediction baseline",
      });
    }
    if (record.source === "corrected-from-prediction" && record.corrections_count === null) {
      ctx.addIssue({
        code: "custom",
        path: ["corrections_count"],
        message: "corrected annotations must count repainted cells",
      });
    }
    if (record.submitted < record.started) {
      ctx.addIssue({ code: "custom", path: ["submitted"], message: "submitted precedes started" });
    }
  });

export const sessionStatsSchema = z.strictObject({
  windows: z.array(
    z.strictObject({
      end: z.number(),
      pages_per_minute: z.number().nonnegative(),
    }),
  ),
  retrain_markers: z.array(z.number()),
});

export function parsePagePayload(raw: unknown) {
  return pagePayloadSchema.parse(raw);
}

export function parseAnnotationRecord(raw: unknown) {
  return annotationRecordSchema.parse(raw);
}

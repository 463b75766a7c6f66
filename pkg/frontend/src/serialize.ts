/** Canonical annotation-record serialization.

The service stores records under content-addressed keys of its canonical
JSON encoding, so the UI must post byte-identical payloads for logically
identical records: fixed field order, ", " and ": " separators, labels
sorted by numeric cell id, timestamps printed like double repr (integral
values keep a trailing .0), and a trailing newline.
*/

import type { AnnotationRecord } from "./types.js";

/** Shortest-roundtrip double repr; matches the reference encoder for the
magnitudes timestamps live in (no exponent form below 1e16). */
export function floatRepr(value: number): string {
  if (!Number.isFinite(value)) {
    throw new Error(`cannot encode non-finite float ${value}`);
  }
  if (Math.abs(value) >= 1e16) {
    throw new Error(`float ${value} outside the supported encoding range`);
  }
  return Number.isInteger(value) ? `${value.toFixed(1)}` : String(value);
}

function str(value: string): string {
  return JSON.stringify(value);
}

export function serializeAnnotationRecord(record: AnnotationRecord): string {
  const ids = Object.keys(record.labels).sort((a, b) => Number(a) - Number(b));
  const labels = ids.map((id) => `${str(id)}: ${str(record.labels[id]!)}`).join(", ");
  const corrections =
    record.corrections_count === null ? "null" : String(record.corrections_count);
  return (
    "{" +
    [
      `"format": ${str(record.format)}`,
      `"schema_version": ${record.schema_version}`,
      `"doc_id": ${str(record.doc_id)}`,
      `"page_number": ${record.page_number}`,
      `"labels": {${labels}}`,
      `"annotator": ${str(record.annotator)}`,
      `"started": ${floatRepr(record.started)}`,
      `"submitted": ${floatRepr(record.submitted)}`,
      `"source": ${str(record.source)}`,
      `"corrections_count": ${corrections}`,
    ].join(", ") +
    "}\n"
  );
}

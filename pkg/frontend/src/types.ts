/** Wire types exchanged with the ccs service. */

/** PDF-point coordinates, origin at the bottom-left of the page. */
export type BBox = [number, number, number, number];

export interface CellView {
  id: number;
  bbox: BBox;
  text: string;
  font_size: number;
}

export interface Predictions {
  model_id: string;
  labels: string[];
  confidences: number[];
}

export interface LabelEntry {
  name: string;
  color: string;
}

export type AnnotationMode = "fresh" | "correction";

/** Response of GET /documents/{doc_id}/pages/{n} (page-annotation.v1). */
export interface PagePayload {
  format: "page-annotation.v1";
  schema_version: 1;
  doc_id: string;
  collection_id: string;
  page_number: number;
  n_pages: number;
  geometry: { width: number; height: number };
  cells: CellView[];
  predictions: Predictions | null;
  mode: AnnotationMode;
  label_set: LabelEntry[];
}

export type AnnotationSource = "fresh" | "corrected-from-prediction";

/** Body of POST /documents/{doc_id}/pages/{n}/annotation (annotation-record.v1). */
export interface AnnotationRecord {
  format: "annotation-record.v1";
  schema_version: 1;
  doc_id: string;
  page_number: number;
  /** cell id (stringified integer) -> label name */
  labels: Record<string, string>;
  annotator: string;
  started: number;
  submitted: number;
  source: AnnotationSource;
  corrections_count: number | null;
}

export interface SessionStatsPayload {
  windows: { end: number; pages_per_minute: number }[];
  retrain_markers: number[];
}

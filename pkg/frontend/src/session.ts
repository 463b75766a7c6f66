/** Annotation session state machine.

Tracks the open page, the dirty flag, the page timer, and the prediction
baseline that corrections are counted against. The clock is injected so
tests control elapsed time; production passes Date.now()/1000.
*/

import { fullyLabeled, paintCells, type PageView } from "./pageview.js";
import { entryForKey } from "./palette.js";
import type { AnnotationRecord } from "./types.js";

export type Clock = () => number;

export class AnnotationSession {
  readonly annotator: string;
  private readonly clock: Clock;

  view: PageView | null = null;
  /** Seconds on the injected clock when the current page was opened. */
  private openedAt = 0;
  /** Unsubmitted work on the current page (labels or flags). */
  dirty = false;
  /** Labels the page opened with; corrections are counted against it. */
  private baseline = new Map<number, string | null>();
  /** Baseline before the last markSubmitted, for optimistic rollback. */
  private previousBaseline: Map<number, string | null> | null = null;
  /** Parser-problem notes, cell id -> text. Cells cannot be redrawn in
  the UI, so a note is how a bad bbox gets reported. */
  flags = new Map<number, string>();
  /** Pages of the active document submitted during this session. */
  private submittedPages = new Set<number>();

  constructor(annotator: string, clock: Clock) {
    if (annotator.length === 0) throw new Error("annotator name must not be empty");
    this.annotator = annotator;
    this.clock = clock;
  }

  openPage(view: PageView): void {
    if (this.view !== null && view.docId !== this.view.docId) {
      this.submittedPages.clear();
    }
    this.view = view;
    this.openedAt = this.clock();
    this.dirty = false;
    this.baseline = new Map(view.labels);
    this.previousBaseline = null;
    this.flags = new Map();
  }

  /** Seconds since the page was opened, for the on-screen timer. */
  elapsed(): number {
    if (this.view === null) return 0;
    return this.clock() - this.openedAt;
  }

  /** Paint a label onto the selection. Returns the ids that changed;
  a same-label repaint returns [] and leaves the dirty flag alone. */
  paint(selection: Iterable<number>, label: string): number[] {
    if (this.view === null) throw new Error("no page is open");
    const { view, changed } = paintCells(this.view, selection, label);
    if (changed.length > 0) {
      this.view = view;
      this.dirty = true;
    }
    return changed;
  }

  /** Paint via a 1-9 hotkey. Unmapped digits do nothing. */
  paintKey(selection: Iterable<number>, digit: number): number[] {
    if (this.view === null) throw new Error("no page is open");
    const entry = entryForKey(this.view.palette, digit);
    if (entry === null) return [];
    return this.paint(selection, entry.name);
  }

  flagCell(id: number, note: string): void {
    if (this.view === null) throw new Error("no page is open");
    if (!this.view.labels.has(id)) throw new Error(`no cell with id ${id} on this page`);
    this.flags.set(id, note);
    this.dirty = true;
  }

  /** Submit stays disabled until every cell is labeled. A page with no
  cells is trivially complete, so it can be submitted immediately. */
  canSubmit(): boolean {
    return this.view !== null && fullyLabeled(this.view);
  }

  /** Cells whose label differs from the baseline the page opened with.
  Repainting back to the prediction does not count as a correction. */
  correctionsCount(): number {
    if (this.view === null) return 0;
    let count = 0;
    for (const [id, label] of this.view.labels) {
      if (label !== this.baseline.get(id)) count++;
    }
    return count;
  }

  buildRecord(): AnnotationRecord {
    const view = this.view;
    if (view === null || !this.canSubmit()) {
      throw new Error("cannot submit: page has unlabeled cells");
    }
    const labels: Record<string, string> = {};
    for (const [id, label] of view.labels) {
      labels[String(id)] = label!;
    }
    const correction = view.mode === "correction";
    return {
      format: "annotation-record.v1",
      schema_version: 1,
      doc_id: view.docId,
      page_number: view.pageNumber,
      labels,
      annotator: this.annotator,
      started: this.openedAt,
      submitted: this.clock(),
      source: correction ? "corrected-from-prediction" : "fresh",
      corrections_count: correction ? this.correctionsCount() : null,
    };
  }

  /** Mark the open page as stored server-side and clean. The submitted
  labels become the new discard baseline: navigating away later can only
  throw away work done since this submit. */
  markSubmitted(): void {
    if (this.view === null) throw new Error("no page is open");
    this.submittedPages.add(this.view.pageNumber);
    this.previousBaseline = this.baseline;
    this.baseline = new Map(this.view.labels);
    this.dirty = false;
  }

  /** Undo an optimistic markSubmitted after the post failed. The work
  is still only local, so the page goes back to dirty and corrections
  keep counting against the baseline from before the failed post. */
  rollbackSubmission(pageNumber: number): void {
    this.submittedPages.delete(pageNumber);
    if (this.previousBaseline !== null) {
      this.baseline = this.previousBaseline;
      this.previousBaseline = null;
    }
    this.dirty = true;
  }

  /** Page to open after a submit: the next page of the document not yet
  annotated this session, wrapping past the end; null when none remain. */
  nextUnannotatedPage(): number | null {
    const view = this.view;
    if (view === null) return null;
    for (let step = 1; step <= view.nPages; step++) {
      const page = ((view.pageNumber - 1 + step) % view.nPages) + 1;
      if (!this.submittedPages.has(page)) return page;
    }
    return null;
  }

  /** Gate for leaving the page. Clean pages navigate silently. A dirty
  page asks first; accepting throws away only this page's unsubmitted
  labels and flags, nothing that was already posted. */
  confirmNavigation(acceptDiscard: () => boolean): boolean {
    if (!this.dirty) return true;
    if (!acceptDiscard()) return false;
    if (this.view !== null) {
      const labels = new Map(this.baseline);
      this.view = { ...this.view, labels };
    }
    this.flags = new Map();
    this.dirty = false;
    return true;
  }
}

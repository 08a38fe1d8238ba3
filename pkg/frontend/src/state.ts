// Session state for one browser tab: the loaded assessment, local draft
// scores, pending what-if adjustment, and dirtiness against the last
// stored revision. Pure data plus pure transition functions; rendering
// and requests live elsewhere.

import type {
  AdjustmentPayload,
  AssessmentPayload,
  AssignmentPayload,
} from "./types.js";

export interface SessionState {
  assessmentId: string | null;
  revision: number | null;
  document: AssessmentPayload | null;
  /** factor id -> draft score; a missing key means the factor is unscored */
  draft: ReadonlyMap<string, number>;
  /** factor scores as of the last load or save */
  stored: ReadonlyMap<string, number>;
  pendingAdjustment: AdjustmentPayload | null;
  stakeholderFilter: string | null;
}

export function emptySession(): SessionState {
  return {
    assessmentId: null,
    revision: null,
    document: null,
    draft: new Map(),
    stored: new Map(),
    pendingAdjustment: null,
    stakeholderFilter: null,
  };
}

function assignmentsOf(doc: AssessmentPayload): AssignmentPayload[] {
  return [
    ...(doc.scenario?.assignments ?? []),
    ...(doc.dependencies?.assignments ?? []),
    ...(doc.impact?.technical_assignments ?? []),
    ...(doc.impact?.business_assignments ?? []),
  ];
}

export function loadAssessment(
  session: SessionState,
  doc: AssessmentPayload,
): SessionState {
  const scores = new Map<string, number>();
  for (const a of assignmentsOf(doc)) {
    scores.set(a.factor_id, a.score);
  }
  return {
    ...session,
    assessmentId: doc.id,
    revision: doc.revision,
    document: doc,
    draft: new Map(scores),
    stored: scores,
    pendingAdjustment: null,
  };
}

export function setScore(
  session: SessionState,
  factorId: string,
  score: number,
): SessionState {
  if (!Number.isInteger(score) || score < 0 || score > 9) {
    throw new RangeError(`score for ${factorId} must be an integer 0..9, got ${score}`);
  }
  const draft = new Map(session.draft);
  draft.set(factorId, score);
  return { ...session, draft };
}

export function clearScore(session: SessionState, factorId: string): SessionState {
  const draft = new Map(session.draft);
  draft.delete(factorId);
  return { ...session, draft };
}

export function isDirty(session: SessionState): boolean {
  if (session.draft.size !== session.stored.size) return true;
  for (const [factorId, score] of session.draft) {
    if (session.stored.get(factorId) !== score) return true;
  }
  return false;
}

export function draftAssignments(session: SessionState): AssignmentPayload[] {
  return [...session.draft.entries()].map(([factor_id, score]) => ({
    factor_id,
    score,
  }));
}

export function markSaved(session: SessionState, revision: number): SessionState {
  return { ...session, revision, stored: new Map(session.draft) };
}

/** The loaded document with draft scores folded back into its sections. */
export function mergedDocument(session: SessionState): AssessmentPayload {
  if (!session.document) {
    throw new Error("no assessment loaded");
  }
  const patch = (items: AssignmentPayload[] | undefined): AssignmentPayload[] =>
    (items ?? []).map((a) => {
      const draft = session.draft.get(a.factor_id);
      if (draft === undefined || draft === a.score) return a;
      // score changed: the stored anchor label no longer applies
      return { ...a, score: draft, anchor_label: null };
    });
  const doc = session.document;
  return {
    ...doc,
    revision: session.revision ?? doc.revision,
    scenario: doc.scenario
      ? { ...doc.scenario, assignments: patch(doc.scenario.assignments) }
      : doc.scenario,
    dependencies: doc.dependencies
      ? { ...doc.dependencies, assignments: patch(doc.dependencies.assignments) }
      : doc.dependencies,
    impact: doc.impact
      ? {
          ...doc.impact,
          technical_assignments: patch(doc.impact.technical_assignments),
          business_assignments: patch(doc.impact.business_assignments),
        }
      : doc.impact,
  };
}

/**
 * Latest-wins coalescing for in-flight requests: a response is applied
 * only if no newer request has been issued since, so the badge always
 * reflects the current slider state.
 */
export class LatestWins<T> {
  private sequence = 0;

  run(
    task: () => Promise<T>,
    apply: (result: T) => void,
    onError?: (error: unknown) => void,
  ): Promise<void> {
    const ticket = ++this.sequence;
    return task().then(
      (result) => {
        if (ticket === this.sequence) apply(result);
      },
      (error) => {
        if (ticket === this.sequence && onError) onError(error);
      },
    );
  }
}

/** beforeunload guard: prompt when draft state would be lost. */
export function unloadGuard(isSessionDirty: () => boolean) {
  return (event: { preventDefault(): void; returnValue?: unknown }) => {
    if (isSessionDirty()) {
      event.preventDefault();
      event.returnValue = "";
    }
  };
}

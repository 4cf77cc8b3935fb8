/** Client-side state: a pure reducer over service responses and edits.
 *
 * Every analysis response is tagged with the session revision that was
 * current when the request went out; responses for a stale revision are
 * dropped, so an in-flight analysis can never overwrite the state of an
 * edited judgment set.
 */

import type {
  BoundsReport,
  CheckReport,
  ComparisonKind,
  EditResponse,
  PairReport,
  ReductReport,
  RelationsReport,
  SessionSummary,
} from "./types.js";

export interface StagedAddition {
  first: string;
  kind: ComparisonKind;
  second: string;
}

export interface Selection {
  pair: [string, string];
  reduct: ReductReport | null;
  pairInfo: PairReport | null;
}

export interface AppState {
  session: SessionSummary | null;
  check: CheckReport | null;
  bounds: BoundsReport | null;
  relations: RelationsReport | null;
  selection: Selection | null;
  stagedRemovals: string[];
  stagedAdditions: StagedAddition[];
  error: string | null;
}

export const initialState: AppState = {
  session: null,
  check: null,
  bounds: null,
  relations: null,
  selection: null,
  stagedRemovals: [],
  stagedAdditions: [],
  error: null,
};

export type Action =
  | { type: "session-loaded"; session: SessionSummary }
  | { type: "check-loaded"; revision: number; report: CheckReport }
  | { type: "bounds-loaded"; revision: number; report: BoundsReport }
  | { type: "relations-loaded"; revision: number; report: RelationsReport }
  | { type: "edit-applied"; response: EditResponse }
  | { type: "stage-removal"; ref: string }
  | { type: "unstage-removal"; ref: string }
  | { type: "stage-addition"; addition: StagedAddition }
  | { type: "unstage-addition"; index: number }
  | { type: "discard-staged" }
  | { type: "select-pair"; first: string; second: string }
  | { type: "reduct-loaded"; revision: number; pair: [string, string]; report: ReductReport }
  | { type: "pair-loaded"; revision: number; pair: [string, string]; report: PairReport }
  | { type: "clear-selection" }
  | { type: "error"; message: string }
  | { type: "clear-error" };

function currentRevision(state: AppState): number | null {
  return state.session ? state.session.revision : null;
}

function samePair(a: [string, string], b: [string, string]): boolean {
  return a[0] === b[0] && a[1] === b[1];
}

export function reduce(state: AppState, action: Action): AppState {
  switch (action.type) {
    case "session-loaded": {
      const previous = state.session;
      const next: AppState = { ...state, session: action.session };
      if (previous && previous.revision !== action.session.revision) {
        // Judgments changed elsewhere: derived reports no longer apply.
        next.check = null;
        next.bounds = null;
        next.relations = null;
        next.selection = null;
      }
      return next;
    }
    case "check-loaded":
      if (action.revision !== currentRevision(state)) {
        return state;
      }
      return { ...state, check: action.report };
    case "bounds-loaded":
      if (action.revision !== currentRevision(state)) {
        return state;
      }
      return { ...state, bounds: action.report };
    case "relations-loaded":
      if (action.revision !== currentRevision(state)) {
        return state;
      }
      return { ...state, relations: action.report };
    case "edit-applied": {
      if (!state.session) {
        return state;
      }
      // The edit response carries the fresh consistency report; every other
      // derived view belongs to the old judgment set and is dropped.
      const session: SessionSummary = {
        ...state.session,
        revision: action.response.revision,
        feasible: action.response.report.feasible,
      };
      return {
        ...state,
        session,
        check: action.response.report,
        bounds: null,
        relations: null,
        selection: null,
        stagedRemovals: [],
        stagedAdditions: [],
        error: null,
      };
    }
    case "stage-removal":
      if (state.stagedRemovals.includes(action.ref)) {
        return state;
      }
      return { ...state, stagedRemovals: [...state.stagedRemovals, action.ref] };
    case "unstage-removal":
      return {
        ...state,
        stagedRemovals: state.stagedRemovals.filter((ref) => ref !== action.ref),
      };
    case "stage-addition":
      return {
        ...state,
        stagedAdditions: [...state.stagedAdditions, action.addition],
      };
    case "unstage-addition":
      return {
        ...state,
        stagedAdditions: state.stagedAdditions.filter(
          (_, index) => index !== action.index,
        ),
      };
    case "discard-staged":
      return { ...state, stagedRemovals: [], stagedAdditions: [] };
    case "select-pair":
      return {
        ...state,
        selection: { pair: [action.first, action.second], reduct: null, pairInfo: null },
      };
    case "reduct-loaded":
      if (
        action.revision !== currentRevision(state) ||
        !state.selection ||
        !samePair(state.selection.pair, action.pair)
      ) {
        return state;
      }
      return {
        ...state,
        selection: { ...state.selection, reduct: action.report },
      };
    case "pair-loaded":
      if (
        action.revision !== currentRevision(state) ||
        !state.selection ||
        !samePair(state.selection.pair, action.pair)
      ) {
        return state;
      }
      return {
        ...state,
        selection: { ...state.selection, pairInfo: action.report },
      };
    case "clear-selection":
      return { ...state, selection: null };
    case "error":
      return { ...state, error: action.message };
    case "clear-error":
      return { ...state, error: null };
  }
}

/** Comparisons as they would stand after applying the staged edit. */
export function effectiveComparisons(state: AppState): {
  kept: string[];
  added: StagedAddition[];
} {
  const kept = state.session
    ? state.session.comparisons
        .map((comparison) => comparison.ref)
        .filter((ref) => !state.stagedRemovals.includes(ref))
    : [];
  return { kept, added: state.stagedAdditions };
}

export function hasStagedEdit(state: AppState): boolean {
  return state.stagedRemovals.length > 0 || state.stagedAdditions.length > 0;
}

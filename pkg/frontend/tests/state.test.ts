import { describe, expect, it } from "vitest";

import {
  effectiveComparisons,
  hasStagedEdit,
  initialState,
  reduce,
} from "../src/state.js";
import type { Action, AppState } from "../src/state.js";
import type {
  BoundsReport,
  CheckReport,
  EditResponse,
  PairReport,
  ReductReport,
  RelationsReport,
  SessionSummary,
} from "../src/types.js";
import { fixture } from "./helpers.js";

const session1 = () => fixture<SessionSummary>("session-iter1");
const session2 = () => fixture<SessionSummary>("session-iter2");
const check1 = () => fixture<CheckReport>("check-iter1");
const edit = () => fixture<EditResponse>("edit-to-iter2");
const bounds2 = () => fixture<BoundsReport>("bounds-iter2");
const relations2 = () => fixture<RelationsReport>("relations-iter2");
const reduct = () => fixture<ReductReport>("reduct-a14-a1");

function play(...actions: Action[]): AppState {
  return actions.reduce(reduce, initialState);
}

describe("loading", () => {
  it("stores the session and the matching-revision reports", () => {
    const state = play(
      { type: "session-loaded", session: session1() },
      { type: "check-loaded", revision: 0, report: check1() },
    );
    expect(state.session?.id).toBe("session-iter1");
    expect(state.check?.feasible).toBe(false);
  });

  it("drops analysis responses tagged with a stale revision", () => {
    const state = play(
      { type: "session-loaded", session: session2() }, // revision 1
      { type: "check-loaded", revision: 0, report: check1() },
      { type: "bounds-loaded", revision: 0, report: bounds2() },
      { type: "relations-loaded", revision: 0, report: relations2() },
    );
    expect(state.check).toBeNull();
    expect(state.bounds).toBeNull();
    expect(state.relations).toBeNull();
  });

  it("clears derived reports when the session reloads at a new revision", () => {
    const state = play(
      { type: "session-loaded", session: session1() },
      { type: "check-loaded", revision: 0, report: check1() },
      { type: "session-loaded", session: session2() },
    );
    expect(state.session?.revision).toBe(1);
    expect(state.check).toBeNull();
  });

  it("keeps reports when the session reloads at the same revision", () => {
    const state = play(
      { type: "session-loaded", session: session1() },
      { type: "check-loaded", revision: 0, report: check1() },
      { type: "session-loaded", session: session1() },
    );
    expect(state.check).not.toBeNull();
  });
});

describe("staging edits", () => {
  const base = (): AppState =>
    play(
      { type: "session-loaded", session: session1() },
      { type: "check-loaded", revision: 0, report: check1() },
    );

  it("stages and unstages removals without duplicates", () => {
    let state = base();
    state = reduce(state, { type: "stage-removal", ref: "a8>a14" });
    state = reduce(state, { type: "stage-removal", ref: "a8>a14" });
    state = reduce(state, { type: "stage-removal", ref: "a14>a7" });
    expect(state.stagedRemovals).toEqual(["a8>a14", "a14>a7"]);
    state = reduce(state, { type: "unstage-removal", ref: "a8>a14" });
    expect(state.stagedRemovals).toEqual(["a14>a7"]);
  });

  it("stages additions and previews the resulting judgment set", () => {
    let state = base();
    state = reduce(state, { type: "stage-removal", ref: "a8>a14" });
    state = reduce(state, { type: "stage-removal", ref: "a14>a7" });
    state = reduce(state, {
      type: "stage-addition",
      addition: { first: "a8", kind: "strict", second: "a7" },
    });
    expect(hasStagedEdit(state)).toBe(true);
    const { kept, added } = effectiveComparisons(state);
    expect(kept).toEqual(["a6~a9", "a9>a8"]);
    expect(added).toEqual([{ first: "a8", kind: "strict", second: "a7" }]);
  });

  it("discards all staged work at once", () => {
    let state = base();
    state = reduce(state, { type: "stage-removal", ref: "a8>a14" });
    state = reduce(state, {
      type: "stage-addition",
      addition: { first: "a8", kind: "strict", second: "a7" },
    });
    state = reduce(state, { type: "discard-staged" });
    expect(hasStagedEdit(state)).toBe(false);
  });

  it("drops a staged addition by position", () => {
    let state = base();
    state = reduce(state, {
      type: "stage-addition",
      addition: { first: "a1", kind: "strict", second: "a2" },
    });
    state = reduce(state, {
      type: "stage-addition",
      addition: { first: "a3", kind: "indifferent", second: "a4" },
    });
    state = reduce(state, { type: "unstage-addition", index: 0 });
    expect(state.stagedAdditions).toEqual([
      { first: "a3", kind: "indifferent", second: "a4" },
    ]);
  });
});

describe("applying an edit", () => {
  it("bumps the revision, installs the fresh report, clears stale views", () => {
    let state = play(
      { type: "session-loaded", session: session2() },
      { type: "check-loaded", revision: 1, report: edit().report },
      { type: "bounds-loaded", revision: 1, report: bounds2() },
      { type: "relations-loaded", revision: 1, report: relations2() },
      { type: "select-pair", first: "a14", second: "a1" },
    );
    // Pretend the session was still at revision 1 and the edit moves it on.
    const response: EditResponse = { ...edit(), revision: 7 };
    state = reduce(state, { type: "stage-removal", ref: "a6~a9" });
    state = reduce(state, { type: "edit-applied", response });
    expect(state.session?.revision).toBe(7);
    expect(state.check?.feasible).toBe(true);
    expect(state.bounds).toBeNull();
    expect(state.relations).toBeNull();
    expect(state.selection).toBeNull();
    expect(state.stagedRemovals).toEqual([]);
    expect(state.stagedAdditions).toEqual([]);
  });
});

describe("pair selection", () => {
  const loaded = (): AppState =>
    play(
      { type: "session-loaded", session: session2() },
      { type: "relations-loaded", revision: 1, report: relations2() },
      { type: "select-pair", first: "a14", second: "a1" },
    );

  it("attaches a reduct report for the selected pair", () => {
    const state = reduce(loaded(), {
      type: "reduct-loaded",
      revision: 1,
      pair: ["a14", "a1"],
      report: reduct(),
    });
    expect(state.selection?.reduct?.reducts).toEqual([["a6~a9"]]);
  });

  it("ignores reduct responses for a different pair or revision", () => {
    const other = reduce(loaded(), {
      type: "reduct-loaded",
      revision: 1,
      pair: ["a14", "a2"],
      report: reduct(),
    });
    expect(other.selection?.reduct).toBeNull();
    const stale = reduce(loaded(), {
      type: "reduct-loaded",
      revision: 0,
      pair: ["a14", "a1"],
      report: reduct(),
    });
    expect(stale.selection?.reduct).toBeNull();
  });

  it("attaches plain pair verdicts the same way", () => {
    const info: PairReport = {
      kind: "relations",
      pair: ["a1", "a14"],
      necessary: false,
      possible: false,
    };
    let state = play(
      { type: "session-loaded", session: session2() },
      { type: "select-pair", first: "a1", second: "a14" },
    );
    state = reduce(state, {
      type: "pair-loaded",
      revision: 1,
      pair: ["a1", "a14"],
      report: info,
    });
    expect(state.selection?.pairInfo?.possible).toBe(false);
  });

  it("clears the selection", () => {
    const state = reduce(loaded(), { type: "clear-selection" });
    expect(state.selection).toBeNull();
  });
});

describe("errors", () => {
  it("records and clears error messages", () => {
    let state = reduce(initialState, { type: "error", message: "boom" });
    expect(state.error).toBe("boom");
    state = reduce(state, { type: "clear-error" });
    expect(state.error).toBeNull();
  });
});

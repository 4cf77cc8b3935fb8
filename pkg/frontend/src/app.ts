/** Mounts the workbench: owns the state, talks to the service, re-renders.
 *
 * All service work is serialized on one promise chain so user actions keep
 * their order and `idle()` lets callers (and tests) wait for quiescence.
 */

import { ApiClient, ApiError } from "./api.js";
import { initialState, reduce } from "./state.js";
import type { Action, AppState } from "./state.js";
import { renderApp } from "./render.js";
import type { ComparisonKind } from "./types.js";

export interface AppController {
  getState(): AppState;
  idle(): Promise<void>;
}

export function mountApp(
  root: HTMLElement,
  api: ApiClient,
  problem: unknown,
): AppController {
  let state = initialState;
  let chain: Promise<void> = Promise.resolve();

  const dispatch = (action: Action): void => {
    state = reduce(state, action);
    root.innerHTML = renderApp(state);
  };

  const enqueue = (task: () => Promise<void>): void => {
    chain = chain.then(task).catch((err: unknown) => {
      const message = err instanceof Error ? err.message : String(err);
      dispatch({ type: "error", message });
    });
  };

  const sessionId = (): string => {
    if (!state.session) {
      throw new Error("no session");
    }
    return state.session.id;
  };

  async function refreshDerived(): Promise<void> {
    if (!state.session || !state.check || !state.check.feasible) {
      return;
    }
    const id = sessionId();
    const revision = state.session.revision;
    const bounds = await api.bounds(id);
    dispatch({ type: "bounds-loaded", revision, report: bounds.body });
    const relations = await api.relations(id);
    dispatch({ type: "relations-loaded", revision, report: relations.body });
  }

  async function loadProblem(): Promise<void> {
    const session = await api.createSession(problem);
    dispatch({ type: "session-loaded", session });
    const revision = session.revision;
    const check = await api.check(session.id, true);
    dispatch({ type: "check-loaded", revision, report: check.body });
    await refreshDerived();
  }

  async function applyEdit(): Promise<void> {
    const id = sessionId();
    const edit = {
      remove: state.stagedRemovals,
      add: state.stagedAdditions.map((a) => ({
        first: a.first,
        kind: a.kind,
        second: a.second,
      })),
    };
    const response = await api.editComparisons(id, edit);
    dispatch({ type: "edit-applied", response });
    const session = await api.getSession(id);
    dispatch({ type: "session-loaded", session });
    await refreshDerived();
  }

  async function explainPair(first: string, second: string): Promise<void> {
    const id = sessionId();
    if (!state.session) {
      return;
    }
    const revision = state.session.revision;
    const pair: [string, string] = [first, second];
    dispatch({ type: "select-pair", first, second });
    try {
      const reduct = await api.reduct(id, first, second);
      dispatch({ type: "reduct-loaded", revision, pair, report: reduct.body });
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        // No robust preference to explain; fall back to the plain verdicts.
        const info = await api.pair(id, first, second);
        dispatch({ type: "pair-loaded", revision, pair, report: info.body });
      } else {
        throw err;
      }
    }
  }

  const selectValue = (selector: string): string => {
    const element = root.querySelector(selector) as HTMLSelectElement | null;
    return element ? element.value : "";
  };

  root.addEventListener("click", (event) => {
    const target = event.target as Element | null;
    const trigger = target?.closest("[data-action]");
    if (!trigger || !root.contains(trigger)) {
      return;
    }
    const action = trigger.getAttribute("data-action");
    switch (action) {
      case "stage-removal":
        dispatch({ type: "stage-removal", ref: trigger.getAttribute("data-ref") ?? "" });
        break;
      case "unstage-removal":
        dispatch({ type: "unstage-removal", ref: trigger.getAttribute("data-ref") ?? "" });
        break;
      case "stage-addition": {
        const first = selectValue("#add-first");
        const second = selectValue("#add-second");
        const kind = (selectValue("#add-kind") || "strict") as ComparisonKind;
        if (first && second && first !== second) {
          dispatch({ type: "stage-addition", addition: { first, kind, second } });
        }
        break;
      }
      case "unstage-addition":
        dispatch({
          type: "unstage-addition",
          index: Number(trigger.getAttribute("data-index") ?? "-1"),
        });
        break;
      case "discard-staged":
        dispatch({ type: "discard-staged" });
        break;
      case "apply-edit":
        enqueue(applyEdit);
        break;
      case "select-pair": {
        const first = trigger.getAttribute("data-first") ?? "";
        const second = trigger.getAttribute("data-second") ?? "";
        if (first && second) {
          enqueue(() => explainPair(first, second));
        }
        break;
      }
      case "clear-selection":
        dispatch({ type: "clear-selection" });
        break;
      default:
        break;
    }
  });

  dispatch({ type: "clear-error" });
  enqueue(loadProblem);

  return {
    getState: () => state,
    idle: () => chain,
  };
}

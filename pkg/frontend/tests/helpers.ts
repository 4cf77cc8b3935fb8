/** Test support: fixture loading and a stateful mock of the ranking service.
 *
 * The fixtures are verbatim responses captured from the real HTTP service
 * for the sales-manager case study, so the mock replays true payloads; it
 * tracks just enough state (the session revision and the analysis counter)
 * to route each request to the right capture.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";
import type {
  CheckReport,
  EditResponse,
  RelationsReport,
  SessionSummary,
} from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T = unknown>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf8")) as T;
}

export interface RecordedCall {
  method: string;
  url: string;
  body: unknown;
}

export interface ServiceMock {
  fetch: FetchLike;
  calls: RecordedCall[];
}

const SESSION = "session-iter1";
const ITER2_EDIT = {
  remove: new Set(["a8>a14", "a14>a7"]),
  add: { first: "a8", kind: "strict", second: "a7" },
};

interface Routed {
  status: number;
  body: unknown;
  headers?: Record<string, string>;
}

function sameEdit(body: {
  remove?: unknown;
  add?: unknown;
}): boolean {
  const remove = Array.isArray(body.remove) ? (body.remove as string[]) : [];
  const add = Array.isArray(body.add)
    ? (body.add as { first: string; kind: string; second: string }[])
    : [];
  if (remove.length !== ITER2_EDIT.remove.size || add.length !== 1) {
    return false;
  }
  if (!remove.every((ref) => ITER2_EDIT.remove.has(ref))) {
    return false;
  }
  const only = add[0]!;
  return (
    only.first === ITER2_EDIT.add.first &&
    only.kind === ITER2_EDIT.add.kind &&
    only.second === ITER2_EDIT.add.second
  );
}

function pairFromMatrix(first: string, second: string): Routed {
  const relations = fixture<RelationsReport>("relations-iter2");
  const i = relations.alternatives.indexOf(first);
  const j = relations.alternatives.indexOf(second);
  if (i < 0 || j < 0) {
    const ghost = i < 0 ? first : second;
    return { status: 422, body: { detail: `unknown alternative '${ghost}'` } };
  }
  return {
    status: 200,
    body: {
      kind: "relations",
      pair: [first, second],
      necessary: relations.necessary[i]![j] === "T",
      possible: relations.possible[i]![j] === "T",
    },
  };
}

/** A fetch mock that behaves like the live service for the case study. */
export function fixtureService(): ServiceMock {
  let revision = 0;
  let analyses = 0;
  const calls: RecordedCall[] = [];

  function analysis(payload: { kind?: unknown; params?: unknown }): Routed {
    const kind = typeof payload.kind === "string" ? payload.kind : "";
    const params = (payload.params ?? {}) as { pair?: [string, string] };
    const feasible = revision >= 1;
    switch (kind) {
      case "check": {
        if (feasible) {
          return {
            status: 200,
            body: fixture<EditResponse>("edit-to-iter2").report,
          };
        }
        return { status: 200, body: fixture<CheckReport>("check-iter1") };
      }
      case "bounds":
        if (!feasible) {
          return {
            status: 422,
            body: { detail: "weight ranges are undefined for a contradictory judgment set" },
          };
        }
        return { status: 200, body: fixture("bounds-iter2") };
      case "relations":
        if (!feasible) {
          return {
            status: 422,
            body: { detail: "the judgment set is contradictory" },
          };
        }
        if (params.pair) {
          const [first, second] = params.pair;
          if (first === "a14" && second === "a1") {
            return { status: 200, body: fixture("pair-a14-a1") };
          }
          return pairFromMatrix(first, second);
        }
        return { status: 200, body: fixture("relations-iter2") };
      case "reduct": {
        if (!feasible) {
          return {
            status: 422,
            body: { detail: "the judgment set is contradictory" },
          };
        }
        const [first, second] = params.pair ?? ["", ""];
        if (first === "a14" && second === "a1") {
          return { status: 200, body: fixture("reduct-a14-a1") };
        }
        return {
          status: 422,
          body: {
            detail: `no necessary preference of ${first} over ${second} to explain`,
          },
        };
      }
      default:
        return { status: 400, body: { detail: `unknown analysis kind ${kind!}` } };
    }
  }

  function route(method: string, url: string, body: unknown): Routed {
    if (method === "POST" && url === "/sessions") {
      return { status: 201, body: fixture<SessionSummary>("session-iter1") };
    }
    if (method === "GET" && url === `/sessions/${SESSION}`) {
      const name = revision >= 1 ? "session-iter2" : "session-iter1";
      const summary = fixture<SessionSummary>(name);
      return { status: 200, body: { ...summary, analyses } };
    }
    if (method === "POST" && url === `/sessions/${SESSION}/comparisons`) {
      const edit = (body ?? {}) as { remove?: unknown; add?: unknown };
      if (sameEdit(edit)) {
        revision = 1;
        return { status: 200, body: fixture<EditResponse>("edit-to-iter2") };
      }
      return {
        status: 422,
        body: { detail: "fixture service only supports the iteration-2 edit" },
      };
    }
    if (method === "POST" && url === `/sessions/${SESSION}/analyses`) {
      const routed = analysis((body ?? {}) as { kind?: unknown; params?: unknown });
      if (routed.status === 200) {
        analyses += 1;
        return {
          ...routed,
          headers: { "X-Analysis-Index": String(analyses) },
        };
      }
      return routed;
    }
    if (url.startsWith("/sessions/")) {
      return { status: 404, body: { detail: `no session '${url.slice(10)}'` } };
    }
    return { status: 404, body: { detail: "not found" } };
  }

  const fetchImpl: FetchLike = (input, init) => {
    const method = init?.method ?? "GET";
    const parsed: unknown = init?.body ? JSON.parse(init.body) : undefined;
    calls.push({ method, url: input, body: parsed });
    const routed = route(method, input, parsed);
    const raw = JSON.stringify(routed.body);
    return Promise.resolve({
      status: routed.status,
      headers: {
        get: (name: string) => routed.headers?.[name] ?? null,
      },
      json: () => Promise.resolve(JSON.parse(raw) as unknown),
    });
  };

  return { fetch: fetchImpl, calls };
}

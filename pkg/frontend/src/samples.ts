/** Built-in sample problems: the sales-manager case study, both judgment
 * iterations. These are posted verbatim to the service as session documents.
 */

const PERFORMANCES: Record<string, Record<string, string>> = {
  a1: { g1: "4", g2: "16", g3: "63" },
  a2: { g1: "28", g2: "18", g3: "28" },
  a3: { g1: "26", g2: "40", g3: "44" },
  a4: { g1: "2", g2: "2", g3: "68" },
  a5: { g1: "18", g2: "17", g3: "14" },
  a6: { g1: "35", g2: "62", g3: "25" },
  a7: { g1: "7", g2: "55", g3: "12" },
  a8: { g1: "25", g2: "30", g3: "12" },
  a9: { g1: "9", g2: "62", g3: "88" },
  a10: { g1: "0", g2: "24", g3: "73" },
  a11: { g1: "6", g2: "15", g3: "100" },
  a12: { g1: "16", g2: "9", g3: "0" },
  a13: { g1: "26", g2: "17", g3: "17" },
  a14: { g1: "62", g2: "43", g3: "0" },
  a15: { g1: "1", g2: "32", g3: "64" },
};

function salesManager(
  comparisons: { first: string; kind: string; second: string }[],
): unknown {
  return {
    epsilon: "0.01",
    marginals: "linear",
    criteria: [{ name: "g1" }, { name: "g2" }, { name: "g3" }],
    alternatives: Object.entries(PERFORMANCES).map(([name, performances]) => ({
      name,
      performances,
    })),
    comparisons,
  };
}

export interface Sample {
  id: string;
  title: string;
  document: unknown;
}

export const SAMPLES: Sample[] = [
  {
    id: "sales-manager-iter1",
    title: "Sales manager — iteration 1 (contradictory)",
    document: salesManager([
      { first: "a6", kind: "indifferent", second: "a9" },
      { first: "a9", kind: "strict", second: "a8" },
      { first: "a8", kind: "strict", second: "a14" },
      { first: "a14", kind: "strict", second: "a7" },
    ]),
  },
  {
    id: "sales-manager-iter2",
    title: "Sales manager — iteration 2 (revised)",
    document: salesManager([
      { first: "a6", kind: "indifferent", second: "a9" },
      { first: "a9", kind: "strict", second: "a8" },
      { first: "a8", kind: "strict", second: "a7" },
    ]),
  },
];

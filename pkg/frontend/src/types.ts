/** Payload shapes of the ranking service's JSON API.
 *
 * Numbers arrive as exact strings (decimal or `p/q` rationals) next to their
 * two-decimal display form; the client never does arithmetic on them.
 */

export type ComparisonKind = "strict" | "indifferent";

export interface Comparison {
  first: string;
  kind: ComparisonKind;
  second: string;
  ref: string;
}

export interface SessionSummary {
  id: string;
  revision: number;
  epsilon: string;
  criteria: string[];
  alternatives: string[];
  comparisons: Comparison[];
  feasible: boolean;
  analyses: number;
}

export interface ConstraintRow {
  id: number;
  label: [number, number, number];
  origin: string;
  comparison: string | null;
  text: string;
}

export interface SystemReport {
  variables: string[];
  epsilon: string;
  mode: string;
  policy: string;
  feasible: boolean;
  truncated: boolean;
  originals: ConstraintRow[];
  derived: ConstraintRow[];
  contradictions: ContradictionEntry[];
}

export interface ContradictionEntry {
  lower: number;
  upper: number;
  roots: number[];
  comparisons: string[];
}

export interface CheckReport {
  kind: "check";
  feasible: boolean;
  system: SystemReport;
  minimal_comparison_subsets: string[][];
}

export interface WeightRange {
  exact: [string, string];
  display: [string, string];
}

export interface BoundsReport {
  kind: "bounds";
  feasible: boolean;
  ranges: Record<string, WeightRange>;
}

/** Matrix rows are "TFT…" strings, one character per column. */
export interface RelationsReport {
  kind: "relations";
  alternatives: string[];
  necessary: string[];
  possible: string[];
  hasse_edges: [string, string][];
}

export interface PairReport {
  kind: "relations";
  pair: [string, string];
  necessary: boolean | null;
  possible: boolean | null;
}

export interface ReductReport {
  kind: "reduct";
  pair: [string, string];
  relation: string;
  holds: boolean;
  hypothesis_id: number;
  contradictions: number;
  candidate_row_subsets: number[][];
  candidate_comparison_subsets: string[][];
  reducts: string[][];
}

export interface EditResponse {
  id: string;
  revision: number;
  report: CheckReport;
}

export interface ComparisonEdit {
  remove: string[];
  add: { first: string; kind: ComparisonKind; second: string }[];
}

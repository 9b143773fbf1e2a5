/**
 * Wire types for the gateway API.
 *
 * Every numeric quantity arrives as an ExactNumber: the exact ratio plus a
 * two-decimal display string. The UI renders `display` verbatim and offers
 * `exact` on hover; it never computes a derived figure itself.
 */

export interface ExactNumber {
  exact: string;
  display: string;
}

/** One broken consistency triple: expected vs stated card count. */
export interface Violation {
  low: string;
  mid: string;
  high: string;
  expected: number;
  stated: number;
}

export interface ErrorDetail {
  type: string;
  message: string;
  violations: Violation[];
  problems: string[];
}

export interface CriterionView {
  id: string;
  code: string;
  name: string;
  direction: "minimize" | "maximize";
  kind: "valued" | "acceptation-rejection";
  point_of_view: string;
  significance_axis: string;
  levels: string[];
  continuous?: boolean;
  anchors?: string[];
  domain_min?: string;
}

export interface FrameworkView {
  criteria: CriterionView[];
  points_of_view: { id: string; name: string }[];
  significance_axes: { id: string; name: string; point_of_view: string }[];
}

export interface TableView {
  adjacent_cards: number[];
  direct_cards?: { low: string; high: string; cards: number }[];
}

export interface ReferenceView {
  low_level: string;
  high_level: string;
  low_value: string;
  high_value: string;
}

export interface ClosenessView {
  reference: string;
  cards_to_reference: Record<string, number>;
  direct_cards?: { worse: string; better: string; cards: number }[];
}

export interface ZSourceView {
  kind: "indifference" | "explicit";
  criterion?: string;
  performance?: string;
  value?: string;
}

export interface PolicyView {
  c1_rules: Record<string, string>;
  lambda_23: string;
  lambda_12: string | null;
  g3_high_override: boolean;
}

export interface SessionDocument {
  format: string;
  version: number;
  framework: FrameworkView;
  tables: Record<string, TableView>;
  references: Record<string, ReferenceView>;
  swing_ranking: string[][] | null;
  closeness: ClosenessView | null;
  z_source: ZSourceView | null;
  policy: PolicyView;
  provenance: Record<string, string>;
}

export interface PointView {
  key: string;
  value: ExactNumber;
}

export interface ValueFunctionView {
  criterion: string;
  kind: string;
  direction: string;
  alpha: ExactNumber;
  points: PointView[];
}

export interface SwingView {
  id: string;
  criterion: string;
  profile: Record<string, ExactNumber>;
}

export interface WeightsView {
  z: ExactNumber;
  alpha_w: ExactNumber;
  raw: Record<string, ExactNumber>;
  normalized: Record<string, ExactNumber>;
}

export interface DerivedView {
  complete: boolean;
  problems: string[];
  value_functions: Record<string, ValueFunctionView>;
  swings: SwingView[];
  z: ExactNumber | null;
  weights: WeightsView | null;
}

export interface ConsistencyReportView {
  ok: boolean;
  violations: Violation[];
}

export interface ValidationView {
  ok: boolean;
  complete: boolean;
  tables: Record<string, ConsistencyReportView>;
  closeness: ConsistencyReportView | null;
  problems: string[];
}

export interface SessionEnvelope {
  id: string;
  revision: number;
  document: SessionDocument;
  derived: DerivedView;
  validation: ValidationView;
}

export interface MappingWarningView {
  ship: string;
  criterion: string;
  token: string;
  assigned_level: string;
}

export interface FleetView {
  mode: string;
  ships: string[];
  lenient: boolean;
  warnings: MappingWarningView[];
  notes: string[];
}

export interface FleetResponse {
  id: string;
  revision: number;
  fleet: FleetView;
}

export interface ShipResultView {
  ship: string;
  category: string;
  total: ExactNumber;
  contributions: Record<string, ExactNumber>;
  performance: Record<string, string>;
  trace: string[];
}

export interface ExportsView {
  display_csv: string;
  exact_json: string;
}

export interface ClassificationResponse {
  counts: Record<string, number>;
  results: ShipResultView[];
  warnings: MappingWarningView[];
  overrides: Record<string, string>;
  exports: ExportsView;
  revision: number | null;
}

export interface SweepCellView {
  z: string;
  lambda_23: string;
  counts: Record<string, number>;
  categories: Record<string, string>;
}

export interface SweepDiffCellView {
  z: string;
  lambda_23: string;
  flags: Record<string, boolean>;
  count_deltas: Record<string, number>;
}

export interface SweepResponse {
  lambda_values: string[];
  z_values: string[];
  totals: Record<string, Record<string, ExactNumber>>;
  cells: SweepCellView[];
  diff: SweepDiffCellView[] | null;
  exports: ExportsView;
  revision: number | null;
}

export interface SweepRequestBody {
  lambda_values?: string[];
  z_values?: string[];
  baseline?: "bundled" | Record<string, string>;
}

export interface FleetRequestBody {
  revision: number;
  csv?: string;
  source?: "bundled-raw" | "bundled-performance";
  lists?: "bundled" | Record<string, unknown>;
  lenient?: boolean;
}

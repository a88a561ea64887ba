// Wire types mirroring the abdecide service JSON documented in the
// backend README. The UI never derives these numbers itself.

export type Decision = "launch" | "rollback" | "skipped";

export interface GridCell {
  lambda1: number;
  lambda2: number;
  risk_launch: number | null;
  decision: Decision;
}

export interface PosteriorSummary {
  experiment_id?: string;
  k: string;
  credible_level: number;
  metrics: string[];
  mean: number[];
  cov: number[][];
  intervals: [number, number][];
  significant: boolean[];
}

export interface DecisionSpaceResponse {
  posterior: PosteriorSummary;
  axis1: string;
  axis2: string;
  c0: number;
  c1: number;
  grid: GridCell[];
}

export interface JointSuccess {
  probability: number;
  standard_error: number;
  samples: number;
  seed: number;
  directions: string[];
  thresholds: number[];
}

export interface DecisionReport {
  experiment_id?: string;
  loss_form: string;
  seed: number;
  tradeoffs?: number[];
  weights: number[];
  risk_launch: number;
  risk_rollback: number;
  recommendation: "launch" | "rollback";
  joint_success?: JointSuccess;
  posterior: PosteriorSummary;
}

export interface ExperimentInfo {
  id: string;
  timestamp: number;
  metrics: string[];
  treatment_label: string | null;
  provenance: string;
}

export interface AxisRequest {
  metric: string;
  values: number[];
}

export interface DecisionSpaceRequest {
  experiment_id: string;
  k: string;
  axis1: AxisRequest;
  axis2: AxisRequest;
  fixed: Record<string, number>;
  c0: number;
  c1: number;
}

export interface DecideRequest {
  experiment_id: string;
  k: string;
  tradeoffs: number[];
  c0: number;
  c1: number;
  seed: number;
}

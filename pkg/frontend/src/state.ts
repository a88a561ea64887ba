// Explorer state and its URL-query round trip. The entire view is a pure
// function of this state, and the state is a pure function of the URL, so
// copying the address bar shares the exact grid request.

import type { DecideRequest, DecisionSpaceRequest } from "./types.js";

export interface AxisState {
  metric: string;
  min: number;
  max: number;
  steps: number;
}

export interface ExplorerState {
  experimentId: string;
  k: string; // "0" | "1" | "inf" | numeric string
  axis1: AxisState;
  axis2: AxisState;
  fixed: Record<string, number>;
  c0: number;
  c1: number;
  // trade-off pair for the decision report panel; defaults to range midpoints
  selected?: [number, number];
  seed: number;
}

export const DEFAULT_STEPS = 25;

export function defaultState(experimentId: string, metrics: string[]): ExplorerState {
  const fixed: Record<string, number> = {};
  for (const m of metrics.slice(2)) fixed[m] = 0;
  return {
    experimentId,
    k: "1",
    axis1: { metric: metrics[0], min: 1, max: 100, steps: DEFAULT_STEPS },
    axis2: { metric: metrics[1], min: -100, max: -1, steps: DEFAULT_STEPS },
    fixed,
    c0: 0,
    c1: 0,
    seed: 0,
  };
}

export function axisValues(axis: AxisState): number[] {
  if (!(axis.steps >= 1)) throw new Error("axis needs at least one step");
  if (axis.steps === 1) return [axis.min];
  if (!(axis.max > axis.min)) throw new Error(`degenerate range for ${axis.metric}`);
  const values: number[] = [];
  const span = axis.max - axis.min;
  for (let i = 0; i < axis.steps; i++) {
    values.push(axis.min + (span * i) / (axis.steps - 1));
  }
  return values;
}

function packAxis(a: AxisState): string {
  return [encodeURIComponent(a.metric), String(a.min), String(a.max), String(a.steps)].join(":");
}

function unpackAxis(raw: string): AxisState {
  const parts = raw.split(":");
  if (parts.length !== 4) throw new Error(`bad axis parameter: ${raw}`);
  const [metric, min, max, steps] = parts;
  return {
    metric: decodeURIComponent(metric),
    min: Number(min),
    max: Number(max),
    steps: Number(steps),
  };
}

export function stateToQuery(state: ExplorerState): string {
  const q = new URLSearchParams();
  q.set("exp", state.experimentId);
  q.set("k", state.k);
  q.set("a1", packAxis(state.axis1));
  q.set("a2", packAxis(state.axis2));
  const fixedNames = Object.keys(state.fixed).sort();
  if (fixedNames.length > 0) {
    q.set(
      "fx",
      fixedNames.map((n) => `${encodeURIComponent(n)}:${String(state.fixed[n])}`).join(","),
    );
  }
  q.set("c0", String(state.c0));
  q.set("c1", String(state.c1));
  if (state.selected) q.set("sel", `${String(state.selected[0])}:${String(state.selected[1])}`);
  q.set("seed", String(state.seed));
  return q.toString();
}

export function stateFromQuery(query: string): ExplorerState {
  const q = new URLSearchParams(query);
  const need = (name: string): string => {
    const v = q.get(name);
    if (v === null) throw new Error(`missing query parameter ${name}`);
    return v;
  };
  const fixed: Record<string, number> = {};
  const fx = q.get("fx");
  if (fx) {
    for (const pair of fx.split(",")) {
      const [name, value] = pair.split(":");
      fixed[decodeURIComponent(name)] = Number(value);
    }
  }
  const sel = q.get("sel");
  const state: ExplorerState = {
    experimentId: need("exp"),
    k: need("k"),
    axis1: unpackAxis(need("a1")),
    axis2: unpackAxis(need("a2")),
    fixed,
    c0: Number(need("c0")),
    c1: Number(need("c1")),
    seed: Number(q.get("seed") ?? "0"),
  };
  if (sel) {
    const [s1, s2] = sel.split(":");
    state.selected = [Number(s1), Number(s2)];
  }
  return state;
}

export function gridRequest(state: ExplorerState): DecisionSpaceRequest {
  return {
    experiment_id: state.experimentId,
    k: state.k,
    axis1: { metric: state.axis1.metric, values: axisValues(state.axis1) },
    axis2: { metric: state.axis2.metric, values: axisValues(state.axis2) },
    fixed: { ...state.fixed },
    c0: state.c0,
    c1: state.c1,
  };
}

export function selectedTradeoffs(state: ExplorerState, metrics: string[]): number[] {
  const [v1, v2] = state.selected ?? [
    (state.axis1.min + state.axis1.max) / 2,
    (state.axis2.min + state.axis2.max) / 2,
  ];
  return metrics.map((m) => {
    if (m === state.axis1.metric) return v1;
    if (m === state.axis2.metric) return v2;
    return state.fixed[m] ?? 0;
  });
}

export function decideRequest(state: ExplorerState, metrics: string[]): DecideRequest {
  return {
    experiment_id: state.experimentId,
    k: state.k,
    tradeoffs: selectedTradeoffs(state, metrics),
    c0: state.c0,
    c1: state.c1,
    seed: state.seed,
  };
}

// Explorer wiring: controls mutate the state, the state serializes to the
// URL, and a debounced querier refreshes the heatmap and report panel
// atomically from the service responses.

import { ApiClient, DebouncedQuerier } from "./api.js";
import { HeatmapView, buildHeatmapModel } from "./heatmap.js";
import { reportHtml } from "./report.js";
import {
  ExplorerState,
  decideRequest,
  defaultState,
  gridRequest,
  stateFromQuery,
  stateToQuery,
} from "./state.js";
import type { ExperimentInfo } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export class ExplorerApp {
  private state!: ExplorerState;
  private experiments: ExperimentInfo[] = [];
  private readonly client: ApiClient;
  private readonly querier: DebouncedQuerier;
  private heatmap!: HeatmapView;

  constructor(baseUrl: string) {
    this.client = new ApiClient(baseUrl);
    this.querier = new DebouncedQuerier(
      this.client,
      ({ grid, report }) => {
        this.heatmap.render(buildHeatmapModel(grid));
        el("report").innerHTML = reportHtml(report, this.tradeoffsNow());
        el("error").textContent = "";
      },
      (err) => {
        el("error").textContent = `service error: ${String(err)} (grid may be stale)`;
      },
    );
  }

  private metricsNow(): string[] {
    const exp = this.experiments.find((e) => e.id === this.state.experimentId);
    return exp ? exp.metrics : [this.state.axis1.metric, this.state.axis2.metric];
  }

  private tradeoffsNow(): number[] {
    return decideRequest(this.state, this.metricsNow()).tradeoffs;
  }

  async start(): Promise<void> {
    this.experiments = await this.client.listExperiments();
    if (this.experiments.length === 0) {
      el("error").textContent = "registry is empty: ingest experiments first";
      return;
    }
    const query = window.location.search.replace(/^\?/, "");
    try {
      this.state = query
        ? stateFromQuery(query)
        : defaultState(this.experiments[0].id, this.experiments[0].metrics);
    } catch {
      this.state = defaultState(this.experiments[0].id, this.experiments[0].metrics);
    }
    this.heatmap = new HeatmapView(
      el<HTMLCanvasElement>("heatmap"),
      el("tooltip"),
      (l1, l2) => this.update((s) => ({ ...s, selected: [l1, l2] })),
    );
    this.buildControls();
    this.syncControls();
    await this.querier.fire(
      gridRequest(this.state),
      decideRequest(this.state, this.metricsNow()),
    );
  }

  private buildControls(): void {
    const select = el<HTMLSelectElement>("experiment");
    select.innerHTML = this.experiments
      .map((e) => `<option value="${e.id}">${e.id}</option>`)
      .join("");
    select.addEventListener("change", () => {
      const exp = this.experiments.find((e) => e.id === select.value)!;
      this.update(() => defaultState(exp.id, exp.metrics));
    });
    el<HTMLSelectElement>("k").addEventListener("change", (ev) => {
      this.update((s) => ({ ...s, k: (ev.target as HTMLSelectElement).value }));
    });
    for (const [id, apply] of [
      ["c0", (s: ExplorerState, v: number) => ({ ...s, c0: v })],
      ["c1", (s: ExplorerState, v: number) => ({ ...s, c1: v })],
      ["a1min", (s: ExplorerState, v: number) => ({ ...s, axis1: { ...s.axis1, min: v } })],
      ["a1max", (s: ExplorerState, v: number) => ({ ...s, axis1: { ...s.axis1, max: v } })],
      ["a2min", (s: ExplorerState, v: number) => ({ ...s, axis2: { ...s.axis2, min: v } })],
      ["a2max", (s: ExplorerState, v: number) => ({ ...s, axis2: { ...s.axis2, max: v } })],
    ] as const) {
      el<HTMLInputElement>(id).addEventListener("input", (ev) => {
        const v = Number((ev.target as HTMLInputElement).value);
        if (Number.isFinite(v)) this.update((s) => apply(s, v));
      });
    }
  }

  private syncControls(): void {
    el<HTMLSelectElement>("experiment").value = this.state.experimentId;
    el<HTMLSelectElement>("k").value = this.state.k;
    el<HTMLInputElement>("c0").value = String(this.state.c0);
    el<HTMLInputElement>("c1").value = String(this.state.c1);
    el<HTMLInputElement>("a1min").value = String(this.state.axis1.min);
    el<HTMLInputElement>("a1max").value = String(this.state.axis1.max);
    el<HTMLInputElement>("a2min").value = String(this.state.axis2.min);
    el<HTMLInputElement>("a2max").value = String(this.state.axis2.max);
    el("a1label").textContent = this.state.axis1.metric;
    el("a2label").textContent = this.state.axis2.metric;
  }

  private update(change: (s: ExplorerState) => ExplorerState): void {
    this.state = change(this.state);
    this.syncControls();
    const query = new URLSearchParams(stateToQuery(this.state));
    const api = new URLSearchParams(window.location.search).get("api");
    if (api) query.set("api", api);
    window.history.replaceState(null, "", `?${query.toString()}`);
    this.querier.request(
      gridRequest(this.state),
      decideRequest(this.state, this.metricsNow()),
    );
  }
}

export function boot(): void {
  const base = new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8321";
  const app = new ExplorerApp(base);
  void app.start();
}

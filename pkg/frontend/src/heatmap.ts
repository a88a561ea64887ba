// Decision-space heatmap: a pure view model derived one-for-one from the
// service grid, plus a thin canvas painter. Classification comes verbatim
// from each cell's decision field; risks only drive color intensity. The
// diverging scale is anchored at risk 0 regardless of the grid's range,
// so blue always means launch (expected risk < 0) and red roll-back.

import type { DecisionSpaceResponse, Decision, GridCell } from "./types.js";

export interface HeatmapCell {
  row: number; // index into ys (axis2 value)
  col: number; // index into xs (axis1 value)
  lambda1: number;
  lambda2: number;
  risk: number | null;
  decision: Decision;
  color: string;
  onBoundary: boolean;
}

export interface HeatmapModel {
  xs: number[];
  ys: number[];
  cells: HeatmapCell[];
  maxAbsRisk: number;
  axis1: string;
  axis2: string;
}

export function riskColor(risk: number | null, maxAbs: number): string {
  if (risk === null) return "#bdbdbd";
  const t = maxAbs > 0 ? Math.min(Math.abs(risk) / maxAbs, 1) : 0;
  const depth = Math.round(90 + 130 * t);
  if (risk < 0) return `rgb(${235 - depth}, ${240 - Math.round(depth / 2)}, 255)`;
  return `rgb(255, ${240 - Math.round(depth / 2)}, ${235 - depth})`;
}

export function buildHeatmapModel(resp: DecisionSpaceResponse): HeatmapModel {
  const xs = [...new Set(resp.grid.map((c) => c.lambda1))].sort((a, b) => a - b);
  const ys = [...new Set(resp.grid.map((c) => c.lambda2))].sort((a, b) => a - b);
  const xi = new Map(xs.map((v, i) => [v, i]));
  const yi = new Map(ys.map((v, i) => [v, i]));
  const maxAbsRisk = resp.grid.reduce(
    (acc, c) => (c.risk_launch === null ? acc : Math.max(acc, Math.abs(c.risk_launch))),
    0,
  );
  const byPos = new Map<string, GridCell>();
  for (const cell of resp.grid) byPos.set(`${xi.get(cell.lambda1)}:${yi.get(cell.lambda2)}`, cell);
  const decisionAt = (col: number, row: number): Decision | undefined =>
    byPos.get(`${col}:${row}`)?.decision;
  const cells: HeatmapCell[] = resp.grid.map((cell) => {
    const col = xi.get(cell.lambda1)!;
    const row = yi.get(cell.lambda2)!;
    const mine = cell.decision;
    const onBoundary = [
      decisionAt(col - 1, row),
      decisionAt(col + 1, row),
      decisionAt(col, row - 1),
      decisionAt(col, row + 1),
    ].some((d) => d !== undefined && d !== mine);
    return {
      row,
      col,
      lambda1: cell.lambda1,
      lambda2: cell.lambda2,
      risk: cell.risk_launch,
      decision: mine,
      color: riskColor(cell.risk_launch, maxAbsRisk),
      onBoundary,
    };
  });
  return { xs, ys, cells, maxAbsRisk, axis1: resp.axis1, axis2: resp.axis2 };
}

export function hoverText(cell: HeatmapCell): string {
  const risk = cell.risk === null ? "n/a" : cell.risk.toPrecision(4);
  return `(${cell.lambda1.toPrecision(4)}, ${cell.lambda2.toPrecision(4)}) risk ${risk} → ${cell.decision}`;
}

export class HeatmapView {
  private model: HeatmapModel | null = null;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly tooltip: HTMLElement,
    private readonly onSelect?: (lambda1: number, lambda2: number) => void,
  ) {
    canvas.addEventListener("mousemove", (ev) => this.handleHover(ev));
    canvas.addEventListener("mouseleave", () => {
      this.tooltip.textContent = "";
    });
    canvas.addEventListener("click", (ev) => {
      const cell = this.cellAt(ev);
      if (cell && this.onSelect) this.onSelect(cell.lambda1, cell.lambda2);
    });
  }

  render(model: HeatmapModel): void {
    this.model = model;
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    const cw = width / model.xs.length;
    const ch = height / model.ys.length;
    for (const cell of model.cells) {
      const x = cell.col * cw;
      // highest lambda2 on top
      const y = (model.ys.length - 1 - cell.row) * ch;
      ctx.fillStyle = cell.color;
      ctx.fillRect(x, y, Math.ceil(cw), Math.ceil(ch));
      if (cell.onBoundary) {
        ctx.strokeStyle = "#222";
        ctx.lineWidth = 1;
        ctx.strokeRect(x + 0.5, y + 0.5, cw - 1, ch - 1);
      }
    }
  }

  private cellAt(ev: MouseEvent): HeatmapCell | null {
    if (!this.model) return null;
    const rect = this.canvas.getBoundingClientRect();
    const col = Math.floor(((ev.clientX - rect.left) / rect.width) * this.model.xs.length);
    const rowFromTop = Math.floor(((ev.clientY - rect.top) / rect.height) * this.model.ys.length);
    const row = this.model.ys.length - 1 - rowFromTop;
    return this.model.cells.find((c) => c.col === col && c.row === row) ?? null;
  }

  private handleHover(ev: MouseEvent): void {
    const cell = this.cellAt(ev);
    this.tooltip.textContent = cell ? hoverText(cell) : "";
  }
}

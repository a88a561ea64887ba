import { readFileSync } from "node:fs";

import { describe, expect, it } from "vitest";

import { buildHeatmapModel, hoverText, riskColor } from "../src/heatmap.js";
import type { DecisionSpaceResponse } from "../src/types.js";

function fixture(name: string): DecisionSpaceResponse {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as DecisionSpaceResponse;
}

describe("grid fidelity against recorded responses", () => {
  it.each(["decision_space_response.json", "mixed_response.json"])(
    "cell classifications equal the service decisions one-for-one (%s)",
    (name) => {
      const resp = fixture(name);
      const model = buildHeatmapModel(resp);
      expect(model.cells.length).toBe(resp.grid.length);
      const rendered = new Map(
        model.cells.map((c) => [`${c.lambda1}:${c.lambda2}`, c.decision]),
      );
      for (const cell of resp.grid) {
        expect(rendered.get(`${cell.lambda1}:${cell.lambda2}`)).toBe(cell.decision);
      }
    },
  );

  it("matches the recorded classification snapshot", () => {
    const model = buildHeatmapModel(fixture("mixed_response.json"));
    const byRow = model.ys.map((y) =>
      model.xs.map(
        (x) =>
          model.cells.find((c) => c.lambda1 === x && c.lambda2 === y)!.decision,
      ),
    );
    expect({ xs: model.xs, ys: model.ys, decisions: byRow }).toMatchSnapshot();
  });
});

describe("diverging colors anchored at zero", () => {
  it("negative risk is blue, positive red, skipped gray", () => {
    const model = buildHeatmapModel(fixture("mixed_response.json"));
    for (const cell of model.cells) {
      if (cell.risk === null) {
        expect(cell.decision).toBe("skipped");
        expect(cell.color).toBe("#bdbdbd");
        continue;
      }
      const [r, , b] = cell.color.match(/\d+/g)!.map(Number);
      if (cell.risk < 0) {
        expect(b).toBeGreaterThan(r);
      } else {
        expect(r).toBeGreaterThan(b);
      }
    }
  });

  it("anchor does not move with the grid maximum", () => {
    // same sign -> same hue family regardless of scale
    const [rSmall, , bSmall] = riskColor(-0.1, 1000).match(/\d+/g)!.map(Number);
    expect(bSmall).toBeGreaterThan(rSmall);
    const [rBig, , bBig] = riskColor(0.1, 1000).match(/\d+/g)!.map(Number);
    expect(rBig).toBeGreaterThan(bBig);
  });
});

describe("boundary and hover", () => {
  it("marks cells adjacent to a different decision", () => {
    const model = buildHeatmapModel(fixture("mixed_response.json"));
    const boundary = model.cells.filter((c) => c.onBoundary);
    expect(boundary.length).toBeGreaterThan(0);
    // the all-launch fixture has no boundary anywhere
    const uniform = buildHeatmapModel(fixture("decision_space_response.json"));
    expect(uniform.cells.every((c) => !c.onBoundary)).toBe(true);
  });

  it("hover text shows the trade-off pair and risk", () => {
    const model = buildHeatmapModel(fixture("mixed_response.json"));
    const cell = model.cells.find((c) => c.risk !== null)!;
    const text = hoverText(cell);
    expect(text).toContain(cell.decision);
    expect(text).toContain(cell.lambda1.toPrecision(4));
  });
});

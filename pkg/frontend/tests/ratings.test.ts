import { describe, expect, it } from "vitest";

import {
  CSV_HEADER,
  DIMENSIONS,
  EvaluationPanel,
  IncompleteFormError,
} from "../src/ratings.js";

function fillPanel(panel: EvaluationPanel, value = 0.5): void {
  for (const game of panel.games) {
    for (const dimension of DIMENSIONS) {
      panel.setRating(game, dimension, value);
    }
  }
}

describe("evaluation panel", () => {
  it("blocks export while sliders are missing", () => {
    const panel = new EvaluationPanel("p0", ["frost"]);
    panel.setRating("frost", "exertion", 0.4);
    expect(panel.complete).toBe(false);
    expect(() => panel.toCsv()).toThrow(IncompleteFormError);
    try {
      panel.toCsv();
    } catch (error) {
      const missing = (error as IncompleteFormError).missing;
      expect(missing).toHaveLength(DIMENSIONS.length - 1);
    }
  });

  it("exports seven rows per rated game", () => {
    const panel = new EvaluationPanel("p9", ["frost", "food_rain"]);
    fillPanel(panel, 0.25);
    const lines = panel.toCsv().trim().split("\n");
    expect(lines[0]).toBe(CSV_HEADER);
    expect(lines).toHaveLength(1 + 2 * 7);
    expect(lines[1]).toBe("p9,frost,exertion,0.25");
  });

  it("serializes extremes as exact 0 and 1", () => {
    const panel = new EvaluationPanel("p0", ["frost"]);
    fillPanel(panel, 0);
    panel.setRating("frost", "attention", 1);
    const csv = panel.toCsv();
    expect(csv).toContain("p0,frost,exertion,0\n");
    expect(csv).toContain("p0,frost,attention,1\n");
    expect(csv).not.toContain("e-");
  });

  it("rejects out-of-range and unknown entries", () => {
    const panel = new EvaluationPanel("p0", ["frost"]);
    expect(() => panel.setRating("frost", "exertion", 1.5)).toThrow(/outside/);
    expect(() => panel.setRating("pong", "exertion", 0.5)).toThrow(/unknown game/);
  });

  it("every exported row stays within the ingest contract", () => {
    // mirror of the server-side CSV validation: 4 fields, known dimension, value in [0,1]
    const panel = new EvaluationPanel("p1", ["frost", "food_rain", "virus_hitter"]);
    let v = 0;
    for (const game of panel.games) {
      for (const dimension of DIMENSIONS) {
        panel.setRating(game, dimension, Math.round((v % 1.01) * 100) / 100);
        v += 0.07;
      }
    }
    const rows = panel.toCsv().trim().split("\n").slice(1);
    expect(rows).toHaveLength(21);
    for (const row of rows) {
      const fields = row.split(",");
      expect(fields).toHaveLength(4);
      expect(DIMENSIONS).toContain(fields[2] as (typeof DIMENSIONS)[number]);
      const value = Number(fields[3]);
      expect(value).toBeGreaterThanOrEqual(0);
      expect(value).toBeLessThanOrEqual(1);
    }
  });
});

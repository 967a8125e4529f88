/** Exact ranking parity against the pipeline-core fixtures. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { parseVisData, rankTerms, relevance, topTerms } from "../src/data";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

const data = parseVisData(
  JSON.parse(readFileSync(join(FIXTURES, "visdata.json"), "utf-8")),
);
const grid = JSON.parse(
  readFileSync(join(FIXTURES, "lambda_rankings.json"), "utf-8"),
) as { lambdas: number[]; rankings: Record<string, string[][]> };

describe("lambda-grid ranking parity with the core", () => {
  it("matches core rankings for all topics across 101 lambda values", () => {
    expect(grid.lambdas).toHaveLength(101);
    for (const [topicKey, perLambda] of Object.entries(grid.rankings)) {
      const topicId = Number(topicKey);
      grid.lambdas.forEach((lambda, i) => {
        const ranked = rankTerms(data, topicId, lambda).map(
          (idx) => data.terms[idx].term,
        );
        expect(ranked, `topic ${topicId}, lambda ${lambda}`).toEqual(perLambda[i]);
      });
    }
  });

  it("lambda=1 orders by log-probability, lambda=0 by log-lift", () => {
    for (const topic of data.topics) {
      const byProb = [...data.terms.keys()].sort(
        (a, b) =>
          (data.terms[b].log_prob[topic.id] - data.terms[a].log_prob[topic.id]) ||
          (a - b),
      );
      expect(rankTerms(data, topic.id, 1)).toEqual(byProb);
      const byLift = [...data.terms.keys()].sort(
        (a, b) =>
          (data.terms[b].log_lift[topic.id] - data.terms[a].log_lift[topic.id]) ||
          (a - b),
      );
      expect(rankTerms(data, topic.id, 0)).toEqual(byLift);
    }
  });

  it("relevance blend matches its endpoints for finite stats", () => {
    const term = data.terms[0];
    expect(relevance(term, 0, 1)).toBe(term.log_prob[0]);
    expect(relevance(term, 0, 0)).toBe(term.log_lift[0]);
  });

  it("topTerms returns a prefix of the full ranking", () => {
    const full = rankTerms(data, 0, 0.6).map((i) => data.terms[i].term);
    const top = topTerms(data, 0, 0.6, 10).map((t) => t.term);
    expect(top).toEqual(full.slice(0, 10));
  });
});

describe("fixture term statistics", () => {
  it("estimated within-topic frequency never exceeds overall frequency by more than 1%", () => {
    for (const term of data.terms) {
      for (const topic of data.topics) {
        expect(term.est_freq[topic.id]).toBeLessThanOrEqual(
          term.overall_freq * 1.01,
        );
      }
    }
  });

  it("conditional distributions sum to one", () => {
    for (const term of data.terms) {
      const total = term.conditional.reduce((a, b) => a + b, 0);
      expect(Math.abs(total - 1)).toBeLessThan(1e-9);
    }
  });
});

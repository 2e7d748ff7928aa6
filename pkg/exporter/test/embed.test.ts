import { describe, expect, it } from "vitest";

import { embedTokens, modelInfo, MODELS, ModelUnavailable, tokenVector } from "../src/embed.js";

const BERT = MODELS.bert;
const CODEBERT = MODELS.codebert;

describe("modelInfo", () => {
  it("resolves both models with their dimensions", () => {
    expect(modelInfo("bert").dim).toBe(384);
    expect(modelInfo("codebert").dim).toBe(768);
  });

  it("rejects unknown ids with the available choices", () => {
    expect(() => modelInfo("gpt")).toThrow(ModelUnavailable);
    expect(() => modelInfo("gpt")).toThrow(/bert, codebert/);
  });
});

describe("tokenVector", () => {
  it("has the model dimension and values in [-1, 1)", () => {
    for (const model of [BERT, CODEBERT]) {
      const vec = tokenVector(model, "v1.0", "total");
      expect(vec.length).toBe(model.dim);
      for (const v of vec) {
        expect(v).toBeGreaterThanOrEqual(-1);
        expect(v).toBeLessThan(1);
      }
    }
  });

  it("is deterministic and cached", () => {
    const a = tokenVector(BERT, "v1.0", "total");
    const b = tokenVector(BERT, "v1.0", "total");
    expect(b).toBe(a); // same object from the cache
    expect(Array.from(tokenVector(BERT, "v1.0", "row"))).toEqual(
      Array.from(tokenVector(BERT, "v1.0", "row")),
    );
  });

  it("differs across tokens, models, and revisions", () => {
    const base = Array.from(tokenVector(BERT, "v1.0", "total"));
    expect(Array.from(tokenVector(BERT, "v1.0", "row"))).not.toEqual(base);
    expect(Array.from(tokenVector(CODEBERT, "v1.0", "total")).slice(0, BERT.dim)).not.toEqual(
      base,
    );
    expect(Array.from(tokenVector(BERT, "v2.0", "total"))).not.toEqual(base);
  });

  it("is not all zeros and roughly centred", () => {
    const vec = tokenVector(BERT, "v1.0", "total");
    const mean = vec.reduce((s, v) => s + v, 0) / vec.length;
    expect(Math.abs(mean)).toBeLessThan(0.25);
    expect(vec.some((v) => v !== 0)).toBe(true);
  });
});

function cosine(a: Float64Array, b: Float64Array): number {
  let dot = 0;
  let na = 0;
  let nb = 0;
  for (let i = 0; i < a.length; i++) {
    dot += a[i]! * b[i]!;
    na += a[i]! * a[i]!;
    nb += b[i]! * b[i]!;
  }
  return dot / Math.sqrt(na * nb);
}

describe("embedTokens", () => {
  it("embeds an empty sequence to the zero vector", () => {
    const vec = embedTokens([], BERT, "v1.0");
    expect(vec.length).toBe(BERT.dim);
    expect(vec.every((v) => v === 0)).toBe(true);
  });

  it("embeds a single token to that token's vector", () => {
    expect(Array.from(embedTokens(["total"], BERT, "v1.0"))).toEqual(
      Array.from(tokenVector(BERT, "v1.0", "total")),
    );
  });

  it("mean-pools: two tokens give the component-wise average", () => {
    const a = tokenVector(BERT, "v1.0", "total");
    const b = tokenVector(BERT, "v1.0", "row");
    const pooled = embedTokens(["total", "row"], BERT, "v1.0");
    for (let i = 0; i < BERT.dim; i++) {
      expect(pooled[i]).toBeCloseTo((a[i]! + b[i]!) / 2, 12);
    }
  });

  it("is order-insensitive up to float addition, duplication-sensitive", () => {
    const ab = embedTokens(["total", "row"], BERT, "v1.0");
    const ba = embedTokens(["row", "total"], BERT, "v1.0");
    for (let i = 0; i < BERT.dim; i++) expect(ba[i]).toBeCloseTo(ab[i]!, 12);
    const aab = embedTokens(["total", "total", "row"], BERT, "v1.0");
    expect(Array.from(aab)).not.toEqual(Array.from(ab));
  });

  it("gives higher cosine to overlapping vocabularies than disjoint ones", () => {
    const target = embedTokens(["fetch", "user", "row"], BERT, "v1.0");
    const near = embedTokens(["fetch", "user", "cache"], BERT, "v1.0");
    const far = embedTokens(["paint", "widget", "pixel"], BERT, "v1.0");
    expect(cosine(target, near)).toBeGreaterThan(cosine(target, far));
  });
});

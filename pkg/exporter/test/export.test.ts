import { mkdtempSync, readdirSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { runExport } from "../src/export.js";
import { FactsError, vectorFileSchema } from "../src/schema.js";

const FACTS = {
  class_name: "Demo",
  source_id: "test://Demo",
  instance_vars: ["total", "rows"],
  methods: [
    {
      id: 0,
      name: "addRow",
      arity: 1,
      accessed_vars: ["total", "rows"],
      internal_calls: { "1": 2 },
      external_call_count: 0,
      text_blob: "void addRow(Row row) { rows.add(row); recomputeTotal(); recomputeTotal(); }",
    },
    {
      id: 1,
      name: "recomputeTotal",
      arity: 0,
      accessed_vars: ["total", "rows"],
      internal_calls: {},
      external_call_count: 1,
      text_blob: "void recomputeTotal() { total = rows.stream().mapToInt(Row::value).sum(); }",
    },
    {
      id: 2,
      name: "clear",
      arity: 0,
      accessed_vars: ["rows"],
      internal_calls: {},
      external_call_count: 0,
      text_blob: "void clear() { rows.clear(); }",
    },
  ],
  warnings: [],
};

let dir: string;
let factsPath: string;

beforeEach(() => {
  dir = mkdtempSync(join(tmpdir(), "export-test-"));
  factsPath = join(dir, "facts.json");
  writeFileSync(factsPath, JSON.stringify(FACTS));
});

afterEach(() => {
  rmSync(dir, { recursive: true, force: true });
});

describe("runExport", () => {
  it("writes a schema-valid vector file with one vector per method", () => {
    const out = join(dir, "vectors.json");
    const result = runExport({ factsPath, model: "bert", outPath: out });

    expect(result).toMatchObject({
      path: out,
      model: "bert",
      revision: "v1.0",
      dim: 384,
      methodCount: 3,
      warnings: [],
    });

    const doc = vectorFileSchema.parse(JSON.parse(readFileSync(out, "utf8")));
    expect(doc.model).toBe("bert");
    expect(doc.dim).toBe(384);
    expect(Object.keys(doc.vectors)).toEqual(["0", "1", "2"]);
    for (const vec of Object.values(doc.vectors)) {
      expect(vec.length).toBe(384);
      expect(vec.every((v) => Number.isFinite(v))).toBe(true);
    }
  });

  it("keeps the top-level key order model, revision, dim, vectors", () => {
    const out = join(dir, "vectors.json");
    runExport({ factsPath, model: "bert", outPath: out });
    const text = readFileSync(out, "utf8");
    expect(Object.keys(JSON.parse(text))).toEqual(["model", "revision", "dim", "vectors"]);
    expect(text.endsWith("\n")).toBe(true);
  });

  it("produces byte-identical files on reruns", () => {
    const a = join(dir, "a.json");
    const b = join(dir, "b.json");
    runExport({ factsPath, model: "codebert", outPath: a });
    runExport({ factsPath, model: "codebert", outPath: b });
    expect(readFileSync(b)).toEqual(readFileSync(a));
  });

  it("differs across models and across revisions", () => {
    const a = join(dir, "a.json");
    const b = join(dir, "b.json");
    const c = join(dir, "c.json");
    runExport({ factsPath, model: "bert", outPath: a });
    runExport({ factsPath, model: "codebert", outPath: b });
    runExport({ factsPath, model: "bert", outPath: c, revision: "v2.0" });
    const [da, db, dc] = [a, b, c].map((p) => JSON.parse(readFileSync(p, "utf8")));
    expect(db.vectors["0"]).not.toEqual(da.vectors["0"]);
    expect(dc.vectors["0"]).not.toEqual(da.vectors["0"]);
    expect(dc.revision).toBe("v2.0");
  });

  it("leaves no temp files behind", () => {
    runExport({ factsPath, model: "bert", outPath: join(dir, "v.json") });
    expect(readdirSync(dir).filter((n) => n.endsWith(".tmp"))).toEqual([]);
  });

  it("truncates over-budget methods and says which", () => {
    const result = runExport({
      factsPath,
      model: "bert",
      outPath: join(dir, "v.json"),
      maxTokens: 2,
    });
    expect(result.warnings.length).toBeGreaterThan(0);
    for (const w of result.warnings) {
      expect(w).toMatch(/truncated to first 2/);
    }
    expect(result.warnings.join(" ")).toContain("addRow");
  });

  it("truncation changes the vectors (head is kept)", () => {
    const full = join(dir, "full.json");
    const cut = join(dir, "cut.json");
    runExport({ factsPath, model: "bert", outPath: full });
    runExport({ factsPath, model: "bert", outPath: cut, maxTokens: 1 });
    const dfull = JSON.parse(readFileSync(full, "utf8"));
    const dcut = JSON.parse(readFileSync(cut, "utf8"));
    expect(dcut.vectors["0"]).not.toEqual(dfull.vectors["0"]);
  });

  it("rejects a non-positive or fractional token budget", () => {
    for (const bad of [0, -3, 2.5]) {
      expect(() =>
        runExport({ factsPath, model: "bert", outPath: join(dir, "v.json"), maxTokens: bad }),
      ).toThrow(RangeError);
    }
  });

  it("raises FactsError for malformed JSON and for schema violations", () => {
    const badJson = join(dir, "bad.json");
    writeFileSync(badJson, "{ not json");
    expect(() => runExport({ factsPath: badJson, model: "bert", outPath: join(dir, "v.json") }))
      .toThrow(FactsError);

    const badShape = join(dir, "shape.json");
    writeFileSync(badShape, JSON.stringify({ ...FACTS, methods: "nope" }));
    expect(() => runExport({ factsPath: badShape, model: "bert", outPath: join(dir, "v.json") }))
      .toThrow(FactsError);
  });

  it("propagates a missing facts file as ENOENT", () => {
    try {
      runExport({ factsPath: join(dir, "absent.json"), model: "bert", outPath: join(dir, "v") });
      expect.unreachable("should have thrown");
    } catch (err) {
      expect((err as NodeJS.ErrnoException).code).toBe("ENOENT");
    }
  });

  it("embeds a method with no usable tokens to the zero vector", () => {
    const sparse = {
      ...FACTS,
      methods: [
        {
          id: 0,
          name: "x",
          arity: 0,
          accessed_vars: [],
          internal_calls: {},
          external_call_count: 0,
          text_blob: "int a = 0;", // every word is filtered out
        },
      ],
    };
    const p = join(dir, "sparse.json");
    writeFileSync(p, JSON.stringify(sparse));
    const out = join(dir, "v.json");
    runExport({ factsPath: p, model: "bert", outPath: out });
    const doc = JSON.parse(readFileSync(out, "utf8"));
    expect(doc.vectors["0"].every((v: number) => v === 0)).toBe(true);
  });
});

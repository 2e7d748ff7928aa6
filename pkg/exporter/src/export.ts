// One export job: facts JSON in, vector file JSON out.
//
// The output file matches the vector-file layout the analysis pipeline
// imports ({model, dim, vectors} with method-id keys), plus a "revision"
// field recording the embedding pin; readers that only know the three core
// keys can ignore it. Writes are atomic (temp file + rename) and the bytes
// are a pure function of (facts, model, revision, maxTokens).

import { randomBytes } from "node:crypto";
import { readFileSync, renameSync, rmSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";

import { embedTokens, modelInfo, type ModelInfo } from "./embed.js";
import { parseFacts, type ClassFacts } from "./schema.js";
import { prepareTokens, rawTokens } from "./textprep.js";

export const DEFAULT_MAX_TOKENS = 512;

export interface ExportJob {
  factsPath: string;
  model: string;
  outPath: string;
  /** Embedding pin; defaults to the model's current revision. */
  revision?: string;
  /** Per-method token budget; longer sequences keep only the head. */
  maxTokens?: number;
}

export interface ExportResult {
  path: string;
  model: string;
  revision: string;
  dim: number;
  methodCount: number;
  /** Human-readable notices (e.g. truncated methods); empty when clean. */
  warnings: string[];
}

function methodTokens(facts: ClassFacts, model: ModelInfo): Map<number, string[]> {
  const out = new Map<number, string[]>();
  for (const method of facts.methods) {
    const text = method.text_blob;
    out.set(method.id, model.input === "prepared" ? prepareTokens(text) : rawTokens(text));
  }
  return out;
}

/** Render the vector file with a fixed key order and trailing newline. */
export function renderVectorFile(
  model: ModelInfo,
  revision: string,
  vectors: Map<number, Float64Array>,
): string {
  const byId: Record<string, number[]> = {};
  for (const id of [...vectors.keys()].sort((a, b) => a - b)) {
    byId[String(id)] = Array.from(vectors.get(id)!);
  }
  const doc = { model: model.id, revision, dim: model.dim, vectors: byId };
  return JSON.stringify(doc, null, 2) + "\n";
}

function writeAtomic(path: string, text: string): void {
  const tmp = join(dirname(path), `.${randomBytes(6).toString("hex")}.tmp`);
  try {
    writeFileSync(tmp, text, { encoding: "utf8" });
    renameSync(tmp, path);
  } catch (err) {
    rmSync(tmp, { force: true });
    throw err;
  }
}

export function runExport(job: ExportJob): ExportResult {
  const model = modelInfo(job.model);
  const revision = job.revision ?? model.defaultRevision;
  const maxTokens = job.maxTokens ?? DEFAULT_MAX_TOKENS;
  if (!Number.isInteger(maxTokens) || maxTokens < 1) {
    throw new RangeError(`max tokens must be a positive integer, got ${maxTokens}`);
  }

  const facts = parseFacts(readFileSync(job.factsPath, "utf8"));
  const warnings: string[] = [];
  const vectors = new Map<number, Float64Array>();
  for (const [id, tokens] of methodTokens(facts, model)) {
    let kept = tokens;
    if (tokens.length > maxTokens) {
      kept = tokens.slice(0, maxTokens);
      const name = facts.methods[id]!.name;
      warnings.push(
        `method '${name}' has ${tokens.length} tokens; truncated to first ${maxTokens}`,
      );
    }
    vectors.set(id, embedTokens(kept, model, revision));
  }

  writeAtomic(job.outPath, renderVectorFile(model, revision, vectors));
  return {
    path: job.outPath,
    model: model.id,
    revision,
    dim: model.dim,
    methodCount: vectors.size,
    warnings,
  };
}

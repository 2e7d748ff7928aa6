// Deterministic per-method embedding backends.
//
// Both models map a token sequence to the mean of per-token vectors, where a
// token's vector is derived by expanding SHA-256 digests of
// (model, revision, token, block) into floats in [-1, 1). This is a seeded
// random-projection embedding of the token bag: methods sharing vocabulary
// get nearby vectors, disjoint vocabularies are near-orthogonal in
// expectation, and output bytes depend only on the (model, revision) pin and
// the input text. The two models differ in what they read (see export.ts):
// "bert" embeds the preprocessed identifier words, "codebert" embeds the raw
// code tokens, and they hash into disjoint namespaces so their geometries are
// unrelated.

import { createHash } from "node:crypto";

export class ModelUnavailable extends Error {
  override name = "ModelUnavailable";
}

export type ModelId = "bert" | "codebert";

export interface ModelInfo {
  id: ModelId;
  dim: number;
  /** Which token stream the model reads: cleaned words or raw code tokens. */
  input: "prepared" | "raw";
  defaultRevision: string;
}

export const MODELS: Record<ModelId, ModelInfo> = {
  bert: { id: "bert", dim: 384, input: "prepared", defaultRevision: "v1.0" },
  codebert: { id: "codebert", dim: 768, input: "raw", defaultRevision: "v1.0" },
};

export function modelInfo(id: string): ModelInfo {
  const info = (MODELS as Record<string, ModelInfo>)[id];
  if (info === undefined) {
    throw new ModelUnavailable(
      `unknown model '${id}'; available: ${Object.keys(MODELS).join(", ")}`,
    );
  }
  return info;
}

const FLOATS_PER_DIGEST = 8; // 32 bytes -> 8 uint32 words

function digestFloats(key: string, block: number): number[] {
  const digest = createHash("sha256").update(`${key}\u0000${block}`).digest();
  const out: number[] = [];
  for (let i = 0; i < FLOATS_PER_DIGEST; i++) {
    const word = digest.readUInt32BE(i * 4);
    out.push((word / 2 ** 32) * 2 - 1);
  }
  return out;
}

const tokenCache = new Map<string, Float64Array>();

/** The fixed pseudo-random vector for one token under one (model, revision). */
export function tokenVector(model: ModelInfo, revision: string, token: string): Float64Array {
  const key = `${model.id}\u0000${revision}\u0000${token}`;
  const cached = tokenCache.get(key);
  if (cached !== undefined) return cached;
  const values: number[] = [];
  for (let block = 0; values.length < model.dim; block++) {
    values.push(...digestFloats(key, block));
  }
  const vec = Float64Array.from(values.slice(0, model.dim));
  tokenCache.set(key, vec);
  return vec;
}

/** Mean-pool token vectors; an empty sequence embeds to the zero vector. */
export function embedTokens(
  tokens: readonly string[],
  model: ModelInfo,
  revision: string,
): Float64Array {
  const out = new Float64Array(model.dim);
  if (tokens.length === 0) return out;
  for (const token of tokens) {
    const vec = tokenVector(model, revision, token);
    for (let i = 0; i < model.dim; i++) out[i]! += vec[i]!;
  }
  for (let i = 0; i < model.dim; i++) out[i]! /= tokens.length;
  return out;
}

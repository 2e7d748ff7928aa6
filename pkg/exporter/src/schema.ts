// JSON contracts shared with the Python pipeline.
//
// The facts file is what `classplit extract` writes; the vector file is what
// `classplit`'s semantic-feature loader reads back. Both are validated here
// with zod so a malformed file fails with a path-qualified message instead of
// a crash deep in the math.

import { z } from "zod";

const methodSchema = z.object({
  id: z.number().int().nonnegative(),
  name: z.string().min(1),
  arity: z.number().int().nonnegative(),
  accessed_vars: z.array(z.string()),
  internal_calls: z.record(z.string(), z.number().int().positive()),
  external_call_count: z.number().int().nonnegative(),
  text_blob: z.string(),
});

export const factsSchema = z.object({
  class_name: z.string().min(1),
  source_id: z.string(),
  instance_vars: z.array(z.string()),
  methods: z.array(methodSchema),
  warnings: z.array(z.string()).default([]),
});

export type MethodFacts = z.infer<typeof methodSchema>;
export type ClassFacts = z.infer<typeof factsSchema>;

export const vectorFileSchema = z.object({
  model: z.string().min(1),
  revision: z.string().min(1),
  dim: z.number().int().positive(),
  vectors: z.record(z.string(), z.array(z.number())),
});

export type VectorFile = z.infer<typeof vectorFileSchema>;

export class FactsError extends Error {
  override name = "FactsError";
}

/** Parse and validate a facts JSON document. */
export function parseFacts(text: string): ClassFacts {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch (err) {
    throw new FactsError(`facts file is not valid JSON: ${(err as Error).message}`);
  }
  const result = factsSchema.safeParse(data);
  if (!result.success) {
    const first = result.error.issues[0];
    const where = first && first.path.length > 0 ? first.path.join(".") : "$";
    throw new FactsError(`facts file invalid at ${where}: ${first?.message ?? "unknown"}`);
  }
  const facts = result.data;
  const seen = new Set<number>();
  facts.methods.forEach((m, i) => {
    if (m.id !== i) {
      throw new FactsError(`facts file invalid at methods.${i}.id: expected ${i}, got ${m.id}`);
    }
    seen.add(m.id);
  });
  for (const m of facts.methods) {
    for (const callee of Object.keys(m.internal_calls)) {
      if (!seen.has(Number(callee))) {
        throw new FactsError(
          `facts file invalid at methods.${m.id}.internal_calls: unknown callee ${callee}`,
        );
      }
    }
  }
  return facts;
}

// Public programmatic surface of the exporter.

export { embedTokens, modelInfo, MODELS, ModelUnavailable, tokenVector } from "./embed.js";
export type { ModelId, ModelInfo } from "./embed.js";
export { DEFAULT_MAX_TOKENS, renderVectorFile, runExport } from "./export.js";
export type { ExportJob, ExportResult } from "./export.js";
export { FactsError, factsSchema, parseFacts, vectorFileSchema } from "./schema.js";
export type { ClassFacts, MethodFacts, VectorFile } from "./schema.js";
export {
  filterTokens,
  lemmatize,
  normalize,
  prepareTokens,
  rawTokens,
  tokenize,
} from "./textprep.js";

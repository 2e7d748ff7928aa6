#!/usr/bin/env node
// Command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 unreadable or invalid input data,
// 3 unexpected internal failure (with a stack trace on stderr).

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { ModelUnavailable, MODELS } from "./embed.js";
import { DEFAULT_MAX_TOKENS, runExport } from "./export.js";
import { FactsError } from "./schema.js";

class UsageError extends Error {
  override name = "UsageError";
}

const FS_ERROR_CODES = new Set(["ENOENT", "EISDIR", "ENOTDIR", "EACCES", "EPERM"]);

function isDataError(err: unknown): boolean {
  if (err instanceof FactsError || err instanceof ModelUnavailable) return true;
  const code = (err as NodeJS.ErrnoException)?.code;
  return typeof code === "string" && FS_ERROR_CODES.has(code);
}

export function runCli(argv: string[]): number {
  try {
    yargs(argv)
      .scriptName("embed-exporter")
      .strict()
      .exitProcess(false)
      .demandCommand(1, "specify a command (try: export)")
      .fail((msg, err) => {
        throw err ?? new UsageError(msg ?? "invalid usage");
      })
      .command(
        "export",
        "embed each method in a facts file and write a vector file",
        (y) =>
          y
            .option("facts", {
              type: "string",
              demandOption: true,
              describe: "path to the facts JSON describing the class",
            })
            .option("model", {
              choices: Object.keys(MODELS) as ("bert" | "codebert")[],
              demandOption: true,
              describe: "embedding model to use",
            })
            .option("out", {
              type: "string",
              demandOption: true,
              describe: "path of the vector file to write",
            })
            .option("revision", {
              type: "string",
              describe: "embedding revision pin (defaults to the model's current one)",
            })
            .option("max-tokens", {
              type: "number",
              default: DEFAULT_MAX_TOKENS,
              describe: "per-method token budget; longer methods keep only the head",
            })
            .check((args) => {
              if (!Number.isInteger(args["max-tokens"]) || args["max-tokens"] < 1) {
                throw new UsageError("--max-tokens must be a positive integer");
              }
              return true;
            }),
        (args) => {
          const result = runExport({
            factsPath: args.facts,
            model: args.model,
            outPath: args.out,
            revision: args.revision,
            maxTokens: args["max-tokens"],
          });
          for (const warning of result.warnings) {
            process.stderr.write(`warning: ${warning}\n`);
          }
          process.stderr.write(
            `wrote ${result.methodCount} vectors (model ${result.model}@${result.revision}, ` +
              `dim ${result.dim}) to ${result.path}\n`,
          );
        },
      )
      .parseSync();
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    if (isDataError(err)) {
      const detail = err instanceof Error ? err.message : String(err);
      process.stderr.write(`error: ${detail}\n`);
      return 2;
    }
    const trace = err instanceof Error ? (err.stack ?? err.message) : String(err);
    process.stderr.write(`internal error: ${trace}\n`);
    return 3;
  }
}

process.exitCode = runCli(hideBin(process.argv));

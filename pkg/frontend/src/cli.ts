/**
 * Batch figure renderer.
 *
 *   plot jump_vs_n        --in experiments.csv --out jumps.svg
 *   plot loglog_regression --in experiments.csv --regression regression.csv --out loglog.svg
 *   plot spatial_snapshot  --graph graph.spa --detail detail.csv --out snapshot.svg
 *
 * Regression values are read from the CSV the simulation package exports
 * (spasir regress) and passed through verbatim; nothing is refitted here.
 *
 * Exit codes: 0 success, 1 data error, 2 usage error, 3 i/o error.
 */
import { parseArgs } from "node:util";

import { readDetail, readExperiments, readGraph, readRegression } from "./csv.js";
import { buildJumpVsN, buildLogLog, buildSnapshot } from "./figures.js";
import { renderSvg, writeSvg } from "./render.js";

const KINDS = ["jump_vs_n", "loglog_regression", "spatial_snapshot"] as const;
type Kind = (typeof KINDS)[number];

export interface CliResult {
  out: string;
  notes: string[];
}

export function run(argv: string[]): CliResult {
  const { values, positionals } = parseArgs({
    args: argv,
    allowPositionals: true,
    options: {
      in: { type: "string" },
      out: { type: "string" },
      graph: { type: "string" },
      detail: { type: "string" },
      regression: { type: "string" },
      gamma: { type: "string" },
      jitter: { type: "string" },
      "jitter-seed": { type: "string", default: "7" },
      width: { type: "string" },
      height: { type: "string" },
    },
  });

  if (positionals[0] !== "plot" || positionals.length !== 2) {
    throw new UsageError(`usage: plot <${KINDS.join("|")}> --out <svg> [inputs...]`);
  }
  const kind = positionals[1] as Kind;
  if (!KINDS.includes(kind)) {
    throw new UsageError(`unknown figure kind "${positionals[1]}"; expected ${KINDS.join(", ")}`);
  }
  if (!values.out) {
    throw new UsageError("--out is required");
  }
  const jitterSeed = Number(values["jitter-seed"]);
  const notes: string[] = [];

  let option;
  let width = Number(values.width ?? 960);
  let height = Number(values.height ?? 540);
  if (kind === "jump_vs_n") {
    if (!values.in) throw new UsageError("jump_vs_n needs --in <experiments csv>");
    const built = buildJumpVsN(readExperiments(values.in), {
      jitterSeed,
      ...(values.jitter !== undefined ? { jitterAmplitude: Number(values.jitter) } : {}),
    });
    notes.push(`facets: gamma = ${built.gammas.join(", ")}`);
    option = built.option;
  } else if (kind === "loglog_regression") {
    if (!values.in) throw new UsageError("loglog_regression needs --in <experiments csv>");
    if (!values.regression) {
      throw new UsageError("loglog_regression needs --regression <csv from 'spasir regress'>");
    }
    const built = buildLogLog(readExperiments(values.in), readRegression(values.regression), {
      jitterSeed,
      ...(values.gamma !== undefined ? { gamma: Number(values.gamma) } : {}),
      ...(values.jitter !== undefined ? { jitterRel: Number(values.jitter) } : {}),
    });
    notes.push(`annotation: ${built.annotation}`);
    notes.push(`${built.used} runs plotted, ${built.excluded} zero-jump runs excluded`);
    option = built.option;
  } else {
    if (!values.graph) throw new UsageError("spatial_snapshot needs --graph <spa file>");
    if (!values.detail) throw new UsageError("spatial_snapshot needs --detail <csv>");
    const built = buildSnapshot(readGraph(values.graph), readDetail(values.detail));
    notes.push(`${built.infected} infected, ${built.uninfected} never infected, ` +
      `last infection at t=${built.maxTime}`);
    option = built.option;
    width = Number(values.width ?? 640);
    height = Number(values.height ?? 640);
  }

  writeSvg(values.out, renderSvg(option, width, height));
  return { out: values.out, notes };
}

export class UsageError extends Error {}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);

if (invokedDirectly) {
  try {
    const result = run(process.argv.slice(2));
    for (const note of result.notes) console.log(note);
    console.log(`wrote ${result.out}`);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(String(err.message));
      process.exit(2);
    }
    const code = (err as NodeJS.ErrnoException)?.code;
    console.error(err instanceof Error ? err.message : String(err));
    process.exit(code === "ENOENT" || code === "EACCES" || code === "ENOTDIR" ? 3 : 1);
  }
}

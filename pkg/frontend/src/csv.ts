/**
 * Parsers for the files the simulation harness exports: the experiments
 * CSV, per-run infection detail, the plain-text graph format, and the
 * regression summary. All validation errors name the offending column or
 * file so batch runs fail loudly.
 */
import { readFileSync } from "node:fs";
import Papa from "papaparse";

export const EXPERIMENT_COLUMNS = [
  "n", "variant", "A1", "A2", "d", "p", "scenario", "gamma", "run", "seed",
  "origin", "attack_size", "duration", "longest_jump", "max_displacement",
] as const;

export interface ExperimentRow {
  n: number;
  scenario: "A" | "B";
  gamma: number;
  longestJump: number;
  attackSize: number;
  duration: number;
}

export interface DetailRow {
  vertex: number;
  infectionTime: number;
}

export interface GraphFile {
  d: number;
  n: number;
  /** positions[vertex id] = coordinates; ids are 1-based. */
  positions: Map<number, number[]>;
}

export interface RegressionSummary {
  slope: number;
  intercept: number;
  r2: number;
  nUsed: number;
  nExcluded: number;
}

function parseCsv(text: string, path: string): Papa.ParseResult<Record<string, string>> {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0]!;
    throw new Error(`${path}: malformed CSV (${first.message} at row ${first.row})`);
  }
  return parsed;
}

function requireColumns(found: string[] | undefined, wanted: readonly string[], path: string): void {
  const have = new Set(found ?? []);
  for (const column of wanted) {
    if (!have.has(column)) {
      throw new Error(`${path}: missing column "${column}"`);
    }
  }
}

function num(row: Record<string, string>, column: string, path: string): number {
  const value = Number(row[column]);
  if (!Number.isFinite(value)) {
    throw new Error(`${path}: non-numeric value "${row[column]}" in column "${column}"`);
  }
  return value;
}

export function readExperiments(path: string): ExperimentRow[] {
  const parsed = parseCsv(readFileSync(path, "utf8"), path);
  requireColumns(parsed.meta.fields, EXPERIMENT_COLUMNS, path);
  const rows = parsed.data.map((row): ExperimentRow => {
    const scenario = row["scenario"];
    if (scenario !== "A" && scenario !== "B") {
      throw new Error(`${path}: unknown scenario "${scenario}"`);
    }
    return {
      n: num(row, "n", path),
      scenario,
      gamma: num(row, "gamma", path),
      longestJump: num(row, "longest_jump", path),
      attackSize: num(row, "attack_size", path),
      duration: num(row, "duration", path),
    };
  });
  if (rows.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  return rows;
}

export function readDetail(path: string): DetailRow[] {
  const parsed = parseCsv(readFileSync(path, "utf8"), path);
  requireColumns(parsed.meta.fields, ["vertex", "infection_time"], path);
  const rows = parsed.data.map((row) => ({
    vertex: num(row, "vertex", path),
    infectionTime: num(row, "infection_time", path),
  }));
  if (rows.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  return rows;
}

export function readGraph(path: string): GraphFile {
  const lines = readFileSync(path, "utf8").split("\n");
  const header = (lines[0] ?? "").split(" ");
  if (header[0] !== "spa" || header[1] !== "v1" || header.length !== 9) {
    throw new Error(`${path}: not a spa v1 graph file`);
  }
  const d = Number(header[5]);
  const n = Number(header[7]);
  if (!Number.isInteger(d) || !Number.isInteger(n) || n < 1) {
    throw new Error(`${path}: malformed graph header "${lines[0]}"`);
  }
  const positions = new Map<number, number[]>();
  for (let i = 1; i <= n; i++) {
    const parts = (lines[i] ?? "").split(" ");
    if (parts.length !== d + 1) {
      throw new Error(`${path}: malformed position line ${i + 1}`);
    }
    positions.set(Number(parts[0]), parts.slice(1).map(Number));
  }
  return { d, n, positions };
}

export function readRegression(path: string): RegressionSummary {
  const parsed = parseCsv(readFileSync(path, "utf8"), path);
  requireColumns(parsed.meta.fields, ["slope", "intercept", "r2", "n_used", "n_excluded"], path);
  const row = parsed.data[0];
  if (row === undefined) {
    throw new Error(`${path}: no data rows`);
  }
  return {
    slope: num(row, "slope", path),
    intercept: num(row, "intercept", path),
    r2: num(row, "r2", path),
    nUsed: num(row, "n_used", path),
    nExcluded: num(row, "n_excluded", path),
  };
}

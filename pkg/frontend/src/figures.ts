/**
 * Option builders for the three figure kinds. Each returns a plain echarts
 * option (plus side information like exclusion counts) so tests can assert
 * on structure without rendering.
 *
 * Display jitter is applied here, at build time, from a fixed seed; the
 * input rows are never modified.
 */
import type { EChartsOption, SeriesOption } from "echarts";

import type { DetailRow, ExperimentRow, GraphFile, RegressionSummary } from "./csv.js";
import { jitterStream } from "./jitter.js";

export const SCENARIO_COLORS: Record<"A" | "B", string> = {
  A: "#3b6fc9",
  B: "#d14a41",
};

/** 4-significant-digit display formatting shared by annotations and tests. */
export function fmt(x: number): string {
  if (!Number.isFinite(x)) return String(x);
  return Number(x.toPrecision(4)).toString();
}

export interface JumpVsNResult {
  option: EChartsOption;
  gammas: number[];
}

export function buildJumpVsN(
  rows: ExperimentRow[],
  opts: { jitterAmplitude?: number; jitterSeed?: number } = {},
): JumpVsNResult {
  if (rows.length === 0) {
    throw new Error("no data: the experiments CSV has no rows to plot");
  }
  const amplitude = opts.jitterAmplitude ?? 150;
  const jitter = jitterStream(opts.jitterSeed ?? 7, amplitude);
  // one jitter draw per row, in file order, before any grouping
  const jittered = rows.map((row) => ({ row, x: row.n + jitter() }));

  const gammas = [...new Set(rows.map((r) => r.gamma))].sort((a, b) => a - b);
  const yMax = Math.max(...rows.map((r) => r.longestJump), 0.05) * 1.1;

  const grids: object[] = [];
  const xAxes: object[] = [];
  const yAxes: object[] = [];
  const titles: object[] = [{ text: "Longest infection jump vs network size", left: "center" }];
  const series: SeriesOption[] = [];
  const facetWidth = 88 / gammas.length - 6;
  gammas.forEach((gamma, facet) => {
    const left = 7 + facet * (facetWidth + 6);
    grids.push({ left: `${left}%`, width: `${facetWidth}%`, top: 90, bottom: 60 });
    titles.push({
      text: `gamma = ${fmt(gamma)}`,
      left: `${left + facetWidth / 2}%`,
      top: 58,
      textAlign: "center",
      textStyle: { fontSize: 13, fontWeight: "normal" },
    });
    xAxes.push({ gridIndex: facet, name: "n", nameLocation: "middle", nameGap: 28 });
    yAxes.push({
      gridIndex: facet,
      name: facet === 0 ? "longest jump" : "",
      min: 0,
      max: Number(yMax.toPrecision(3)),
    });
    for (const scenario of ["A", "B"] as const) {
      const pts = jittered
        .filter(({ row }) => row.gamma === gamma && row.scenario === scenario)
        .map(({ row, x }) => [x, row.longestJump]);
      series.push({
        type: "scatter",
        name: `scenario ${scenario}`,
        xAxisIndex: facet,
        yAxisIndex: facet,
        symbolSize: 5,
        itemStyle: { color: SCENARIO_COLORS[scenario], opacity: 0.7 },
        data: pts,
      });
    }
  });

  return {
    option: {
      animation: false,
      title: titles,
      legend: { top: 28, data: ["scenario A", "scenario B"] },
      grid: grids,
      xAxis: xAxes,
      yAxis: yAxes,
      series,
    },
    gammas,
  };
}

export interface LogLogResult {
  option: EChartsOption;
  annotation: string;
  used: number;
  excluded: number;
}

export function buildLogLog(
  rows: ExperimentRow[],
  regression: RegressionSummary,
  opts: { gamma?: number; jitterRel?: number; jitterSeed?: number } = {},
): LogLogResult {
  let pool = rows.filter((r) => r.scenario === "A");
  if (opts.gamma !== undefined) {
    pool = pool.filter((r) => r.gamma === opts.gamma);
  }
  if (pool.length === 0) {
    throw new Error("no data: no scenario-A rows to plot");
  }
  const usable = pool.filter((r) => r.longestJump > 0);
  const excluded = pool.length - usable.length;
  if (usable.length === 0) {
    throw new Error("no data: every scenario-A row has longest_jump = 0");
  }

  const jitter = jitterStream(opts.jitterSeed ?? 7, opts.jitterRel ?? 0.02);
  const points = usable.map((r) => [r.n * (1 + jitter()), r.longestJump]);
  const ns = usable.map((r) => r.n);
  const x0 = Math.min(...ns) / 1.1;
  const x1 = Math.max(...ns) * 1.1;
  const line = [x0, x1].map((x) => [x, Math.exp(regression.intercept) * x ** regression.slope]);

  const sign = regression.intercept < 0 ? "-" : "+";
  const annotation =
    `log(y) = ${fmt(regression.slope)} log(x) ${sign} ${fmt(Math.abs(regression.intercept))}` +
    ` (R2 = ${fmt(regression.r2)})`;
  const subtitle =
    `${usable.length} runs` + (excluded > 0 ? `, ${excluded} zero-jump runs excluded` : "");

  return {
    option: {
      animation: false,
      title: {
        text: "Longest jump vs network size (scenario A, log-log)",
        subtext: subtitle,
        left: "center",
      },
      grid: { top: 86, bottom: 60, left: 70, right: 30 },
      xAxis: { type: "log", name: "n", nameLocation: "middle", nameGap: 28 },
      yAxis: { type: "log", name: "longest jump" },
      series: [
        {
          type: "scatter",
          name: "runs",
          symbolSize: 5,
          itemStyle: { color: SCENARIO_COLORS.A, opacity: 0.55 },
          data: points,
        },
        {
          type: "line",
          name: "fit",
          showSymbol: false,
          lineStyle: { color: "#222222", width: 2 },
          data: line,
        },
      ],
      graphic: [
        {
          type: "text",
          right: 40,
          top: 96,
          style: { text: annotation, fontSize: 13, fill: "#222222" },
        },
      ],
    },
    annotation,
    used: usable.length,
    excluded,
  };
}

export interface SnapshotResult {
  option: EChartsOption;
  infected: number;
  uninfected: number;
  maxTime: number;
}

/** Blue (first infections) to red (last infections), linear in time. */
export function timeColor(t: number, tMax: number): string {
  const f = tMax > 0 ? t / tMax : 0;
  const r = Math.round(255 * f);
  const b = Math.round(255 * (1 - f));
  return `rgb(${r},0,${b})`;
}

export function buildSnapshot(graph: GraphFile, detail: DetailRow[]): SnapshotResult {
  if (graph.d !== 2) {
    throw new Error(`spatial snapshot needs a 2-dimensional graph, got d=${graph.d}`);
  }
  const timeOf = new Map(detail.map((row) => [row.vertex, row.infectionTime]));
  const tMax = Math.max(...detail.map((row) => row.infectionTime));

  const uninfected: number[][] = [];
  for (const [vertex, coords] of graph.positions) {
    if (!timeOf.has(vertex)) {
      uninfected.push(coords);
    }
  }
  const infected = [...timeOf.entries()]
    .sort((a, b) => a[1] - b[1] || a[0] - b[0])
    .map(([vertex, t]) => {
      const coords = graph.positions.get(vertex);
      if (coords === undefined) {
        throw new Error(`detail row references vertex ${vertex} not present in the graph file`);
      }
      return { value: coords, itemStyle: { color: timeColor(t, tMax) } };
    });

  return {
    option: {
      animation: false,
      title: {
        text: "Infection spread through the feature space",
        subtext: `blue = early, red = late; ${infected.length} infected of ${graph.n}`,
        left: "center",
      },
      grid: { top: 80, bottom: 50, left: 60, right: 40 },
      xAxis: { min: 0, max: 1, name: "x" },
      yAxis: { min: 0, max: 1, name: "y" },
      series: [
        {
          type: "scatter",
          name: "never infected",
          symbolSize: 4,
          itemStyle: { color: "#c8c8c8", opacity: 0.8 },
          data: uninfected,
        },
        {
          type: "scatter",
          name: "infected",
          symbolSize: 6,
          data: infected,
        },
      ],
    },
    infected: infected.length,
    uninfected: uninfected.length,
    maxTime: tMax,
  };
}

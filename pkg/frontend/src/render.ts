/** Server-side SVG rendering; no DOM, no interactivity. */
import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import * as echarts from "echarts";
import type { EChartsOption } from "echarts";

export function renderSvg(option: EChartsOption, width: number, height: number): string {
  const chart = echarts.init(null, null, { renderer: "svg", ssr: true, width, height });
  try {
    chart.setOption(option);
    // zrender allocates instance and class ids from process-wide counters
    // and bakes them into CSS class names; renumber in order of first
    // appearance so identical inputs give identical bytes
    const raw = chart.renderToSVGString().replace(/zr\d+-cls-(\d+)/g, "zr-cls-$1");
    const seen = new Map<string, string>();
    return raw.replace(/zr-cls-\d+/g, (cls) => {
      let canonical = seen.get(cls);
      if (canonical === undefined) {
        canonical = `zr-cls-${seen.size}`;
        seen.set(cls, canonical);
      }
      return canonical;
    });
  } finally {
    chart.dispose();
  }
}

export function writeSvg(path: string, svg: string): void {
  mkdirSync(dirname(path), { recursive: true });
  writeFileSync(path, svg, "utf8");
}

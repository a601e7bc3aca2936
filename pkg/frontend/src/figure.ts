/**
 * Fidelity-sweep figures: read a sweep CSV produced by the simulator CLI and
 * render one SVG line chart, one line per series value.  Rendering never
 * recomputes any physics; the CSV is the only input.
 */

import { existsSync, readFileSync, writeFileSync } from "fs";
import Papa from "papaparse";
import * as echarts from "echarts";

export interface FigureSpec {
  csvPath: string;
  xColumn: string;
  seriesColumn: string;
  yColumn: string;
  outPath: string;
  xLabel: string;
  yLabel: string;
  /** y-axis window; fidelity plots clip to [0.9, 1.0] by default */
  yMin: number;
  yMax: number;
}

export type FigureKind = "kappa" | "delta";

export function figureSpec(kind: FigureKind, csvPath: string, outPath: string): FigureSpec {
  const common = { csvPath, outPath, yColumn: "fidelity", yLabel: "fidelity", yMin: 0.9, yMax: 1.0 };
  if (kind === "kappa") {
    return {
      ...common,
      xColumn: "kappa_inv_us",
      seriesColumn: "T_us",
      xLabel: "cavity decay time 1/kappa (us)",
    };
  }
  if (kind === "delta") {
    return {
      ...common,
      xColumn: "delta",
      seriesColumn: "kappa_inv_us",
      xLabel: "preparation error delta",
    };
  }
  throw new Error(`unknown figure kind: ${kind}`);
}

export interface Series {
  name: string;
  points: Array<[number, number]>;
}

export function readRows(csvPath: string): Array<Record<string, string>> {
  if (!existsSync(csvPath)) {
    throw new Error(`CSV file not found: ${csvPath}`);
  }
  const parsed = Papa.parse<Record<string, string>>(readFileSync(csvPath, "utf8").trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`CSV parse error in ${csvPath}: ${parsed.errors[0].message}`);
  }
  return parsed.data;
}

export function buildSeries(rows: Array<Record<string, string>>, spec: FigureSpec): Series[] {
  if (rows.length === 0) {
    throw new Error(`no data rows in ${spec.csvPath}`);
  }
  for (const column of [spec.xColumn, spec.seriesColumn, spec.yColumn]) {
    if (!(column in rows[0])) {
      throw new Error(`column '${column}' missing from ${spec.csvPath} header`);
    }
  }
  const groups = new Map<string, Array<[number, number]>>();
  for (const row of rows) {
    const key = row[spec.seriesColumn];
    const x = Number(row[spec.xColumn]);
    const y = Number(row[spec.yColumn]);
    if (!Number.isFinite(x) || !Number.isFinite(y)) {
      throw new Error(`non-numeric data for (${spec.xColumn}, ${spec.yColumn}) in ${spec.csvPath}`);
    }
    if (!groups.has(key)) {
      groups.set(key, []);
    }
    groups.get(key)!.push([x, y]);
  }
  const series: Series[] = [];
  for (const [key, points] of groups) {
    points.sort((a, b) => a[0] - b[0]);
    series.push({ name: `${spec.seriesColumn} = ${key}`, points });
  }
  series.sort((a, b) => a.name.localeCompare(b.name, "en", { numeric: true }));
  return series;
}

export function buildChartOption(spec: FigureSpec, series: Series[]): echarts.EChartsOption {
  if (series.length === 0) {
    throw new Error(`no series to plot from ${spec.csvPath}`);
  }
  return {
    animation: false,
    legend: { top: 8, data: series.map((s) => s.name) },
    grid: { left: 70, right: 24, top: 48, bottom: 56 },
    xAxis: {
      type: "value",
      name: spec.xLabel,
      nameLocation: "middle",
      nameGap: 32,
      scale: true,
    },
    yAxis: {
      type: "value",
      name: spec.yLabel,
      nameLocation: "middle",
      nameGap: 48,
      min: spec.yMin,
      max: spec.yMax,
    },
    series: series.map((s) => ({
      type: "line",
      name: s.name,
      data: s.points,
      symbolSize: 6,
      lineStyle: { width: 2 },
    })),
  };
}

/**
 * The SVG renderer tags class names and clip-path ids with process-global
 * instance counters (zr0-cls-0, zr2-c0, ...).  Re-number every such token by
 * first appearance so identical inputs give byte-identical files.
 */
function canonicalizeClassNames(svg: string): string {
  const seen = new Map<string, string>();
  return svg.replace(/zr\d+-[A-Za-z]+-?\d+/g, (name) => {
    if (!seen.has(name)) {
      seen.set(name, `zr-id-${seen.size}`);
    }
    return seen.get(name)!;
  });
}

export function renderSvg(spec: FigureSpec): string {
  const series = buildSeries(readRows(spec.csvPath), spec);
  const option = buildChartOption(spec, series);
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: 800,
    height: 560,
  });
  chart.setOption(option);
  const svg = chart.renderToSVGString();
  chart.dispose();
  return canonicalizeClassNames(svg);
}

export function render(spec: FigureSpec): string {
  const svg = renderSvg(spec);
  writeFileSync(spec.outPath, svg, "utf8");
  return spec.outPath;
}

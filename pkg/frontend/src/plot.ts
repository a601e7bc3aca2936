/**
 * plot --csv PATH --figure {kappa,delta} --out PATH [--ymin Y] [--ymax Y]
 *
 * Renders one sweep CSV to an SVG figure.  The fidelity axis defaults to
 * [0.9, 1.0]; --ymin/--ymax widen it when the data sits elsewhere.  Exit
 * code 0 on success, 1 on any error (message on stderr).
 */

import { figureSpec, render, FigureKind } from "./figure";

interface CliArgs {
  csv: string;
  figure: FigureKind;
  out: string;
  ymin?: number;
  ymax?: number;
}

function parseArgs(argv: string[]): CliArgs {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key?.startsWith("--") || value === undefined) {
      throw new Error(`malformed arguments near '${key ?? ""}'`);
    }
    args.set(key.slice(2), value);
  }
  for (const required of ["csv", "figure", "out"]) {
    if (!args.has(required)) {
      throw new Error(`missing required flag --${required}`);
    }
  }
  const figure = args.get("figure")!;
  if (figure !== "kappa" && figure !== "delta") {
    throw new Error(`--figure must be 'kappa' or 'delta', got '${figure}'`);
  }
  const parsed: CliArgs = { csv: args.get("csv")!, figure, out: args.get("out")! };
  for (const bound of ["ymin", "ymax"] as const) {
    if (args.has(bound)) {
      const value = Number(args.get(bound));
      if (!Number.isFinite(value)) {
        throw new Error(`--${bound} must be a number`);
      }
      parsed[bound] = value;
    }
  }
  return parsed;
}

export function main(argv: string[]): number {
  try {
    const { csv, figure, out, ymin, ymax } = parseArgs(argv);
    const spec = figureSpec(figure, csv, out);
    if (ymin !== undefined) {
      spec.yMin = ymin;
    }
    if (ymax !== undefined) {
      spec.yMax = ymax;
    }
    const written = render(spec);
    console.log(`wrote ${written}`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}

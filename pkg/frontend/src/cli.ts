#!/usr/bin/env node
import { MissingColumn, MissingFile } from './errors.js';
import { ImageFormat, renderAll } from './render.js';

const USAGE = 'usage: render_plots <run_dir> [--out DIR] [--fmt png|svg]';

interface Args {
  runDir: string;
  outDir: string;
  format: ImageFormat;
}

export function parseArgs(argv: string[]): Args {
  let runDir: string | undefined;
  let outDir: string | undefined;
  let format: ImageFormat = 'png';
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    if (arg === '--out') {
      outDir = argv[++i];
    } else if (arg === '--fmt') {
      const value = argv[++i];
      if (value !== 'png' && value !== 'svg') {
        throw new Error(`unknown format '${value}'; expected png or svg`);
      }
      format = value;
    } else if (arg.startsWith('-')) {
      throw new Error(`unknown option '${arg}'`);
    } else if (runDir === undefined) {
      runDir = arg;
    } else {
      throw new Error(`unexpected argument '${arg}'`);
    }
  }
  if (runDir === undefined) {
    throw new Error(USAGE);
  }
  return { runDir, outDir: outDir ?? runDir, format };
}

export async function main(argv: string[]): Promise<number> {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    const written = await renderAll({
      runDir: args.runDir,
      outDir: args.outDir,
      format: args.format,
    });
    for (const path of written) {
      console.log(path);
    }
    return 0;
  } catch (err) {
    if (err instanceof MissingFile || err instanceof MissingColumn) {
      console.error(err.message);
      return 2;
    }
    console.error(`render failed: ${(err as Error).message}`);
    return 1;
  }
}

const invokedDirectly = process.argv[1] !== undefined
  && import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}

import { existsSync, mkdirSync, readFileSync, writeFileSync } from 'node:fs';
import { join } from 'node:path';

import { ChartSpec, renderSvg } from './charts.js';
import { indexedColumns, numericColumn, parseCsv, requireColumns, Table } from './csv.js';
import { MissingFile } from './errors.js';

export type ImageFormat = 'png' | 'svg';

export interface PlotJob {
  runDir: string;
  outDir: string;
  format: ImageFormat;
}

const REQUIRED_FILES = ['trace.csv', 'trajectory.csv', 'final_schedule.csv'] as const;

interface RunTables {
  trace: Table;
  trajectory: Table;
  schedule: Table;
}

export function loadRunDir(runDir: string): RunTables {
  const tables: Record<string, Table> = {};
  for (const name of REQUIRED_FILES) {
    const path = join(runDir, name);
    if (!existsSync(path)) {
      throw new MissingFile(path);
    }
    tables[name] = parseCsv(readFileSync(path, 'utf8'));
  }
  const trace = tables['trace.csv'];
  const trajectory = tables['trajectory.csv'];
  const schedule = tables['final_schedule.csv'];
  requireColumns(trace, 'trace.csv', ['k', 'J', 'D_sigma']);
  requireColumns(trajectory, 'trajectory.csv', ['t', 'mode']);
  requireColumns(schedule, 'final_schedule.csv', ['t_start', 'mode']);
  return { trace, trajectory, schedule };
}

function zip(xs: number[], ys: number[]): Array<[number, number]> {
  return xs.map((x, i) => [x, ys[i]]);
}

export function buildCharts(tables: RunTables): Record<string, ChartSpec> {
  const k = numericColumn(tables.trace, 'trace.csv', 'k');
  const cost = numericColumn(tables.trace, 'trace.csv', 'J');
  const dSigma = numericColumn(tables.trace, 'trace.csv', 'D_sigma');

  const tStart = numericColumn(tables.schedule, 'final_schedule.csv', 't_start');
  const mode = numericColumn(tables.schedule, 'final_schedule.csv', 'mode');

  const t = numericColumn(tables.trajectory, 'trajectory.csv', 't');
  const stateNames = indexedColumns(tables.trajectory, 'x');
  const states = stateNames.map((name) => ({
    name,
    points: zip(t, numericColumn(tables.trajectory, 'trajectory.csv', name)),
  }));

  return {
    schedule: {
      title: 'Final mode schedule',
      xLabel: 't',
      yLabel: 'mode index',
      series: [{ name: 'mode', points: zip(tStart, mode), step: true }],
    },
    states: {
      title: 'State trajectories of the final schedule',
      xLabel: 't',
      yLabel: 'state',
      series: states,
    },
    cost_vs_iter: {
      title: 'Cost vs iteration',
      xLabel: 'iteration k',
      yLabel: 'J',
      series: [{ name: 'J', points: zip(k, cost) }],
    },
    optfun_vs_iter: {
      title: 'Optimality value vs iteration',
      xLabel: 'iteration k',
      yLabel: 'D_sigma',
      series: [{ name: 'D_sigma', points: zip(k, dSigma) }],
    },
  };
}

async function writeImage(path: string, svg: string, format: ImageFormat): Promise<void> {
  if (format === 'svg') {
    writeFileSync(path, svg);
    return;
  }
  const { default: sharp } = await import('sharp');
  const png = await sharp(Buffer.from(svg)).png().toBuffer();
  writeFileSync(path, png);
}

/** Render the four run plots; returns the written file paths. */
export async function renderAll(job: PlotJob): Promise<string[]> {
  const charts = buildCharts(loadRunDir(job.runDir));
  mkdirSync(job.outDir, { recursive: true });
  const written: string[] = [];
  for (const [name, spec] of Object.entries(charts)) {
    const path = join(job.outDir, `${name}.${job.format}`);
    await writeImage(path, renderSvg(spec), job.format);
    written.push(path);
  }
  return written;
}

import { mkdtempSync, readFileSync, statSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { describe, expect, it } from 'vitest';

import { main } from '../src/cli.js';
import { parseCsv, numericColumn, indexedColumns } from '../src/csv.js';
import { MissingColumn, MissingFile } from '../src/errors.js';
import { loadRunDir, renderAll } from '../src/render.js';

const FIXTURE = fileURLToPath(new URL('./fixtures/paper_run', import.meta.url));

function tempDir(): string {
  return mkdtempSync(join(tmpdir(), 'plots-'));
}

function copyFixture(names: string[]): string {
  const dir = tempDir();
  for (const name of names) {
    writeFileSync(join(dir, name), readFileSync(join(FIXTURE, name)));
  }
  return dir;
}

describe('csv parsing', () => {
  it('reads headers and numeric columns', () => {
    const table = parseCsv('a,b\n1,2\n3,4\n');
    expect(table.header).toEqual(['a', 'b']);
    expect(numericColumn(table, 'f.csv', 'b')).toEqual([2, 4]);
  });

  it('names the missing column', () => {
    const table = parseCsv('a,b\n1,2\n');
    expect(() => numericColumn(table, 'f.csv', 'mode')).toThrowError(/'mode'/);
  });

  it('finds indexed state columns in order', () => {
    const table = parseCsv('t,x2,x1,p1,mode\n0,0,0,0,0\n');
    expect(indexedColumns(table, 'x')).toEqual(['x1', 'x2']);
  });
});

describe('renderAll on a real run directory', () => {
  it('writes four non-empty svg images', async () => {
    const out = tempDir();
    const written = await renderAll({ runDir: FIXTURE, outDir: out, format: 'svg' });
    expect(written).toHaveLength(4);
    const names = written.map((p) => p.split('/').pop()).sort();
    expect(names).toEqual(['cost_vs_iter.svg', 'optfun_vs_iter.svg',
      'schedule.svg', 'states.svg']);
    for (const path of written) {
      expect(statSync(path).size).toBeGreaterThan(0);
      expect(readFileSync(path, 'utf8')).toContain('<svg');
    }
  });

  it('writes four non-empty png images', async () => {
    const out = tempDir();
    const written = await renderAll({ runDir: FIXTURE, outDir: out, format: 'png' });
    expect(written).toHaveLength(4);
    for (const path of written) {
      expect(path.endsWith('.png')).toBe(true);
      const bytes = readFileSync(path);
      expect(bytes.length).toBeGreaterThan(0);
      expect(bytes.subarray(1, 4).toString()).toBe('PNG');
    }
  });

  it('is a pure reader: rendering twice leaves inputs untouched', async () => {
    const dir = copyFixture(['trace.csv', 'trajectory.csv', 'final_schedule.csv']);
    const before = readFileSync(join(dir, 'trace.csv'), 'utf8');
    const out = tempDir();
    await renderAll({ runDir: dir, outDir: out, format: 'svg' });
    await renderAll({ runDir: dir, outDir: out, format: 'svg' });
    expect(readFileSync(join(dir, 'trace.csv'), 'utf8')).toBe(before);
  });

  it('renders empty-but-headed trace as empty axes', async () => {
    const dir = copyFixture(['trajectory.csv', 'final_schedule.csv']);
    writeFileSync(join(dir, 'trace.csv'),
      'k,J,D_sigma,mu_eta,lambda,j_backtracks,switch_count,alt_opt\n');
    const out = tempDir();
    const written = await renderAll({ runDir: dir, outDir: out, format: 'svg' });
    expect(written).toHaveLength(4);
    for (const path of written) {
      expect(statSync(path).size).toBeGreaterThan(0);
    }
  });
});

describe('failure modes', () => {
  it('missing trajectory mode column is named', () => {
    const dir = copyFixture(['trace.csv', 'final_schedule.csv']);
    const rows = readFileSync(join(FIXTURE, 'trajectory.csv'), 'utf8')
      .split(/\r?\n/);
    const header = rows[0].split(',').filter((c) => c !== 'mode').join(',');
    writeFileSync(join(dir, 'trajectory.csv'),
      [header, ...rows.slice(1).map((r) => r.split(',').slice(0, -1).join(','))].join('\n'));
    let caught: unknown;
    try {
      loadRunDir(dir);
    } catch (err) {
      caught = err;
    }
    expect(caught).toBeInstanceOf(MissingColumn);
    expect((caught as MissingColumn).column).toBe('mode');
    expect((caught as Error).message).toContain('mode');
  });

  it('missing file is reported with its path', () => {
    const dir = copyFixture(['trace.csv', 'trajectory.csv']);
    let caught: unknown;
    try {
      loadRunDir(dir);
    } catch (err) {
      caught = err;
    }
    expect(caught).toBeInstanceOf(MissingFile);
    expect((caught as Error).message).toContain('final_schedule.csv');
  });
});

describe('cli', () => {
  it('renders the fixture directory and exits 0', async () => {
    const out = tempDir();
    const code = await main([FIXTURE, '--out', out, '--fmt', 'svg']);
    expect(code).toBe(0);
    expect(statSync(join(out, 'schedule.svg')).size).toBeGreaterThan(0);
  });

  it('exits 2 on a missing column', async () => {
    const dir = copyFixture(['trace.csv', 'final_schedule.csv']);
    writeFileSync(join(dir, 'trajectory.csv'), 't,x1,p1\n0,0,0\n');
    expect(await main([dir, '--out', tempDir()])).toBe(2);
  });

  it('exits 2 on bad arguments', async () => {
    expect(await main([])).toBe(2);
    expect(await main([FIXTURE, '--fmt', 'gif'])).toBe(2);
  });
});

import { MissingColumn } from './errors.js';

export interface Table {
  header: string[];
  rows: string[][];
}

/** Parse the simple comma-separated artifacts (no quoting, header row). */
export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    return { header: [], rows: [] };
  }
  const header = lines[0].split(',').map((h) => h.trim());
  const rows = lines.slice(1).map((line) => line.split(','));
  return { header, rows };
}

/** Extract one column as numbers, failing with the column name if absent. */
export function numericColumn(table: Table, file: string, column: string): number[] {
  const idx = table.header.indexOf(column);
  if (idx < 0) {
    throw new MissingColumn(file, column);
  }
  return table.rows.map((row) => Number(row[idx]));
}

export function requireColumns(table: Table, file: string, columns: string[]): void {
  for (const column of columns) {
    if (!table.header.includes(column)) {
      throw new MissingColumn(file, column);
    }
  }
}

/** Names of every column matching a prefixed index pattern, e.g. x1..xn. */
export function indexedColumns(table: Table, prefix: string): string[] {
  return table.header
    .filter((h) => new RegExp(`^${prefix}\\d+$`).test(h))
    .sort((a, b) => Number(a.slice(prefix.length)) - Number(b.slice(prefix.length)));
}

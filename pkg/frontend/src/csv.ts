import { readFileSync } from 'fs';
import Papa from 'papaparse';

import { SCHEMA_VERSION } from './schema.js';

/** User-facing failure: bad input data or spec, not a bug. */
export class PlotError extends Error {}

export interface Table {
  header: string[];
  rows: Record<string, string>[];
}

export function readCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, 'utf8');
  } catch {
    throw new PlotError(`cannot read ${path}`);
  }
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new PlotError(`${path}: ${parsed.errors[0].message}`);
  }
  const header = parsed.meta.fields ?? [];
  if (parsed.data.length === 0) {
    throw new PlotError(`${path}: no data rows`);
  }
  return { header, rows: parsed.data };
}

export function checkColumns(table: Table, required: string[], path: string): void {
  const missing = required.filter((c) => !table.header.includes(c));
  if (missing.length > 0) {
    throw new PlotError(`${path}: missing columns: ${missing.join(', ')}`);
  }
}

export function checkSchemaVersion(table: Table, path: string): void {
  for (const row of table.rows) {
    if (Number(row['schema_version']) !== SCHEMA_VERSION) {
      throw new PlotError(
        `${path}: schema_version ${row['schema_version']} != ${SCHEMA_VERSION}`,
      );
    }
  }
}

export function num(row: Record<string, string>, col: string): number {
  const v = Number(row[col]);
  if (!Number.isFinite(v)) {
    throw new PlotError(`non-numeric value ${JSON.stringify(row[col])} in column ${col}`);
  }
  return v;
}

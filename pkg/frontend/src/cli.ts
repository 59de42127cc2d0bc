#!/usr/bin/env node
import { readFileSync, writeFileSync } from 'fs';

import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';
import { ZodError } from 'zod';

import { PlotError } from './csv.js';
import { renderFigure } from './figures.js';
import { figureSpecSchema } from './schema.js';

export function plotFromSpecFile(specPath: string): string {
  let raw: string;
  try {
    raw = readFileSync(specPath, 'utf8');
  } catch {
    throw new PlotError(`cannot read spec file ${specPath}`);
  }
  let json: unknown;
  try {
    json = JSON.parse(raw);
  } catch (e) {
    throw new PlotError(`${specPath}: invalid JSON (${(e as Error).message})`);
  }
  const spec = figureSpecSchema.parse(json);
  const svg = renderFigure(spec);
  writeFileSync(spec.out, svg);
  return spec.out;
}

export function main(argv: string[]): number {
  const args = yargs(argv)
    .command('plot', 'render one figure from a JSON figure spec', (y) =>
      y.option('spec', { type: 'string', demandOption: true, describe: 'figure spec JSON file' }),
    )
    .demandCommand(1)
    .strict()
    .exitProcess(false)
    .parseSync();
  try {
    const out = plotFromSpecFile(args.spec as string);
    console.log(out);
    return 0;
  } catch (e) {
    if (e instanceof PlotError) {
      console.error(`error: ${e.message}`);
      return 1;
    }
    if (e instanceof ZodError) {
      console.error(`error: invalid figure spec: ${e.issues.map((i) => `${i.path.join('.')}: ${i.message}`).join('; ')}`);
      return 1;
    }
    throw e;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split('/').pop()!);
if (invokedDirectly) {
  process.exit(main(hideBin(process.argv)));
}

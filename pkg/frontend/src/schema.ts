import { z } from 'zod';

// must match the python side (fsrlab.experiments.SCHEMA_VERSION)
export const SCHEMA_VERSION = 1;

export const figureSpecSchema = z.object({
  kind: z.enum(['loglog-sweep', 'overlay-1d', 'heatmap-2d']),
  input: z.string(),
  out: z.string(),
  referenceSlopes: z.array(z.number()).default([]),
  xLabel: z.string().optional(),
  yLabel: z.string().optional(),
  title: z.string().optional(),
  // fitted slope from the CLI sidecar, printed in the legend when present
  fittedSlope: z.number().optional(),
});

export type FigureSpec = z.infer<typeof figureSpecSchema>;

/** Columns every input of a given figure kind must carry.  The sweep kind
 * additionally needs an rmse column, but either the raw per-seed name or the
 * aggregated name is acceptable — checked separately in figures.ts. */
export const REQUIRED_COLUMNS: Record<FigureSpec['kind'], string[]> = {
  'loglog-sweep': ['schema_version', 'method', 'axis', 'axis_value'],
  'overlay-1d': ['schema_version', 'method', 'x', 'truth', 'value'],
  'heatmap-2d': ['schema_version', 'method', 'x', 'y', 'truth', 'value'],
};

import { mkdtempSync, readFileSync, writeFileSync } from 'fs';
import { tmpdir } from 'os';
import { join } from 'path';

import { describe, expect, it } from 'vitest';

import { PlotError, readCsv } from '../src/csv';
import { renderHeatmap2d, renderLoglogSweep, renderOverlay1d } from '../src/figures';
import { main, plotFromSpecFile } from '../src/cli';
import { FigureSpec } from '../src/schema';

const FIXTURES = join(__dirname, 'fixtures');
const SWEEP = join(FIXTURES, 'shot_sweep.csv');
const POINTS_1D = join(FIXTURES, 'adaptive_points.csv');
const POINTS_2D = join(FIXTURES, 'heatmap_points.csv');

function tmp(): string {
  return mkdtempSync(join(tmpdir(), 'plots-'));
}

function spec(partial: Partial<FigureSpec> & Pick<FigureSpec, 'kind' | 'input'>): FigureSpec {
  return { out: join(tmp(), 'fig.svg'), referenceSlopes: [], ...partial };
}

function count(svg: string, re: RegExp): number {
  return (svg.match(re) ?? []).length;
}

describe('loglog-sweep', () => {
  const base = spec({ kind: 'loglog-sweep', input: SWEEP, referenceSlopes: [-0.5] });

  it('draws one series per method with a legend', () => {
    const svg = renderLoglogSweep(base);
    expect(count(svg, /class="series"/g)).toBe(2);
    expect(svg).toContain('>rsr<');
    expect(svg).toContain('>fsr<');
    // 3 sweep points per method, seeds averaged into one marker each
    expect(count(svg, /<circle/g)).toBe(6);
  });

  it('draws and labels the reference line', () => {
    const svg = renderLoglogSweep(base);
    expect(count(svg, /class="reference"/g)).toBe(1);
    expect(svg).toContain('O(n_shot^-0.5)');
  });

  it('anchors reference lines at the first data point', () => {
    // slope 0 -> horizontal line through the first marker
    const svg = renderLoglogSweep({ ...base, referenceSlopes: [0] });
    const ref = svg.match(/d="M([\d.]+),([\d.]+)L([\d.]+),([\d.]+)" [^>]*class="reference"/);
    expect(ref).not.toBeNull();
    expect(Number(ref![2])).toBeCloseTo(Number(ref![4]), 6);
    // path coordinates are emitted with 3-digit precision
    const firstMarker = svg.match(/<circle cx="([\d.]+)" cy="([\d.]+)"/);
    expect(Number(ref![2])).toBeCloseTo(Number(firstMarker![2]), 2);
  });

  it('accepts aggregated CSVs (mean_rmse column)', () => {
    const dir = tmp();
    const rows = readCsv(SWEEP).rows.filter((r) => r.seed === '0');
    const agg = dir + '/agg.csv';
    writeFileSync(
      agg,
      'schema_version,method,axis,axis_value,n_seeds,mean_rmse,std_rmse\n' +
        rows.map((r) => `1,${r.method},n_shot,${r.axis_value},1,${r.rmse},0.0`).join('\n') +
        '\n',
    );
    const svg = renderLoglogSweep(spec({ kind: 'loglog-sweep', input: agg }));
    expect(count(svg, /class="series"/g)).toBe(2);
  });

  it('lists missing columns by name', () => {
    const dir = tmp();
    const bad = dir + '/bad.csv';
    writeFileSync(bad, 'schema_version,axis_value,rmse\n1,8,0.5\n');
    expect(() => renderLoglogSweep(spec({ kind: 'loglog-sweep', input: bad }))).toThrow(
      /missing columns: method, axis/,
    );
  });

  it('rejects an empty CSV', () => {
    const dir = tmp();
    const empty = dir + '/empty.csv';
    writeFileSync(empty, 'schema_version,method,axis,axis_value,rmse\n');
    expect(() => renderLoglogSweep(spec({ kind: 'loglog-sweep', input: empty }))).toThrow(
      PlotError,
    );
    expect(() => renderLoglogSweep(spec({ kind: 'loglog-sweep', input: empty }))).toThrow(
      /no data rows/,
    );
  });

  it('rejects a schema version it does not understand', () => {
    const dir = tmp();
    const v2 = dir + '/v2.csv';
    writeFileSync(v2, 'schema_version,method,axis,axis_value,rmse\n2,rsr,M,8,0.5\n');
    expect(() => renderLoglogSweep(spec({ kind: 'loglog-sweep', input: v2 }))).toThrow(
      /schema_version 2/,
    );
  });
});

describe('overlay-1d', () => {
  it('draws a truth curve and reconstruction markers', () => {
    const svg = renderOverlay1d(spec({ kind: 'overlay-1d', input: POINTS_1D }));
    expect(count(svg, /class="truth"/g)).toBe(1);
    expect(count(svg, /class="marker"/g)).toBe(64);
    expect(svg).toContain('fsr-adaptive reconstruction');
  });

  it('rejects a 2D points file', () => {
    expect(() => renderOverlay1d(spec({ kind: 'overlay-1d', input: POINTS_2D }))).toThrow(
      /no 1D rows/,
    );
  });
});

describe('heatmap-2d', () => {
  it('renders the truth / reconstruction / error triptych', () => {
    const svg = renderHeatmap2d(spec({ kind: 'heatmap-2d', input: POINTS_2D }));
    expect(count(svg, /class="panel-label"/g)).toBe(3);
    expect(svg).toContain('>truth<');
    expect(svg).toContain('>reconstruction<');
    // 16x16 grid, three panels, plus the background rect
    expect(count(svg, /<rect/g)).toBe(3 * 16 * 16 + 1);
  });
});

describe('cli', () => {
  it('plot --spec writes the SVG and exits 0', () => {
    const dir = tmp();
    const out = join(dir, 'sweep.svg');
    const specPath = join(dir, 'fig.json');
    writeFileSync(
      specPath,
      JSON.stringify({
        kind: 'loglog-sweep',
        input: SWEEP,
        out,
        referenceSlopes: [-0.5],
        title: 'shot sweep',
      }),
    );
    expect(main(['plot', '--spec', specPath])).toBe(0);
    const svg = readFileSync(out, 'utf8');
    expect(svg.startsWith('<svg')).toBe(true);
    expect(svg).toContain('shot sweep');
  });

  it('exits nonzero on a bad spec or bad input', () => {
    const dir = tmp();
    const specPath = join(dir, 'fig.json');
    writeFileSync(specPath, JSON.stringify({ kind: 'pie-chart', input: SWEEP, out: 'x.svg' }));
    expect(main(['plot', '--spec', specPath])).toBe(1);
    expect(main(['plot', '--spec', join(dir, 'missing.json')])).toBe(1);
    const empty = join(dir, 'empty.csv');
    writeFileSync(empty, 'schema_version,method,axis,axis_value,rmse\n');
    writeFileSync(
      specPath,
      JSON.stringify({ kind: 'loglog-sweep', input: empty, out: join(dir, 'y.svg') }),
    );
    expect(main(['plot', '--spec', specPath])).toBe(1);
  });

  it('plotFromSpecFile returns the output path', () => {
    const dir = tmp();
    const out = join(dir, 'overlay.svg');
    const specPath = join(dir, 'fig.json');
    writeFileSync(specPath, JSON.stringify({ kind: 'overlay-1d', input: POINTS_1D, out }));
    expect(plotFromSpecFile(specPath)).toBe(out);
    expect(readFileSync(out, 'utf8')).toContain('</svg>');
  });
});

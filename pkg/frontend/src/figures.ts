import { scaleLinear, scaleLog } from 'd3-scale';
import { line } from 'd3-shape';

import { PlotError, Table, checkColumns, checkSchemaVersion, num, readCsv } from './csv.js';
import { FigureSpec, REQUIRED_COLUMNS } from './schema.js';

const WIDTH = 640;
const HEIGHT = 440;
const MARGIN = { top: 40, right: 30, bottom: 55, left: 70 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];

function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

function svgDoc(body: string, title?: string): string {
  const head = title
    ? `<text x="${WIDTH / 2}" y="20" text-anchor="middle" font-size="15">${esc(title)}</text>`
    : '';
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n${head}\n${body}\n</svg>\n`
  );
}

function axisLabel(text: string | undefined, fallback: string, axis: 'x' | 'y'): string {
  const label = esc(text ?? fallback);
  if (axis === 'x') {
    return `<text x="${MARGIN.left + PLOT_W / 2}" y="${HEIGHT - 10}" text-anchor="middle" font-size="13">${label}</text>`;
  }
  return (
    `<text x="18" y="${MARGIN.top + PLOT_H / 2}" text-anchor="middle" font-size="13" ` +
    `transform="rotate(-90 18 ${MARGIN.top + PLOT_H / 2})">${label}</text>`
  );
}

function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-2 || Math.abs(v) >= 1e4)) {
    return v.toExponential(0).replace('e', 'e');
  }
  return String(Number(v.toPrecision(3)));
}

interface Scale {
  (v: number): number;
  ticks(n?: number): number[];
}

function axes(sx: Scale, sy: Scale): string {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + PLOT_H;
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0 + PLOT_W}" y2="${y0}" stroke="black"/>`);
  parts.push(`<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="black"/>`);
  for (const t of sx.ticks(6)) {
    const px = sx(t);
    if (px < x0 - 0.5 || px > x0 + PLOT_W + 0.5) continue;
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 19}" text-anchor="middle" font-size="11">${fmtTick(t)}</text>`,
    );
  }
  for (const t of sy.ticks(6)) {
    const py = sy(t);
    if (py < MARGIN.top - 0.5 || py > y0 + 0.5) continue;
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${py + 4}" text-anchor="end" font-size="11">${fmtTick(t)}</text>`,
    );
  }
  return parts.join('\n');
}

function legend(entries: { label: string; color: string; dashed?: boolean }[]): string {
  const x = MARGIN.left + 12;
  return entries
    .map((e, i) => {
      const y = MARGIN.top + 14 + 18 * i;
      const dash = e.dashed ? ' stroke-dasharray="5 3"' : '';
      return (
        `<line x1="${x}" y1="${y - 4}" x2="${x + 24}" y2="${y - 4}" stroke="${e.color}" stroke-width="2"${dash}/>` +
        `<text x="${x + 30}" y="${y}" font-size="12" class="legend">${esc(e.label)}</text>`
      );
    })
    .join('\n');
}

// ---------------------------------------------------------------------------
// loglog-sweep

interface Series {
  method: string;
  points: [number, number][]; // (axis_value, rmse), mean over seeds, ascending
}

function sweepSeries(table: Table, path: string): { series: Series[]; yCol: string } {
  const yCol = table.header.includes('mean_rmse')
    ? 'mean_rmse'
    : table.header.includes('rmse')
      ? 'rmse'
      : null;
  if (yCol === null) {
    throw new PlotError(`${path}: missing columns: rmse (or mean_rmse)`);
  }
  const byMethod = new Map<string, Map<number, number[]>>();
  for (const row of table.rows) {
    const method = row['method'];
    const x = num(row, 'axis_value');
    const y = num(row, yCol);
    if (x <= 0 || y <= 0) {
      throw new PlotError(`${path}: log-log plot needs positive values, got (${x}, ${y})`);
    }
    let perX = byMethod.get(method);
    if (!perX) byMethod.set(method, (perX = new Map()));
    (perX.get(x) ?? perX.set(x, []).get(x)!).push(y);
  }
  const series: Series[] = [];
  for (const [method, perX] of byMethod) {
    const points = [...perX.entries()]
      .map(([x, ys]): [number, number] => [x, ys.reduce((a, b) => a + b) / ys.length])
      .sort((a, b) => a[0] - b[0]);
    series.push({ method, points });
  }
  return { series, yCol };
}

export function renderLoglogSweep(spec: FigureSpec): string {
  const table = readCsv(spec.input);
  checkColumns(table, REQUIRED_COLUMNS['loglog-sweep'], spec.input);
  checkSchemaVersion(table, spec.input);
  const { series } = sweepSeries(table, spec.input);
  const axisName = table.rows[0]['axis'] || 'axis_value';

  const allX = series.flatMap((s) => s.points.map((p) => p[0]));
  const allY = series.flatMap((s) => s.points.map((p) => p[1]));

  // reference lines are anchored at the first data point of the first series
  const [x0, y0] = series[0].points[0];
  const xMax = Math.max(...allX);
  const refYs = spec.referenceSlopes.flatMap((s) => [y0, y0 * Math.pow(xMax / x0, s)]);

  const sx = scaleLog()
    .domain([Math.min(...allX), xMax])
    .range([MARGIN.left, MARGIN.left + PLOT_W]) as unknown as Scale;
  const sy = scaleLog()
    .domain([Math.min(...allY, ...refYs), Math.max(...allY, ...refYs)])
    .range([MARGIN.top + PLOT_H, MARGIN.top])
    .nice() as unknown as Scale;

  const path = line<[number, number]>()
    .x((p) => sx(p[0]))
    .y((p) => sy(p[1]));

  const parts: string[] = [axes(sx, sy)];
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    parts.push(
      `<path d="${path(s.points)}" fill="none" stroke="${color}" stroke-width="2" class="series"/>`,
    );
    for (const [px, py] of s.points) {
      parts.push(`<circle cx="${sx(px)}" cy="${sy(py)}" r="3.5" fill="${color}"/>`);
    }
  });
  for (const slope of spec.referenceSlopes) {
    const pts: [number, number][] = [
      [x0, y0],
      [xMax, y0 * Math.pow(xMax / x0, slope)],
    ];
    parts.push(
      `<path d="${path(pts)}" fill="none" stroke="#999" stroke-width="1.5" ` +
        `stroke-dasharray="6 4" class="reference"/>`,
    );
  }
  const entries = series.map((s, i) => ({
    label: s.method + (spec.fittedSlope !== undefined ? ` (fit slope ${spec.fittedSlope.toFixed(2)})` : ''),
    color: PALETTE[i % PALETTE.length],
  }));
  for (const slope of spec.referenceSlopes) {
    entries.push({ label: `O(${axisName}^${slope})`, color: '#999', dashed: true } as never);
  }
  parts.push(legend(entries));
  parts.push(axisLabel(spec.xLabel, axisName, 'x'));
  parts.push(axisLabel(spec.yLabel, 'RMSE', 'y'));
  return svgDoc(parts.join('\n'), spec.title);
}

// ---------------------------------------------------------------------------
// overlay-1d

export function renderOverlay1d(spec: FigureSpec): string {
  const table = readCsv(spec.input);
  checkColumns(table, REQUIRED_COLUMNS['overlay-1d'], spec.input);
  checkSchemaVersion(table, spec.input);
  // one seed's reconstruction; the truth column is seed-independent
  const seed = table.rows[0]['seed'];
  const rows = table.rows
    .filter((r) => r['seed'] === seed && (r['y'] ?? '') === '')
    .map((r) => ({ x: num(r, 'x'), truth: num(r, 'truth'), value: num(r, 'value') }))
    .sort((a, b) => a.x - b.x);
  if (rows.length === 0) {
    throw new PlotError(`${spec.input}: no 1D rows (is this a 2D points file?)`);
  }
  const ys = rows.flatMap((r) => [r.truth, r.value]);
  const sx = scaleLinear()
    .domain([rows[0].x, rows[rows.length - 1].x])
    .range([MARGIN.left, MARGIN.left + PLOT_W]) as unknown as Scale;
  const sy = scaleLinear()
    .domain([Math.min(...ys), Math.max(...ys)])
    .range([MARGIN.top + PLOT_H, MARGIN.top])
    .nice() as unknown as Scale;

  const truthPath = line<{ x: number; truth: number }>()
    .x((r) => sx(r.x))
    .y((r) => sy(r.truth));

  const parts: string[] = [axes(sx, sy)];
  parts.push(
    `<path d="${truthPath(rows)}" fill="none" stroke="#333" stroke-width="2" class="truth"/>`,
  );
  for (const r of rows) {
    parts.push(
      `<circle cx="${sx(r.x)}" cy="${sy(r.value)}" r="2.5" fill="none" ` +
        `stroke="${PALETTE[0]}" stroke-width="1.5" class="marker"/>`,
    );
  }
  const method = table.rows[0]['method'];
  parts.push(
    legend([
      { label: 'truth', color: '#333' },
      { label: `${method} reconstruction`, color: PALETTE[0] },
    ]),
  );
  parts.push(axisLabel(spec.xLabel, 'x', 'x'));
  parts.push(axisLabel(spec.yLabel, 'f(x)', 'y'));
  return svgDoc(parts.join('\n'), spec.title);
}

// ---------------------------------------------------------------------------
// heatmap-2d

/** Small diverging-free sequential ramp (dark blue -> yellow). */
function rampColor(t: number): string {
  const c = Math.max(0, Math.min(1, t));
  const r = Math.round(255 * Math.min(1, 0.1 + 1.5 * c));
  const g = Math.round(255 * (0.05 + 0.85 * c));
  const b = Math.round(255 * (0.45 - 0.4 * c + 0.15 * (1 - c)));
  return `rgb(${r},${g},${b})`;
}

function panel(
  xs: number[],
  ys: number[],
  value: (x: number, y: number) => number,
  lo: number,
  hi: number,
  originX: number,
  width: number,
  label: string,
): string {
  const cellW = width / xs.length;
  const cellH = PLOT_H / ys.length;
  const parts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    for (let j = 0; j < ys.length; j++) {
      const t = hi > lo ? (value(xs[i], ys[j]) - lo) / (hi - lo) : 0.5;
      const px = originX + i * cellW;
      const py = MARGIN.top + PLOT_H - (j + 1) * cellH;
      parts.push(
        `<rect x="${px.toFixed(2)}" y="${py.toFixed(2)}" width="${(cellW + 0.5).toFixed(2)}" ` +
          `height="${(cellH + 0.5).toFixed(2)}" fill="${rampColor(t)}"/>`,
      );
    }
  }
  parts.push(
    `<text x="${originX + width / 2}" y="${MARGIN.top + PLOT_H + 16}" ` +
      `text-anchor="middle" font-size="12" class="panel-label">${esc(label)}</text>`,
  );
  return parts.join('\n');
}

export function renderHeatmap2d(spec: FigureSpec): string {
  const table = readCsv(spec.input);
  checkColumns(table, REQUIRED_COLUMNS['heatmap-2d'], spec.input);
  checkSchemaVersion(table, spec.input);
  const seed = table.rows[0]['seed'];
  const rows = table.rows
    .filter((r) => r['seed'] === seed && (r['y'] ?? '') !== '')
    .map((r) => ({
      x: num(r, 'x'),
      y: num(r, 'y'),
      truth: num(r, 'truth'),
      value: num(r, 'value'),
    }));
  if (rows.length === 0) {
    throw new PlotError(`${spec.input}: no 2D rows (empty y column)`);
  }
  const xs = [...new Set(rows.map((r) => r.x))].sort((a, b) => a - b);
  const ys = [...new Set(rows.map((r) => r.y))].sort((a, b) => a - b);
  const grid = new Map(rows.map((r) => [`${r.x}|${r.y}`, r]));
  const cell = (x: number, y: number) => {
    const r = grid.get(`${x}|${y}`);
    if (!r) throw new PlotError(`${spec.input}: not a full tensor grid (missing ${x}, ${y})`);
    return r;
  };

  const vals = rows.flatMap((r) => [r.truth, r.value]);
  const lo = Math.min(...vals);
  const hi = Math.max(...vals);
  const errHi = Math.max(...rows.map((r) => Math.abs(r.value - r.truth)));

  const gap = 14;
  const w = (PLOT_W - 2 * gap) / 3;
  const parts = [
    panel(xs, ys, (x, y) => cell(x, y).truth, lo, hi, MARGIN.left, w, 'truth'),
    panel(xs, ys, (x, y) => cell(x, y).value, lo, hi, MARGIN.left + w + gap, w, 'reconstruction'),
    panel(
      xs,
      ys,
      (x, y) => Math.abs(cell(x, y).value - cell(x, y).truth),
      0,
      errHi,
      MARGIN.left + 2 * (w + gap),
      w,
      `|error| (max ${errHi.toExponential(1)})`,
    ),
  ];
  return svgDoc(parts.join('\n'), spec.title ?? `${table.rows[0]['method']} 2D readout`);
}

// ---------------------------------------------------------------------------

export function renderFigure(spec: FigureSpec): string {
  switch (spec.kind) {
    case 'loglog-sweep':
      return renderLoglogSweep(spec);
    case 'overlay-1d':
      return renderOverlay1d(spec);
    case 'heatmap-2d':
      return renderHeatmap2d(spec);
  }
}

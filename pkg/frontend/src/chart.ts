/**
 * Dependency-free SVG line chart for leaderboard trend points.
 * x is either a timestamp (time axis) or a parameter count (model_size).
 */

import { TrendPoint } from './api.js';

const WIDTH = 640;
const HEIGHT = 240;
const MARGIN = { top: 12, right: 16, bottom: 28, left: 52 };

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag) as SVGElement;
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

function xValue(point: TrendPoint, axis: 'time' | 'model_size'): number {
  return axis === 'time' ? Date.parse(String(point.x)) : Number(point.x);
}

function formatX(value: number, axis: 'time' | 'model_size'): string {
  if (axis === 'time') return new Date(value).toISOString().slice(0, 10);
  if (value >= 1e9) return `${(value / 1e9).toFixed(1)}B`;
  if (value >= 1e6) return `${(value / 1e6).toFixed(1)}M`;
  return String(value);
}

export function renderTrendChart(points: TrendPoint[], axis: 'time' | 'model_size'): SVGElement {
  const svg = svgEl('svg', {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: 'trend-chart',
    role: 'img',
  });
  if (points.length === 0) {
    const empty = svgEl('text', { x: String(WIDTH / 2), y: String(HEIGHT / 2), class: 'chart-empty' });
    empty.textContent = 'no matching evaluations';
    svg.append(empty);
    return svg;
  }

  const xs = points.map((p) => xValue(p, axis));
  const ys = points.map((p) => p.y);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys, 0);
  const yMax = Math.max(...ys);
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) =>
    MARGIN.left + (xMax === xMin ? plotW / 2 : ((x - xMin) / (xMax - xMin)) * plotW);
  const sy = (y: number) =>
    MARGIN.top + plotH - (yMax === yMin ? plotH / 2 : ((y - yMin) / (yMax - yMin)) * plotH);

  svg.append(
    svgEl('line', {
      x1: String(MARGIN.left), y1: String(MARGIN.top + plotH),
      x2: String(MARGIN.left + plotW), y2: String(MARGIN.top + plotH),
      class: 'axis',
    }),
    svgEl('line', {
      x1: String(MARGIN.left), y1: String(MARGIN.top),
      x2: String(MARGIN.left), y2: String(MARGIN.top + plotH),
      class: 'axis',
    }),
  );

  const path = points
    .map((p, i) => `${i === 0 ? 'M' : 'L'}${sx(xValue(p, axis)).toFixed(1)},${sy(p.y).toFixed(1)}`)
    .join(' ');
  svg.append(svgEl('path', { d: path, class: 'trend-line', fill: 'none' }));

  for (const point of points) {
    const circle = svgEl('circle', {
      cx: sx(xValue(point, axis)).toFixed(1),
      cy: sy(point.y).toFixed(1),
      r: '3.5',
      class: 'trend-point',
      'data-asset': point.asset_id,
    });
    const title = svgEl('title', {});
    title.textContent = `${point.asset_id}: ${point.y} @ ${formatX(xValue(point, axis), axis)}`;
    circle.append(title);
    svg.append(circle);
  }

  const labels: [number, string, string][] = [
    [MARGIN.left, formatX(xMin, axis), 'start'],
    [MARGIN.left + plotW, formatX(xMax, axis), 'end'],
  ];
  for (const [x, text, anchor] of labels) {
    const label = svgEl('text', {
      x: String(x), y: String(HEIGHT - 8), class: 'tick', 'text-anchor': anchor,
    });
    label.textContent = text;
    svg.append(label);
  }
  for (const [y, value] of [[sy(yMax), yMax], [sy(yMin), yMin]] as [number, number][]) {
    const label = svgEl('text', {
      x: String(MARGIN.left - 6), y: String(y + 4), class: 'tick', 'text-anchor': 'end',
    });
    label.textContent = String(value);
    svg.append(label);
  }
  return svg;
}

/**
 * Leaderboard page: five dependent filter dropdowns, the ranked table,
 * a client-side name search that never renumbers ranks, and a trend
 * chart that toggles between time and model-size axes.
 */

import {
  FILTER_DIMENSIONS,
  FilterDimension,
  LeaderboardResponse,
  RankedEntry,
  fetchFilterValues,
  fetchLeaderboard,
  fetchTrends,
} from './api.js';
import { renderTrendChart } from './chart.js';
import { clear, el, errorPanel, option } from './dom.js';
import { LeaderboardState, leaderboardQueryParams } from './state.js';

const DIMENSION_LABELS: Record<FilterDimension, string> = {
  benchmark: 'Benchmark',
  implementation: 'Implementation',
  language: 'Language',
  metric: 'Metric',
  metric_config: 'Metric configuration',
};

const STATE_KEYS: Record<FilterDimension, keyof LeaderboardState> = {
  benchmark: 'benchmark',
  implementation: 'implementation',
  language: 'language',
  metric: 'metric',
  metric_config: 'metric_config',
};

/** Rows surviving the name search; rank numbers are left untouched. */
export function visibleRows(entries: RankedEntry[], search: string): RankedEntry[] {
  if (!search) return entries;
  const needle = search.toLowerCase();
  return entries.filter((entry) => entry.name.toLowerCase().includes(needle));
}

export class LeaderboardPage {
  private controller: AbortController | null = null;
  private entries: RankedEntry[] = [];
  private emptyReason: string | null = null;

  constructor(
    private state: LeaderboardState,
    private onStateChange: (state: LeaderboardState) => void,
  ) {}

  mount(root: HTMLElement): void {
    clear(root);
    const filters = el('div', { class: 'filter-bar', 'data-testid': 'leaderboard-filters' });
    for (const dimension of FILTER_DIMENSIONS) {
      const select = el('select', { 'data-dimension': dimension, 'aria-label': DIMENSION_LABELS[dimension] });
      select.addEventListener('change', () => {
        this.state[STATE_KEYS[dimension]] = (select as HTMLSelectElement).value as never;
        this.onStateChange(this.state);
        void this.refresh(root);
      });
      filters.append(el('label', { class: 'filter' }, [DIMENSION_LABELS[dimension], select]));
    }

    const search = el('input', {
      type: 'search',
      placeholder: 'Search by model name',
      'data-testid': 'name-search',
    }) as HTMLInputElement;
    search.value = this.state.name_search;
    search.addEventListener('input', () => {
      this.state.name_search = search.value;
      this.onStateChange(this.state);
      this.renderTable(root); // client-side row hiding only
    });
    filters.append(el('label', { class: 'filter' }, ['Name search', search]));

    const axisToggle = el('div', { class: 'axis-toggle' });
    for (const axis of ['time', 'model_size'] as const) {
      const button = el(
        'button',
        { 'data-axis': axis, class: axis === this.state.axis ? 'active' : '' },
        [axis === 'time' ? 'Over time' : 'By model size'],
      );
      button.addEventListener('click', () => {
        this.state.axis = axis;
        this.onStateChange(this.state);
        void this.refreshChart(root);
      });
      axisToggle.append(button);
    }

    root.append(
      el('h2', {}, ['Leaderboard']),
      filters,
      el('div', { 'data-testid': 'leaderboard-status', class: 'status' }),
      el('div', { 'data-testid': 'leaderboard-table-holder' }),
      el('h3', {}, ['Performance trend']),
      axisToggle,
      el('div', { 'data-testid': 'trend-holder' }),
    );
    void this.refresh(root);
  }

  /** Reload dropdown values, ranking, and trend (latest request wins). */
  async refresh(root: HTMLElement): Promise<void> {
    this.controller?.abort();
    this.controller = new AbortController();
    const signal = this.controller.signal;
    const status = root.querySelector<HTMLElement>('[data-testid="leaderboard-status"]')!;
    clear(status);
    try {
      await this.refreshDropdowns(root, signal);
      if (this.state.benchmark && this.state.metric) {
        const params = leaderboardQueryParams(this.state);
        const response: LeaderboardResponse = await fetchLeaderboard(params, signal);
        this.entries = response.entries;
        this.emptyReason = response.empty_reason;
      } else {
        this.entries = [];
        this.emptyReason = 'pick a benchmark and a metric to see the ranking';
      }
      this.renderTable(root);
      await this.refreshChart(root, signal);
    } catch (error) {
      if ((error as Error).name === 'AbortError') return;
      clear(status);
      status.append(errorPanel(String((error as Error).message ?? error), () => void this.refresh(root)));
    }
  }

  private async refreshDropdowns(root: HTMLElement, signal: AbortSignal): Promise<void> {
    // Dependent narrowing: each dropdown is restricted by the values
    // chosen in the other dimensions (the API skips the listed one).
    const params = leaderboardQueryParams(this.state);
    const results = await Promise.all(
      FILTER_DIMENSIONS.map((dimension) => fetchFilterValues(dimension, params, signal)),
    );
    for (const [index, dimension] of FILTER_DIMENSIONS.entries()) {
      const select = root.querySelector<HTMLSelectElement>(`select[data-dimension="${dimension}"]`)!;
      const current = this.state[STATE_KEYS[dimension]] as string;
      clear(select);
      select.append(option('', '(any)', current === ''));
      for (const value of results[index].values) {
        select.append(option(value, value, value === current));
      }
      // A previously chosen value that the narrowing removed stays
      // selectable so the user can see and undo it.
      if (current && !results[index].values.includes(current)) {
        select.append(option(current, `${current} (no longer available)`, true));
      }
    }
  }

  renderTable(root: HTMLElement): void {
    const holder = root.querySelector<HTMLElement>('[data-testid="leaderboard-table-holder"]')!;
    clear(holder);
    if (this.entries.length === 0) {
      holder.append(
        el('p', { class: 'empty-reason', 'data-testid': 'empty-reason' }, [
          this.emptyReason ?? 'no models report evaluations for this setting',
        ]),
      );
      return;
    }
    const rows = visibleRows(this.entries, this.state.name_search);
    const body = el('tbody');
    for (const entry of rows) {
      body.append(
        el('tr', { 'data-asset': entry.asset_id }, [
          el('td', { class: 'rank-badge', 'data-testid': 'rank-badge' }, [String(entry.rank)]),
          el('td', {}, [
            el('a', { href: `#/assets/${entry.asset_id}` }, [entry.name]),
          ]),
          el('td', { class: 'score' }, [String(entry.score)]),
          el('td', {}, [entry.parameter_count === null ? '—' : entry.parameter_count.toLocaleString('en-US')]),
          el('td', {}, [entry.created_at.slice(0, 10)]),
        ]),
      );
    }
    const table = el('table', { class: 'leaderboard', 'data-testid': 'leaderboard-table' }, [
      el('thead', {}, [
        el('tr', {}, [
          el('th', {}, ['#']),
          el('th', {}, ['Model']),
          el('th', {}, ['Score']),
          el('th', {}, ['Parameters']),
          el('th', {}, ['Created']),
        ]),
      ]),
      body,
    ]);
    holder.append(table);
  }

  private async refreshChart(root: HTMLElement, signal?: AbortSignal): Promise<void> {
    const holder = root.querySelector<HTMLElement>('[data-testid="trend-holder"]')!;
    for (const button of root.querySelectorAll<HTMLButtonElement>('.axis-toggle button')) {
      button.className = button.dataset.axis === this.state.axis ? 'active' : '';
    }
    if (!(this.state.benchmark && this.state.metric)) {
      clear(holder);
      return;
    }
    const params = leaderboardQueryParams(this.state);
    params.append('axis', this.state.axis);
    try {
      const trends = await fetchTrends(params, signal);
      clear(holder);
      holder.append(renderTrendChart(trends.points, trends.axis));
    } catch (error) {
      if ((error as Error).name === 'AbortError') return;
      clear(holder);
      holder.append(errorPanel(String((error as Error).message ?? error), () => void this.refreshChart(root)));
    }
  }
}

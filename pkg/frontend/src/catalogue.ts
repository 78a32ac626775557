/**
 * Models and Datasets pages: the full facet panel, sort selector,
 * result grid with repo links and SE-task rationales, pagination, and
 * CSV/JSON/XML export of the current query.
 */

import { AssetSummary, ResultPage, fetchCatalogue, fetchExport } from './api.js';
import { clear, el, errorPanel, option, triggerDownload } from './dom.js';
import { CatalogueState, catalogueQueryParams, validateCatalogueState } from './state.js';

const SIZE_BUCKETS = ['<1K', '1K-10K', '10K-100K', '100K-1M', '1M-10M', '10M-100M', '100M-1B', '>1B'];
const SORT_KEYS = ['name', 'created_at', 'downloads', 'likes', 'commits', 'contributors'];

interface FacetField {
  key: keyof CatalogueState;
  label: string;
  kind: 'text' | 'multi' | 'number' | 'date' | 'bool' | 'buckets';
  modelsOnly?: boolean;
  datasetsOnly?: boolean;
}

const FACETS: FacetField[] = [
  { key: 'identifier', label: 'Identifier contains', kind: 'text' },
  { key: 'se_task', label: 'SE tasks', kind: 'multi' },
  { key: 'license', label: 'Licenses', kind: 'multi' },
  { key: 'library', label: 'Libraries', kind: 'multi' },
  { key: 'natural_language', label: 'Natural languages', kind: 'multi' },
  { key: 'ml_task', label: 'ML task tags', kind: 'multi' },
  { key: 'created_from', label: 'Created from (YYYY-MM-DD)', kind: 'date' },
  { key: 'created_to', label: 'Created to (YYYY-MM-DD)', kind: 'date' },
  { key: 'downloads_from', label: 'Downloads ≥', kind: 'number' },
  { key: 'downloads_to', label: 'Downloads ≤', kind: 'number' },
  { key: 'likes_from', label: 'Likes ≥', kind: 'number' },
  { key: 'likes_to', label: 'Likes ≤', kind: 'number' },
  { key: 'commits_from', label: 'Commits ≥', kind: 'number' },
  { key: 'commits_to', label: 'Commits ≤', kind: 'number' },
  { key: 'contributors_from', label: 'Contributors ≥', kind: 'number' },
  { key: 'contributors_to', label: 'Contributors ≤', kind: 'number' },
  { key: 'size_bytes_from', label: 'Size bytes ≥', kind: 'number', modelsOnly: true },
  { key: 'size_bytes_to', label: 'Size bytes ≤', kind: 'number', modelsOnly: true },
  { key: 'region', label: 'Regions', kind: 'multi', modelsOnly: true },
  { key: 'training_dataset', label: 'Training datasets', kind: 'multi', modelsOnly: true },
  { key: 'inference_provider', label: 'Inference providers', kind: 'multi', modelsOnly: true },
  { key: 'has_eval_results', label: 'Has evaluation results', kind: 'bool', modelsOnly: true },
  { key: 'size_rows_bucket', label: 'Size (rows)', kind: 'buckets', datasetsOnly: true },
  { key: 'dataset_format', label: 'Formats', kind: 'multi', datasetsOnly: true },
  { key: 'modality', label: 'Modalities', kind: 'multi', datasetsOnly: true },
  { key: 'discipline', label: 'Disciplines', kind: 'multi', datasetsOnly: true },
];

export type SaveHandler = (assetId: string) => void;

export class CataloguePage {
  private controller: AbortController | null = null;
  private page: ResultPage | null = null;

  constructor(
    private kind: 'model' | 'dataset',
    private state: CatalogueState,
    private onStateChange: (state: CatalogueState) => void,
    private onSaveAsset: SaveHandler | null = null,
  ) {}

  /** Export query for the current filters (pagination does not apply). */
  exportParams(format: string): URLSearchParams {
    const params = catalogueQueryParams(this.state);
    params.delete('offset');
    params.delete('limit');
    params.append('kind', this.kind);
    params.append('format', format);
    return params;
  }

  mount(root: HTMLElement): void {
    clear(root);
    const title = this.kind === 'model' ? 'Models' : 'Datasets';
    const panel = el('form', { class: 'facet-panel', 'data-testid': 'facet-panel' });
    panel.addEventListener('submit', (event) => {
      event.preventDefault();
      this.applyForm(root, panel);
    });

    for (const facet of FACETS) {
      if (facet.modelsOnly && this.kind !== 'model') continue;
      if (facet.datasetsOnly && this.kind !== 'dataset') continue;
      panel.append(this.facetControl(facet));
    }

    const sortSelect = el('select', { 'data-testid': 'sort-by' });
    for (const key of SORT_KEYS) sortSelect.append(option(key, key, key === this.state.sort_by));
    const dirSelect = el('select', { 'data-testid': 'sort-dir' });
    for (const dir of ['ascending', 'descending']) {
      dirSelect.append(option(dir, dir, dir === this.state.sort_dir));
    }
    panel.append(
      el('label', { class: 'facet' }, ['Sort by', sortSelect]),
      el('label', { class: 'facet' }, ['Direction', dirSelect]),
      el('button', { type: 'submit', 'data-testid': 'apply-filters' }, ['Apply filters']),
      el('button', { type: 'button', 'data-testid': 'clear-filters' }, ['Clear filters']),
    );
    panel.querySelector('[data-testid="clear-filters"]')!.addEventListener('click', () => {
      for (const input of panel.querySelectorAll<HTMLInputElement>('input')) {
        if (input.type === 'checkbox') input.checked = false;
        else input.value = '';
      }
      this.applyForm(root, panel);
    });

    const exports = el('div', { class: 'export-bar' });
    for (const format of ['csv', 'json', 'xml']) {
      const button = el('button', { 'data-export': format }, [`Export ${format.toUpperCase()}`]);
      button.addEventListener('click', () => void this.download(format, root));
      exports.append(button);
    }

    root.append(
      el('h2', {}, [title]),
      panel,
      el('div', { class: 'validation', 'data-testid': 'validation' }),
      exports,
      el('div', { class: 'status', 'data-testid': 'catalogue-status' }),
      el('div', { 'data-testid': 'result-grid' }),
      el('div', { class: 'pager', 'data-testid': 'pager' }),
    );
    void this.refresh(root);
  }

  private facetControl(facet: FacetField): HTMLElement {
    const value = this.state[facet.key];
    if (facet.kind === 'buckets') {
      const group = el('fieldset', { class: 'facet buckets' }, [el('legend', {}, [facet.label])]);
      for (const bucket of SIZE_BUCKETS) {
        const box = el('input', { type: 'checkbox', value: bucket, 'data-key': facet.key }) as HTMLInputElement;
        box.checked = (value as string[]).includes(bucket);
        group.append(el('label', {}, [box, bucket]));
      }
      return group;
    }
    if (facet.kind === 'bool') {
      const select = el('select', { 'data-key': facet.key });
      select.append(option('', '(any)'), option('true', 'yes'), option('false', 'no'));
      (select as HTMLSelectElement).value = value as string;
      return el('label', { class: 'facet' }, [facet.label, select]);
    }
    const input = el('input', {
      type: facet.kind === 'number' ? 'number' : 'text',
      'data-key': facet.key,
      placeholder: facet.kind === 'multi' ? 'comma-separated' : '',
    }) as HTMLInputElement;
    input.value = Array.isArray(value) ? value.join(', ') : String(value ?? '');
    return el('label', { class: 'facet' }, [facet.label, input]);
  }

  /** Read the form back into state; blocked when validation fails. */
  private applyForm(root: HTMLElement, panel: HTMLElement): void {
    const next = { ...this.state };
    for (const facet of FACETS) {
      if (facet.modelsOnly && this.kind !== 'model') continue;
      if (facet.datasetsOnly && this.kind !== 'dataset') continue;
      if (facet.kind === 'buckets') {
        const checked = panel.querySelectorAll<HTMLInputElement>(
          `input[data-key="${facet.key}"]:checked`,
        );
        (next[facet.key] as string[]) = [...checked].map((box) => box.value);
      } else if (facet.kind === 'bool') {
        const select = panel.querySelector<HTMLSelectElement>(`select[data-key="${facet.key}"]`)!;
        (next[facet.key] as string) = select.value;
      } else {
        const input = panel.querySelector<HTMLInputElement>(`input[data-key="${facet.key}"]`)!;
        if (facet.kind === 'multi') {
          (next[facet.key] as string[]) = input.value
            .split(',')
            .map((part) => part.trim())
            .filter(Boolean);
        } else {
          (next[facet.key] as string) = input.value.trim();
        }
      }
    }
    next.sort_by = panel.querySelector<HTMLSelectElement>('[data-testid="sort-by"]')!.value;
    next.sort_dir = panel.querySelector<HTMLSelectElement>('[data-testid="sort-dir"]')!.value;
    next.offset = 0;

    const validation = root.querySelector<HTMLElement>('[data-testid="validation"]')!;
    clear(validation);
    const errors = validateCatalogueState(next);
    if (Object.keys(errors).length > 0) {
      for (const [field, message] of Object.entries(errors)) {
        validation.append(el('p', { class: 'field-error' }, [`${field}: ${message}`]));
      }
      return; // same rules as the API; invalid input never leaves the page
    }
    this.state = next;
    this.onStateChange(this.state);
    void this.refresh(root);
  }

  async refresh(root: HTMLElement): Promise<void> {
    this.controller?.abort();
    this.controller = new AbortController();
    const status = root.querySelector<HTMLElement>('[data-testid="catalogue-status"]')!;
    clear(status);
    try {
      this.page = await fetchCatalogue(this.kind, catalogueQueryParams(this.state), this.controller.signal);
      this.renderGrid(root);
    } catch (error) {
      if ((error as Error).name === 'AbortError') return;
      status.append(errorPanel(String((error as Error).message ?? error), () => void this.refresh(root)));
    }
  }

  private renderGrid(root: HTMLElement): void {
    const grid = root.querySelector<HTMLElement>('[data-testid="result-grid"]')!;
    clear(grid);
    if (!this.page) return;
    grid.append(
      el('p', { class: 'total', 'data-testid': 'total-matching' }, [
        `${this.page.total_matching} matching ${this.kind}s`,
      ]),
    );
    for (const asset of this.page.items) {
      grid.append(this.assetCard(asset));
    }
    this.renderPager(root);
  }

  private assetCard(asset: AssetSummary): HTMLElement {
    const tasks = el('ul', { class: 'se-tasks' });
    for (const task of asset.se_tasks) {
      const item = el('li', { title: task.rationale, 'data-task': task.task_id }, [
        `${task.task_id} (${task.confidence.toFixed(2)})`,
      ]);
      item.append(el('blockquote', { class: 'rationale' }, [task.rationale]));
      tasks.append(item);
    }
    const facts: string[] = [
      `downloads ${asset.downloads}`,
      `likes ${asset.likes}`,
      `commits ${asset.commits}`,
      `contributors ${asset.contributors}`,
    ];
    if (asset.kind === 'dataset' && asset.size_rows_bucket) {
      facts.push(`${asset.size_rows_bucket} rows`);
    }
    if (asset.kind === 'model' && asset.parameter_count) {
      facts.push(`${asset.parameter_count.toLocaleString('en-US')} params`);
    }
    const card = el('article', { class: 'asset-card', 'data-asset': asset.asset_id }, [
      el('h3', {}, [
        el('a', { href: asset.repo_url, rel: 'noopener', target: '_blank' }, [asset.name]),
      ]),
      el('p', { class: 'facts' }, [facts.join(' · ')]),
      tasks,
    ]);
    if (this.onSaveAsset) {
      const save = el('button', { class: 'save-asset', 'data-save': asset.asset_id }, ['Save to list']);
      save.addEventListener('click', () => this.onSaveAsset!(asset.asset_id));
      card.append(save);
    }
    return card;
  }

  private renderPager(root: HTMLElement): void {
    const pager = root.querySelector<HTMLElement>('[data-testid="pager"]')!;
    clear(pager);
    if (!this.page) return;
    const { offset, limit } = this.state;
    const previous = el('button', { 'data-testid': 'page-prev' }, ['Previous']);
    const next = el('button', { 'data-testid': 'page-next' }, ['Next']);
    (previous as HTMLButtonElement).disabled = offset <= 0;
    (next as HTMLButtonElement).disabled = offset + limit >= this.page.total_matching;
    previous.addEventListener('click', () => {
      this.state.offset = Math.max(0, offset - limit);
      this.onStateChange(this.state);
      void this.refresh(root);
    });
    next.addEventListener('click', () => {
      this.state.offset = offset + limit;
      this.onStateChange(this.state);
      void this.refresh(root);
    });
    pager.append(
      previous,
      el('span', {}, [
        ` ${Math.min(offset + 1, this.page.total_matching)}–${Math.min(offset + limit, this.page.total_matching)} of ${this.page.total_matching} `,
      ]),
      next,
    );
  }

  private async download(format: string, root: HTMLElement): Promise<void> {
    const status = root.querySelector<HTMLElement>('[data-testid="catalogue-status"]')!;
    try {
      const blob = await fetchExport(this.exportParams(format));
      triggerDownload(blob, `assets-export.${format}`);
    } catch (error) {
      clear(status);
      status.append(
        errorPanel(String((error as Error).message ?? error), () => void this.download(format, root)),
      );
    }
  }
}

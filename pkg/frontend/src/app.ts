/**
 * Application shell: hash routing, navigation with the unread badge, and
 * keeping the URL in sync with view state so any search is shareable.
 */

import { getSessionToken } from './api.js';
import { CataloguePage } from './catalogue.js';
import { clear, el } from './dom.js';
import { LeaderboardPage } from './leaderboard.js';
import { PageName, ViewState, deserializeState, serializeState } from './state.js';
import { WorkspacePage } from './workspace.js';

const PAGES: { name: PageName; label: string }[] = [
  { name: 'leaderboard', label: 'Leaderboard' },
  { name: 'models', label: 'Models' },
  { name: 'datasets', label: 'Datasets' },
  { name: 'workspace', label: 'Workspace' },
];

export class App {
  state: ViewState;
  private workspace: WorkspacePage;
  private unread = 0;
  private onHashChange = () => {
    const incoming = deserializeState(window.location.hash);
    if (serializeState(incoming) !== serializeState(this.state)) {
      this.state = incoming;
      this.render();
    }
  };

  constructor(private root: HTMLElement) {
    this.state = deserializeState(window.location.hash);
    this.workspace = new WorkspacePage((unread) => {
      this.unread = unread;
      this.renderNav();
    });
  }

  start(): void {
    window.addEventListener('hashchange', this.onHashChange);
    this.render();
  }

  stop(): void {
    window.removeEventListener('hashchange', this.onHashChange);
  }

  private syncUrl(): void {
    const target = serializeState(this.state);
    if (window.location.hash !== target) {
      window.history.replaceState(null, '', target);
    }
  }

  private renderNav(): void {
    const nav = this.root.querySelector<HTMLElement>('nav');
    if (!nav) return;
    clear(nav);
    for (const page of PAGES) {
      const badge =
        page.name === 'workspace' && this.unread > 0 ? ` (${this.unread})` : '';
      const link = el(
        'a',
        {
          href: `#/${page.name}`,
          class: this.state.page === page.name ? 'active' : '',
          'data-nav': page.name,
        },
        [page.label + badge],
      );
      link.addEventListener('click', (event) => {
        event.preventDefault();
        this.state.page = page.name;
        this.syncUrl();
        this.render();
      });
      nav.append(link);
    }
  }

  render(): void {
    clear(this.root);
    this.root.append(
      el('header', {}, [el('h1', {}, ['ML asset catalogue']), el('nav', {})]),
      el('main', { 'data-testid': 'page' }),
    );
    this.renderNav();
    this.syncUrl();
    const main = this.root.querySelector<HTMLElement>('main')!;

    if (this.state.page === 'leaderboard') {
      new LeaderboardPage(this.state.leaderboard, (next) => {
        this.state.leaderboard = next;
        this.syncUrl();
      }).mount(main);
    } else if (this.state.page === 'models' || this.state.page === 'datasets') {
      const kind = this.state.page === 'models' ? 'model' : 'dataset';
      const stateKey = this.state.page;
      new CataloguePage(
        kind,
        this.state[stateKey],
        (next) => {
          this.state[stateKey] = next;
          this.syncUrl();
        },
        (assetId) => this.saveAsset(assetId, main),
      ).mount(main);
    } else {
      this.workspace.mount(main);
    }
  }

  private saveAsset(assetId: string, main: HTMLElement): void {
    this.state.page = 'workspace';
    this.syncUrl();
    this.render();
    const target = this.root.querySelector<HTMLElement>('main')!;
    if (!getSessionToken()) {
      this.workspace.requireAuthFor({ kind: 'save-asset', assetId }, target);
    } else {
      this.workspace.pending = { kind: 'save-asset', assetId };
      this.workspace.mount(target);
    }
  }
}

export function boot(): void {
  const root = document.getElementById('app');
  if (root) new App(root).start();
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  boot();
}

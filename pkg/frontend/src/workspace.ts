/**
 * Workspace page: login/register, saved lists, tracked preferences, and
 * the notification centre. An expired or missing session shows the login
 * form and replays the intended action after authentication.
 */

import {
  ApiError,
  NotificationsResponse,
  Preference,
  SavedList,
  addListItem,
  createList,
  deleteList,
  fetchLists,
  fetchNotifications,
  fetchPreferences,
  getSessionToken,
  login,
  markNotificationRead,
  putPreferences,
  register,
  removeListItem,
  setSessionToken,
} from './api.js';
import { clear, el, errorPanel } from './dom.js';

export type PendingAction = { kind: 'save-asset'; assetId: string } | null;

export class WorkspacePage {
  pending: PendingAction = null;

  constructor(private onUnreadChange: (unread: number) => void = () => {}) {}

  mount(root: HTMLElement): void {
    clear(root);
    root.append(el('h2', {}, ['Workspace']));
    if (!getSessionToken()) {
      this.renderLogin(root);
      return;
    }
    void this.renderAuthenticated(root);
  }

  /** Queue an action that needs auth; runs right after login succeeds. */
  requireAuthFor(action: PendingAction, root: HTMLElement): void {
    this.pending = action;
    this.mount(root);
  }

  private renderLogin(root: HTMLElement): void {
    const email = el('input', { type: 'email', placeholder: 'email', 'data-testid': 'email' }) as HTMLInputElement;
    const secret = el('input', {
      type: 'password',
      placeholder: 'secret (10+ characters)',
      'data-testid': 'secret',
    }) as HTMLInputElement;
    const message = el('p', { class: 'auth-message', 'data-testid': 'auth-message' });
    if (this.pending) {
      message.textContent = 'Log in to continue; your action will be applied afterwards.';
    }
    const loginButton = el('button', { 'data-testid': 'login' }, ['Log in']);
    const registerButton = el('button', { 'data-testid': 'register' }, ['Register']);

    const act = async (first: () => Promise<unknown>) => {
      try {
        await first();
        await login(email.value, secret.value);
        void this.renderAuthenticated(root, true);
      } catch (error) {
        message.textContent = error instanceof ApiError ? error.message : String(error);
      }
    };
    loginButton.addEventListener('click', () => void act(async () => {}));
    registerButton.addEventListener('click', () =>
      void act(() => register(email.value, secret.value)),
    );

    clear(root);
    root.append(
      el('h2', {}, ['Workspace']),
      el('div', { class: 'auth-form', 'data-testid': 'login-form' }, [
        email,
        secret,
        loginButton,
        registerButton,
        message,
      ]),
    );
  }

  private async renderAuthenticated(root: HTMLElement, freshLogin = false): Promise<void> {
    clear(root);
    root.append(el('h2', {}, ['Workspace']));
    const logout = el('button', { 'data-testid': 'logout' }, ['Log out']);
    logout.addEventListener('click', () => {
      setSessionToken(null);
      this.mount(root);
    });
    root.append(logout);

    const listsHolder = el('section', { 'data-testid': 'lists-section' }, [el('h3', {}, ['Saved lists'])]);
    const prefsHolder = el('section', { 'data-testid': 'prefs-section' }, [el('h3', {}, ['Tracked preferences'])]);
    const notesHolder = el('section', { 'data-testid': 'notes-section' }, [el('h3', {}, ['Notifications'])]);
    root.append(listsHolder, prefsHolder, notesHolder);

    try {
      let lists = (await fetchLists()).lists;
      if (freshLogin && this.pending?.kind === 'save-asset') {
        // Replay the action that triggered the login redirect.
        if (lists.length === 0) {
          lists = [...lists, await createList('saved assets')];
        }
        await addListItem(lists[0].list_id, this.pending.assetId);
        this.pending = null;
        lists = (await fetchLists()).lists;
      }
      this.renderLists(listsHolder, lists, root);
      this.renderPreferences(prefsHolder, (await fetchPreferences()).preferences, root);
      this.renderNotifications(notesHolder, await fetchNotifications(), root);
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        setSessionToken(null);
        this.renderLogin(root); // expired token: back to login, action kept
        return;
      }
      root.append(errorPanel(String((error as Error).message ?? error), () => void this.renderAuthenticated(root)));
    }
  }

  private renderLists(holder: HTMLElement, lists: SavedList[], root: HTMLElement): void {
    for (const saved of lists) {
      const items = el('ul', { class: 'list-items' });
      for (const assetId of saved.items) {
        const remove = el('button', { class: 'remove-item' }, ['remove']);
        remove.addEventListener('click', () => {
          void removeListItem(saved.list_id, assetId).then(() => this.mount(root));
        });
        items.append(el('li', { 'data-asset': assetId }, [assetId, ' ', remove]));
      }
      const drop = el('button', { class: 'delete-list' }, ['delete list']);
      drop.addEventListener('click', () => {
        void deleteList(saved.list_id).then(() => this.mount(root));
      });
      holder.append(
        el('article', { class: 'saved-list', 'data-list': saved.list_id }, [
          el('h4', {}, [saved.title, ' ', drop]),
          items,
        ]),
      );
    }
    const title = el('input', { placeholder: 'new list title', 'data-testid': 'new-list-title' }) as HTMLInputElement;
    const create = el('button', { 'data-testid': 'create-list' }, ['Create list']);
    create.addEventListener('click', () => {
      if (title.value.trim()) void createList(title.value.trim()).then(() => this.mount(root));
    });
    holder.append(el('div', { class: 'new-list' }, [title, create]));
  }

  private renderPreferences(holder: HTMLElement, preferences: Preference[], root: HTMLElement): void {
    const existing = el('ul', { class: 'preferences' });
    for (const preference of preferences) {
      existing.append(
        el('li', { 'data-preference': preference.preference_id }, [
          `${preference.criteria.type}: ${JSON.stringify(preference.criteria.query)}`,
          preference.invalid ? ' (invalid)' : '',
        ]),
      );
    }
    holder.append(existing);

    const benchmark = el('input', {
      placeholder: 'benchmark to track (e.g. HumanEval)',
      'data-testid': 'pref-benchmark',
    }) as HTMLInputElement;
    const save = el('button', { 'data-testid': 'save-pref' }, ['Track benchmark']);
    save.addEventListener('click', () => {
      if (!benchmark.value.trim()) return;
      const next = preferences.map((p) => p.criteria);
      next.push({ type: 'leaderboard', query: { benchmark: benchmark.value.trim() } });
      void putPreferences(next).then(() => this.mount(root));
    });
    holder.append(el('div', { class: 'new-pref' }, [benchmark, save]));
  }

  private renderNotifications(
    holder: HTMLElement,
    response: NotificationsResponse,
    root: HTMLElement,
  ): void {
    this.onUnreadChange(response.unread);
    holder.append(
      el('p', { 'data-testid': 'unread-count' }, [`${response.unread} unread of ${response.total_matching}`]),
    );
    const feed = el('ul', { class: 'notifications' });
    for (const note of response.items) {
      const entry = el('li', { class: note.read ? 'read' : 'unread', 'data-note': note.notification_id }, [
        `${note.created_at.slice(0, 10)} — new match: ${note.asset_id}`,
      ]);
      if (!note.read) {
        const mark = el('button', { class: 'mark-read' }, ['mark read']);
        mark.addEventListener('click', () => {
          void markNotificationRead(note.notification_id).then(() => this.mount(root));
        });
        entry.append(' ', mark);
      }
      feed.append(entry);
    }
    holder.append(feed);
  }
}

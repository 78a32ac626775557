/**
 * Typed client for the catalogue API (/api/v1). The base URL is injected
 * at runtime via window.ASSETCAT_API_BASE (defaults to same origin), so
 * the built assets can be served by any static host.
 */

export interface RankedEntry {
  rank: number;
  asset_id: string;
  name: string;
  score: number;
  parameter_count: number | null;
  created_at: string;
}

export interface LeaderboardResponse {
  entries: RankedEntry[];
  empty_reason: string | null;
}

export interface TrendPoint {
  x: string | number;
  y: number;
  asset_id: string;
}

export interface TrendsResponse {
  axis: 'time' | 'model_size';
  points: TrendPoint[];
}

export interface SeTask {
  task_id: string;
  confidence: number;
  rationale: string;
  low_confidence: boolean;
}

export interface EvalSummary {
  benchmark: string;
  metric_name: string;
  best_score: number;
}

export interface AssetSummary {
  asset_id: string;
  kind: 'model' | 'dataset';
  name: string;
  provider: string;
  repo_url: string;
  created_at: string;
  last_refreshed_at: string;
  licenses: string[];
  libraries: string[];
  natural_languages: string[];
  ml_tasks: string[];
  se_tasks: SeTask[];
  downloads: number;
  likes: number;
  commits: number;
  contributors: number;
  duplicate_of: string | null;
  stale: boolean;
  size_bytes: number | null;
  region: string | null;
  parameter_count: number | null;
  size_rows_bucket: string | null;
  formats: string[];
  modalities: string[];
  disciplines: string[];
  eval_summaries: EvalSummary[];
}

export interface ResultPage {
  total_matching: number;
  items: AssetSummary[];
  applied_query: unknown;
}

export interface SavedList {
  list_id: string;
  title: string;
  items: string[];
}

export interface Preference {
  preference_id: string;
  criteria: { type: string; query: Record<string, unknown> };
  invalid: boolean;
}

export interface NotificationItem {
  notification_id: string;
  asset_id: string;
  preference_id: string;
  created_at: string;
  read: boolean;
}

export interface NotificationsResponse {
  total_matching: number;
  unread: number;
  items: NotificationItem[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public fieldErrors: Record<string, string> = {},
  ) {
    super(message);
  }
}

declare global {
  interface Window {
    ASSETCAT_API_BASE?: string;
  }
}

export function apiBase(): string {
  return (typeof window !== 'undefined' && window.ASSETCAT_API_BASE) || '';
}

let sessionToken: string | null = null;

export function setSessionToken(token: string | null): void {
  sessionToken = token;
  if (typeof sessionStorage !== 'undefined') {
    if (token) sessionStorage.setItem('assetcat_token', token);
    else sessionStorage.removeItem('assetcat_token');
  }
}

export function getSessionToken(): string | null {
  if (sessionToken) return sessionToken;
  if (typeof sessionStorage !== 'undefined') {
    sessionToken = sessionStorage.getItem('assetcat_token');
  }
  return sessionToken;
}

async function request<T>(
  method: string,
  path: string,
  options: { params?: URLSearchParams; body?: unknown; signal?: AbortSignal } = {},
): Promise<T> {
  const query = options.params && options.params.size > 0 ? `?${options.params}` : '';
  const headers: Record<string, string> = {};
  const token = getSessionToken();
  if (token) headers['Authorization'] = `Bearer ${token}`;
  if (options.body !== undefined) headers['Content-Type'] = 'application/json';
  const response = await fetch(`${apiBase()}/api/v1${path}${query}`, {
    method,
    headers,
    body: options.body === undefined ? undefined : JSON.stringify(options.body),
    signal: options.signal,
  });
  if (!response.ok) {
    let code = 'http_error';
    let message = `${response.status} ${response.statusText}`;
    let fieldErrors: Record<string, string> = {};
    try {
      const body = await response.json();
      code = body.code ?? code;
      message = body.message ?? message;
      fieldErrors = body.field_errors ?? {};
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(response.status, code, message, fieldErrors);
  }
  if (response.status === 204) return undefined as T;
  return (await response.json()) as T;
}

export const FILTER_DIMENSIONS = [
  'benchmark',
  'implementation',
  'language',
  'metric',
  'metric_config',
] as const;
export type FilterDimension = (typeof FILTER_DIMENSIONS)[number];

export function fetchLeaderboard(
  params: URLSearchParams,
  signal?: AbortSignal,
): Promise<LeaderboardResponse> {
  return request('GET', '/leaderboard', { params, signal });
}

export function fetchFilterValues(
  dimension: FilterDimension,
  params: URLSearchParams,
  signal?: AbortSignal,
): Promise<{ dimension: string; values: string[] }> {
  return request('GET', `/leaderboard/filters/${dimension}`, { params, signal });
}

export function fetchTrends(params: URLSearchParams, signal?: AbortSignal): Promise<TrendsResponse> {
  return request('GET', '/leaderboard/trends', { params, signal });
}

export function fetchCatalogue(
  kind: 'model' | 'dataset',
  params: URLSearchParams,
  signal?: AbortSignal,
): Promise<ResultPage> {
  return request('GET', kind === 'model' ? '/models' : '/datasets', { params, signal });
}

export function exportUrl(params: URLSearchParams): string {
  return `${apiBase()}/api/v1/export?${params}`;
}

export async function fetchExport(params: URLSearchParams): Promise<Blob> {
  const headers: Record<string, string> = {};
  const token = getSessionToken();
  if (token) headers['Authorization'] = `Bearer ${token}`;
  const response = await fetch(exportUrl(params), { headers });
  if (!response.ok) throw new ApiError(response.status, 'export_failed', 'export failed');
  return response.blob();
}

export function register(email: string, secret: string): Promise<{ user_id: string; email: string }> {
  return request('POST', '/auth/register', { body: { email, secret } });
}

export async function login(email: string, secret: string): Promise<string> {
  const result = await request<{ token: string; expires_at: string }>('POST', '/auth/login', {
    body: { email, secret },
  });
  setSessionToken(result.token);
  return result.token;
}

export function fetchLists(): Promise<{ lists: SavedList[] }> {
  return request('GET', '/lists');
}

export function createList(title: string): Promise<SavedList> {
  return request('POST', '/lists', { body: { title } });
}

export function deleteList(listId: string): Promise<void> {
  return request('DELETE', `/lists/${listId}`);
}

export function addListItem(listId: string, assetId: string): Promise<SavedList> {
  return request('POST', `/lists/${listId}/items`, { body: { asset_id: assetId } });
}

export function removeListItem(listId: string, assetId: string): Promise<SavedList> {
  return request('DELETE', `/lists/${listId}/items/${assetId}`);
}

export function fetchPreferences(): Promise<{ preferences: Preference[] }> {
  return request('GET', '/preferences');
}

export function putPreferences(
  preferences: { type: string; query: Record<string, unknown> }[],
): Promise<{ preferences: Preference[] }> {
  return request('PUT', '/preferences', { body: { preferences } });
}

export function fetchNotifications(): Promise<NotificationsResponse> {
  return request('GET', '/notifications');
}

export function markNotificationRead(notificationId: string): Promise<{ status: string }> {
  return request('POST', `/notifications/${notificationId}/read`);
}

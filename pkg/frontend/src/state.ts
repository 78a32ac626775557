/**
 * View state and its URL encoding.
 *
 * Filter selections always serialize to a valid API query: catalogue
 * field names are exactly the API's query parameters, so the hash query
 * string doubles as a shareable bookmark of the current search and
 * deserializing it reproduces identical API requests.
 */

export type PageName = 'leaderboard' | 'models' | 'datasets' | 'workspace';

export interface LeaderboardState {
  benchmark: string;
  implementation: string;
  language: string;
  metric: string;
  metric_config: string;
  name_search: string;
  axis: 'time' | 'model_size';
}

export interface CatalogueState {
  identifier: string;
  se_task: string[];
  license: string[];
  library: string[];
  natural_language: string[];
  ml_task: string[];
  created_from: string;
  created_to: string;
  downloads_from: string;
  downloads_to: string;
  likes_from: string;
  likes_to: string;
  commits_from: string;
  commits_to: string;
  contributors_from: string;
  contributors_to: string;
  size_bytes_from: string;
  size_bytes_to: string;
  region: string[];
  training_dataset: string[];
  inference_provider: string[];
  has_eval_results: string;
  size_rows_bucket: string[];
  dataset_format: string[];
  modality: string[];
  discipline: string[];
  sort_by: string;
  sort_dir: string;
  offset: number;
  limit: number;
}

export interface ViewState {
  page: PageName;
  leaderboard: LeaderboardState;
  models: CatalogueState;
  datasets: CatalogueState;
}

const CATALOGUE_MULTI_KEYS = [
  'se_task',
  'license',
  'library',
  'natural_language',
  'ml_task',
  'region',
  'training_dataset',
  'inference_provider',
  'size_rows_bucket',
  'dataset_format',
  'modality',
  'discipline',
] as const;

const CATALOGUE_SCALAR_KEYS = [
  'identifier',
  'created_from',
  'created_to',
  'downloads_from',
  'downloads_to',
  'likes_from',
  'likes_to',
  'commits_from',
  'commits_to',
  'contributors_from',
  'contributors_to',
  'size_bytes_from',
  'size_bytes_to',
  'has_eval_results',
] as const;

export function emptyLeaderboardState(): LeaderboardState {
  return {
    benchmark: '',
    implementation: '',
    language: '',
    metric: '',
    metric_config: '',
    name_search: '',
    axis: 'time',
  };
}

export function emptyCatalogueState(): CatalogueState {
  const state = {
    identifier: '',
    created_from: '',
    created_to: '',
    downloads_from: '',
    downloads_to: '',
    likes_from: '',
    likes_to: '',
    commits_from: '',
    commits_to: '',
    contributors_from: '',
    contributors_to: '',
    size_bytes_from: '',
    size_bytes_to: '',
    has_eval_results: '',
    sort_by: 'created_at',
    sort_dir: 'descending',
    offset: 0,
    limit: 25,
  } as CatalogueState;
  for (const key of CATALOGUE_MULTI_KEYS) state[key] = [];
  return state;
}

export function initialState(): ViewState {
  return {
    page: 'leaderboard',
    leaderboard: emptyLeaderboardState(),
    models: emptyCatalogueState(),
    datasets: emptyCatalogueState(),
  };
}

/** Query parameters for /leaderboard; empty selections are omitted. */
export function leaderboardQueryParams(state: LeaderboardState): URLSearchParams {
  const params = new URLSearchParams();
  for (const key of ['benchmark', 'implementation', 'language', 'metric', 'metric_config'] as const) {
    if (state[key]) params.append(key, state[key]);
  }
  return params;
}

/** Query parameters for /models or /datasets (and /export minus format). */
export function catalogueQueryParams(state: CatalogueState): URLSearchParams {
  const params = new URLSearchParams();
  for (const key of CATALOGUE_MULTI_KEYS) {
    for (const value of state[key]) params.append(key, value);
  }
  for (const key of CATALOGUE_SCALAR_KEYS) {
    if (state[key]) params.append(key, state[key]);
  }
  params.append('sort_by', state.sort_by);
  params.append('sort_dir', state.sort_dir);
  params.append('offset', String(state.offset));
  params.append('limit', String(state.limit));
  return params;
}

/** Serialize the active page's state into a hash query string. */
export function serializeState(state: ViewState): string {
  let params: URLSearchParams;
  if (state.page === 'leaderboard') {
    params = leaderboardQueryParams(state.leaderboard);
    if (state.leaderboard.name_search) params.append('name_search', state.leaderboard.name_search);
    params.append('axis', state.leaderboard.axis);
  } else if (state.page === 'workspace') {
    params = new URLSearchParams();
  } else {
    params = catalogueQueryParams(state.page === 'models' ? state.models : state.datasets);
  }
  const query = params.toString();
  return `#/${state.page}${query ? `?${query}` : ''}`;
}

/** Rebuild a ViewState from a hash; unknown fragments fall back to defaults. */
export function deserializeState(hash: string): ViewState {
  const state = initialState();
  const raw = hash.startsWith('#/') ? hash.slice(2) : hash.replace(/^#/, '');
  const [pagePart, queryPart = ''] = raw.split('?', 2);
  const page = (['leaderboard', 'models', 'datasets', 'workspace'] as PageName[]).find(
    (name) => name === pagePart,
  );
  state.page = page ?? 'leaderboard';
  const params = new URLSearchParams(queryPart);
  if (state.page === 'leaderboard') {
    const lb = state.leaderboard;
    for (const key of ['benchmark', 'implementation', 'language', 'metric', 'metric_config', 'name_search'] as const) {
      lb[key] = params.get(key) ?? '';
    }
    lb.axis = params.get('axis') === 'model_size' ? 'model_size' : 'time';
  } else if (state.page === 'models' || state.page === 'datasets') {
    const target = state.page === 'models' ? state.models : state.datasets;
    for (const key of CATALOGUE_MULTI_KEYS) target[key] = params.getAll(key);
    for (const key of CATALOGUE_SCALAR_KEYS) target[key] = params.get(key) ?? '';
    target.sort_by = params.get('sort_by') ?? 'created_at';
    target.sort_dir = params.get('sort_dir') ?? 'descending';
    target.offset = Number(params.get('offset') ?? 0) || 0;
    target.limit = Number(params.get('limit') ?? 25) || 25;
  }
  return state;
}

/**
 * Client-side validation mirroring the API's rules, so invalid ranges are
 * blocked before a request is made.
 */
export function validateCatalogueState(state: CatalogueState): Record<string, string> {
  const errors: Record<string, string> = {};
  const rangePairs: [keyof CatalogueState, keyof CatalogueState][] = [
    ['downloads_from', 'downloads_to'],
    ['likes_from', 'likes_to'],
    ['commits_from', 'commits_to'],
    ['contributors_from', 'contributors_to'],
    ['size_bytes_from', 'size_bytes_to'],
  ];
  for (const [from, to] of rangePairs) {
    const lower = state[from] as string;
    const upper = state[to] as string;
    if (lower && Number.isNaN(Number(lower))) errors[from as string] = 'must be a number';
    if (upper && Number.isNaN(Number(upper))) errors[to as string] = 'must be a number';
    if (lower && upper && Number(lower) > Number(upper)) {
      errors[from as string] = 'lower bound exceeds upper bound';
    }
  }
  if (state.created_from && state.created_to && state.created_from > state.created_to) {
    errors.created_from = 'lower bound exceeds upper bound';
  }
  if (state.limit < 1 || state.limit > 500) errors.limit = 'limit must lie in [1, 500]';
  if (state.offset < 0) errors.offset = 'offset must be >= 0';
  return errors;
}

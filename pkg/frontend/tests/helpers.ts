/**
 * Fetch mock serving the recorded API payloads under tests/fixtures/.
 * The manifest maps canonical URLs (path + sorted decoded query) to the
 * recorded bodies, so every UI request must match a real backend
 * response byte for byte.
 */

import fs from 'node:fs';
import { fileURLToPath } from 'node:url';
import path from 'node:path';
import { vi } from 'vitest';

const FIXTURES = path.join(path.dirname(fileURLToPath(import.meta.url)), 'fixtures');

const manifest: Record<string, string> = JSON.parse(
  fs.readFileSync(path.join(FIXTURES, 'manifest.json'), 'utf-8'),
);

export function canonicalUrl(input: string): string {
  const url = new URL(input, 'http://testhost');
  const pairs = [...url.searchParams.entries()];
  pairs.sort(([ak, av], [bk, bv]) => (ak === bk ? (av < bv ? -1 : av > bv ? 1 : 0) : ak < bk ? -1 : 1));
  const query = pairs.map(([k, v]) => `${k}=${v}`).join('&');
  return query ? `${url.pathname}?${query}` : url.pathname;
}

export function fixtureBytes(name: string): Buffer {
  return fs.readFileSync(path.join(FIXTURES, name));
}

export function fixtureJson<T>(canonical: string): T {
  const name = manifest[canonical];
  if (!name) throw new Error(`no fixture recorded for ${canonical}`);
  return JSON.parse(fixtureBytes(name).toString('utf-8')) as T;
}

export interface FetchLog {
  requests: string[];
}

/** Install a fetch mock backed by the recorded responses. */
export function installRecordedFetch(): FetchLog {
  const log: FetchLog = { requests: [] };
  vi.stubGlobal(
    'fetch',
    vi.fn(async (input: RequestInfo | URL) => {
      const raw = typeof input === 'string' ? input : input instanceof URL ? input.href : input.url;
      const canonical = canonicalUrl(raw);
      log.requests.push(canonical);
      const name = manifest[canonical];
      if (!name) {
        return new Response(
          JSON.stringify({ status: 404, code: 'not_recorded', message: `no fixture for ${canonical}`, field_errors: {} }),
          { status: 404, headers: { 'content-type': 'application/json' } },
        );
      }
      const body = fixtureBytes(name);
      const contentType = name.endsWith('.csv') ? 'text/csv; charset=utf-8' : 'application/json';
      return new Response(new Uint8Array(body), { status: 200, headers: { 'content-type': contentType } });
    }),
  );
  return log;
}

/** Wait until the condition stops throwing (polling microtask-friendly). */
export async function waitFor(check: () => void, timeoutMs = 2000): Promise<void> {
  const start = Date.now();
  let lastError: unknown;
  while (Date.now() - start < timeoutMs) {
    try {
      check();
      return;
    } catch (error) {
      lastError = error;
      await new Promise((resolve) => setTimeout(resolve, 5));
    }
  }
  throw lastError;
}

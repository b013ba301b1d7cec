import { describe, expect, it, vi } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

describe('ApiClient', () => {
  it('hits the expected endpoints and parses JSON', async () => {
    const calls: { url: string; init?: RequestInit }[] = [];
    const client = new ApiClient('', async (url, init) => {
      calls.push({ url, init });
      return jsonResponse({ revision: 3, stations: [] });
    });
    const fleet = await client.getFleet();
    expect(fleet.revision).toBe(3);
    expect(calls[0].url).toBe('/fleet');
  });

  it('builds fault queries with the since cursor and filters', async () => {
    let seen = '';
    const client = new ApiClient('', async (url) => {
      seen = url;
      return jsonResponse({ revision: 1, cursor: 5, events: [] });
    });
    await client.getFaults({ station: 'irs-000', since: 5, layer: 'FUNCTION' });
    expect(seen).toBe('/faults?station=irs-000&since=5&layer=FUNCTION');
  });

  it('PUTs config bodies under entries', async () => {
    let body = '';
    const client = new ApiClient('', async (_url, init) => {
      body = String(init?.body);
      return jsonResponse({ revision: 2, app: 'app', version: 4 });
    });
    const out = await client.putConfig('irs-000', 'app', { k: 'v' });
    expect(out.version).toBe(4);
    expect(JSON.parse(body)).toEqual({ entries: { k: 'v' } });
  });

  it('surfaces non-2xx as ApiError with the detail message', async () => {
    const client = new ApiClient('', async () =>
      jsonResponse({ detail: 'unknown station irs-9' }, 404),
    );
    await expect(client.getStation('irs-9')).rejects.toThrowError(ApiError);
    await expect(client.getStation('irs-9')).rejects.toMatchObject({
      status: 404,
      message: 'unknown station irs-9',
    });
  });

  it('tolerates non-JSON error bodies', async () => {
    const client = new ApiClient(
      '',
      async () => new Response('boom', { status: 500, statusText: 'Internal Server Error' }),
    );
    await expect(client.getSummary()).rejects.toMatchObject({ status: 500 });
  });

  it('encodes station ids in paths', async () => {
    let seen = '';
    const client = new ApiClient('', async (url) => {
      seen = url;
      return jsonResponse({ revision: 1, actions: [] });
    });
    await client.getActions('irs 1/x');
    expect(seen).toBe('/stations/irs%201%2Fx/actions');
  });

  it('strategy posts level and subject', async () => {
    const spy = vi.fn(async () => jsonResponse({ revision: 1 }));
    const client = new ApiClient('', spy);
    await client.postStrategy('irs-000', 'RESTART_FUNCTION', 'flaky');
    const init = spy.mock.calls[0][1] as RequestInit;
    expect(JSON.parse(String(init.body))).toEqual({
      level: 'RESTART_FUNCTION',
      subject: 'flaky',
    });
  });
});

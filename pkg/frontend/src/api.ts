/** Typed client for the management API. Pure transport: no recomputation
 * of reconciliation or decisions happens on this side. */

import type {
  ActionsResponse,
  ConfigWriteResponse,
  FaultsResponse,
  FleetResponse,
  StationDetailResponse,
  StrategyLevel,
  SummaryResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = '',
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  getFleet(): Promise<FleetResponse> {
    return this.request('/fleet');
  }

  getSummary(): Promise<SummaryResponse> {
    return this.request('/summary');
  }

  getStation(id: string): Promise<StationDetailResponse> {
    return this.request(`/stations/${encodeURIComponent(id)}`);
  }

  getActions(id: string): Promise<ActionsResponse> {
    return this.request(`/stations/${encodeURIComponent(id)}/actions`);
  }

  getFaults(params: { station?: string; since?: number; layer?: string; severity?: string }): Promise<FaultsResponse> {
    const query = new URLSearchParams();
    if (params.station) query.set('station', params.station);
    if (params.since !== undefined) query.set('since', String(params.since));
    if (params.layer) query.set('layer', params.layer);
    if (params.severity) query.set('severity', params.severity);
    const qs = query.toString();
    return this.request(`/faults${qs ? '?' + qs : ''}`);
  }

  putConfig(id: string, app: string, entries: Record<string, string>): Promise<ConfigWriteResponse> {
    return this.request(`/stations/${encodeURIComponent(id)}/config/${encodeURIComponent(app)}`, {
      method: 'PUT',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ entries }),
    });
  }

  postAssignment(id: string, name: string, version: string, activation: string): Promise<{ revision: number }> {
    return this.request(`/stations/${encodeURIComponent(id)}/assignments`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ name, version, activation }),
    });
  }

  postStrategy(id: string, level: StrategyLevel, subject: string): Promise<{ revision: number }> {
    return this.request(`/stations/${encodeURIComponent(id)}/strategy`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ level, subject }),
    });
  }
}

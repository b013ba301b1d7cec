/** Pure render functions: API payloads in, HTML strings out.
 *
 * Every number displayed here is traceable to an API response field; the
 * client never recomputes reconciliation or decisions. Keeping these pure
 * (no DOM) is what makes them testable without a browser.
 */

import type {
  ActionRow,
  FaultEventRow,
  StationDetailResponse,
  StationTile,
  SummaryResponse,
} from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

const LIVENESS_CLASS: Record<string, string> = {
  ONLINE: 'online',
  SUSPECT: 'suspect',
  OFFLINE: 'offline',
};

export function livenessClass(liveness: string): string {
  return LIVENESS_CLASS[liveness] ?? 'offline';
}

export function renderTile(tile: StationTile): string {
  const drift = tile.drift > 0 ? `<span class="badge drift">drift ${tile.drift}</span>` : '';
  const faults =
    tile.open_faults > 0 ? `<span class="badge fault">${tile.open_faults} critical</span>` : '';
  const sync = tile.drift === 0 ? '<span class="badge insync">in sync</span>' : '';
  return (
    `<div class="tile ${livenessClass(tile.liveness)}" data-station="${escapeHtml(tile.logical_id)}">` +
    `<div class="tile-id">${escapeHtml(tile.logical_id)}</div>` +
    `<div class="tile-meta">${escapeHtml(tile.region_class)} · ${escapeHtml(tile.link_profile)}</div>` +
    `<div class="tile-badges">${sync}${drift}${faults}</div>` +
    `</div>`
  );
}

export function renderFleet(stations: StationTile[], revision: number): string {
  const groups = new Map<string, StationTile[]>();
  for (const tile of stations) {
    const list = groups.get(tile.region_class) ?? [];
    list.push(tile);
    groups.set(tile.region_class, list);
  }
  const sections = [...groups.entries()]
    .sort((a, b) => a[0].localeCompare(b[0]))
    .map(
      ([region, tiles]) =>
        `<section class="region"><h3>${escapeHtml(region)} (${tiles.length})</h3>` +
        `<div class="tiles">${tiles.map(renderTile).join('')}</div></section>`,
    );
  return `<div class="fleet" data-revision="${revision}">${sections.join('')}</div>`;
}

/** Desired-vs-reported diff rows, built *only* from the actions endpoint
 * plus the reported state for the left-hand side of each arrow. */
export function diffRows(detail: StationDetailResponse, actions: ActionRow[]): string[] {
  const installed = detail.reported?.installed ?? {};
  const applied = detail.reported?.applied_config_versions ?? {};
  const rows: string[] = [];
  for (const action of actions) {
    switch (action.op) {
      case 'install':
        rows.push(`${action.name} ${installed[action.name] ?? '(absent)'} → ${action.version}`);
        break;
      case 'remove':
        rows.push(`${action.name} ${installed[action.name] ?? '?'} → (removed)`);
        break;
      case 'configure':
        rows.push(
          `${action.app} config v${applied[action.app] ?? 0} → v${action.config.version}`,
        );
        break;
      case 'activate':
        rows.push(`${action.name} → active`);
        break;
      case 'deactivate':
        rows.push(`${action.name} → inactive`);
        break;
    }
  }
  return rows;
}

export function renderDetail(detail: StationDetailResponse, actions: ActionRow[]): string {
  const tile = detail.station;
  const rows = diffRows(detail, actions);
  const diff =
    rows.length === 0
      ? '<p><span class="badge insync">in sync</span></p>'
      : `<ul class="diff">${rows.map((r) => `<li>${escapeHtml(r)}</li>`).join('')}</ul>`;
  const assignments = Object.entries(detail.desired.assignments)
    .map(([name, a]) => `<li>${escapeHtml(name)} ${escapeHtml(a.version)} ${escapeHtml(a.activation)}</li>`)
    .join('');
  const configs = Object.entries(detail.desired.configs)
    .map(([app, cfg]) => `<li>${escapeHtml(app)} <span class="badge">v${cfg.version}</span></li>`)
    .join('');
  const strategyDisabled = tile.liveness === 'OFFLINE' ? 'disabled' : '';
  return (
    `<div class="detail" data-station="${escapeHtml(tile.logical_id)}">` +
    `<h2>${escapeHtml(tile.logical_id)} <span class="badge ${livenessClass(tile.liveness)}">${tile.liveness}</span></h2>` +
    `<p class="meta">hardware ${escapeHtml(tile.hardware_id)} · ${escapeHtml(tile.region_class)} · ` +
    `${escapeHtml(tile.link_profile)} · agent ${escapeHtml(tile.agent_state || '?')}</p>` +
    `<h4>pending actions</h4>${diff}` +
    `<h4>assignments</h4><ul>${assignments || '<li>(none)</li>'}</ul>` +
    `<h4>configs</h4><ul>${configs || '<li>(none)</li>'}</ul>` +
    `<div class="strategy-controls" data-enabled="${strategyDisabled ? 'no' : 'yes'}"></div>` +
    `</div>`
  );
}

export function renderFaultRow(event: FaultEventRow): string {
  const decision = event.decision.directives.map((d) => d.kind).join('+') || 'ACK';
  const exhausted = event.ladder_exhausted ? ' <span class="badge fault">ladder exhausted</span>' : '';
  return (
    `<tr class="sev-${event.severity.toLowerCase()}">` +
    `<td>${event.occurred_at.toFixed(1)}s</td>` +
    `<td>${escapeHtml(event.station)}</td>` +
    `<td>${escapeHtml(event.layer)}</td>` +
    `<td>${escapeHtml(event.severity)}</td>` +
    `<td>${escapeHtml(event.subject)}${exhausted}</td>` +
    `<td>${escapeHtml(event.detail)}</td>` +
    `<td>${escapeHtml(decision)}</td>` +
    `</tr>`
  );
}

export function renderTimeline(events: FaultEventRow[]): string {
  if (events.length === 0) {
    return '<p class="empty">no fault events yet</p>';
  }
  const rows = events.map(renderFaultRow).join('');
  return (
    '<table class="timeline"><thead><tr>' +
    '<th>t</th><th>station</th><th>layer</th><th>severity</th>' +
    '<th>subject</th><th>detail</th><th>decision</th>' +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderHeader(summary: SummaryResponse): string {
  const s = summary.summary;
  return (
    `<span class="stat">rev <b>${summary.revision}</b></span>` +
    `<span class="stat">t=<b>${summary.virtual_time.toFixed(1)}s</b></span>` +
    `<span class="stat online">online <b>${s.liveness['ONLINE'] ?? 0}</b></span>` +
    `<span class="stat suspect">suspect <b>${s.liveness['SUSPECT'] ?? 0}</b></span>` +
    `<span class="stat offline">offline <b>${s.liveness['OFFLINE'] ?? 0}</b></span>` +
    `<span class="stat">drift <b>${s.drift}</b></span>` +
    `<span class="stat">critical <b>${s.open_critical}</b></span>`
  );
}

/** key=value lines from the config editor textarea. */
export function parseConfigEntries(text: string): Record<string, string> {
  const entries: Record<string, string> = {};
  for (const raw of text.split('\n')) {
    const line = raw.trim();
    if (!line || line.startsWith('#')) continue;
    const eq = line.indexOf('=');
    if (eq <= 0) {
      throw new Error(`bad config line: ${line}`);
    }
    entries[line.slice(0, eq).trim()] = line.slice(eq + 1).trim();
  }
  return entries;
}

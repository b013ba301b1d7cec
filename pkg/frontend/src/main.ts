/** Dashboard entry point: polling loop, panels, operator actions. */

import { ApiClient, ApiError } from './api.js';
import { Poller } from './poll.js';
import { FaultTimeline, RevisionGuard } from './store.js';
import type { FaultEventRow, FleetResponse, SummaryResponse } from './types.js';
import { STRATEGY_LEVELS } from './types.js';
import {
  escapeHtml,
  parseConfigEntries,
  renderDetail,
  renderFleet,
  renderHeader,
  renderTimeline,
} from './views.js';

const POLL_INTERVAL_MS = 2000;

const api = new ApiClient('');
const fleetGuard = new RevisionGuard<FleetResponse>();
const summaryGuard = new RevisionGuard<SummaryResponse>();
const timeline = new FaultTimeline();

let selectedStation: string | null = null;
let layerFilter = '';
let severityFilter = '';
let stationFilter = '';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function banner(message: string, kind: 'error' | 'info' = 'error'): void {
  const box = el('banner');
  box.className = `banner ${kind}`;
  box.textContent = message;
  box.style.display = message ? 'block' : 'none';
  if (message) {
    setTimeout(() => {
      box.style.display = 'none';
    }, 4000);
  }
}

async function refreshFleet(): Promise<void> {
  const fleet = await api.getFleet();
  if (fleetGuard.offer(fleet.revision, fleet)) {
    el('fleet').innerHTML = renderFleet(fleet.stations, fleet.revision);
    for (const node of el('fleet').querySelectorAll<HTMLElement>('.tile')) {
      node.addEventListener('click', () => {
        selectedStation = node.dataset.station ?? null;
        void refreshDetail();
      });
    }
  }
}

async function refreshSummary(): Promise<void> {
  const summary = await api.getSummary();
  if (summaryGuard.offer(summary.revision, summary)) {
    el('header-stats').innerHTML = renderHeader(summary);
  }
}

async function refreshDetail(): Promise<void> {
  const panel = el('detail');
  if (!selectedStation) {
    panel.innerHTML = '<p class="empty">select a station</p>';
    return;
  }
  try {
    const [detail, actions] = await Promise.all([
      api.getStation(selectedStation),
      api.getActions(selectedStation),
    ]);
    panel.innerHTML = renderDetail(detail, actions.actions);
    mountDetailControls(detail.station.liveness !== 'OFFLINE');
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      panel.innerHTML = `<p class="banner error">unknown station ${escapeHtml(selectedStation)}</p>`;
      return;
    }
    throw err;
  }
}

function mountDetailControls(strategyEnabled: boolean): void {
  const station = selectedStation;
  if (!station) return;
  const host = document.querySelector<HTMLElement>('.strategy-controls');
  if (!host) return;

  const editor = document.createElement('div');
  editor.className = 'editor';
  editor.innerHTML =
    '<h4>config editor</h4>' +
    '<input id="cfg-app" placeholder="app name">' +
    '<textarea id="cfg-entries" rows="4" placeholder="key=value per line"></textarea>' +
    '<button id="cfg-save">save config</button>' +
    '<h4>assignment</h4>' +
    '<input id="asg-name" placeholder="package"> <input id="asg-version" placeholder="1.0.0">' +
    '<select id="asg-activation"><option>ACTIVE</option><option>INACTIVE</option></select>' +
    '<button id="asg-post">assign</button>' +
    '<h4>manual strategy</h4>' +
    '<input id="strat-subject" placeholder="subject (function name)">' +
    STRATEGY_LEVELS.map(
      (level) =>
        `<button class="strat" data-level="${level}" ${strategyEnabled ? '' : 'disabled'}>${level}</button>`,
    ).join(' ');
  host.replaceChildren(editor);

  el<HTMLButtonElement>('cfg-save').addEventListener('click', () => {
    const app = el<HTMLInputElement>('cfg-app').value.trim();
    if (!app) return banner('config: app name required');
    let entries: Record<string, string>;
    try {
      entries = parseConfigEntries(el<HTMLTextAreaElement>('cfg-entries').value);
    } catch (err) {
      return banner(String(err));
    }
    if (!window.confirm(`write config for ${app} on ${station}?`)) return;
    void api
      .putConfig(station, app, entries)
      .then((r) => {
        banner(`config ${app} now v${r.version}`, 'info');
        void refreshDetail();
      })
      .catch((err) => {
        banner(`config write failed: ${err.message}`);
        void refreshDetail(); // roll the optimistic view back to server truth
      });
  });

  el<HTMLButtonElement>('asg-post').addEventListener('click', () => {
    const name = el<HTMLInputElement>('asg-name').value.trim();
    const version = el<HTMLInputElement>('asg-version').value.trim();
    const activation = el<HTMLSelectElement>('asg-activation').value;
    if (!name || !version) return banner('assignment: name and version required');
    if (!window.confirm(`assign ${name} ${version} ${activation} to ${station}?`)) return;
    void api
      .postAssignment(station, name, version, activation)
      .then(() => {
        banner(`assigned ${name} ${version}`, 'info');
        void refreshDetail();
      })
      .catch((err) => banner(`assignment failed: ${err.message}`));
  });

  for (const button of document.querySelectorAll<HTMLButtonElement>('button.strat')) {
    button.addEventListener('click', () => {
      const level = button.dataset.level ?? '';
      const subject = el<HTMLInputElement>('strat-subject').value.trim();
      if (!window.confirm(`order ${level} on ${station}?`)) return;
      void api
        .postStrategy(station, level as (typeof STRATEGY_LEVELS)[number], subject)
        .then(() => banner(`${level} ordered`, 'info'))
        .catch((err) => banner(`strategy failed: ${err.message}`));
    });
  }
}

async function refreshFaults(): Promise<void> {
  const incremental = !layerFilter && !severityFilter && !stationFilter;
  if (!incremental) {
    const full = await api.getFaults({
      station: stationFilter || undefined,
      layer: layerFilter || undefined,
      severity: severityFilter || undefined,
    });
    el('timeline').innerHTML = renderTimeline(full.events);
    return;
  }
  const fresh = await api.getFaults({ since: timeline.cursor });
  timeline.absorb(fresh.cursor, fresh.events);
  el('timeline').innerHTML = renderTimeline(timeline.all<FaultEventRow>());
}

function mountFilters(): void {
  for (const [id, setter] of [
    ['filter-layer', (v: string) => (layerFilter = v)],
    ['filter-severity', (v: string) => (severityFilter = v)],
    ['filter-station', (v: string) => (stationFilter = v)],
  ] as const) {
    el<HTMLInputElement | HTMLSelectElement>(id).addEventListener('change', (ev) => {
      setter((ev.target as HTMLInputElement).value.trim());
      void refreshFaults();
    });
  }
}

const poller = new Poller(async () => {
  await Promise.all([refreshSummary(), refreshFleet(), refreshFaults()]);
  if (selectedStation) await refreshDetail();
}, POLL_INTERVAL_MS);

window.addEventListener('DOMContentLoaded', () => {
  mountFilters();
  poller.start();
});

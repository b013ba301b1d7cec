/** Shapes of the management API responses the dashboard consumes. */

export interface StationTile {
  logical_id: string;
  hardware_id: string;
  link_profile: string;
  region_class: string;
  liveness: 'ONLINE' | 'SUSPECT' | 'OFFLINE';
  last_heartbeat: number | null;
  agent_state: string;
  drift: number;
  open_faults: number;
}

export interface FleetResponse {
  revision: number;
  stations: StationTile[];
}

export interface FleetSummary {
  revision: number;
  total: number;
  liveness: Record<string, number>;
  regions: Record<string, number>;
  open_critical: number;
  drift: number;
}

export interface SummaryResponse {
  revision: number;
  summary: FleetSummary;
  notifications: { at: number; station: string; message: string }[];
  virtual_time: number;
}

export interface DesiredState {
  assignments: Record<string, { version: string; activation: string }>;
  configs: Record<string, { app_name: string; version: number; entries: Record<string, string> }>;
}

export interface ReportedState {
  installed: Record<string, string>;
  active: string[];
  applied_config_versions: Record<string, number>;
  health: Record<string, string>;
}

export interface StationDetailResponse {
  revision: number;
  station: StationTile;
  desired: DesiredState;
  reported: ReportedState | null;
}

export type ActionRow =
  | { op: 'install'; name: string; version: string }
  | { op: 'remove'; name: string }
  | { op: 'configure'; app: string; config: { version: number } }
  | { op: 'activate'; name: string }
  | { op: 'deactivate'; name: string };

export interface ActionsResponse {
  revision: number;
  actions: ActionRow[];
}

export interface FaultEventRow {
  seq: number;
  station: string;
  layer: string;
  severity: string;
  subject: string;
  occurred_at: number;
  detail: string;
  ladder_exhausted: boolean;
  decision: { directives: { kind: string; argument: string }[]; rationale: string };
}

export interface FaultsResponse {
  revision: number;
  cursor: number;
  events: FaultEventRow[];
}

export interface ConfigWriteResponse {
  revision: number;
  app: string;
  version: number;
}

export const STRATEGY_LEVELS = [
  'RESTART_FUNCTION',
  'RESTART_FRAMEWORK',
  'REINSTALL_PACKAGE',
  'REBOOT_AGENT',
] as const;

export type StrategyLevel = (typeof STRATEGY_LEVELS)[number];

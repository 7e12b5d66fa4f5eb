// Wire types mirroring the dispatch service's JSON payloads.

export type SecurityClass = "normal" | "alarm" | "emergency";
export type DispatchMode = "monitor" | "open_loop" | "closed_loop" | "combined";

export interface LReport {
  l_local: Record<string, number>;
  l_max: number;
  l_sum: number;
  state_class: SecurityClass;
  thresholds: { alarm: number; emergency: number };
}

export interface ControlAction {
  id: string;
  bus: number;
  dq: number;
  kind: "preventive" | "corrective";
  predicted_l_max_after: number;
  verified_l_max_after: number | null;
  auto_eligible: boolean;
  unverifiable: boolean;
}

export interface Recommendation {
  id: string;
  actions: ControlAction[];
  basis: string;
  state_class: SecurityClass;
  issued_tick: number;
  incomplete: boolean;
}

export interface DispatchEvent {
  tick: number;
  kind: string;
  payload: Record<string, unknown>;
}

export interface CaseSummary {
  name: string;
  n_buses: number;
  n_branches: number;
  outaged_branches: number[];
  outaged_generators: number[];
  total_p_load: number;
}

export interface Snapshot {
  tick: number;
  mode: DispatchMode;
  case: CaseSummary;
  converged: boolean;
  l_report: LReport | null;
  pending: Recommendation[];
  recent_events: DispatchEvent[];
}

export interface StreamDelta {
  tick: number;
  snapshot: Snapshot;
}

export interface EventPage {
  events: DispatchEvent[];
  tick: number;
}

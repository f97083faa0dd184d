// JSON shapes of the spinhalf HTTP API (mirrors the shipped schemas).

export interface ComplexParts {
  re: number;
  im: number;
}

export interface StateJson {
  a: ComplexParts;
  b: ComplexParts;
  token: string;
}

export type AxisJson = string | { theta: number; phi: number };

export type Port = "up" | "down";

export interface StageSpecJson {
  axis: AxisJson;
  selected_port: Port;
}

export interface ChainSpecJson {
  preparation: string | StateJson;
  stages: StageSpecJson[];
  shots: number;
  seed: number;
}

export interface StageStatisticsJson {
  axis: AxisJson;
  selected_port: Port;
  up_count: number;
  down_count: number;
  transmitted_count: number;
  p_up: number;
  p_down: number;
  entry_state: StateJson;
  entry_bloch: [number, number, number];
}

export interface ChainStatisticsJson {
  preparation: StateJson;
  shots: number;
  seed_used: number;
  per_stage: StageStatisticsJson[];
  final_probability_exact: number;
  final_frequency: number;
  survivors: number;
}

export interface ApiError {
  code: string;
  message: string;
  position?: number;
}

export interface Envelope<T> {
  ok: boolean;
  version: string;
  result?: T;
  error?: ApiError;
}

export interface BlochResult {
  state: StateJson;
  bloch: [number, number, number];
}

export interface BasisEntry {
  name: string;
  state: StateJson;
  bloch: [number, number, number];
}

export interface BasisResult {
  states: BasisEntry[];
}

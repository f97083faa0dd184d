// Chain-builder state and its pure transitions.
//
// The UI never computes physics: probabilities, counts and Bloch vectors
// are copied verbatim from API responses into this state and from here
// into the DOM. Edits invalidate results (status "pending") and bump the
// request token so that late responses from superseded runs are dropped.

import type {
  ChainSpecJson,
  ChainStatisticsJson,
  Port,
  StageSpecJson,
} from "./types.js";

export type AxisChoice =
  | { kind: "label"; label: "x" | "y" | "z" }
  | { kind: "custom"; theta: number; phi: number };

export interface StageDraft {
  axis: AxisChoice;
  port: Port;
}

export type ResultsStatus = "empty" | "pending" | "running" | "fresh" | "error";

export interface ChainBuilderState {
  preparation: string;
  /** Bloch vector of the oven state, from /api/bloch; null until fetched. */
  preparationBloch: [number, number, number] | null;
  stages: StageDraft[];
  shots: number;
  seed: number;
  status: ResultsStatus;
  errorMessage: string | null;
  /** Last /api/chain result; kept on edits but flagged pending. */
  statistics: ChainStatisticsJson | null;
  /** Incremented on every edit and run; responses carry the token they
   * were issued under and are discarded on mismatch. */
  requestToken: number;
}

export const PREPARATION_TOKENS = ["z+", "z-", "x+", "x-", "y+", "y-"];

export function initialState(): ChainBuilderState {
  return {
    preparation: "z+",
    preparationBloch: null,
    stages: [],
    shots: 10000,
    seed: 0,
    status: "empty",
    errorMessage: null,
    statistics: null,
    requestToken: 0,
  };
}

function edited(state: ChainBuilderState): ChainBuilderState {
  return {
    ...state,
    status: state.stages.length === 0 ? "empty" : "pending",
    errorMessage: null,
    requestToken: state.requestToken + 1,
  };
}

export function validateAxis(choice: AxisChoice): string | null {
  if (choice.kind === "label") return null;
  const { theta, phi } = choice;
  if (!Number.isFinite(theta) || !Number.isFinite(phi)) {
    return "theta and phi must be finite numbers (radians)";
  }
  if (theta < 0 || theta > Math.PI) {
    return "theta must lie in [0, pi]";
  }
  return null;
}

export function setPreparation(
  state: ChainBuilderState,
  token: string,
): ChainBuilderState {
  return edited({ ...state, preparation: token, preparationBloch: null });
}

export function applyPreparationBloch(
  state: ChainBuilderState,
  bloch: [number, number, number],
  requestToken: number,
): ChainBuilderState {
  if (requestToken !== state.requestToken) return state; // stale
  return { ...state, preparationBloch: bloch };
}

export function addStage(
  state: ChainBuilderState,
  axis: AxisChoice,
  port: Port,
): ChainBuilderState {
  const problem = validateAxis(axis);
  if (problem !== null) {
    throw new Error(problem);
  }
  return edited({ ...state, stages: [...state.stages, { axis, port }] });
}

export function removeStage(
  state: ChainBuilderState,
  index: number,
): ChainBuilderState {
  const stages = state.stages.filter((_, i) => i !== index);
  return edited({ ...state, stages });
}

export function setPort(
  state: ChainBuilderState,
  index: number,
  port: Port,
): ChainBuilderState {
  const stages = state.stages.map((stage, i) =>
    i === index ? { ...stage, port } : stage,
  );
  return edited({ ...state, stages });
}

export function setShots(state: ChainBuilderState, shots: number): ChainBuilderState {
  return edited({ ...state, shots });
}

export function setSeed(state: ChainBuilderState, seed: number): ChainBuilderState {
  return edited({ ...state, seed });
}

export function canRun(state: ChainBuilderState): boolean {
  return (
    state.stages.length > 0 &&
    state.status !== "running" &&
    Number.isInteger(state.shots) &&
    state.shots >= 1 &&
    Number.isInteger(state.seed) &&
    state.seed >= 0
  );
}

/** Start a run: returns the new state and the token the response must
 * carry to be accepted. At most one run is in flight. */
export function beginRun(
  state: ChainBuilderState,
): { state: ChainBuilderState; token: number } {
  const token = state.requestToken + 1;
  return {
    state: { ...state, status: "running", errorMessage: null, requestToken: token },
    token,
  };
}

export function applyStatistics(
  state: ChainBuilderState,
  statistics: ChainStatisticsJson,
  token: number,
): ChainBuilderState {
  if (token !== state.requestToken) return state; // superseded by an edit
  return { ...state, status: "fresh", statistics, errorMessage: null };
}

export function applyError(
  state: ChainBuilderState,
  message: string,
  token: number,
): ChainBuilderState {
  if (token !== state.requestToken) return state;
  return { ...state, status: "error", errorMessage: message };
}

export function axisToJson(choice: AxisChoice): StageSpecJson["axis"] {
  if (choice.kind === "label") return choice.label;
  return { theta: choice.theta, phi: choice.phi };
}

export function axisText(choice: AxisChoice): string {
  if (choice.kind === "label") return choice.label;
  return `${choice.theta}/${choice.phi}`;
}

export function toChainSpec(state: ChainBuilderState): ChainSpecJson {
  return {
    preparation: state.preparation,
    stages: state.stages.map((stage) => ({
      axis: axisToJson(stage.axis),
      selected_port: stage.port,
    })),
    shots: state.shots,
    seed: state.seed,
  };
}

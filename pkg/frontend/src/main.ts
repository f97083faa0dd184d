// Browser bootstrap: wires DOM events to the pure model and the API
// client, re-rendering the whole app on every state change.

import { ApiClient, describeError } from "./api.js";
import {
  addStage,
  applyError,
  applyPreparationBloch,
  applyStatistics,
  beginRun,
  initialState,
  removeStage,
  setPort,
  setPreparation,
  setSeed,
  setShots,
  toChainSpec,
  validateAxis,
  type AxisChoice,
  type ChainBuilderState,
} from "./model.js";
import { renderApp } from "./render.js";
import type { Port } from "./types.js";

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) {
    window.localStorage.setItem("sg-explorer-api", fromQuery);
    return fromQuery;
  }
  return (
    window.localStorage.getItem("sg-explorer-api") ?? "http://127.0.0.1:8766"
  );
}

const client = new ApiClient(apiBase());
const root = document.getElementById("app")!;
let state: ChainBuilderState = initialState();

function update(next: ChainBuilderState): void {
  state = next;
  root.innerHTML = renderApp(state);
}

async function refreshPreparationBloch(): Promise<void> {
  const token = state.requestToken;
  const envelope = await client.bloch(state.preparation);
  if (envelope.ok && envelope.result) {
    update(applyPreparationBloch(state, envelope.result.bloch, token));
  }
}

async function runShots(): Promise<void> {
  const begun = beginRun(state);
  update(begun.state);
  const envelope = await client.runChain(toChainSpec(state));
  if (envelope.ok && envelope.result) {
    update(applyStatistics(state, envelope.result, begun.token));
  } else {
    update(applyError(state, describeError(envelope), begun.token));
  }
}

function axisChoiceFromForm(form: HTMLFormElement): AxisChoice {
  const data = new FormData(form);
  const axis = String(data.get("axis"));
  if (axis === "custom") {
    return {
      kind: "custom",
      theta: Number(String(data.get("theta"))),
      phi: Number(String(data.get("phi"))),
    };
  }
  return { kind: "label", label: axis as "x" | "y" | "z" };
}

root.addEventListener("change", (event) => {
  const target = event.target as HTMLElement;
  const action = target.getAttribute("data-action");
  if (action === "set-preparation") {
    update(setPreparation(state, (target as HTMLSelectElement).value));
    void refreshPreparationBloch();
  } else if (action === "set-port") {
    const index = Number(target.getAttribute("data-index"));
    update(setPort(state, index, (target as HTMLSelectElement).value as Port));
  } else if (action === "set-shots") {
    update(setShots(state, Number((target as HTMLInputElement).value)));
  } else if (action === "set-seed") {
    update(setSeed(state, Number((target as HTMLInputElement).value)));
  }
});

root.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const action = target.getAttribute("data-action");
  if (action === "remove-stage") {
    update(removeStage(state, Number(target.getAttribute("data-index"))));
  } else if (action === "run") {
    void runShots();
  }
});

root.addEventListener("submit", (event) => {
  const form = event.target as HTMLFormElement;
  if (form.getAttribute("data-action") !== "add-stage") return;
  event.preventDefault();
  const choice = axisChoiceFromForm(form);
  const problem = validateAxis(choice);
  const errorSlot = form.querySelector('[data-field="axis-error"]');
  if (problem !== null) {
    if (errorSlot) errorSlot.textContent = problem;
    return;
  }
  const data = new FormData(form);
  update(addStage(state, choice, String(data.get("port")) as Port));
});

update(state);
void refreshPreparationBloch();
void client.version().then((envelope) => {
  if (!envelope.ok) {
    update(
      applyError(
        state,
        `cannot reach the spinhalf API at ${apiBase()} (${describeError(envelope)}); ` +
          "start it with: spinhalf serve",
        state.requestToken,
      ),
    );
  }
});

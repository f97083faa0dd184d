// State -> HTML. Every number shown here is the verbatim String() of a
// field that arrived in an API response (probabilities, counts, Bloch
// components); this module formats and positions but never computes.

import { axisText, canRun, type ChainBuilderState } from "./model.js";
import type { StageStatisticsJson } from "./types.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** A value cell whose content is exactly String(value) of a response
 * field, tagged for tests and styling. */
function field(name: string, value: number | string, stage?: number): string {
  const stageAttr = stage === undefined ? "" : ` data-stage="${stage}"`;
  return `<span class="value" data-field="${name}"${stageAttr}>${escapeHtml(
    String(value),
  )}</span>`;
}

/** Two flat projections of a Bloch vector: the xy and xz discs. The dot
 * is placed at the response's coordinates; nothing is derived. */
export function renderBlochDiscs(
  bloch: readonly [number, number, number] | null,
  caption: string,
): string {
  if (bloch === null) {
    return `<div class="bloch bloch-empty">${escapeHtml(caption)}: awaiting refresh</div>`;
  }
  const [x, y, z] = bloch;
  const disc = (h: number, v: number, hLabel: string, vLabel: string) => `
    <svg viewBox="0 0 100 100" width="84" height="84" role="img">
      <circle cx="50" cy="50" r="44" class="disc" />
      <line x1="6" y1="50" x2="94" y2="50" class="axis" />
      <line x1="50" y1="6" x2="50" y2="94" class="axis" />
      <circle cx="${50 + 40 * h}" cy="${50 - 40 * v}" r="4" class="dot" />
      <text x="90" y="62" class="axis-label">${hLabel}</text>
      <text x="54" y="12" class="axis-label">${vLabel}</text>
    </svg>`;
  return `
    <div class="bloch">
      <div class="bloch-caption">${escapeHtml(caption)}
        (${field("bloch_x", x)}, ${field("bloch_y", y)}, ${field("bloch_z", z)})</div>
      <div class="bloch-discs">${disc(x, y, "x", "y")}${disc(x, z, "x", "z")}</div>
    </div>`;
}

function renderStageRow(
  state: ChainBuilderState,
  index: number,
  results: StageStatisticsJson | null,
): string {
  const stage = state.stages[index];
  const pending = state.status !== "fresh";
  const resultCells =
    results === null
      ? `<td class="na" colspan="5">${pending ? "run to populate" : "-"}</td>`
      : `
        <td>${field("p_up", results.p_up, index)}</td>
        <td>${field("p_down", results.p_down, index)}</td>
        <td>${field("up_count", results.up_count, index)} /
            ${field("down_count", results.down_count, index)}</td>
        <td>${field("transmitted_count", results.transmitted_count, index)}</td>
        <td class="bloch-cell">${renderBlochDiscs(results.entry_bloch, "entering")}</td>`;
  return `
    <tr class="stage${pending ? " pending" : ""}">
      <td>${index + 1}</td>
      <td><code>${escapeHtml(axisText(stage.axis))}</code></td>
      <td>
        <select data-action="set-port" data-index="${index}">
          <option value="up"${stage.port === "up" ? " selected" : ""}>up</option>
          <option value="down"${stage.port === "down" ? " selected" : ""}>down</option>
        </select>
      </td>
      ${resultCells}
      <td><button data-action="remove-stage" data-index="${index}">remove</button></td>
    </tr>`;
}

function renderSummary(state: ChainBuilderState): string {
  if (state.status === "error") {
    return `<p class="error" data-field="error">${escapeHtml(
      state.errorMessage ?? "unknown error",
    )}</p>`;
  }
  if (state.statistics === null) {
    return `<p class="hint">No results yet; build a chain and run shots.</p>`;
  }
  const stats = state.statistics;
  const staleBadge =
    state.status === "fresh"
      ? ""
      : `<span class="badge">stale: chain edited since this run</span>`;
  return `
    <div class="summary${state.status === "fresh" ? "" : " pending"}">
      ${staleBadge}
      <p>exact survival probability ${field(
        "final_probability_exact",
        stats.final_probability_exact,
      )},
      observed frequency ${field("final_frequency", stats.final_frequency)}
      (${field("survivors", stats.survivors)} of ${field("shots", stats.shots)} shots,
      seed ${field("seed_used", stats.seed_used)})</p>
    </div>`;
}

export function renderApp(state: ChainBuilderState): string {
  const stats = state.statistics;
  const rows = state.stages
    .map((_, index) =>
      renderStageRow(
        state,
        index,
        stats !== null && index < stats.per_stage.length
          ? stats.per_stage[index]
          : null,
      ),
    )
    .join("");
  const options = ["z+", "z-", "x+", "x-", "y+", "y-"]
    .map(
      (token) =>
        `<option value="${token}"${state.preparation === token ? " selected" : ""}>${token}</option>`,
    )
    .join("");
  return `
  <section class="builder">
    <h2>Oven</h2>
    <label>preparation
      <select data-action="set-preparation">${options}</select>
    </label>
    ${renderBlochDiscs(state.preparationBloch, `oven ${state.preparation}`)}

    <h2>Analyzer chain</h2>
    <table class="stages">
      <thead>
        <tr>
          <th>#</th><th>axis</th><th>port</th>
          <th>p_up</th><th>p_down</th><th>up / down</th><th>through</th>
          <th>state entering</th><th></th>
        </tr>
      </thead>
      <tbody>${rows ||
        `<tr><td colspan="9" class="hint">empty chain; add an analyzer</td></tr>`}</tbody>
    </table>

    <form class="add-stage" data-action="add-stage">
      <label>axis
        <select name="axis">
          <option value="x">x</option>
          <option value="y">y</option>
          <option value="z">z</option>
          <option value="custom">custom θ/φ</option>
        </select>
      </label>
      <label class="custom-angles">θ <input name="theta" size="8" value="1.5707963"></label>
      <label class="custom-angles">φ <input name="phi" size="8" value="0"></label>
      <label>port
        <select name="port"><option value="up">up</option><option value="down">down</option></select>
      </label>
      <button type="submit">add analyzer</button>
      <span class="error" data-field="axis-error"></span>
    </form>

    <h2>Run</h2>
    <label>shots <input data-action="set-shots" value="${state.shots}" size="8"></label>
    <label>seed <input data-action="set-seed" value="${state.seed}" size="8"></label>
    <button data-action="run" ${canRun(state) ? "" : "disabled"}>
      ${state.status === "running" ? "running..." : "run shots"}
    </button>

    <h2>Results</h2>
    ${renderSummary(state)}
  </section>`;
}

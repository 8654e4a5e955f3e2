// DOM rendering. Each view is rebuilt from the current state; handlers are
// delegated back to the controller, which talks to the service and commits
// the response before anything is drawn (no optimistic updates).

import { PlanInfo, QuestionInfo, SessionResource } from "./api.js";
import {
  AppController,
  ViewState,
  columnHeader,
  eliminatedPlans,
  frontierCount,
  mergeBreadcrumb,
  sortedSurvivors,
  survivingPlans,
} from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderApp(root: HTMLElement, state: ViewState, app: AppController): void {
  root.textContent = "";
  root.appendChild(renderError(state));
  switch (state.view) {
    case "setup":
      root.appendChild(renderSetup(app));
      break;
    case "frontier":
      if (state.resource) root.appendChild(renderFrontier(state, app));
      break;
    case "question":
      if (state.resource && state.question) {
        root.appendChild(renderQuestion(state, state.question, app));
      }
      break;
    case "report":
      root.appendChild(renderReport(state));
      break;
  }
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderError(state: ViewState): HTMLElement {
  const box = el("div", "error-box");
  if (state.error) {
    box.appendChild(el("p", "error-message", state.error));
  }
  return box;
}

// --- setup --------------------------------------------------------------------

function renderSetup(app: AppController): HTMLElement {
  const panel = el("section", "setup-view");
  panel.appendChild(el("h1", undefined, "Start a session"));
  panel.appendChild(
    el(
      "p",
      "hint",
      "Load a plan matrix CSV (plan_id,attr1,...) and an attribute schema JSON.",
    ),
  );

  const plansInput = el("input", "plans-file") as HTMLInputElement;
  plansInput.type = "file";
  plansInput.accept = ".csv,text/csv";
  const attrsInput = el("input", "attrs-file") as HTMLInputElement;
  attrsInput.type = "file";
  attrsInput.accept = ".json,application/json";

  const start = el("button", "start-button", "Create session");
  start.addEventListener("click", async () => {
    const plansFile = plansInput.files?.[0];
    const attrsFile = attrsInput.files?.[0];
    if (!plansFile || !attrsFile) return;
    await app.setup(await plansFile.text(), await attrsFile.text());
  });

  for (const [label, input] of [
    ["Plans CSV", plansInput],
    ["Attributes JSON", attrsInput],
  ] as const) {
    const row = el("label", "file-row");
    row.appendChild(el("span", undefined, label));
    row.appendChild(input);
    panel.appendChild(row);
  }
  panel.appendChild(start);
  return panel;
}

// --- frontier -------------------------------------------------------------------

function renderFrontier(state: ViewState, app: AppController): HTMLElement {
  const resource = state.resource!;
  const panel = el("section", "frontier-view");
  const count = frontierCount(resource);

  const headline = el("div", "frontier-headline");
  headline.appendChild(el("span", "frontier-count", String(count)));
  headline.appendChild(
    el("span", undefined, ` of ${resource.plans.length} plans still competing`),
  );
  panel.appendChild(headline);

  if (count === 1) {
    const survivor = survivingPlans(resource)[0];
    panel.appendChild(
      el("div", "decided-banner", `Decided: ${survivor ? survivor.label : ""}`),
    );
  }

  panel.appendChild(renderBreadcrumb(resource));
  panel.appendChild(renderTable(state, app));
  if (resource.session.columns.length >= 2) {
    panel.appendChild(renderScatter(state, app));
  }

  const actions = el("div", "actions");
  const ask = el("button", "ask-button", "Ask the next question");
  ask.addEventListener("click", () => void app.askNext());
  const accept = el("button", "accept-button", "Accept this frontier");
  accept.addEventListener("click", () => void app.acceptSession());
  if (count > 1 && resource.session.columns.length >= 2) actions.appendChild(ask);
  actions.appendChild(accept);
  panel.appendChild(actions);
  return panel;
}

function renderBreadcrumb(resource: SessionResource): HTMLElement {
  const trail = el("nav", "merge-breadcrumb");
  trail.appendChild(el("span", "crumb-root", "original attributes"));
  for (const entry of mergeBreadcrumb(resource)) {
    trail.appendChild(el("span", "crumb-separator", " → "));
    trail.appendChild(el("span", "crumb", entry.text));
  }
  return trail;
}

function renderTable(state: ViewState, app: AppController): HTMLElement {
  const resource = state.resource!;
  const table = el("table", "frontier-table");
  const head = el("thead");
  const headRow = el("tr");
  const planHeader = el("th", "plan-header", "plan");
  planHeader.addEventListener("click", () => app.sortBy(null));
  headRow.appendChild(planHeader);
  resource.session.columns.forEach((column, index) => {
    const cell = el("th", "column-header", columnHeader(column));
    cell.addEventListener("click", () => app.sortBy(index));
    headRow.appendChild(cell);
  });
  head.appendChild(headRow);
  table.appendChild(head);

  const body = el("tbody");
  for (const plan of sortedSurvivors(state)) {
    body.appendChild(planRow(plan, "survivor-row"));
  }
  for (const plan of eliminatedPlans(resource)) {
    body.appendChild(planRow(plan, "eliminated-row"));
  }
  table.appendChild(body);
  return table;
}

function planRow(plan: PlanInfo, className: string): HTMLElement {
  const row = el("tr", className);
  row.appendChild(el("td", "plan-label", plan.label));
  for (const value of plan.w) {
    row.appendChild(el("td", "plan-value", value.toFixed(4)));
  }
  return row;
}

function renderScatter(state: ViewState, app: AppController): HTMLElement {
  const resource = state.resource!;
  const wrapper = el("div", "scatter-wrapper");
  const [xCol, yCol] = state.scatterPair;

  const picker = el("div", "scatter-picker");
  (["x", "y"] as const).forEach((axis, axisIndex) => {
    const select = el("select", `scatter-${axis}`) as HTMLSelectElement;
    resource.session.columns.forEach((column, index) => {
      const option = el("option", undefined, column.label) as HTMLOptionElement;
      option.value = String(index);
      select.appendChild(option);
    });
    select.value = String(axisIndex === 0 ? xCol : yCol);
    select.addEventListener("change", () => {
      const x = axisIndex === 0 ? Number(select.value) : state.scatterPair[0];
      const y = axisIndex === 1 ? Number(select.value) : state.scatterPair[1];
      app.chooseScatterPair(x, y);
    });
    picker.appendChild(select);
  });
  wrapper.appendChild(picker);

  const size = 240;
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "scatter");
  svg.setAttribute("viewBox", `0 0 ${size} ${size}`);
  svg.setAttribute("width", String(size));
  svg.setAttribute("height", String(size));

  const values = resource.plans
    .flatMap((plan) => [plan.w[xCol] ?? 0, plan.w[yCol] ?? 0]);
  const hi = Math.max(1, ...values);
  const scale = (v: number) => (v / hi) * (size - 20) + 10;

  const alive = new Set(resource.session.frontier);
  for (const plan of resource.plans) {
    const point = document.createElementNS(SVG_NS, "circle");
    point.setAttribute("cx", String(scale(plan.w[xCol] ?? 0)));
    point.setAttribute("cy", String(size - scale(plan.w[yCol] ?? 0)));
    point.setAttribute("r", "5");
    point.setAttribute(
      "class",
      alive.has(plan.id) ? "scatter-survivor" : "scatter-eliminated",
    );
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = plan.label;
    point.appendChild(title);
    svg.appendChild(point);
  }
  wrapper.appendChild(svg);
  return wrapper;
}

// --- question -------------------------------------------------------------------

function outcomeCard(
  title: string,
  entries: [string, number | string][] | undefined,
  className: string,
): HTMLElement {
  const card = el("div", `outcome-card ${className}`);
  card.appendChild(el("h3", undefined, title));
  const list = el("ul");
  for (const [name, value] of entries ?? []) {
    list.appendChild(el("li", undefined, `${name} = ${value}`));
  }
  card.appendChild(list);
  return card;
}

function renderQuestion(
  state: ViewState,
  question: QuestionInfo,
  app: AppController,
): HTMLElement {
  const panel = el("section", "question-view");
  panel.appendChild(el("p", "question-text", question.text));

  if (question.kind === "standard_gamble") {
    const cards = el("div", "cards");
    cards.appendChild(outcomeCard("Best outcome (probability p)", question.best_outcome, "best-card"));
    cards.appendChild(outcomeCard("Worst outcome (probability 1 - p)", question.worst_outcome, "worst-card"));
    cards.appendChild(outcomeCard("Certain outcome", question.certain_outcome, "certain-card"));
    panel.appendChild(cards);

    const controls = el("div", "probability-controls");
    const slider = el("input", "probability-slider") as HTMLInputElement;
    slider.type = "range";
    slider.min = "0";
    slider.max = "1";
    slider.step = "0.01";
    slider.value = String(state.draft.probability);
    const number = el("input", "probability-number") as HTMLInputElement;
    number.type = "number";
    number.min = "0";
    number.max = "1";
    number.step = "0.01";
    number.value = String(state.draft.probability);
    slider.addEventListener("input", () => {
      app.setProbabilityDraft(Number(slider.value));
    });
    number.addEventListener("input", () => {
      app.setProbabilityDraft(Number(number.value));
    });
    controls.appendChild(slider);
    controls.appendChild(number);
    panel.appendChild(controls);
  } else {
    const probe = el(
      "p",
      "probe-line",
      `${question.probe_attribute} is set to ${question.probe_value}`,
    );
    panel.appendChild(probe);
    const number = el("input", "match-value") as HTMLInputElement;
    number.type = "number";
    number.value = state.draft.value;
    number.addEventListener("input", () => app.setValueDraft(number.value));
    const label = el("label", "match-label");
    label.appendChild(
      el("span", undefined, `Matching value for ${question.match_attribute}: `),
    );
    label.appendChild(number);
    panel.appendChild(label);
  }

  const submit = el("button", "submit-answer", "Submit answer");
  submit.addEventListener("click", () => void app.submitAnswer());
  panel.appendChild(submit);
  return panel;
}

// --- report --------------------------------------------------------------------

function renderReport(state: ViewState): HTMLElement {
  const panel = el("section", "report-view");
  const report = state.report;
  if (!report) return panel;
  panel.appendChild(el("h1", undefined, "Session report"));
  panel.appendChild(
    el(
      "p",
      "report-survivors",
      `Surviving plans: ${report.surviving_labels.join(", ")}`,
    ),
  );
  if (report.warning) {
    panel.appendChild(el("p", "report-warning", report.warning));
  }
  const history = el("ol", "report-history");
  for (const record of report.history) {
    history.appendChild(
      el("li", undefined, `${record.result_label} · ratio ${record.ratio}`),
    );
  }
  panel.appendChild(history);
  if (report.full_weights) {
    const weights = el("ul", "report-weights");
    for (const [name, weight] of Object.entries(report.full_weights)) {
      weights.appendChild(el("li", undefined, `${name}: ${weight.toFixed(4)}`));
    }
    panel.appendChild(weights);
  }
  return panel;
}

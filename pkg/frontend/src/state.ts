// View state and session flows. Everything displayed is derived from the
// latest service response; this layer never ranks plans or picks pairs on
// its own, it only reshapes what the service returned.

import {
  AnswerBody,
  ApiError,
  AttributeInfo,
  ColumnInfo,
  FinalReportInfo,
  PlanInfo,
  QuestionInfo,
  SessionApi,
  SessionResource,
} from "./api.js";
import { parsePlanCsv } from "./csv.js";

export type View = "setup" | "frontier" | "question" | "report";

export interface Draft {
  probability: number;
  value: string;
}

export interface ViewState {
  view: View;
  resource: SessionResource | null;
  question: QuestionInfo | null;
  report: FinalReportInfo | null;
  draft: Draft;
  error: string | null;
  scatterPair: [number, number];
  sortColumn: number | null;
  sortDescending: boolean;
}

export function initialState(): ViewState {
  return {
    view: "setup",
    resource: null,
    question: null,
    report: null,
    draft: { probability: 0.5, value: "" },
    error: null,
    scatterPair: [0, 1],
    sortColumn: null,
    sortDescending: true,
  };
}

// --- selectors ---------------------------------------------------------------

export function frontierCount(resource: SessionResource): number {
  return resource.session.frontier.length;
}

export function survivingPlans(resource: SessionResource): PlanInfo[] {
  const alive = new Set(resource.session.frontier);
  return resource.plans.filter((plan) => alive.has(plan.id));
}

export function eliminatedPlans(resource: SessionResource): PlanInfo[] {
  const alive = new Set(resource.session.frontier);
  return resource.plans.filter((plan) => !alive.has(plan.id));
}

export interface BreadcrumbEntry {
  label: string;
  ratio: number;
  text: string;
}

export function mergeBreadcrumb(resource: SessionResource): BreadcrumbEntry[] {
  return resource.session.history.map((record) => ({
    label: record.result_label,
    ratio: record.ratio,
    text: `${record.result_label} · ratio ${trimNumber(record.ratio)}`,
  }));
}

export function columnHeader(column: ColumnInfo): string {
  if (column.members.length < 2) return column.label;
  const tree = column.ratio_tree as { ratio?: number } | null;
  const ratio = tree && typeof tree.ratio === "number" ? tree.ratio : null;
  const members = column.members.join(", ");
  return ratio === null
    ? `${column.label} (${members})`
    : `${column.label} (${members} · ratio ${trimNumber(ratio)})`;
}

export function defaultScatterPair(columns: ColumnInfo[]): [number, number] {
  return columns.length >= 2 ? [0, 1] : [0, 0];
}

export function sortedSurvivors(state: ViewState): PlanInfo[] {
  const resource = state.resource;
  if (!resource) return [];
  const plans = [...survivingPlans(resource)];
  if (state.sortColumn === null) {
    plans.sort((a, b) => a.id - b.id);
  } else {
    const column = state.sortColumn;
    plans.sort((a, b) => {
      const delta = (a.w[column] ?? 0) - (b.w[column] ?? 0);
      return state.sortDescending ? -delta : delta;
    });
  }
  return plans;
}

export function validProbability(p: number): boolean {
  return Number.isFinite(p) && p >= 0 && p <= 1;
}

export function attributeSpan(
  attributes: AttributeInfo[],
  name: string,
): [number, number] | null {
  const attribute = attributes.find((a) => a.name === name);
  if (!attribute) return null;
  const worst = Number(attribute.worst);
  const best = Number(attribute.best);
  if (!Number.isFinite(worst) || !Number.isFinite(best)) return null;
  return [Math.min(worst, best), Math.max(worst, best)];
}

export function validMatchValue(
  value: number,
  attributes: AttributeInfo[],
  question: QuestionInfo,
): boolean {
  if (!Number.isFinite(value)) return false;
  const name = question.match_attribute;
  if (!name) return false;
  const span = attributeSpan(attributes, name);
  if (!span) return true;
  return value >= span[0] && value <= span[1];
}

function trimNumber(x: number): string {
  const rounded = Math.round(x * 1e6) / 1e6;
  return String(rounded);
}

// --- controller ---------------------------------------------------------------

export type Listener = (state: ViewState) => void;

export class AppController {
  state: ViewState = initialState();
  private listeners: Listener[] = [];

  constructor(private readonly api: SessionApi) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private commit(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Create a session from raw file contents; parse problems stay client-side. */
  async setup(plansText: string, attributesText: string): Promise<void> {
    let plans;
    try {
      plans = parsePlanCsv(plansText);
    } catch (error) {
      this.commit({ error: `plan CSV: ${(error as Error).message}` });
      return;
    }
    let attributes: unknown;
    try {
      attributes = JSON.parse(attributesText);
    } catch (error) {
      this.commit({ error: `attribute JSON: ${(error as Error).message}` });
      return;
    }
    try {
      const resource = await this.api.createSession({
        plans: plans.rows,
        attributes,
      });
      this.commit({
        resource,
        view: "frontier",
        error: null,
        scatterPair: defaultScatterPair(resource.session.columns),
      });
    } catch (error) {
      this.commit({ error: serviceMessage(error) });
    }
  }

  /** Reload everything for a known session id (refresh-safe entry point). */
  async load(id: string): Promise<void> {
    try {
      const resource = await this.api.getSession(id);
      this.commit({
        resource,
        view: "frontier",
        error: null,
        scatterPair: defaultScatterPair(resource.session.columns),
      });
    } catch (error) {
      this.commit({ error: serviceMessage(error) });
    }
  }

  /** Fetch the recommended question, or move to the report when decided. */
  async askNext(): Promise<void> {
    const resource = this.state.resource;
    if (!resource) return;
    try {
      const question = await this.api.getQuestion(resource.id);
      if (question === null) {
        await this.acceptSession();
        return;
      }
      this.commit({
        question,
        view: "question",
        error: null,
        draft: { probability: 0.5, value: "" },
      });
    } catch (error) {
      this.commit({ error: serviceMessage(error) });
    }
  }

  setProbabilityDraft(probability: number): void {
    this.commit({ draft: { ...this.state.draft, probability } });
  }

  setValueDraft(value: string): void {
    this.commit({ draft: { ...this.state.draft, value } });
  }

  /** Submit the current draft; on 409/422 the draft is kept for editing. */
  async submitAnswer(): Promise<void> {
    const { resource, question, draft } = this.state;
    if (!resource || !question) return;
    let answer: AnswerBody;
    if (question.kind === "standard_gamble") {
      if (!validProbability(draft.probability)) {
        this.commit({ error: "the probability must lie between 0 and 1" });
        return;
      }
      answer = { type: "probability", p: draft.probability };
    } else {
      const value = Number(draft.value);
      if (!validMatchValue(value, resource.attributes, question)) {
        this.commit({ error: "the value must lie within the attribute's span" });
        return;
      }
      answer = { type: "matching_value", value };
    }
    try {
      const updated = await this.api.postAnswer(resource.id, answer);
      this.commit({
        resource: updated,
        question: null,
        view: "frontier",
        error: null,
        scatterPair: clampPair(this.state.scatterPair, updated.session.columns.length),
      });
    } catch (error) {
      this.commit({ error: serviceMessage(error) });
    }
  }

  async acceptSession(): Promise<void> {
    const resource = this.state.resource;
    if (!resource) return;
    try {
      const report = await this.api.accept(resource.id);
      const refreshed = await this.api.getSession(resource.id);
      this.commit({ report, resource: refreshed, view: "report", error: null });
    } catch (error) {
      this.commit({ error: serviceMessage(error) });
    }
  }

  chooseScatterPair(x: number, y: number): void {
    this.commit({ scatterPair: [x, y] });
  }

  sortBy(column: number | null): void {
    if (this.state.sortColumn === column) {
      this.commit({ sortDescending: !this.state.sortDescending });
    } else {
      this.commit({ sortColumn: column, sortDescending: true });
    }
  }
}

function clampPair(pair: [number, number], columns: number): [number, number] {
  if (columns < 2) return [0, 0];
  const x = Math.min(pair[0], columns - 1);
  let y = Math.min(pair[1], columns - 1);
  if (x === y) y = x === 0 ? 1 : 0;
  return [x, y];
}

function serviceMessage(error: unknown): string {
  if (error instanceof ApiError) return error.info.message;
  return error instanceof Error ? error.message : String(error);
}

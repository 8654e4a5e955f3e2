// Typed client for the session service. Every mutation waits for the
// response; the UI never computes frontiers or question choices itself.

export interface ColumnInfo {
  label: string;
  members: string[];
  ratio_tree: unknown;
}

export interface MergeRecordInfo {
  absorbed: string;
  surviving: string;
  absorbed_index: number;
  surviving_index: number;
  absorbed_representative: string;
  surviving_representative: string;
  ratio: number;
  result_label: string;
  answers: AnswerBody[];
}

export interface QuestionInfo {
  kind: "standard_gamble" | "value_match";
  text: string;
  target?: string;
  best_outcome?: [string, number | string][];
  worst_outcome?: [string, number | string][];
  certain_outcome?: [string, number | string][];
  pair?: [number, number];
  probe_attribute?: string;
  match_attribute?: string;
  probe_value?: number;
  probe_utility?: number;
}

export interface SessionInfo {
  status: string;
  columns: ColumnInfo[];
  frontier: number[];
  history: MergeRecordInfo[];
  pending_question: QuestionInfo | null;
  assessed_coefficients: Record<string, number>;
}

export interface PlanInfo {
  id: number;
  label: string;
  w: number[];
}

export interface AttributeInfo {
  name: string;
  kind: "discrete" | "continuous";
  worst: number | string;
  best: number | string;
  unit?: string | null;
  subutility: { type: string; points: [number | string, number][] };
}

export interface SessionResource {
  id: string;
  created: string;
  updated: string;
  session: SessionInfo;
  plans: PlanInfo[];
  plan_labels: string[];
  attributes: AttributeInfo[];
}

export interface FrontierInfo {
  surviving: number[];
  count: number;
  eliminated: [number, number][];
}

export interface FinalReportInfo {
  surviving: number[];
  surviving_labels: string[];
  history: MergeRecordInfo[];
  assessed_coefficients: Record<string, number>;
  full_weights: Record<string, number> | null;
  warning: string | null;
  status: string;
}

export type AnswerBody =
  | { type: "probability"; p: number }
  | { type: "matching_value"; value: number }
  | { type: "direct_ratio"; ratio: number; pair: [number, number] | null };

export interface ServiceError {
  status: number;
  code: string;
  message: string;
}

export class ApiError extends Error {
  constructor(public readonly info: ServiceError) {
    super(info.message);
  }
}

async function parseError(response: Response): Promise<never> {
  let code = "error";
  let message = `request failed with status ${response.status}`;
  try {
    const body = await response.json();
    if (body && typeof body.message === "string") {
      code = body.code ?? code;
      message = body.message;
    }
  } catch {
    // Keep the generic message when the body is not JSON.
  }
  throw new ApiError({ status: response.status, code, message });
}

export class SessionApi {
  constructor(private readonly base: string = "") {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  async createSession(body: {
    plans: string | { label: string; w: number[] }[];
    attributes: unknown;
    epsilon?: number;
  }): Promise<SessionResource> {
    const response = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (response.status !== 201) return parseError(response);
    return response.json();
  }

  async getSession(id: string): Promise<SessionResource> {
    const response = await fetch(this.url(`/sessions/${id}`));
    if (!response.ok) return parseError(response);
    return response.json();
  }

  async getFrontier(id: string): Promise<FrontierInfo> {
    const response = await fetch(this.url(`/sessions/${id}/frontier`));
    if (!response.ok) return parseError(response);
    return response.json();
  }

  async getQuestion(id: string): Promise<QuestionInfo | null> {
    const response = await fetch(this.url(`/sessions/${id}/question`));
    if (response.status === 204) return null;
    if (!response.ok) return parseError(response);
    return response.json();
  }

  async postAnswer(id: string, answer: AnswerBody): Promise<SessionResource> {
    const response = await fetch(this.url(`/sessions/${id}/answer`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(answer),
    });
    if (!response.ok) return parseError(response);
    return response.json();
  }

  async accept(id: string): Promise<FinalReportInfo> {
    const response = await fetch(this.url(`/sessions/${id}/accept`), {
      method: "POST",
    });
    if (!response.ok) return parseError(response);
    return response.json();
  }
}

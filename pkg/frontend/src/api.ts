// Typed client for the llmrisk HTTP API. Every number the workbench
// displays originates from one of these responses; nothing is computed
// client-side.

import type {
  AdjustmentPayload,
  ApiErrorBody,
  AssessmentPayload,
  AssessmentSummary,
  AssignmentPayload,
  CatalogEntryPayload,
  CatalogPayload,
  MatrixPayload,
  RatingPayload,
  SchemePayload,
  WhatIfResponse,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly locus: string | null;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.code = body.code;
    this.locus = body.locus;
  }

  /** Factor ids named by the error locus (comma-separated on the wire). */
  lociList(): string[] {
    if (!this.locus) return [];
    return this.locus.split(",").map((part) => part.trim()).filter(Boolean);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (response.status === 204) {
      return undefined as T;
    }
    if (!response.ok) {
      let parsed: ApiErrorBody;
      try {
        parsed = (await response.json()) as ApiErrorBody;
      } catch {
        parsed = { code: "http_error", message: response.statusText, locus: null };
      }
      throw new ApiError(response.status, parsed);
    }
    return (await response.json()) as T;
  }

  getScheme(): Promise<SchemePayload> {
    return this.request("GET", "/scheme");
  }

  getCatalog(stakeholder?: string): Promise<CatalogPayload> {
    const query = stakeholder ? `?stakeholder=${encodeURIComponent(stakeholder)}` : "";
    return this.request("GET", `/catalog${query}`);
  }

  getCatalogEntry(threatId: string): Promise<CatalogEntryPayload> {
    return this.request("GET", `/catalog/${encodeURIComponent(threatId)}`);
  }

  listAssessments(): Promise<{ assessments: AssessmentSummary[] }> {
    return this.request("GET", "/assessments");
  }

  getAssessment(id: string): Promise<AssessmentPayload> {
    return this.request("GET", `/assessments/${encodeURIComponent(id)}`);
  }

  putAssessment(
    doc: AssessmentPayload,
    expectedRevision?: number,
  ): Promise<{ id: string; revision: number }> {
    const query =
      expectedRevision === undefined ? "" : `?expected_revision=${expectedRevision}`;
    return this.request("PUT", `/assessments/${encodeURIComponent(doc.id)}${query}`, doc);
  }

  evaluate(assignments: AssignmentPayload[]): Promise<RatingPayload> {
    return this.request("POST", "/evaluate", { assignments });
  }

  whatIf(assessmentId: string, adjustment: AdjustmentPayload): Promise<WhatIfResponse> {
    return this.request(
      "POST",
      `/assessments/${encodeURIComponent(assessmentId)}/whatif`,
      adjustment,
    );
  }

  advanceStatus(
    assessmentId: string,
    target: string,
  ): Promise<{ id: string; status: string; revision: number }> {
    return this.request(
      "POST",
      `/assessments/${encodeURIComponent(assessmentId)}/status`,
      { target },
    );
  }

  getMatrix(stakeholder?: string | null): Promise<MatrixPayload> {
    const query = stakeholder ? `?stakeholder=${encodeURIComponent(stakeholder)}` : "";
    return this.request("GET", `/matrix${query}`);
  }
}
